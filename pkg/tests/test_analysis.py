from fractions import Fraction as F

import pytest

from calat import (
    EXAMPLES,
    CoefficientSet,
    Convexity,
    analyze,
    convexity_at,
    eigen_scalar,
    example_set,
    generate_example,
    harmonic_check,
    harmonic_constant_check,
    laplacian,
    star_volumes,
    synthesize,
)
from calat.analysis import (
    canonical_stencil_laplacian,
    constant_convex_check,
    convexity_from_coefficients,
    convexity_sites,
    harmonic_conditions,
    interior_sites,
    star_volumes_direct,
)
from calat.errors import InvalidWindow, MissingStencil
from calat.invariants import CoefficientField
from calat.lattice import LatticeWindow, point


def _window(fn, n=3):
    pts = {(i, j): point(*fn(i, j)) for i in range(-n, n + 1) for j in range(-n, n + 1)}
    return LatticeWindow(-n, n, -n, n, pts)


def test_laplacian_of_affine_map_vanishes():
    w = _window(lambda i, j: (1 + 2 * i - j, 3 * j, 5 + i))
    ok, worst = harmonic_check(w)
    assert ok and worst == 0


def test_laplacian_of_quadratics():
    # sum over the six offsets: di^2 -> 4, dj^2 -> 4, di*dj -> -2
    w = _window(lambda i, j: (i * i, j * j, i * j))
    for site in interior_sites(w):
        assert tuple(laplacian(w, site)) == (-4, -4, 2)


def test_laplacian_needs_neighbours():
    w = _window(lambda i, j: (i, j, 1), 1)
    with pytest.raises(MissingStencil):
        laplacian(w, (1, 1))


def test_eigen_scalar_of_examples():
    _, w3 = generate_example("example3_d0", (-2, 2, -2, 2))
    assert eigen_scalar(w3) == 8
    _, w2 = generate_example("example2", (-2, 2, -2, 2))
    assert eigen_scalar(w2) == 0


@pytest.mark.parametrize("name", sorted(EXAMPLES))
def test_constant_harmonic_check_matches_stencil(name):
    s = example_set(name)
    lap = canonical_stencil_laplacian(s)
    assert harmonic_constant_check(s) == (tuple(lap) == (0, 0, 0))
    assert harmonic_constant_check(s) == all(h == 0 for h in harmonic_conditions(s))


def test_convexity_of_model_surfaces():
    # i^2 + ij + j^2 keeps r12 off the plane through r, r1, r2; i^2 + j^2 would not
    bowl = _window(lambda i, j: (i, j, 10 + i * i + i * j + j * j))
    saddle = _window(lambda i, j: (i, j, 10 + i * j))
    plane = _window(lambda i, j: (i, j, 10 + i + j))
    assert convexity_at(bowl, (0, 0)).kind is Convexity.STRICT
    assert convexity_at(saddle, (0, 0)).kind is Convexity.NON_CONVEX
    # every second-ring point on the tangent plane
    assert convexity_at(plane, (0, 0)).kind is Convexity.NON_CONVEX
    assert convexity_at(bowl, (3, 3)).kind is Convexity.BOUNDARY
    round_bowl = _window(lambda i, j: (i, j, 10 + i * i + j * j))
    assert convexity_at(round_bowl, (0, 0)).kind is Convexity.DEGENERATE


def test_convexity_determinants_reported():
    bowl = _window(lambda i, j: (i, j, 10 + i * i + i * j + j * j))
    res = convexity_at(bowl, (0, 0))
    assert len(res.determinants) == 8
    assert res.determinants["r_12"] != 0


def test_example3_is_degenerately_convex():
    _, w = generate_example("example3_d0", (-3, 3, -3, 3))
    kinds = {convexity_at(w, s).kind for s in convexity_sites(w)}
    assert kinds == {Convexity.DEGENERATE}


@pytest.mark.parametrize("name", ["example3_d0", "convex6"])
def test_coefficient_conditions_agree_with_geometry(name):
    s = example_set(name)
    field = CoefficientField.constant(s, -3, 3, -3, 3)
    assert constant_convex_check(s)
    assert convexity_from_coefficients(field, (0, 0))


def test_constant_convex_check_rejects_nonzero_beta():
    assert not constant_convex_check(example_set("example3_d1"))
    assert not constant_convex_check(example_set("example1"))


def test_star_volume_closed_form_matches_direct_sum_on_model_surface():
    w = _window(lambda i, j: (1 + i, 2 + j, 7 + i * j + F(i * i, 3)))
    for site in interior_sites(w):
        assert star_volumes(w, site) == star_volumes_direct(w, site)


def test_example3_star_volumes():
    s = example_set("example3_d0")
    w = synthesize(s, (-2, 2, -2, 2))
    star, tangent = star_volumes(w, (0, 0))
    assert star == 1 and tangent == 0


def test_analyze_report_shape():
    _, w = generate_example("example2", (-2, 2, -2, 2))
    report = analyze(w)
    assert [r.site for r in report.sites] == interior_sites(w)
    assert report.harmonic and report.eigen_s == 0
    d = report.to_dict()
    assert d["summary"]["harmonic"] is True
    assert report.summary_line() == "harmonic=true eigen_s=0/1 convex_everywhere=false"
    lines = report.to_csv().splitlines()
    assert lines[0].startswith("i,j,lx,ly,lz") and len(lines) == 1 + len(report.sites)


def test_analyze_needs_interior():
    _, w = generate_example("example2", (0, 1, 0, 1))
    with pytest.raises(InvalidWindow):
        analyze(w)


def test_example1_constant_set_not_harmonic():
    s = example_set("example1")
    assert not harmonic_constant_check(s)
    assert CoefficientSet.of(*s) == s
