"""Randomised checks over constant families and linear maps."""

from fractions import Fraction as F

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from calat import (
    constant_family,
    extract_field,
    is_constant_compatible,
    matrix_residual,
    scalar_residuals,
    synthesize,
    transition_matrices,
)
from calat.analysis import harmonic_constant_check, star_volumes, star_volumes_direct, canonical_stencil_laplacian
from calat.lattice import mat_det, window_from_json, window_to_json

nonzero = st.fractions(min_value=-3, max_value=3, max_denominator=6).filter(lambda x: x != 0)
small = st.fractions(min_value=-2, max_value=2, max_denominator=6)


@st.composite
def families(draw):
    b, c, beta, delta = draw(nonzero), draw(nonzero), draw(small), draw(small)
    assume(beta * delta != 1)
    assume(b + c + b * c * (beta * delta - 1) != 1)
    return constant_family(b, c, beta, delta)


matrices = st.lists(st.integers(-4, 4), min_size=9, max_size=9).map(
    lambda v: tuple(tuple(F(x) for x in v[k:k + 3]) for k in (0, 3, 6))
).filter(lambda m: mat_det(m) != 0)


@settings(max_examples=60, deadline=None)
@given(families())
def test_family_is_compatible(s):
    assert is_constant_compatible(s)
    assert scalar_residuals(s, (0, 0)).compatible
    assert matrix_residual(s, (0, 0)) == 0


@settings(max_examples=40, deadline=None)
@given(families())
def test_synthesis_extraction_round_trip(s):
    w = synthesize(s, (-1, 2, -1, 2))
    assert all(got == s for got in extract_field(w).sets.values())


@settings(max_examples=40, deadline=None)
@given(families(), matrices)
def test_extraction_is_linear_invariant(s, p):
    w = synthesize(s, (0, 2, 0, 2))
    assert extract_field(w.transform(p)).sets == extract_field(w).sets


@settings(max_examples=40, deadline=None)
@given(families())
def test_star_volume_closed_form(s):
    w = synthesize(s, (-1, 1, -1, 1))
    assert star_volumes(w, (0, 0)) == star_volumes_direct(w, (0, 0))


@settings(max_examples=60, deadline=None)
@given(families())
def test_harmonic_closed_form_matches_stencil(s):
    assert harmonic_constant_check(s, cross_check=False) == (tuple(canonical_stencil_laplacian(s)) == (0, 0, 0))


@settings(max_examples=60, deadline=None)
@given(families())
def test_determinants_of_transition_matrices(s):
    pair = transition_matrices(s)
    assert pair.det_A == s.c * s.alpha and pair.det_B == s.b * s.gamma


@settings(max_examples=30, deadline=None)
@given(families())
def test_json_round_trip(s):
    w = synthesize(s, (-1, 1, -1, 1))
    assert window_from_json(window_to_json(w)) == w


@settings(max_examples=30, deadline=None)
@given(families())
def test_float_backend_tracks_exact(s):
    exact = synthesize(s, (-1, 1, -1, 1))
    approx = synthesize(s.convert("float"), (-1, 1, -1, 1))
    for site, p in exact.points.items():
        for x, y in zip(p, approx[site]):
            assert abs(float(x) - y) <= 1e-12 * (1 + abs(float(x)))
