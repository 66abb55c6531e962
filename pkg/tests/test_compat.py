from fractions import Fraction as F

import pytest

from calat import (
    CoefficientSet,
    TzitzeicaData,
    check_field,
    constant_family,
    example_set,
    is_affine_sphere,
    is_constant_compatible,
    matrix_residual,
    scalar_residuals,
    tzitzeica_field,
    tzitzeica_grid,
)
from calat.compat import (
    constant_conditions,
    tzitzeica_from_json,
    tzitzeica_residuals,
    tzitzeica_to_centroaffine,
    tzitzeica_to_json,
    unit_determinants,
)
from calat.errors import AssumptionViolated, MissingStencil, ZeroDenominator
from calat.invariants import CoefficientField

EX2 = CoefficientSet.of(F(-1, 3), F(1, 3), F(-1, 3), 1, 2, -1, 2)
GRID = ([F(-1), F(2), F(-3, 2), F(3)], [F(-1), F(1, 3), F(-2), F(5, 2)],
        [F(1, 2), F(-1), F(2), F(1, 5)], [F(1, 3), F(3), F(-1, 2), F(2)])


def test_constant_family_formulas():
    assert constant_family(F(1, 3), F(-1, 3), 2, 2) == EX2
    s = constant_family(-1, -1, 0, 0)
    assert (s.a, s.alpha, s.gamma) == (-3, -1, -1)


@pytest.mark.parametrize(
    "args, clause",
    [
        ((0, 1, 0, 0), "bc != 0"),
        ((1, 1, 1, 1), "a-b-c != 0"),
        ((2, 1, 0, 1), "a != 1"),  # d = -2, a = 2 + 1 - 2
    ],
)
def test_constant_family_rejects_assumption_breaches(args, clause):
    with pytest.raises(AssumptionViolated) as err:
        constant_family(*args)
    assert err.value.clause == clause


def test_constant_conditions_detect_incompatible_set():
    s = CoefficientSet.of(F(1, 2), F(1, 3), F(1, 3), 1, 0, 1, 0)
    assert not is_constant_compatible(s)
    assert any(x != 0 for x in constant_conditions(s))
    assert is_constant_compatible(EX2)


def test_residuals_vanish_on_compatible_field():
    f = CoefficientField.constant(EX2, 0, 2, 0, 2)
    res = check_field(f)
    assert set(res) == {(0, 0), (0, 1), (1, 0), (1, 1)}
    for r in res.values():
        assert r.compatible and r.nonzero() == []
        assert r.k_value == 4


def test_constant_set_evaluates_anywhere():
    assert scalar_residuals(EX2, (5, -7)).compatible
    assert matrix_residual(EX2, (0, 0)) == 0


@pytest.mark.parametrize("name", ["alpha", "beta", "gamma", "delta"])
def test_perturbation_is_detected(name):
    f = CoefficientField.constant(EX2, 0, 1, 0, 1)
    bumped = f.with_set((0, 0), EX2.replace(**{name: getattr(EX2, name) + F(1, 10)}))
    res = scalar_residuals(bumped, (0, 0))
    assert res.nonzero()
    assert matrix_residual(bumped, (0, 0)) != 0


def test_missing_neighbour_raises():
    f = CoefficientField.constant(EX2, 0, 0, 0, 0)
    with pytest.raises(MissingStencil):
        scalar_residuals(f, (0, 0))


def test_zero_denominator_is_named():
    s = CoefficientSet.of(2, 0, 1, 1, 1, 1, 1)
    with pytest.raises(ZeroDenominator) as err:
        scalar_residuals(s, (0, 0))
    assert err.value.factor == "b"


def test_affine_sphere_detection():
    for name in ("example3_d0", "example3_d1", "example3_dm1"):
        s = example_set(name)
        assert is_affine_sphere(s) and unit_determinants(s)
    assert not is_affine_sphere(EX2) and not unit_determinants(EX2)


def test_constant_tzitzeica_h_minus_one_gives_example3():
    # H = -1 everywhere with A = B = 0 is a fixed point of the H update
    sites = [(i, j) for i in range(3) for j in range(3)]
    t = TzitzeicaData({s: F(-1) for s in sites}, {s: F(0) for s in sites}, {s: F(0) for s in sites})
    assert tzitzeica_residuals(t, (0, 0)) == (0, 0, 0)
    assert tzitzeica_to_centroaffine(t, (0, 0)) == example_set("example3_d0")


def test_constant_tzitzeica_other_h_is_not_a_solution():
    sites = [(i, j) for i in range(2) for j in range(2)]
    t = TzitzeicaData({s: F(2) for s in sites}, {s: F(0) for s in sites}, {s: F(0) for s in sites})
    assert tzitzeica_residuals(t, (0, 0))[2] != 0


def test_tzitzeica_grid_solves_recursions_and_bridges_to_compatible_field():
    t = tzitzeica_grid(*GRID)
    for i in range(3):
        for j in range(3):
            assert tzitzeica_residuals(t, (i, j)) == (0, 0, 0)
    field = tzitzeica_field(t)
    for s in field.sets.values():
        assert is_affine_sphere(s)
    for r in check_field(field).values():
        assert r.compatible


def test_tzitzeica_grid_input_checks():
    with pytest.raises(ValueError):
        tzitzeica_grid([F(1), F(2)], [F(3), F(2)], [0, 0], [0, 0])
    with pytest.raises(ValueError):
        tzitzeica_grid([F(-1), F(2)], [F(-1), F(2)], [0], [0, 0])


def test_tzitzeica_json_round_trip():
    t = tzitzeica_grid(*GRID)
    text = tzitzeica_to_json(t)
    back = tzitzeica_from_json(text)
    assert dict(back.H) == dict(t.H) and dict(back.A) == dict(t.A) and dict(back.B) == dict(t.B)
    assert tzitzeica_to_json(back) == text
