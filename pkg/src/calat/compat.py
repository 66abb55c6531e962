"""Integrability of coefficient fields.

Six scalar conditions tie the coefficients at a site to those at its
``+1``, ``+2`` and ``+12`` neighbours.  They are equivalent to the
zero-curvature identity ``A(m,n) B(m+1,n) = B(m,n) A(m,n+1)`` for the
transition matrices.  Residuals are reported as LHS - RHS without clearing
denominators; vanishing denominators raise ``ZeroDenominator``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

from .errors import AssumptionViolated, MissingStencil, ZeroDenominator
from .invariants import CoefficientField, CoefficientSet, Coefficients, coefficients_at
from .lattice import Site, dumps, mat_mul, mat_sub, max_abs_entry
from .scalar import Backend, format_scalar, is_zero, to_scalar

RESIDUAL_NAMES = ("r_alpha", "r_gamma", "r_ratio", "r_a12", "r_beta", "r_delta")


@dataclass(frozen=True)
class CompatResiduals:
    r_alpha: object
    r_gamma: object
    r_ratio: object
    r_a12: object
    r_beta: object
    r_delta: object
    k_value: object
    scale: object = 0

    def as_tuple(self) -> tuple:
        return tuple(getattr(self, n) for n in RESIDUAL_NAMES)

    def nonzero(self) -> list[str]:
        return [n for n in RESIDUAL_NAMES if not is_zero(getattr(self, n), self.scale)]

    @property
    def compatible(self) -> bool:
        return not self.nonzero()

    def to_dict(self) -> dict:
        out = {n: format_scalar(getattr(self, n)) for n in RESIDUAL_NAMES}
        out["K"] = format_scalar(self.k_value)
        return out


def _nonzero(x, name: str, site: Site, scale=0):
    if is_zero(x, scale):
        raise ZeroDenominator(name, site)
    return x


def scalar_residuals(f: Coefficients, site: Site) -> CompatResiduals:
    """Residuals of the six integrability conditions at ``site``.

    Needs coefficient sets at ``site``, ``site+(1,0)``, ``site+(0,1)`` and
    ``site+(1,1)``.
    """
    i, j = site
    s = coefficients_at(f, site)
    s1 = coefficients_at(f, (i + 1, j), site)
    s2 = coefficients_at(f, (i, j + 1), site)
    s12 = coefficients_at(f, (i + 1, j + 1), site)
    a, b, c, alpha, beta, gamma, delta = s
    a1, b1, c1 = s1.a, s1.b, s1.c
    a2, b2, c2 = s2.a, s2.b, s2.c
    a12, b12, c12 = s12.a, s12.b, s12.c
    beta2, delta1 = s2.beta, s1.delta
    scale = max(abs(x) for cs in (s, s1, s2, s12) for x in cs)

    _nonzero(a - 1, "(a-1)", site, scale)
    _nonzero(b, "b", site, scale)
    _nonzero(b1, "b_1", site, scale)
    _nonzero(c2, "c_2", site, scale)
    _nonzero(b12, "b_12", site, scale)
    _nonzero(s1.d, "(a_1-b_1-c_1)", site, scale)
    _nonzero(s2.d, "(a_2-b_2-c_2)", site, scale)
    k_den = _nonzero(b * c * (a2 - 1) * (a1 - 1), "bc(a_2-1)(a_1-1)", site, scale**4)

    d = a - b - c
    k_value = (
        ((a - 1) * b1 * beta + (a1 - c1) * (1 - a) - (1 - a1) * (a - c))
        * (c2 * delta * (a - 1) + (a2 - 1) * (a - b) - (a - 1) * (a2 - b2))
        / k_den
    )
    r_alpha = alpha - (1 - a1) * d / ((a - 1) * b1)
    r_gamma = gamma - (1 - a2) * d / ((a - 1) * c2)
    r_ratio = c / b - c12 * s2.d / (b12 * s1.d)
    r_a12 = (1 - a12) / b12 - (a2 - 1) * (a1 - 1) * c / ((a - 1) * s2.d) * (1 - k_value)
    r_beta = ((a2 - 1) * b * beta2 + (a - 1) * (a1 - c1)) - ((a - 1) * b1 * beta + (a1 - 1) * (a - c))
    r_delta = ((a1 - 1) * c * delta1 + (a - 1) * (a2 - b2)) - ((a - 1) * c2 * delta + (a2 - 1) * (a - b))
    return CompatResiduals(r_alpha, r_gamma, r_ratio, r_a12, r_beta, r_delta, k_value, scale**3)


def matrix_residual(f: Coefficients, site: Site):
    """Max-abs entry of ``A(m,n) B(m+1,n) - B(m,n) A(m,n+1)``."""
    from .synthesis import transition_matrices

    i, j = site
    here = transition_matrices(coefficients_at(f, site))
    right = transition_matrices(coefficients_at(f, (i + 1, j), site))
    up = transition_matrices(coefficients_at(f, (i, j + 1), site))
    return max_abs_entry(mat_sub(mat_mul(here.A, right.B), mat_mul(here.B, up.A)))


def residual_sites(f: CoefficientField) -> list[Site]:
    """Sites where both residual forms can be evaluated."""
    return [
        (i, j)
        for (i, j) in f
        if (i + 1, j) in f and (i, j + 1) in f and (i + 1, j + 1) in f
    ]


def check_field(f: CoefficientField) -> dict[Site, CompatResiduals]:
    return {s: scalar_residuals(f, s) for s in residual_sites(f)}


# -- constant coefficients ----------------------------------------------------


def constant_conditions(s: CoefficientSet) -> tuple:
    """Differences of ``-alpha b = -gamma c = a-b-c = bc(beta delta - 1)`` against ``a-b-c``."""
    d = s.d
    return (-s.alpha * s.b - d, -s.gamma * s.c - d, s.b * s.c * (s.beta * s.delta - 1) - d)


def is_constant_compatible(s: CoefficientSet) -> bool:
    scale = max(abs(x) for x in s) ** 3
    return all(is_zero(x, scale) for x in constant_conditions(s))


def constant_family(b, c, beta, delta, backend: Backend | str | None = None) -> CoefficientSet:
    """The unique compatible constant set with the given ``b, c, beta, delta``.

    ``a = b + c + bc(beta delta - 1)``, ``alpha = c(1 - beta delta)``,
    ``gamma = b(1 - beta delta)``.
    """
    if backend is not None:
        b, c, beta, delta = (to_scalar(v, backend) for v in (b, c, beta, delta))
    if is_zero(b * c, abs(b * c)):
        raise AssumptionViolated("bc != 0")
    if is_zero(beta * delta - 1, abs(beta * delta)):
        raise AssumptionViolated("a-b-c != 0")
    d = b * c * (beta * delta - 1)
    a = b + c + d
    if is_zero(a - 1, abs(a)):
        raise AssumptionViolated("a != 1")
    return CoefficientSet(a, b, c, c * (1 - beta * delta), beta, b * (1 - beta * delta), delta)


def is_affine_sphere(s: CoefficientSet) -> bool:
    """``b == c`` and ``a - b - c == -1``."""
    scale = max(abs(s.a), abs(s.b), abs(s.c))
    return is_zero(s.b - s.c, scale) and is_zero(s.d + 1, scale)


def unit_determinants(s: CoefficientSet) -> bool:
    """``|A| = c alpha = 1`` and ``|B| = b gamma = 1``; matches ``is_affine_sphere`` only for constant sets."""
    scale = max(abs(x) for x in s) ** 2
    return is_zero(s.c * s.alpha - 1, scale) and is_zero(s.b * s.gamma - 1, scale)


# -- discrete Tzitzeica system --------------------------------------------------


@dataclass(frozen=True)
class TzitzeicaData:
    """Fields ``H``, ``A``, ``B`` over lattice sites (any may be partial)."""

    H: Mapping[Site, object]
    A: Mapping[Site, object]
    B: Mapping[Site, object]

    def __post_init__(self):
        for name in ("H", "A", "B"):
            object.__setattr__(self, name, MappingProxyType(dict(getattr(self, name))))

    def _get(self, name: str, site: Site, center: Site):
        try:
            return getattr(self, name)[site]
        except KeyError:
            raise MissingStencil(center, site) from None

    def sites(self) -> list[Site]:
        return sorted(set(self.H) & set(self.A) & set(self.B))


def tzitzeica_to_centroaffine(t: TzitzeicaData, site: Site) -> CoefficientSet:
    """Coefficients of the affine-sphere structure relations at ``site``.

    Matching ``r12 + r = H (r1 + r2)`` against the general relation gives
    ``b = c = H`` and ``a = 2H - 1``; the other two relations give
    ``alpha = (H1 - 1) / (H1 (H - 1))``, ``beta = A / (H - 1)`` and the
    analogous ``gamma``, ``delta``.
    """
    i, j = site
    h = t._get("H", site, site)
    h1 = t._get("H", (i + 1, j), site)
    h2 = t._get("H", (i, j + 1), site)
    scale = max(abs(h), abs(h1), abs(h2))
    for name, v in (("H", h), ("H_1", h1), ("H_2", h2)):
        _nonzero(v, name, site, scale)
    hm1 = _nonzero(h - 1, "(H-1)", site, scale)
    return CoefficientSet(
        2 * h - 1,
        h,
        h,
        (h1 - 1) / (h1 * hm1),
        t._get("A", site, site) / hm1,
        (h2 - 1) / (h2 * hm1),
        t._get("B", site, site) / hm1,
    )


def tzitzeica_residuals(t: TzitzeicaData, site: Site) -> tuple:
    """``(rA, rB, rH)`` for ``A_2 = H_1 A / H``, ``B_1 = H_2 B / H`` and the ``H_12`` update."""
    i, j = site
    g = t._get
    h, h1, h2, h12 = (g("H", s, site) for s in (site, (i + 1, j), (i, j + 1), (i + 1, j + 1)))
    a, a2 = g("A", site, site), g("A", (i, j + 1), site)
    b, b1 = g("B", site, site), g("B", (i + 1, j), site)
    scale = max(abs(x) for x in (h, h1, h2, a, b))
    _nonzero(h, "H", site, scale)
    den = _nonzero(h * h * (h1 + h2 - h1 * h2) - h + a * b * h1 * h2, "H_12 denominator", site, scale**5)
    return (a2 - h1 / h * a, b1 - h2 / h * b, h12 - h * (h - 1) / den)


def tzitzeica_field(t: TzitzeicaData) -> CoefficientField:
    sets = {}
    for (i, j) in t.sites():
        if (i + 1, j) in t.H and (i, j + 1) in t.H:
            sets[(i, j)] = tzitzeica_to_centroaffine(t, (i, j))
    return CoefficientField(sets)


def tzitzeica_grid(h_row, h_col, a_row, b_col) -> TzitzeicaData:
    """Fill ``H, A, B`` on the quadrant ``[0, n] x [0, m]`` by the Tzitzeica recursions.

    ``h_row[i] = H(i, 0)``, ``h_col[j] = H(0, j)`` (sharing ``H(0,0)``),
    ``a_row[i] = A(i, 0)`` and ``b_col[j] = B(0, j)``.  ``A`` is carried up
    each column, ``B`` along each row, and ``H(i+1, j+1)`` comes from the
    three surrounding values.
    """
    n, m = len(h_row) - 1, len(h_col) - 1
    if h_row[0] != h_col[0]:
        raise ValueError("h_row[0] and h_col[0] must both be H(0,0)")
    if len(a_row) != n + 1 or len(b_col) != m + 1:
        raise ValueError("a_row must match h_row and b_col must match h_col in length")
    H = {(i, 0): v for i, v in enumerate(h_row)}
    H.update({(0, j): v for j, v in enumerate(h_col)})
    A = {(i, 0): v for i, v in enumerate(a_row)}
    B = {(0, j): v for j, v in enumerate(b_col)}
    for i in range(n):
        for j in range(m):
            h, h1, h2 = H[i, j], H[i + 1, j], H[i, j + 1]
            den = h * h * (h1 + h2 - h1 * h2) - h + A[i, j] * B[i, j] * h1 * h2
            if is_zero(h) or is_zero(den, max(abs(h), abs(h1), abs(h2)) ** 4):
                raise ZeroDenominator("H_12 denominator", (i, j))
            H[i + 1, j + 1] = h * (h - 1) / den
            A[i, j + 1] = h1 / h * A[i, j]
            B[i + 1, j] = h2 / h * B[i, j]
    return TzitzeicaData(H, A, B)


def tzitzeica_to_dict(t: TzitzeicaData) -> dict:
    sites = sorted(set(t.H) | set(t.A) | set(t.B))
    rows = []
    for (i, j) in sites:
        row = {"i": i, "j": j}
        for name in ("H", "A", "B"):
            m = getattr(t, name)
            if (i, j) in m:
                row[name] = format_scalar(m[(i, j)])
        rows.append(row)
    ii = [s[0] for s in sites]
    jj = [s[1] for s in sites]
    return {
        "rectangle": {"imin": min(ii), "imax": max(ii), "jmin": min(jj), "jmax": max(jj)},
        "sets": rows,
    }


def tzitzeica_from_dict(data: Mapping, backend: Backend | str = Backend.EXACT) -> TzitzeicaData:
    maps: dict[str, dict] = {"H": {}, "A": {}, "B": {}}
    for e in data["sets"]:
        site = (int(e["i"]), int(e["j"]))
        for name in maps:
            if name in e:
                maps[name][site] = to_scalar(e[name], backend)
    return TzitzeicaData(maps["H"], maps["A"], maps["B"])


def tzitzeica_to_json(t: TzitzeicaData) -> str:
    return dumps(tzitzeica_to_dict(t))


def tzitzeica_from_json(text: str, backend: Backend | str = Backend.EXACT) -> TzitzeicaData:
    return tzitzeica_from_dict(json.loads(text), backend)
