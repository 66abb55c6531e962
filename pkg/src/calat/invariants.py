"""The seven lattice invariants and their extraction from points.

At a site with points ``r, r1, r2, r12, r11, r22`` the structure relations

    r11 - r1 = alpha (r1 - r) + beta (r12 - r1)
    r12      = a r + b (r1 - r) + c (r2 - r)
    r22 - r2 = gamma (r2 - r) + delta (r12 - r2)

define ``a, b, c, alpha, beta, gamma, delta``.  Each one is a ratio of two
determinants of position vectors, which makes all seven unchanged by any
invertible linear map of space.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterator, Mapping, Union

from .errors import InvalidWindow, MissingStencil, ZeroDenominator
from .lattice import LatticeWindow, Site, det3, det_scale, dumps
from .scalar import Backend, format_scalar, is_zero, to_scalar

NAMES = ("a", "b", "c", "alpha", "beta", "gamma", "delta")

# offsets needed to extract all seven coefficients at a site
EXTRACTION_STENCIL = ((0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2))


@dataclass(frozen=True)
class CoefficientSet:
    a: object
    b: object
    c: object
    alpha: object
    beta: object
    gamma: object
    delta: object

    @property
    def d(self):
        return self.a - self.b - self.c

    def as_tuple(self) -> tuple:
        return tuple(getattr(self, n) for n in NAMES)

    def __iter__(self):
        return iter(self.as_tuple())

    def replace(self, **changes) -> CoefficientSet:
        values = {n: getattr(self, n) for n in NAMES}
        values.update(changes)
        return CoefficientSet(**values)

    def convert(self, backend: Backend | str) -> CoefficientSet:
        return CoefficientSet(*(to_scalar(v, backend) for v in self))

    def assumption_violations(self) -> list[str]:
        """Clauses of ``d != 0, bc != 0, a != 1`` that fail."""
        out = []
        if is_zero(self.d, max(abs(self.a), abs(self.b), abs(self.c))):
            out.append("a-b-c != 0")
        if is_zero(self.b * self.c, abs(self.b * self.c)):
            out.append("bc != 0")
        if is_zero(self.a - 1, abs(self.a)):
            out.append("a != 1")
        return out

    def to_dict(self) -> dict:
        return {n: format_scalar(getattr(self, n)) for n in NAMES}

    @classmethod
    def from_dict(cls, data: Mapping, backend: Backend | str = Backend.EXACT) -> CoefficientSet:
        try:
            return cls(*(to_scalar(data[n], backend) for n in NAMES))
        except KeyError as exc:
            raise ValueError(f"coefficient set lacks {exc.args[0]!r}") from None

    @classmethod
    def of(cls, *values, backend: Backend | str = Backend.EXACT) -> CoefficientSet:
        """Build from ``(a, b, c, alpha, beta, gamma, delta)`` in any scalar form."""
        if len(values) == 1:
            values = tuple(values[0])
        return cls(*(to_scalar(v, backend) for v in values))


@dataclass(frozen=True)
class CoefficientField:
    """Coefficient sets over a set of lattice sites (normally a rectangle)."""

    sets: Mapping[Site, CoefficientSet]
    warnings: tuple[str, ...] = ()
    residuals: Mapping[Site, tuple] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if not self.sets:
            raise ValueError("empty coefficient field")
        ordered = {s: self.sets[s] for s in sorted(self.sets)}
        object.__setattr__(self, "sets", MappingProxyType(ordered))
        object.__setattr__(self, "residuals", MappingProxyType(dict(self.residuals)))

    @property
    def rectangle(self) -> tuple[int, int, int, int]:
        ii = [s[0] for s in self.sets]
        jj = [s[1] for s in self.sets]
        return (min(ii), max(ii), min(jj), max(jj))

    def __getitem__(self, site: Site) -> CoefficientSet:
        return self.sets[site]

    def __contains__(self, site) -> bool:
        return site in self.sets

    def __iter__(self) -> Iterator[Site]:
        return iter(self.sets)

    def __len__(self) -> int:
        return len(self.sets)

    def items(self):
        return self.sets.items()

    def is_constant(self) -> bool:
        vals = list(self.sets.values())
        return all(v == vals[0] for v in vals[1:])

    def with_set(self, site: Site, s: CoefficientSet) -> CoefficientField:
        sets = dict(self.sets)
        sets[site] = s
        return CoefficientField(sets, self.warnings)

    @classmethod
    def constant(cls, s: CoefficientSet, imin: int, imax: int, jmin: int, jmax: int) -> CoefficientField:
        return cls({(i, j): s for i in range(imin, imax + 1) for j in range(jmin, jmax + 1)})


Coefficients = Union[CoefficientSet, CoefficientField]


def coefficients_at(coeffs: Coefficients, site: Site, center: Site | None = None) -> CoefficientSet:
    """Coefficient set at ``site``; constant sets apply everywhere."""
    if isinstance(coeffs, CoefficientSet):
        return coeffs
    try:
        return coeffs[site]
    except KeyError:
        raise MissingStencil(center or site, site) from None


# -- extraction -------------------------------------------------------------


def _ratio(num, den, factor: str, site: Site, scale):
    if is_zero(den, scale):
        raise ZeroDenominator(factor, site)
    return num / den


def extract_abc(w: LatticeWindow, site: Site) -> tuple:
    """``(a, b, c)`` at ``site`` from ``r, r1, r2, r12``.

    ``b`` and ``c`` are the determinant ratios that isolate ``r1`` and
    ``r2``.  The ratio ``det[r12, r1, r2] / det[r, r1, r2]`` isolates the
    coefficient of ``r`` in ``r12``, which is ``a - b - c``; ``a`` is
    recovered by adding ``b + c`` back.
    """
    r, r1, r2, r12 = (w.at(site, di, dj) for di, dj in ((0, 0), (1, 0), (0, 1), (1, 1)))
    den = det3(r, r1, r2)
    scale = det_scale(r, r1, r2, r12)
    if is_zero(den, scale):
        raise ZeroDenominator("det[r, r1, r2]", site)
    b = det3(r, r12, r2) / den
    c = det3(r, r1, r12) / den
    d = det3(r12, r1, r2) / den
    return (d + b + c, b, c)


def extract_alpha_beta(w: LatticeWindow, site: Site) -> tuple:
    r, r1, r11, r12 = (w.at(site, di, dj) for di, dj in ((0, 0), (1, 0), (2, 0), (1, 1)))
    den = det3(r, r1, r12)
    scale = det_scale(r, r1, r11, r12)
    alpha = _ratio(det3(r1, r11, r12), den, "det[r, r1, r12]", site, scale)
    beta = det3(r, r1, r11) / den
    return (alpha, beta)


def extract_gamma_delta(w: LatticeWindow, site: Site) -> tuple:
    r, r2, r22, r12 = (w.at(site, di, dj) for di, dj in ((0, 0), (0, 1), (0, 2), (1, 1)))
    den = det3(r, r2, r12)
    scale = det_scale(r, r2, r22, r12)
    gamma = _ratio(det3(r2, r22, r12), den, "det[r, r2, r12]", site, scale)
    delta = det3(r, r2, r22) / den
    return (gamma, delta)


def extract_set(w: LatticeWindow, site: Site) -> CoefficientSet:
    a, b, c = extract_abc(w, site)
    alpha, beta = extract_alpha_beta(w, site)
    gamma, delta = extract_gamma_delta(w, site)
    return CoefficientSet(a, b, c, alpha, beta, gamma, delta)


def structure_residuals(w: LatticeWindow, site: Site, s: CoefficientSet) -> tuple:
    """Max-abs norms of the three structure relations with ``s`` substituted."""
    r, r1, r2, r12, r11, r22 = (w.at(site, di, dj) for di, dj in EXTRACTION_STENCIL)
    e1 = (r11 - r1) - ((r1 - r) * s.alpha + (r12 - r1) * s.beta)
    e2 = r12 - (r * s.a + (r1 - r) * s.b + (r2 - r) * s.c)
    e3 = (r22 - r2) - ((r2 - r) * s.gamma + (r12 - r2) * s.delta)
    return (e1.max_abs(), e2.max_abs(), e3.max_abs())


def extraction_sites(w: LatticeWindow) -> list[Site]:
    return [s for s in w.sites() if w.has(s, EXTRACTION_STENCIL)]


def extract_field(w: LatticeWindow) -> CoefficientField:
    """Coefficients at every site whose six-point stencil lies in ``w``.

    Sites are visited in row-major order.  Assumption breaches are
    collected as warnings rather than raised.
    """
    sets = {}
    residuals = {}
    warnings = []
    for s in extraction_sites(w):
        cs = extract_set(w, s)
        sets[s] = cs
        residuals[s] = structure_residuals(w, s, cs)
        for clause in cs.assumption_violations():
            warnings.append(f"site {s}: {clause} fails")
    if not sets:
        raise InvalidWindow("window too small to extract coefficients (needs 3x3 points)")
    return CoefficientField(sets, tuple(warnings), residuals)


def triangle_volume(w: LatticeWindow, site: Site):
    """Signed cone volume ``det[r, r1, r2] / 6`` of the cell triangle at ``site``."""
    r, r1, r2 = w.at(site), w.at(site, 1, 0), w.at(site, 0, 1)
    return det3(r, r1, r2) / 6


# -- JSON -------------------------------------------------------------------


def set_from_dict(data: Mapping, backend: Backend | str = Backend.EXACT) -> CoefficientSet:
    return CoefficientSet.from_dict(data, backend)


def field_to_dict(f: CoefficientField) -> dict:
    imin, imax, jmin, jmax = f.rectangle
    out = {
        "rectangle": {"imin": imin, "imax": imax, "jmin": jmin, "jmax": jmax},
        "sets": [{"i": i, "j": j, **cs.to_dict()} for (i, j), cs in f.items()],
    }
    if f.warnings:
        out["warnings"] = list(f.warnings)
    return out


def field_from_dict(data: Mapping, backend: Backend | str = Backend.EXACT) -> CoefficientField:
    try:
        sets = {(int(e["i"]), int(e["j"])): CoefficientSet.from_dict(e, backend) for e in data["sets"]}
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed coefficient field JSON: {exc}") from exc
    return CoefficientField(sets, tuple(data.get("warnings", ())))


def coefficients_from_dict(data: Mapping, backend: Backend | str = Backend.EXACT) -> Coefficients:
    """Either a field (has ``"sets"``) or a single constant set.

    A constant set may also be nested under ``"coefficients"``, as printed
    by ``calat example``.
    """
    if isinstance(data.get("coefficients"), Mapping):
        data = data["coefficients"]
    if "sets" in data:
        return field_from_dict(data, backend)
    return CoefficientSet.from_dict(data, backend)


def field_to_json(f: CoefficientField) -> str:
    return dumps(field_to_dict(f))


def field_from_json(text: str, backend: Backend | str = Backend.EXACT) -> CoefficientField:
    return field_from_dict(json.loads(text), backend)
