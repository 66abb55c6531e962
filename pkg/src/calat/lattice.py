"""Points, 3x3 determinants, frames and rectangular lattice windows.

Index convention: ``site + (1, 0)`` is the "1" neighbour, ``site + (0, 1)``
the "2" neighbour, negative offsets the barred ones.  Row-major order
means the first index ``i`` is outer, ``j`` inner.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import InvalidWindow, MissingStencil
from .scalar import Backend, check_finite, format_scalar, is_exact, is_zero, to_scalar

Site = tuple[int, int]
Matrix3 = tuple[tuple, tuple, tuple]


@dataclass(frozen=True, slots=True)
class Point3:
    x: object
    y: object
    z: object

    def __post_init__(self):
        for v in (self.x, self.y, self.z):
            check_finite(v)

    def __iter__(self):
        return iter((self.x, self.y, self.z))

    def __getitem__(self, k):
        return (self.x, self.y, self.z)[k]

    def __add__(self, other: Point3) -> Point3:
        return Point3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: Point3) -> Point3:
        return Point3(self.x - other.x, self.y - other.y, self.z - other.z)

    def __neg__(self) -> Point3:
        return Point3(-self.x, -self.y, -self.z)

    def __mul__(self, t) -> Point3:
        return Point3(self.x * t, self.y * t, self.z * t)

    __rmul__ = __mul__

    def max_abs(self):
        return max(abs(self.x), abs(self.y), abs(self.z))

    def as_tuple(self) -> tuple:
        return (self.x, self.y, self.z)

    def convert(self, backend: Backend | str) -> Point3:
        return Point3(*(to_scalar(v, backend) for v in self))


def point(x, y, z, backend: Backend | str = Backend.EXACT) -> Point3:
    return Point3(to_scalar(x, backend), to_scalar(y, backend), to_scalar(z, backend))


def det3(v1: Point3, v2: Point3, v3: Point3):
    """Determinant of the 3x3 array with columns ``v1, v2, v3``."""
    return (
        v1.x * (v2.y * v3.z - v3.y * v2.z)
        - v2.x * (v1.y * v3.z - v3.y * v1.z)
        + v3.x * (v1.y * v2.z - v2.y * v1.z)
    )


def det_scale(*vs: Point3):
    """Magnitude bound for a determinant of these columns (float tolerance)."""
    m = max(v.max_abs() for v in vs)
    return m * m * m


def cross(u: Point3, v: Point3) -> Point3:
    return Point3(u.y * v.z - u.z * v.y, u.z * v.x - u.x * v.z, u.x * v.y - u.y * v.x)


# -- 3x3 matrices as row tuples -------------------------------------------


def mat(rows: Sequence[Sequence]) -> Matrix3:
    return tuple(tuple(r) for r in rows)  # type: ignore[return-value]


def identity(one=Fraction(1)) -> Matrix3:
    z = one - one
    return ((one, z, z), (z, one, z), (z, z, one))


def mat_mul(m: Matrix3, n: Matrix3) -> Matrix3:
    return tuple(
        tuple(sum((m[i][k] * n[k][j] for k in range(1, 3)), m[i][0] * n[0][j]) for j in range(3))
        for i in range(3)
    )  # type: ignore[return-value]


def mat_vec(m: Matrix3, v: Point3) -> Point3:
    return Point3(*(m[i][0] * v.x + m[i][1] * v.y + m[i][2] * v.z for i in range(3)))


def mat_det(m: Matrix3):
    cols = [Point3(m[0][j], m[1][j], m[2][j]) for j in range(3)]
    return det3(*cols)


def mat_inv(m: Matrix3) -> Matrix3:
    """Inverse via the adjugate; raises ``ZeroDivisionError`` when singular."""
    det = mat_det(m)
    if is_zero(det, max(abs(x) for r in m for x in r) ** 3):
        raise ZeroDivisionError("singular matrix")
    (a, b, c), (d, e, f), (g, h, k) = m
    adj = (
        (e * k - f * h, c * h - b * k, b * f - c * e),
        (f * g - d * k, a * k - c * g, c * d - a * f),
        (d * h - e * g, b * g - a * h, a * e - b * d),
    )
    return tuple(tuple(x / det for x in r) for r in adj)  # type: ignore[return-value]


def mat_sub(m: Matrix3, n: Matrix3) -> Matrix3:
    return tuple(tuple(m[i][j] - n[i][j] for j in range(3)) for i in range(3))  # type: ignore


def max_abs_entry(m: Matrix3):
    return max(abs(x) for r in m for x in r)


def columns_matrix(c1: Point3, c2: Point3, c3: Point3) -> Matrix3:
    return tuple((c1[i], c2[i], c3[i]) for i in range(3))  # type: ignore[return-value]


# -- frames -----------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Frame:
    """Columns ``[r(m,n), r(m+1,n), r(m,n+1)]`` anchored at ``(m, n)``."""

    c1: Point3
    c2: Point3
    c3: Point3
    anchor: Site = (0, 0)

    def matrix(self) -> Matrix3:
        return columns_matrix(self.c1, self.c2, self.c3)

    def det(self):
        return det3(self.c1, self.c2, self.c3)

    def times(self, m: Matrix3, anchor: Site) -> Frame:
        """Right-multiply the column array by ``m``."""
        cols = [
            self.c1 * m[0][j] + self.c2 * m[1][j] + self.c3 * m[2][j] for j in range(3)
        ]
        return Frame(cols[0], cols[1], cols[2], anchor)

    def transform(self, p: Matrix3) -> Frame:
        return Frame(mat_vec(p, self.c1), mat_vec(p, self.c2), mat_vec(p, self.c3), self.anchor)

    @classmethod
    def canonical(cls, backend: Backend | str = Backend.EXACT) -> Frame:
        one, zero = to_scalar(1, backend), to_scalar(0, backend)
        return cls(
            Point3(one, zero, zero), Point3(zero, one, zero), Point3(zero, zero, one), (0, 0)
        )

    @classmethod
    def from_scalars(cls, values: Sequence, backend: Backend | str = Backend.EXACT) -> Frame:
        """Nine scalars, column by column."""
        if len(values) != 9:
            raise ValueError("a frame needs 9 scalars")
        v = [to_scalar(x, backend) for x in values]
        return cls(Point3(*v[0:3]), Point3(*v[3:6]), Point3(*v[6:9]), (0, 0))


# -- lattice windows ----------------------------------------------------------


@dataclass(frozen=True)
class LatticeWindow:
    imin: int
    imax: int
    jmin: int
    jmax: int
    points: Mapping[Site, Point3] = field(repr=False)

    def __post_init__(self):
        if self.imax < self.imin + 1 or self.jmax < self.jmin + 1:
            raise InvalidWindow(
                f"window [{self.imin},{self.imax}]x[{self.jmin},{self.jmax}] has no cell"
            )
        pts = dict(self.points)
        expected = set(self._rect_sites())
        missing = expected - pts.keys()
        if missing:
            raise InvalidWindow(f"window is missing points at {sorted(missing)[:5]}")
        extra = pts.keys() - expected
        if extra:
            raise InvalidWindow(f"points outside the rectangle at {sorted(extra)[:5]}")
        for s, p in pts.items():
            if not isinstance(p, Point3):
                pts[s] = Point3(*p)
        object.__setattr__(self, "points", MappingProxyType({s: pts[s] for s in self._rect_sites()}))

    def _rect_sites(self) -> Iterator[Site]:
        for i in range(self.imin, self.imax + 1):
            for j in range(self.jmin, self.jmax + 1):
                yield (i, j)

    @property
    def rectangle(self) -> tuple[int, int, int, int]:
        return (self.imin, self.imax, self.jmin, self.jmax)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.imax - self.imin + 1, self.jmax - self.jmin + 1)

    def sites(self) -> list[Site]:
        return list(self.points)

    def __contains__(self, site) -> bool:
        return site in self.points

    def __getitem__(self, site: Site) -> Point3:
        return self.points[site]

    def __len__(self) -> int:
        return len(self.points)

    def at(self, site: Site, di: int = 0, dj: int = 0, *, center: Site | None = None) -> Point3:
        """Point at ``site + (di, dj)``; raises ``MissingStencil`` for ``center``."""
        s = (site[0] + di, site[1] + dj)
        try:
            return self.points[s]
        except KeyError:
            raise MissingStencil(center or site, s) from None

    def has(self, site: Site, offsets: Iterable[tuple[int, int]]) -> bool:
        return all((site[0] + di, site[1] + dj) in self.points for di, dj in offsets)

    def transform(self, p: Matrix3) -> LatticeWindow:
        """Image of every point under the linear map ``p``."""
        return LatticeWindow(
            self.imin, self.imax, self.jmin, self.jmax,
            {s: mat_vec(p, v) for s, v in self.points.items()},
        )

    def convert(self, backend: Backend | str) -> LatticeWindow:
        return LatticeWindow(
            self.imin, self.imax, self.jmin, self.jmax,
            {s: v.convert(backend) for s, v in self.points.items()},
        )

    @property
    def exact(self) -> bool:
        return all(is_exact(x) for p in self.points.values() for x in p)

    def distinct_points(self) -> int:
        return len(set(self.points.values()))

    def subwindow(self, imin: int, imax: int, jmin: int, jmax: int) -> LatticeWindow:
        return LatticeWindow(
            imin, imax, jmin, jmax,
            {(i, j): self.points[(i, j)] for i in range(imin, imax + 1) for j in range(jmin, jmax + 1)},
        )


# -- validation -------------------------------------------------------------

AXIS_NEIGHBOURS = ((1, 0), (0, 1), (-1, 0), (0, -1))


@dataclass(frozen=True)
class Violation:
    site: Site
    condition: str  # "a" coplanarity, "b" origin on tangent plane, "c" collinear triple
    check: str
    value: object

    def describe(self) -> str:
        text = {
            "a": "point and axis neighbours are not coplanar",
            "b": "tangent plane passes through the origin",
            "c": "adjacent points are collinear",
        }[self.condition]
        return f"site {self.site}: condition ({self.condition}) {text}; {self.check} = {self.value}"


@dataclass(frozen=True)
class ValidationReport:
    checked: tuple[Site, ...]
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def failing_sites(self) -> list[Site]:
        return sorted({v.site for v in self.violations})

    def per_site(self) -> dict[Site, list[Violation]]:
        out: dict[Site, list[Violation]] = {s: [] for s in self.checked}
        for v in self.violations:
            out[v.site].append(v)
        return out


def validate_window(w: LatticeWindow) -> ValidationReport:
    """Check coplanarity and the four nondegeneracy determinants at each interior site."""
    checked = []
    violations = []
    for s in w.sites():
        if not w.has(s, AXIS_NEIGHBOURS):
            continue
        checked.append(s)
        r = w[s]
        r1, r2 = w.at(s, 1, 0), w.at(s, 0, 1)
        rb1, rb2 = w.at(s, -1, 0), w.at(s, 0, -1)
        u, v = r1 - r, r2 - r
        scale = det_scale(u, v, r - rb1, r - rb2)
        for name, x in (("det[r1-r, r2-r, r-r1bar]", r - rb1), ("det[r1-r, r2-r, r-r2bar]", r - rb2)):
            val = det3(u, v, x)
            if not is_zero(val, scale):
                violations.append(Violation(s, "a", name, val))
        for name, (p, q) in (
            ("det[r1, r2, r]", (r1, r2)),
            ("det[r1bar, r2bar, r]", (rb1, rb2)),
            ("det[r1, r2bar, r]", (r1, rb2)),
            ("det[r1bar, r2, r]", (rb1, r2)),
        ):
            val = det3(p, q, r)
            if is_zero(val, det_scale(p, q, r)):
                m = max(p.max_abs(), q.max_abs(), r.max_abs())
                collinear = all(is_zero(x, m * m) for x in cross(p - r, q - r))
                violations.append(Violation(s, "c" if collinear else "b", name, val))
    return ValidationReport(tuple(checked), tuple(violations))


# -- JSON ---------------------------------------------------------------------


def window_to_dict(w: LatticeWindow) -> dict:
    return {
        "imin": w.imin,
        "imax": w.imax,
        "jmin": w.jmin,
        "jmax": w.jmax,
        "points": [
            {"i": i, "j": j, "xyz": [format_scalar(x) for x in p]} for (i, j), p in w.points.items()
        ],
    }


def window_from_dict(data: dict, backend: Backend | str = Backend.EXACT) -> LatticeWindow:
    try:
        pts = {
            (int(e["i"]), int(e["j"])): point(*e["xyz"], backend=backend) for e in data["points"]
        }
        return LatticeWindow(int(data["imin"]), int(data["imax"]), int(data["jmin"]), int(data["jmax"]), pts)
    except (KeyError, TypeError) as exc:
        raise InvalidWindow(f"malformed lattice JSON: {exc}") from exc


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def window_to_json(w: LatticeWindow) -> str:
    return dumps(window_to_dict(w))


def window_from_json(text: str, backend: Backend | str = Backend.EXACT) -> LatticeWindow:
    return window_from_dict(json.loads(text), backend)
