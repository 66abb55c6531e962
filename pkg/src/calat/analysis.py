"""Laplacian, harmonicity, local convexity and star volumes of a lattice surface."""

from __future__ import annotations

import csv
import io
import logging
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

from .errors import InvalidWindow, MissingStencil, ZeroDenominator
from .invariants import CoefficientSet, Coefficients, coefficients_at, extract_abc, triangle_volume
from .lattice import Frame, LatticeWindow, Point3, Site, det3, det_scale, dumps
from .mesh import cone_volume, star_faces
from .scalar import eq, format_scalar, is_exact, is_zero, sign

logger = logging.getLogger(__name__)

LAPLACIAN_NEIGHBOURS = ((-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0))
BLOCK = tuple((di, dj) for di in (-1, 0, 1) for dj in (-1, 0, 1))


def laplacian(w: LatticeWindow, site: Site) -> Point3:
    """``6 r`` minus the six triangulation neighbours."""
    r = w.at(site)
    total = r * 6
    for di, dj in LAPLACIAN_NEIGHBOURS:
        total = total - w.at(site, di, dj, center=site)
    return total


def laplacian_sites(w: LatticeWindow) -> list[Site]:
    return [s for s in w.sites() if w.has(s, LAPLACIAN_NEIGHBOURS)]


def interior_sites(w: LatticeWindow) -> list[Site]:
    """Sites whose full 3x3 block lies in the window."""
    return [s for s in w.sites() if w.has(s, BLOCK)]


def convexity_sites(w: LatticeWindow) -> list[Site]:
    """Sites where every second-ring point is available."""
    return [s for s in w.sites() if w.has(s, CONVEXITY_STENCIL)]


def site_eigenvalue(lap: Point3, r: Point3):
    """``s`` with ``lap = s * r``, or ``None`` if the vectors are not proportional."""
    k = max(range(3), key=lambda t: abs(r[t]))
    if is_zero(r[k]):
        return None
    s = lap[k] / r[k]
    scale = max(lap.max_abs(), r.max_abs())
    if all(eq(lap[t], s * r[t], scale) for t in range(3)):
        return s
    return None


def harmonic_check(w: LatticeWindow) -> tuple[bool, object]:
    """Whether ``Delta r = 0`` at every Laplacian site, and the largest residual."""
    sites = laplacian_sites(w)
    if not sites:
        raise InvalidWindow("no site has the full six-neighbour stencil")
    worst = None
    ok = True
    for s in sites:
        lap = laplacian(w, s)
        res = lap.max_abs()
        worst = res if worst is None else max(worst, res)
        if not is_zero(res, w[s].max_abs()):
            ok = False
    return ok, worst


def _common(values: list):
    if not values or any(v is None for v in values):
        return None
    first = values[0]
    if all(eq(v, first) for v in values[1:]):
        return first
    return None


def eigen_scalar(w: LatticeWindow):
    """The single ``s`` with ``Delta r = s r`` at every Laplacian site, if any."""
    sites = laplacian_sites(w)
    if not sites:
        raise InvalidWindow("no site has the full six-neighbour stencil")
    return _common([site_eigenvalue(laplacian(w, s), w[s]) for s in sites])


# -- harmonicity for constant coefficients ------------------------------------


def harmonic_conditions(s: CoefficientSet) -> tuple:
    """Residuals of the three closed-form harmonicity conditions."""
    a, b, c, alpha, beta, gamma, delta = s
    for name, v in (("alpha", alpha), ("gamma", gamma), ("b", b), ("c", c)):
        if is_zero(v, 1):
            raise ZeroDenominator(name)
    h1 = (1 + alpha - beta) * (1 / alpha + b / c) + (1 + gamma - delta) * (1 / gamma + c / b) - c / b - b / c - 6
    h2 = delta / gamma * (1 + alpha) - ((1 + gamma) / alpha - 1 / b - 1)
    h3 = beta / alpha * (1 + gamma) - ((1 + alpha) / gamma - 1 / c - 1)
    return (h1, h2, h3)


def canonical_stencil_laplacian(s: CoefficientSet) -> Point3:
    """``Delta r(0,0)`` on the surface synthesised from the identity frame."""
    from .synthesis import synthesize

    one = s.a - s.a + 1
    w = synthesize(s, (-1, 1, -1, 1), Frame.canonical("exact" if is_exact(one) else "float"), check=False)
    return laplacian(w, (0, 0))


def harmonic_constant_check(s: CoefficientSet, cross_check: bool = True) -> bool:
    scale = max(abs(x) for x in s)
    ok = all(is_zero(h, scale**2) for h in harmonic_conditions(s))
    if cross_check:
        direct = canonical_stencil_laplacian(s)
        direct_ok = is_zero(direct.max_abs(), 1)
        if direct_ok != ok:
            msg = f"closed-form harmonicity ({ok}) disagrees with the canonical stencil ({direct_ok}) for {s}"
            logger.warning(msg)
            warnings.warn(msg, RuntimeWarning, stacklevel=2)
    return ok


# -- convexity ------------------------------------------------------------------


class Convexity(str, Enum):
    STRICT = "convex_strict"
    DEGENERATE = "convex_degenerate"
    NON_CONVEX = "non_convex"
    BOUNDARY = "undecidable_boundary"

    @property
    def convex(self) -> bool:
        return self in (Convexity.STRICT, Convexity.DEGENERATE)


SECOND_RING = {
    "r_1b1b": (-2, 0),
    "r_1b2b": (-1, -1),
    "r_2b2b": (0, -2),
    "r_12b": (1, -1),
    "r_1b2": (-1, 1),
    "r_11": (2, 0),
    "r_12": (1, 1),
    "r_22": (0, 2),
}
CONVEXITY_STENCIL = tuple(SECOND_RING.values()) + ((1, 0), (0, 1), (-1, 0), (0, -1))


class ConvexityResult(NamedTuple):
    kind: Convexity
    determinants: dict


def convexity_at(w: LatticeWindow, site: Site) -> ConvexityResult:
    """Side of the tangent plane for each of the eight second-ring points.

    ``det[r1 - r, r2 - r, X - r]`` is computed for each ``X``; the sign of
    the ``r12`` determinant, ``(a - 1) det[r, r1, r2]``, is the reference.
    Zeros mean a point on the plane and downgrade strict to degenerate.
    """
    if not w.has(site, CONVEXITY_STENCIL):
        return ConvexityResult(Convexity.BOUNDARY, {})
    r = w[site]
    u, v = w.at(site, 1, 0) - r, w.at(site, 0, 1) - r
    dets = {}
    signs = {}
    for name, (di, dj) in SECOND_RING.items():
        x = w.at(site, di, dj) - r
        val = det3(u, v, x)
        dets[name] = val
        signs[name] = sign(val, det_scale(u, v, x))
    ref = signs["r_12"] or next((sg for sg in signs.values() if sg), 0)
    if ref == 0 or any(sg == -ref for sg in signs.values()):
        return ConvexityResult(Convexity.NON_CONVEX, dets)
    if all(signs.values()):
        return ConvexityResult(Convexity.STRICT, dets)
    return ConvexityResult(Convexity.DEGENERATE, dets)


def convexity_conditions(f: Coefficients, site: Site) -> dict[str, bool]:
    """The eight coefficient inequalities for local convexity at ``site``."""
    i, j = site
    s = coefficients_at(f, site)
    s_1b = coefficients_at(f, (i - 1, j), site)
    s_2b = coefficients_at(f, (i, j - 1), site)
    s_1b1b = coefficients_at(f, (i - 2, j), site)
    s_2b2b = coefficients_at(f, (i, j - 2), site)
    s_1b2b = coefficients_at(f, (i - 1, j - 1), site)

    def sg(x):
        return sign(x, 1)

    def ratio_sign(num, den):
        if is_zero(den, 1):
            raise ZeroDenominator("gamma or alpha", site)
        return sg(num) * sg(den)

    return {
        "delta >= 0": sg(s.delta) >= 0,
        "beta >= 0": sg(s.beta) >= 0,
        "c_1b (a_1b - 1)(a - 1) < 0": sg(s_1b.c * (s_1b.a - 1) * (s.a - 1)) < 0,
        "b_2b (a_2b - 1)(a - 1) < 0": sg(s_2b.b * (s_2b.a - 1) * (s.a - 1)) < 0,
        "delta_2b2b / gamma_2b2b >= 0": ratio_sign(s_2b2b.delta, s_2b2b.gamma) >= 0,
        "beta_1b1b / alpha_1b1b >= 0": ratio_sign(s_1b1b.beta, s_1b1b.alpha) >= 0,
        "gamma_1b2b < 0": sg(s_1b2b.gamma) < 0,
        "alpha_1b2b < 0": sg(s_1b2b.alpha) < 0,
    }


def convexity_from_coefficients(f: Coefficients, site: Site) -> bool:
    return all(convexity_conditions(f, site).values())


def constant_convex_check(s: CoefficientSet) -> bool:
    """``alpha = c < 0``, ``gamma = b < 0``, ``beta = delta = 0``, ``a = b + c - bc``."""
    scale = max(abs(x) for x in s)
    return (
        eq(s.alpha, s.c, scale)
        and sign(s.c, scale) < 0
        and eq(s.gamma, s.b, scale)
        and sign(s.b, scale) < 0
        and is_zero(s.beta, scale)
        and is_zero(s.delta, scale)
        and eq(s.a, s.b + s.c - s.b * s.c, scale**2)
    )


# -- volumes --------------------------------------------------------------------


def star_volumes_direct(w: LatticeWindow, site: Site) -> tuple:
    """Star and tangent-fan volumes summed triangle by triangle."""
    if not w.has(site, LAPLACIAN_NEIGHBOURS):
        raise MissingStencil(site)
    star = cone_volume(w, star_faces(site))
    i, j = site
    fan = [
        ((i, j - 1), (i, j), (i - 1, j)),
        ((i - 1, j), (i, j), (i, j + 1)),
        ((i, j - 1), (i + 1, j), (i, j)),
        ((i, j), (i + 1, j), (i, j + 1)),
    ]
    return star, cone_volume(w, fan)


def star_volumes(w: LatticeWindow, site: Site) -> tuple:
    """``(star_volume, tangent_star_volume)`` from the four surrounding cells.

    With ``d = a - b - c`` and ``V`` the cell volumes:

        star    = -d(i-1,j-1) V(i-1,j-1) + (1 - d(i-1,j)) V(i-1,j)
                  + (1 - d(i,j-1)) V(i,j-1) + V(i,j)
        tangent = -d(i-1,j-1) V(i-1,j-1) + c(i-1,j) V(i-1,j)
                  + b(i,j-1) V(i,j-1) + V(i,j)

    The result is checked against the direct triangle sums.
    """
    if not w.has(site, BLOCK):
        raise MissingStencil(site)
    i, j = site
    sw, west, south = (i - 1, j - 1), (i - 1, j), (i, j - 1)
    a_sw, b_sw, c_sw = extract_abc(w, sw)
    a_w, b_w, c_w = extract_abc(w, west)
    a_s, b_s, c_s = extract_abc(w, south)
    v_sw, v_w, v_s, v = (triangle_volume(w, x) for x in (sw, west, south, site))
    d_sw, d_w, d_s = a_sw - b_sw - c_sw, a_w - b_w - c_w, a_s - b_s - c_s
    star = -d_sw * v_sw + (1 - d_w) * v_w + (1 - d_s) * v_s + v
    tangent = -d_sw * v_sw + c_w * v_w + b_s * v_s + v
    direct_star, direct_tangent = star_volumes_direct(w, site)
    scale = det_scale(*(w.at(site, di, dj) for di, dj in BLOCK))
    if not (eq(star, direct_star, scale) and eq(tangent, direct_tangent, scale)):
        raise ArithmeticError(f"closed-form star volume disagrees with the triangle sum at {site}")
    return star, tangent


# -- reports --------------------------------------------------------------------


@dataclass(frozen=True)
class SiteAnalysis:
    site: Site
    laplacian: Point3
    harmonic_residual: object
    eigen_s: object
    convexity: Convexity
    star_volume: object
    tangent_star_volume: object
    determinants: dict

    def to_dict(self) -> dict:
        out = {
            "i": self.site[0],
            "j": self.site[1],
            "laplacian": [format_scalar(x) for x in self.laplacian],
            "harmonic_residual": format_scalar(self.harmonic_residual),
            "convexity": self.convexity.value,
            "star_volume": format_scalar(self.star_volume),
            "tangent_star_volume": format_scalar(self.tangent_star_volume),
        }
        if self.eigen_s is not None:
            out["eigen_s"] = format_scalar(self.eigen_s)
        return out


@dataclass(frozen=True)
class AnalysisReport:
    sites: tuple[SiteAnalysis, ...]
    harmonic: bool
    eigen_s: object
    convex_everywhere: bool

    def to_dict(self) -> dict:
        summary = {"harmonic": self.harmonic, "convex_everywhere": self.convex_everywhere}
        if self.eigen_s is not None:
            summary["eigen_s"] = format_scalar(self.eigen_s)
        return {"sites": [s.to_dict() for s in self.sites], "summary": summary}

    def to_json(self) -> str:
        return dumps(self.to_dict())

    def to_csv(self) -> str:
        buf = io.StringIO()
        cols = ["i", "j", "lx", "ly", "lz", "harmonic_residual", "eigen_s", "convexity",
                "star_volume", "tangent_star_volume"]
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(cols)
        for s in self.sites:
            d = s.to_dict()
            wr.writerow([d["i"], d["j"], *d["laplacian"], d["harmonic_residual"], d.get("eigen_s", ""),
                         d["convexity"], d["star_volume"], d["tangent_star_volume"]])
        return buf.getvalue()

    def summary_line(self) -> str:
        s = "none" if self.eigen_s is None else str(format_scalar(self.eigen_s))
        return f"harmonic={str(self.harmonic).lower()} eigen_s={s} convex_everywhere={str(self.convex_everywhere).lower()}"


def analyze_site(w: LatticeWindow, site: Site) -> SiteAnalysis:
    lap = laplacian(w, site)
    conv = convexity_at(w, site)
    star, tangent = star_volumes(w, site)
    return SiteAnalysis(site, lap, lap.max_abs(), site_eigenvalue(lap, w[site]), conv.kind,
                        star, tangent, conv.determinants)


def analyze(w: LatticeWindow) -> AnalysisReport:
    """Per-site analysis over interior sites in row-major order, plus a summary."""
    sites = interior_sites(w)
    if not sites:
        raise InvalidWindow("window has no interior site (needs at least 3x3 points)")
    rows = tuple(analyze_site(w, s) for s in sites)
    harmonic = all(is_zero(r.harmonic_residual, w[r.site].max_abs()) for r in rows)
    eigen = _common([r.eigen_s for r in rows])
    decided = [r for r in rows if r.convexity is not Convexity.BOUNDARY]
    convex = bool(decided) and all(r.convexity.convex for r in decided)
    return AnalysisReport(rows, harmonic, eigen, convex)


def strict_everywhere(w: LatticeWindow) -> bool:
    """True if some site is decidable and every decidable site is strictly convex."""
    kinds = [convexity_at(w, s).kind for s in w.sites()]
    decided = [k for k in kinds if k is not Convexity.BOUNDARY]
    return bool(decided) and all(k is Convexity.STRICT for k in decided)

