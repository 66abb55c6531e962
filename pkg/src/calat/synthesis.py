"""Transition matrices, frame transport and lattice synthesis.

A frame ``F(m,n) = [r(m,n), r(m+1,n), r(m,n+1)]`` moves one step in
either lattice direction by right multiplication:

    F(m+1, n) = F(m, n) A(m, n)        F(m, n+1) = F(m, n) B(m, n)

Backward steps use the inverse matrix of the target site.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .compat import check_field, constant_conditions, constant_family, is_constant_compatible
from .errors import IncompatibleField, InvalidWindow, SingularTransition
from .invariants import CoefficientField, CoefficientSet, Coefficients, coefficients_at
from .lattice import Frame, LatticeWindow, Matrix3, Point3, Site, mat_det, mat_inv
from .scalar import Backend, eq, is_exact, is_zero

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TransitionPair:
    A: Matrix3
    B: Matrix3

    @property
    def det_A(self):
        return mat_det(self.A)

    @property
    def det_B(self):
        return mat_det(self.B)


def transition_matrices(s: CoefficientSet) -> TransitionPair:
    a, b, c, alpha, beta, gamma, delta = s
    d = a - b - c
    zero, one = a - a, a - a + 1
    A = (
        (zero, beta * d - alpha, d),
        (one, 1 + alpha + b * beta - beta, b),
        (zero, c * beta, c),
    )
    B = (
        (zero, d, delta * d - gamma),
        (zero, b, b * delta),
        (one, c, 1 + gamma + c * delta - delta),
    )
    return TransitionPair(A, B)


class Step(tuple, Enum):
    E1 = (1, 0)
    E2 = (0, 1)
    BACK_E1 = (-1, 0)
    BACK_E2 = (0, -1)


def propagate_frame(f: Frame, step: Step | tuple[int, int], coeffs: Coefficients) -> Frame:
    """Move ``f`` one lattice step; the new anchor is ``f.anchor + step``."""
    step = Step(tuple(step))
    m, n = f.anchor
    target = (m + step[0], n + step[1])
    if step in (Step.E1, Step.E2):
        pair = transition_matrices(coefficients_at(coeffs, f.anchor))
        return f.times(pair.A if step is Step.E1 else pair.B, target)
    s = coefficients_at(coeffs, target, f.anchor)
    pair = transition_matrices(s)
    if step is Step.BACK_E1:
        if is_zero(s.c * s.alpha, abs(s.c * s.alpha) + 1):
            raise SingularTransition("A", target)
        return f.times(mat_inv(pair.A), target)
    if is_zero(s.b * s.gamma, abs(s.b * s.gamma) + 1):
        raise SingularTransition("B", target)
    return f.times(mat_inv(pair.B), target)


def _points_agree(p: Point3, q: Point3) -> bool:
    scale = max(p.max_abs(), q.max_abs())
    return all(eq(x, y, scale) for x, y in zip(p, q))


def _precheck(coeffs: Coefficients) -> None:
    if isinstance(coeffs, CoefficientSet):
        if not is_constant_compatible(coeffs):
            raise IncompatibleField(
                "constant coefficients fail -alpha*b = -gamma*c = a-b-c = bc(beta*delta-1)",
                residuals={"conditions": constant_conditions(coeffs)},
            )
        return
    for site, res in check_field(coeffs).items():
        bad = res.nonzero()
        if bad:
            raise IncompatibleField(
                f"coefficient field is not integrable at {site}: {', '.join(bad)} nonzero",
                site=site,
                residuals={site: res},
            )


def synthesize(
    coeffs: Coefficients,
    rectangle: tuple[int, int, int, int],
    initial: Frame | None = None,
    *,
    check: bool = True,
) -> LatticeWindow:
    """All points of ``rectangle`` generated from ``initial`` (anchor ``(0,0)``).

    Frames are marched along row ``n = 0`` and then up and down each
    column.  Coefficients are needed on the cells of the rectangle, i.e.
    ``[imin, imax-1] x [jmin, jmax-1]``.  Every point reachable from two
    frames is compared; disagreement raises ``IncompatibleField``.
    """
    imin, imax, jmin, jmax = rectangle
    if not (imin <= 0 < imax and jmin <= 0 < jmax):
        raise InvalidWindow("rectangle must contain (0,0), (1,0) and (0,1)")
    if check:
        _precheck(coeffs)
    if initial is None:
        backend = Backend.EXACT
        if isinstance(coeffs, CoefficientSet) and not is_exact(coeffs.a):
            backend = Backend.FLOAT
        elif isinstance(coeffs, CoefficientField) and not is_exact(next(iter(coeffs.sets.values())).a):
            backend = Backend.FLOAT
        initial = Frame.canonical(backend)
    initial = Frame(initial.c1, initial.c2, initial.c3, (0, 0))
    if is_zero(initial.det(), max(c.max_abs() for c in (initial.c1, initial.c2, initial.c3)) ** 3):
        raise InvalidWindow("initial frame is degenerate")

    frames: dict[Site, Frame] = {(0, 0): initial}
    f = initial
    for m in range(0, imax - 1):
        f = propagate_frame(f, Step.E1, coeffs)
        frames[f.anchor] = f
    f = initial
    for m in range(0, imin, -1):
        f = propagate_frame(f, Step.BACK_E1, coeffs)
        frames[f.anchor] = f
    for m in range(imin, imax):
        base = frames[(m, 0)]
        f = base
        for n in range(0, jmax - 1):
            f = propagate_frame(f, Step.E2, coeffs)
            frames[f.anchor] = f
        f = base
        for n in range(0, jmin, -1):
            f = propagate_frame(f, Step.BACK_E2, coeffs)
            frames[f.anchor] = f

    points: dict[Site, Point3] = {}

    def put(site: Site, p: Point3, source: Site) -> None:
        old = points.get(site)
        if old is None:
            points[site] = p
        elif not _points_agree(old, p):
            raise IncompatibleField(
                f"frames disagree on r{site} (reached from frame at {source})", site=site
            )

    for (m, n), fr in sorted(frames.items()):
        put((m, n), fr.c1, (m, n))
        put((m + 1, n), fr.c2, (m, n))
        put((m, n + 1), fr.c3, (m, n))
    corner = (imax - 1, jmax - 1)
    last = frames[corner]
    s = coefficients_at(coeffs, corner)
    put((imax, jmax), last.c1 * s.d + last.c2 * s.b + last.c3 * s.c, corner)
    return LatticeWindow(imin, imax, jmin, jmax, points)


# -- named examples -------------------------------------------------------------

_H = Fraction(1, 2)
_T = Fraction(1, 3)

EXAMPLES: dict[str, tuple[tuple, tuple[int, int, int, int]]] = {
    # (b, c, beta, delta), default window
    "example1": ((_H, _H, 0, 0), (-2, 2, -2, 2)),
    "example2": ((_T, -_T, 2, 2), (-1, 2, -1, 2)),
    "example3_d0": ((-1, -1, 0, 0), (-1, 1, -1, 1)),
    "example3_d1": ((-1, -1, 0, 1), (-1, 1, -1, 1)),
    "example3_dm1": ((-1, -1, 0, -1), (-1, 1, -1, 1)),
    "convex6": ((-1, -2, 0, 0), (-2, 2, -2, 2)),
}


def example_set(name: str, backend: Backend | str = Backend.EXACT) -> CoefficientSet:
    try:
        params, _ = EXAMPLES[name]
    except KeyError:
        raise ValueError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}") from None
    return constant_family(*params, backend=backend)


def generate_example(
    name: str,
    rectangle: tuple[int, int, int, int] | None = None,
    backend: Backend | str = Backend.EXACT,
) -> tuple[CoefficientSet, LatticeWindow]:
    s = example_set(name, backend)
    rect = rectangle or EXAMPLES[name][1]
    return s, synthesize(s, rect, Frame.canonical(backend))
