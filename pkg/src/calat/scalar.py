"""Scalar backends: exact rationals (``Fraction``) and IEEE doubles.

Every numeric routine in the package is written against plain Python
arithmetic, so the backend is simply the type of the numbers flowing
through it.  This module centralises conversion, zero tests and
serialisation.
"""

from __future__ import annotations

import contextlib
import math
import os
from enum import Enum
from fractions import Fraction
from typing import Iterator, Union

Scalar = Union[Fraction, float]

DEFAULT_TOLERANCE = 1e-9


class Backend(str, Enum):
    EXACT = "exact"
    FLOAT = "float"


_tolerance = DEFAULT_TOLERANCE


def get_tolerance() -> float:
    return _tolerance


def set_tolerance(tol: float) -> None:
    global _tolerance
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    _tolerance = float(tol)


@contextlib.contextmanager
def tolerance(tol: float) -> Iterator[None]:
    """Temporarily override the float zero tolerance."""
    old = get_tolerance()
    set_tolerance(tol)
    try:
        yield
    finally:
        set_tolerance(old)


def default_backend() -> Backend:
    """Backend named by ``CALAT_BACKEND``, exact if unset."""
    return Backend(os.environ.get("CALAT_BACKEND", Backend.EXACT.value).lower())


def is_exact(x) -> bool:
    return isinstance(x, (Fraction, int))


def to_scalar(value, backend: Backend | str = Backend.EXACT) -> Scalar:
    """Convert ``value`` (int, float, Fraction or ``"p/q"`` string) to ``backend``.

    Floats entering the exact backend are read through their shortest
    repr, so ``0.1`` becomes ``1/10`` rather than the binary expansion.
    """
    backend = Backend(backend)
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if backend is Backend.EXACT:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, float):
            if not math.isfinite(value):
                raise ValueError(f"non-finite scalar {value!r}")
            return Fraction(repr(value))
        if isinstance(value, str):
            return Fraction(value.strip())
        raise TypeError(f"cannot convert {type(value).__name__} to a scalar")
    if isinstance(value, str):
        value = Fraction(value.strip())
    out = float(value)
    if not math.isfinite(out):
        raise ValueError(f"non-finite scalar {value!r}")
    return out


def check_finite(x) -> None:
    if isinstance(x, float) and not math.isfinite(x):
        raise ValueError(f"non-finite scalar {x!r}")


def is_zero(x, scale=0) -> bool:
    """Exact test for rationals; ``|x| <= tol * (1 + scale)`` for floats."""
    if is_exact(x):
        return x == 0
    return abs(x) <= _tolerance * (1.0 + abs(float(scale)))


def eq(x, y, scale=None) -> bool:
    if scale is None:
        scale = max(abs(x), abs(y))
    return is_zero(x - y, scale)


def sign(x, scale=0) -> int:
    if is_zero(x, scale):
        return 0
    return 1 if x > 0 else -1


def format_scalar(x):
    """JSON form: ``"p/q"`` strings for rationals, numbers for floats."""
    if isinstance(x, int) and not isinstance(x, bool):
        x = Fraction(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return float(x)


def parse_scalar(value, backend: Backend | str = Backend.EXACT) -> Scalar:
    return to_scalar(value, backend)


def decimal_string(x, digits: int | None = None) -> str:
    """Shortest round-trip decimal, or a fixed number of significant digits."""
    if digits is None:
        return repr(float(x))
    if is_exact(x):
        from decimal import Context, Decimal

        q = Fraction(x)
        ctx = Context(prec=digits)
        return format(ctx.divide(Decimal(q.numerator), Decimal(q.denominator)), "f")
    return f"{float(x):.{digits}g}"
