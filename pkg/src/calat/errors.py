"""Exception types shared across the package."""

from __future__ import annotations


class CalatError(Exception):
    """Base class for all library errors."""


class ZeroDenominator(CalatError, ZeroDivisionError):
    """A quotient in a formula has a vanishing denominator."""

    def __init__(self, factor: str, site: tuple[int, int] | None = None):
        self.factor = factor
        self.site = site
        where = f" at site {site}" if site is not None else ""
        super().__init__(f"zero denominator {factor}{where}")


class MissingStencil(CalatError, KeyError):
    """A point or coefficient needed by a fixed stencil is outside the data."""

    def __init__(self, site: tuple[int, int], needed: tuple[int, int] | None = None):
        self.site = site
        self.needed = needed
        msg = f"stencil incomplete at site {site}"
        if needed is not None:
            msg += f" (missing {needed})"
        super().__init__(msg)

    def __str__(self) -> str:  # KeyError would repr() the message
        return self.args[0]


class AssumptionViolated(CalatError, ValueError):
    """Coefficients break one of d != 0, bc != 0, a != 1."""

    def __init__(self, clause: str):
        self.clause = clause
        super().__init__(f"coefficient assumption violated: {clause}")


class SingularTransition(CalatError, ZeroDivisionError):
    """A transition matrix is not invertible (c*alpha = 0 or b*gamma = 0)."""

    def __init__(self, which: str, site: tuple[int, int]):
        self.which = which
        self.site = site
        super().__init__(f"transition matrix {which} is singular at site {site}")


class IncompatibleField(CalatError, ValueError):
    """Coefficient data fails the integrability conditions."""

    def __init__(self, message: str, site: tuple[int, int] | None = None, residuals: dict | None = None):
        self.site = site
        self.residuals = residuals or {}
        super().__init__(message)


class InvalidWindow(CalatError, ValueError):
    """Malformed lattice window (bad rectangle, missing or non-finite points)."""
