"""Working-precision management on top of the global mpmath context."""

from __future__ import annotations

import os
from dataclasses import dataclass

from mpmath import mp, mpf

ENV_DIGITS = "FEKETE_DIGITS"
DEFAULT_DIGITS = 50
DEFAULT_GUARD = 10


class PrecisionError(ValueError):
    """Raised when operands carry incompatible working precisions."""


_saved: list[int] = []


@dataclass(frozen=True)
class PrecisionContext:
    """Decimal precision for a computation.

    Parameters
    ----------
    digits : int
        Target number of significant decimal digits (at least 15).
    guard_digits : int
        Extra digits carried internally; the working precision is
        ``digits + guard_digits``.

    Notes
    -----
    Used as a context manager, it sets ``mp.dps`` to the working precision
    and restores the previous value on exit. Nesting is allowed.
    """

    digits: int = DEFAULT_DIGITS
    guard_digits: int = DEFAULT_GUARD

    def __post_init__(self):
        if int(self.digits) != self.digits or self.digits < 15:
            raise ValueError(f"digits must be an integer >= 15, got {self.digits}")
        if int(self.guard_digits) != self.guard_digits or self.guard_digits < 1:
            raise ValueError(f"guard_digits must be a positive integer, got {self.guard_digits}")

    @property
    def dps(self) -> int:
        return self.digits + self.guard_digits

    @property
    def eps(self) -> mpf:
        """Relative accuracy promised to callers, ``10**-digits``."""
        return mpf(10) ** (-self.digits)

    def tol(self, exponent: float) -> mpf:
        """Return ``10**exponent`` as an mpf at the current precision."""
        return mpf(10) ** exponent

    def __enter__(self) -> "PrecisionContext":
        _saved.append(mp.dps)
        mp.dps = self.dps
        return self

    def __exit__(self, *exc) -> None:
        mp.dps = _saved.pop()


def default_context() -> PrecisionContext:
    """Context built from the ``FEKETE_DIGITS`` environment variable, if set."""
    raw = os.environ.get(ENV_DIGITS)
    if raw is None or raw.strip() == "":
        return PrecisionContext()
    return PrecisionContext(digits=int(raw))


def current_dps() -> int:
    return mp.dps
