"""Scalar helpers: exact Gaussian rationals and decimal-string conversions."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from mpmath import mp, mpc, mpf


class GaussRational:
    """Exact complex number ``re + i*im`` with rational parts.

    Only the arithmetic needed by the exact verifiers is provided. Mixing
    with Python ints and Fractions is allowed; mixing with floating values
    is not (convert explicitly with :func:`to_mpc`).
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def coerce(x) -> "GaussRational":
        if isinstance(x, GaussRational):
            return x
        if isinstance(x, (int, Rational)):
            return GaussRational(x, 0)
        if isinstance(x, str):
            return GaussRational(Fraction(x), 0)
        raise TypeError(f"cannot use {type(x).__name__} as an exact scalar")

    def __add__(self, o):
        try:
            o = GaussRational.coerce(o)
        except TypeError:
            return NotImplemented
        return GaussRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __sub__(self, o):
        try:
            o = GaussRational.coerce(o)
        except TypeError:
            return NotImplemented
        return GaussRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return (-self).__add__(o)

    def __mul__(self, o):
        try:
            o = GaussRational.coerce(o)
        except TypeError:
            return NotImplemented
        return GaussRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self):
        return GaussRational(self.re, -self.im)

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __truediv__(self, o):
        try:
            o = GaussRational.coerce(o)
        except TypeError:
            return NotImplemented
        den = o.norm2()
        if den == 0:
            raise ZeroDivisionError("exact division by zero")
        num = self * o.conjugate()
        return GaussRational(num.re / den, num.im / den)

    def __rtruediv__(self, o):
        return GaussRational.coerce(o) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return GaussRational(1) / (self ** (-k))
        out, base = GaussRational(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, o):
        try:
            o = GaussRational.coerce(o)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        if self.im == 0:
            return f"GaussRational({self.re})"
        return f"GaussRational({self.re}, {self.im})"

    def to_mpc(self) -> mpc:
        return mpc(mpf(self.re.numerator) / self.re.denominator,
                   mpf(self.im.numerator) / self.im.denominator)


def is_exact(x) -> bool:
    return isinstance(x, (int, Rational, GaussRational)) and not isinstance(x, bool)


def mpf_to_fraction(x: mpf) -> Fraction:
    """Exact binary value of an mpf as a Fraction."""
    x = mpf(x)
    man, exp = x.man_exp
    man = -int(man) if x < 0 else int(man)
    if exp >= 0:
        return Fraction(man * (1 << exp))
    return Fraction(man, 1 << (-exp))


def to_exact(x) -> GaussRational:
    """Exact Gaussian rational equal to ``x`` (binary value for mp numbers)."""
    if is_exact(x):
        return GaussRational.coerce(x)
    if isinstance(x, str):
        return GaussRational(Fraction(x))
    z = mpc(x)
    return GaussRational(mpf_to_fraction(z.real), mpf_to_fraction(z.imag))


def to_mpc(x) -> mpc:
    """Convert any supported scalar to an mpc at the current precision."""
    if isinstance(x, GaussRational):
        return x.to_mpc()
    if isinstance(x, Fraction):
        return mpc(mpf(x.numerator) / x.denominator)
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return mpc(parse_real(x[0]), parse_real(x[1]))
    if isinstance(x, str):
        return mpc(parse_real(x))
    return mpc(x)


def parse_real(s) -> mpf:
    """Parse a decimal string (or number) into an mpf at current precision."""
    if isinstance(s, Fraction):
        return mpf(s.numerator) / s.denominator
    if isinstance(s, str):
        return mpf(s.strip())
    return mpf(s)


def parse_exact(x) -> GaussRational:
    """Parse ``"1/7"``, ``"0.25"`` or a ``[re, im]`` pair of such strings exactly."""
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise ValueError(f"complex scalar must be a [re, im] pair, got {x!r}")
        return GaussRational(Fraction(str(x[0]).strip()), Fraction(str(x[1]).strip()))
    if isinstance(x, (int, Fraction, GaussRational)):
        return GaussRational.coerce(x)
    return GaussRational(Fraction(str(x).strip()))


def fmt_real(x, digits: int | None = None) -> str:
    """Decimal string of a real value with ``digits`` significant digits."""
    if isinstance(x, Fraction):
        x = mpf(x.numerator) / x.denominator
    n = digits if digits is not None else mp.dps
    return mp.nstr(mpf(x), n, min_fixed=-5, max_fixed=5, strip_zeros=True)


def fmt_complex(z, digits: int | None = None) -> list[str]:
    """``[re, im]`` decimal-string pair."""
    if isinstance(z, GaussRational):
        return [str(z.re), str(z.im)]
    z = mpc(z)
    return [fmt_real(z.real, digits), fmt_real(z.imag, digits)]
