"""Dense univariate polynomials over mp complex numbers or exact Gaussian rationals."""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from mpmath import mp, mpc, mpf

from .precision import PrecisionError
from .scalars import GaussRational, fmt_complex, is_exact, parse_exact, to_exact, to_mpc

ZERO_DEGREE = -math.inf


class Polynomial:
    """Immutable dense polynomial, coefficients lowest degree first.

    Two coefficient fields are supported: ``exact`` polynomials hold
    :class:`GaussRational` coefficients and never round; numeric ones hold
    ``mpc`` values and remember the ``mp.dps`` they were created at.
    Combining numeric polynomials of different precision raises
    :class:`PrecisionError`; exact operands are promoted silently.

    Only exactly-zero trailing coefficients are dropped. Tiny numeric
    coefficients are kept (see :meth:`truncate` for explicit cleanup).
    """

    __slots__ = ("coeffs", "exact", "dps")

    def __init__(self, coeffs: Iterable = (), exact: bool | None = None):
        cs = list(coeffs)
        if exact is None:
            exact = all(is_exact(c) for c in cs)
        if exact:
            cs = [to_exact(c) for c in cs]
        else:
            cs = [to_mpc(c) for c in cs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)
        self.exact = bool(exact)
        self.dps = None if exact else mp.dps

    # ------------------------------------------------------------------ basics
    @classmethod
    def zero(cls, exact=False) -> "Polynomial":
        return cls((), exact=exact)

    @classmethod
    def constant(cls, c, exact=None) -> "Polynomial":
        return cls([c], exact=exact)

    @classmethod
    def monomial(cls, k: int, c=1, exact=None) -> "Polynomial":
        return cls([0] * k + [c], exact=exact)

    @classmethod
    def from_roots(cls, roots: Sequence, lead=1) -> "Polynomial":
        p = cls([lead])
        for r in roots:
            p = p * cls([-r, 1], exact=is_exact(r) and p.exact)
        return p

    @property
    def degree(self):
        """Degree, or ``-inf`` for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else ZERO_DEGREE

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self):
        if not self.coeffs:
            return GaussRational(0) if self.exact else mpc(0)
        return self.coeffs[-1]

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return GaussRational(0) if self.exact else mpc(0)

    def to_numeric(self) -> "Polynomial":
        if not self.exact:
            return self
        return Polynomial([c.to_mpc() for c in self.coeffs], exact=False)

    def to_exact(self) -> "Polynomial":
        """Exact polynomial with the binary values of the coefficients."""
        if self.exact:
            return self
        return Polynomial([to_exact(c) for c in self.coeffs], exact=True)

    # ----------------------------------------------------------- arithmetic
    def _align(self, other: "Polynomial"):
        if self.exact and other.exact:
            return self, other
        if not self.exact and not other.exact:
            if self.dps != other.dps:
                raise PrecisionError(
                    f"polynomials created at {self.dps} and {other.dps} digits")
            return self, other
        return self.to_numeric(), other.to_numeric()

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if is_exact(other):
            return Polynomial([other], exact=True)
        return Polynomial([other], exact=False)

    def __add__(self, other):
        a, b = self._align(self._lift(other))
        n = max(len(a.coeffs), len(b.coeffs))
        return Polynomial([a[k] + b[k] for k in range(n)], exact=a.exact)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs], exact=self.exact)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        a, b = self._align(self._lift(other))
        if a.is_zero() or b.is_zero():
            return Polynomial.zero(a.exact)
        out = [0 * a.coeffs[0]] * (len(a.coeffs) + len(b.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if not x:
                continue
            for j, y in enumerate(b.coeffs):
                out[i + j] = out[i + j] + x * y
        return Polynomial(out, exact=a.exact)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative polynomial power")
        out = Polynomial([1], exact=self.exact) if self.exact else Polynomial([mpc(1)], exact=False)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c) -> "Polynomial":
        if self.exact and not is_exact(c):
            return self.to_numeric().scale(c)
        if not self.exact:
            c = to_mpc(c)
        return Polynomial([c * x for x in self.coeffs], exact=self.exact)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.exact == other.exact and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.exact, self.coeffs))

    def __call__(self, z):
        """Horner evaluation; the zero polynomial evaluates to 0."""
        cs = self.coeffs
        if self.exact and is_exact(z):
            z = GaussRational.coerce(z)
            acc = GaussRational(0)
        else:
            if self.exact:
                cs = [c.to_mpc() for c in cs]
            if not isinstance(z, (mpc, mpf)):
                z = to_mpc(z)
            acc = mpc(0)
        for c in reversed(cs):
            acc = acc * z + c
        return acc

    def derivative(self, order: int = 1) -> "Polynomial":
        p = self
        for _ in range(order):
            p = Polynomial([k * c for k, c in enumerate(p.coeffs) if k > 0], exact=p.exact)
        return p

    def antiderivative(self, const=0) -> "Polynomial":
        """Antiderivative with the given value at 0."""
        if self.exact:
            cs = [GaussRational.coerce(const)] + [c / (k + 1) for k, c in enumerate(self.coeffs)]
        else:
            cs = [to_mpc(const)] + [c / (k + 1) for k, c in enumerate(self.coeffs)]
        return Polynomial(cs, exact=self.exact)

    def divmod(self, den: "Polynomial"):
        """Long division; returns ``(quotient, remainder)`` with deg r < deg den."""
        num, den = self._align(den)
        if den.is_zero():
            raise ZeroDivisionError("polynomial division by the zero polynomial")
        m = len(den.coeffs) - 1
        rem = list(num.coeffs)
        if len(rem) - 1 < m:
            return Polynomial.zero(num.exact), num
        lead = den.coeffs[-1]
        quo = [None] * (len(rem) - m)
        for k in range(len(rem) - 1, m - 1, -1):
            q = rem[k] / lead
            quo[k - m] = q
            if q:
                for j in range(m + 1):
                    rem[k - m + j] = rem[k - m + j] - q * den.coeffs[j]
        return Polynomial(quo, exact=num.exact), Polynomial(rem[:m], exact=num.exact)

    def __floordiv__(self, den):
        return self.divmod(den)[0]

    def __mod__(self, den):
        return self.divmod(den)[1]

    def monic(self) -> "Polynomial":
        if self.is_zero():
            raise ZeroDivisionError("zero polynomial has no monic normalization")
        lead = self.coeffs[-1]
        return Polynomial([c / lead for c in self.coeffs], exact=self.exact)

    def taylor_shift(self, c) -> "Polynomial":
        """Coefficients of ``p(c + t)`` in ``t``."""
        if self.exact and not is_exact(c):
            return self.to_numeric().taylor_shift(c)
        cs = list(self.coeffs)
        n = len(cs)
        for i in range(n):
            for k in range(n - 2, i - 1, -1):
                cs[k] = cs[k] + c * cs[k + 1]
        return Polynomial(cs, exact=self.exact)

    def norm(self) -> mpf:
        """Max-modulus coefficient norm (as an mpf)."""
        if not self.coeffs:
            return mpf(0)
        return max(abs(to_mpc(c)) for c in self.coeffs)

    def truncate(self, rel_tol) -> "Polynomial":
        """Drop leading coefficients below ``rel_tol`` times the norm (explicit cleanup)."""
        if self.exact or not self.coeffs:
            return self
        cut = self.norm() * rel_tol
        cs = list(self.coeffs)
        while cs and abs(cs[-1]) <= cut:
            cs.pop()
        return Polynomial(cs, exact=False)

    def roots(self, **kw):
        from .roots import poly_roots
        return poly_roots(self, **kw)

    # ---------------------------------------------------------------- serde
    def to_json(self, digits: int | None = None) -> list:
        return [fmt_complex(c, digits) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence, exact: bool = False) -> "Polynomial":
        """Parse a list of decimal strings or ``[re, im]`` pairs, lowest degree first."""
        vals = [parse_exact(x) for x in data]
        p = cls(vals, exact=True)
        return p if exact else p.to_numeric()

    def __repr__(self):
        if self.exact:
            return f"Polynomial({list(self.coeffs)!r}, exact=True)"
        return "Polynomial([" + ", ".join(mp.nstr(c, 8) for c in self.coeffs) + "])"


# functional spellings used throughout the package
def poly_eval(p: Polynomial, z):
    return p(z)


def poly_derivative(p: Polynomial) -> Polynomial:
    return p.derivative()


def poly_divmod(num: Polynomial, den: Polynomial):
    return num.divmod(den)


def exact_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd of two exact polynomials (Euclid over Q(i))."""
    if not (a.exact and b.exact):
        raise TypeError("exact_gcd needs exact polynomials")
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    if a.is_zero():
        return a
    return a.monic()


def squarefree_decomposition(p: Polynomial) -> list[tuple[Polynomial, int]]:
    """Yun's algorithm: ``p = lc * prod f_m**m`` with f_m squarefree, coprime.

    Returns the nonconstant factors as ``(f_m, m)`` pairs (exact input only).
    """
    if not p.exact:
        raise TypeError("squarefree_decomposition needs an exact polynomial")
    if p.degree < 1:
        return []
    out = []
    a0 = exact_gcd(p, p.derivative())
    b = p.divmod(a0)[0]
    c = p.derivative().divmod(a0)[0]
    d = c - b.derivative()
    m = 1
    while b.degree >= 1:
        a = exact_gcd(b, d)
        if a.degree >= 1:
            out.append((a, m))
        b = b.divmod(a)[0]
        c = d.divmod(a)[0]
        d = c - b.derivative()
        m += 1
    return out


def poly_gcd_coprime_check(a: Polynomial, b: Polynomial, tol=None) -> bool:
    """Decide whether ``a`` and ``b`` are coprime.

    Runs the Euclidean remainder sequence. In exact mode the test is exact.
    Otherwise a remainder whose coefficient norm falls below ``tol`` times
    the norm of the current operands, while the divisor still has degree at
    least one, is treated as a common factor.
    """
    if a.is_zero() and b.is_zero():
        raise ValueError("coprimality of two zero polynomials is undefined")
    if a.exact and b.exact:
        g = exact_gcd(a, b)
        return g.degree == 0
    a, b = a.to_numeric(), b.to_numeric()
    if tol is None:
        tol = mpf(10) ** (-(mp.dps // 2))
    if a.degree < b.degree:
        a, b = b, a

    def clean(p, scale):
        cs = list(p.coeffs)
        while cs and abs(cs[-1]) <= tol * scale:
            cs.pop()
        return Polynomial(cs, exact=False)

    b = clean(b, max(a.norm(), b.norm()))
    while True:
        if b.is_zero():
            return a.degree == 0
        if b.degree == 0:
            return True
        scale = max(a.monic().norm(), b.monic().norm())
        r = a.monic().divmod(b.monic())[1]
        r = clean(r, scale)
        a, b = b.monic(), r
