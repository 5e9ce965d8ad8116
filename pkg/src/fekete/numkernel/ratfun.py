"""Rational functions over exact Gaussian rationals."""

from __future__ import annotations

from dataclasses import dataclass

from .poly import Polynomial, exact_gcd


@dataclass(frozen=True)
class RationalPoly:
    """Reduced quotient ``numerator / denominator`` with a monic denominator.

    Exact coefficients are required so that reduction is a true gcd
    computation rather than a tolerance call.
    """

    numerator: Polynomial
    denominator: Polynomial

    def __post_init__(self):
        num, den = self.numerator, self.denominator
        if not (num.exact and den.exact):
            raise TypeError("RationalPoly needs exact polynomials")
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        g = exact_gcd(num, den) if not num.is_zero() else den.monic()
        num = num.divmod(g)[0]
        den = den.divmod(g)[0]
        lead = den.leading
        object.__setattr__(self, "numerator", num.scale(1 / lead) if lead != 1 else num)
        object.__setattr__(self, "denominator", den.monic())

    @classmethod
    def from_poly(cls, p: Polynomial) -> "RationalPoly":
        return cls(p, Polynomial([1], exact=True))

    def __add__(self, o: "RationalPoly") -> "RationalPoly":
        return RationalPoly(self.numerator * o.denominator + o.numerator * self.denominator,
                            self.denominator * o.denominator)

    def __neg__(self):
        return RationalPoly(-self.numerator, self.denominator)

    def __sub__(self, o):
        return self + (-o)

    def __mul__(self, o: "RationalPoly") -> "RationalPoly":
        return RationalPoly(self.numerator * o.numerator, self.denominator * o.denominator)

    def derivative(self) -> "RationalPoly":
        n, d = self.numerator, self.denominator
        return RationalPoly(n.derivative() * d - n * d.derivative(), d * d)

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def __call__(self, z):
        return self.numerator(z) / self.denominator(z)

    def __eq__(self, o):
        if not isinstance(o, RationalPoly):
            return NotImplemented
        return self.numerator == o.numerator and self.denominator == o.denominator

    def __hash__(self):
        return hash((self.numerator, self.denominator))
