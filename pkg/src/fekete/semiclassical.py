"""Semiclassical types (A, B): symbol data, pole classification and branch layout.

The weight of a type is ``exp(theta)`` with ``theta' = -(A + B')/B``; the
dual exponent is ``theta_hat' = A/B``. Everything here is derived from an
exact copy of A and B, so reduction (hard edges) and multiplicity
structure are decided exactly and only the root locations are numeric.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from mpmath import mp, mpc, mpf

from .numkernel import (GaussRational, Polynomial, RationalPoly, poly_gcd_coprime_check,
                        poly_roots, squarefree_decomposition)
from .numkernel.poly import exact_gcd


class CoprimalityError(ValueError):
    """A and B share a root and the caller did not allow non-prime types."""


class UnsupportedContourClass(ValueError):
    """The type lies outside the classes for which contours are implemented."""


class BranchCutError(ValueError):
    """A log-type symbol was evaluated exactly on one of its cuts."""


class _Infinity:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()

HIGHER_ORDER = "higher-order"
END_POLE = "end-pole"
FLAG_POLE = "flag-pole"
HARD_EDGE = "hard-edge"

# contour classes
FREUD = "freud"
RAY = "ray"                  # B = z - c, deg A = 1 (Laguerre-like)
SEGMENT = "segment"          # B quadratic, two end-poles / hard edges (Jacobi-like)
PETAL = "petal"              # B = (z - p0)^m, deg A < m (Bessel-like)
FINITE_RANK = "finite-rank"  # A = k B', B squarefree
GENERAL = "general"          # valid type, no contour builder


@dataclass(frozen=True)
class PoleInfo:
    """A pole of ``theta' dz`` (or a hard edge, which has order 0).

    ``order`` is ``d_c + 1``; ``leading`` is the coefficient ``T_c`` of the
    leading singularity in the local parameter (``z - c`` or ``1/z``);
    ``multiplicity`` is the multiplicity of ``c`` as a root of B.
    """

    location: object
    order: int
    leading: mpc
    residue: mpc
    kind: str
    multiplicity: int = 0

    @property
    def d_c(self) -> int:
        return self.order - 1

    @property
    def at_infinity(self) -> bool:
        return self.location is INFINITY


@dataclass(frozen=True)
class BranchSpec:
    """Straight cuts for the logarithmic terms of theta.

    ``cut_angles[i]`` is the direction of the cut leaving the i-th finite
    log pole (same indexing as :attr:`SymbolFns.log_centers`). The log
    term is ``r_c * Log(exp(i(pi - psi_c)) (z - c))`` with the principal
    Log, which is single valued off the ray ``c + t exp(i psi_c)``.
    """

    cut_angles: tuple

    def unit(self, i: int) -> mpc:
        return mp.expj(mp.pi - self.cut_angles[i])


@dataclass(frozen=True)
class SymbolFns:
    """Evaluable pieces of theta.

    ``poly_part`` is the antiderivative (zero at 0) of the polynomial part
    of theta'. For each finite pole ``log_centers[i]`` carries principal
    coefficients ``principal[i] = [(power, coeff), ...]`` with negative
    powers of ``z - c`` and the log coefficient ``log_coeffs[i]``.
    """

    theta_prime: RationalPoly
    theta_hat_prime: RationalPoly
    poly_part: Polynomial
    log_centers: tuple
    principal: tuple
    log_coeffs: tuple
    default_branch: BranchSpec
    theta_prime_num: Polynomial = field(repr=False, default=None)
    theta_prime_den: Polynomial = field(repr=False, default=None)

    def log_term(self, i: int, delta, branch: BranchSpec | None = None, check_cut=True):
        """``Log(u_i * delta)`` for the i-th pole with ``delta = z - c_i``."""
        b = branch or self.default_branch
        w = b.unit(i) * delta
        if check_cut and w.real <= 0 and abs(w.imag) <= abs(w) * mpf(10) ** (5 - mp.dps):
            raise BranchCutError(f"point lies on the cut of the pole at {self.log_centers[i]}")
        return mp.log(w)

    def theta(self, z, branch: BranchSpec | None = None, offsets: dict | None = None,
              logs: dict | None = None) -> mpc:
        """Evaluate theta at z.

        ``offsets`` maps pole index to an exactly known ``z - c`` (used near
        endpoints that sit on a pole); ``logs`` maps pole index to an
        already continued value of the log term.
        """
        val = self.poly_part(z)
        for i, c in enumerate(self.log_centers):
            delta = offsets[i] if offsets and i in offsets else z - c
            for power, coeff in self.principal[i]:
                val += coeff * delta ** power
            r = self.log_coeffs[i]
            if r:
                if logs is not None and i in logs:
                    val += r * logs[i]
                else:
                    val += r * self.log_term(i, delta, branch)
        return val

    def theta_prime_at(self, z) -> mpc:
        return self.theta_prime_num(z) / self.theta_prime_den(z)


@dataclass(frozen=True)
class SemiclassicalType:
    """A semiclassical type with all derived data.

    Attributes
    ----------
    A, B : Polynomial
        Numeric polynomials, B monic.
    A_exact, B_exact : Polynomial
        Exact copies (binary values of numeric inputs).
    a, b, d, d_inf : int
        Degrees, class number ``max(a, b - 1)`` and ``a - b + 1`` (0 if negative).
    Lambda : mpc
        ``-res_{z=inf} theta' dz`` which equals the sum of finite residues.
    poles : tuple of PoleInfo
        Finite poles, then hard edges, then infinity (if it is a pole).
    """

    A: Polynomial
    B: Polynomial
    A_exact: Polynomial
    B_exact: Polynomial
    a: int
    b: int
    d: int
    d_inf: int
    Lambda: mpc
    poles: tuple
    symbol: SymbolFns
    contour_class: str
    family_k: int | None = None
    nonprime: bool = False

    @property
    def finite_poles(self):
        return [p for p in self.poles if not p.at_infinity and p.kind != HARD_EDGE]

    @property
    def hard_edges(self):
        return [p for p in self.poles if p.kind == HARD_EDGE]

    @property
    def infinity(self) -> PoleInfo | None:
        for p in self.poles:
            if p.at_infinity:
                return p
        return None

    def A_over_2B(self, z):
        return self.A(z) / (2 * self.B(z))

    def integrability_bound_ok(self, n: int) -> bool:
        """Whether ``exp(-theta)/(B P_n^2)`` is integrable at infinity for deg A < deg B.

        The integrand behaves like ``z**(-Lambda - b - 2n)``, so the condition
        is ``2n > 1 - b - Re(Lambda)``.
        """
        if self.a >= self.b:
            return True
        return 2 * n > 1 - self.b - self.Lambda.real


# ----------------------------------------------------------------- helpers

def _series_div(num: list, den: list, order: int) -> list:
    """First ``order`` Taylor coefficients of num/den (den[0] != 0)."""
    out = []
    for k in range(order):
        s = num[k] if k < len(num) else mpc(0)
        for j in range(1, k + 1):
            if j < len(den):
                s -= den[j] * out[k - j]
        out.append(s / den[0])
    return out


def _is_integer(x, tol) -> bool:
    return abs(x.imag) <= tol and abs(x.real - mp.nint(x.real)) <= tol


def _numeric_roots(f: Polynomial) -> list:
    if f.degree == 1:
        c = -(f.coeffs[0] / f.coeffs[1])
        return [c.to_mpc() if isinstance(c, GaussRational) else mpc(c)]
    return poly_roots(f.to_numeric())


def steepest_directions(t: SemiclassicalType, pole: PoleInfo) -> list:
    """Angles of the ``2 d_c`` steepest rays at a pole of order at least 2.

    Even indices are descent (``Re theta -> -inf``), odd ones ascent. Near
    a finite pole ``theta ~ -(T_c/d_c) (z - c)**(-d_c)``, so the angles of
    ``z - c`` are ``(arg T_c + l pi)/d_c``. At infinity the angles are
    those of ``z`` itself, ``(-arg T_inf + l pi)/d_inf``. Both lists
    increase counterclockwise.
    """
    if pole.order < 2:
        raise ValueError("steepest directions need a pole of order >= 2")
    return _directions(pole)


def _directions(pole: PoleInfo) -> list:
    dc = pole.d_c
    base = -mp.arg(pole.leading) if pole.at_infinity else mp.arg(pole.leading)
    return [(base + ell * mp.pi) / dc for ell in range(2 * dc)]


def eval_theta(sym: SymbolFns, z, branch: BranchSpec | None = None) -> mpc:
    return sym.theta(mpc(z), branch)


# ------------------------------------------------------------- build_type

def _coerce_poly(p) -> Polynomial:
    if isinstance(p, Polynomial):
        return p
    return Polynomial(p)


def build_type(A, B, allow_nonprime: bool = False, coprime_tol=None) -> SemiclassicalType:
    """Build a :class:`SemiclassicalType` from polynomials A and B.

    B is normalized to be monic (A is divided by the same constant).

    Raises
    ------
    CoprimalityError
        If A and B share a root and ``allow_nonprime`` is false.
    UnsupportedContourClass
        If ``deg A < deg B`` and B has only simple roots, outside the
        finite-rank family ``A = k B'`` and the two-endpoint segment class.
    """
    A, B = _coerce_poly(A), _coerce_poly(B)
    if B.is_zero():
        raise ValueError("B must not be identically zero")
    Ae, Be = A.to_exact(), B.to_exact()
    lead = Be.leading
    if lead != 1:
        Ae = Ae.scale(1 / lead)
        Be = Be.scale(1 / lead)
    An, Bn = Ae.to_numeric(), Be.to_numeric()
    if not allow_nonprime:
        if A.exact and B.exact:
            ok = poly_gcd_coprime_check(Ae, Be)
        else:
            ok = poly_gcd_coprime_check(An, Bn, coprime_tol)
        if not ok:
            raise CoprimalityError("A and B are not relatively prime")
    a = int(Ae.degree) if not Ae.is_zero() else 0
    b = int(Be.degree)
    d = max(a, b - 1)
    if d < 1:
        raise ValueError("class number max(deg A, deg B - 1) must be at least 1")

    num = -(Ae + Be.derivative())
    tp = RationalPoly(num, Be)
    thp = RationalPoly(Ae, Be)
    G = exact_gcd(num, Be) if not num.is_zero() else Be.monic()
    rnum, rden = tp.numerator, tp.denominator

    q_exact, rem_exact = rnum.divmod(rden)
    poly_part = q_exact.to_numeric().antiderivative()
    m_den = int(rden.degree)
    # Lambda = coefficient of 1/z of theta' at infinity (rden is monic)
    Lambda = rem_exact[m_den - 1].to_mpc() if m_den >= 1 else mpc(0)

    tiny = mpf(10) ** (-(mp.dps // 2))
    centers, principal, logc, poles = [], [], [], []
    rem_n = rem_exact.to_numeric()
    den_n = rden.to_numeric()
    for factor, mult in squarefree_decomposition(rden):
        for c in _numeric_roots(factor):
            shifted_den = den_n.taylor_shift(c).coeffs[mult:]
            shifted_num = rem_n.taylor_shift(c).coeffs
            g = _series_div(list(shifted_num), list(shifted_den), mult)
            terms = []
            for i in range(mult - 1):
                power = i - mult + 1
                terms.append((power, g[i] / power))
            r = g[mult - 1]
            centers.append(c)
            principal.append(tuple(terms))
            logc.append(r)
            if mult >= 2:
                kind = HIGHER_ORDER
            elif r.real > mpf(-0.5) + tiny:
                kind = END_POLE
            else:
                kind = FLAG_POLE
            poles.append(PoleInfo(c, mult, g[0], r, kind, mult))
    if G.degree >= 1:
        for c in _numeric_roots(G):
            poles.append(PoleInfo(c, 0, mpc(0), mpc(0), HARD_EDGE, 1))
    if not q_exact.is_zero():
        p = int(q_exact.degree)
        T_inf = -q_exact.leading.to_mpc()
        poles.append(PoleInfo(INFINITY, p + 2, T_inf, -Lambda, HIGHER_ORDER, 0))
    elif Lambda != 0:
        kind = END_POLE if (-Lambda).real > mpf(-0.5) + tiny else FLAG_POLE
        poles.append(PoleInfo(INFINITY, 1, -Lambda, -Lambda, kind, 0))
    d_inf = max(a - b + 1, 0)

    # classify the contour geometry
    family_k = None
    if a < b and b >= 1:
        Bp = Be.derivative()
        ratio = Ae.leading / Bp.leading if not Ae.is_zero() else None
        if ratio is not None and ratio.im == 0 and ratio.re.denominator == 1 and ratio.re > 0 \
                and Ae == Bp.scale(ratio):
            family_k = int(ratio.re)
    mults = [m for _, m in squarefree_decomposition(Be)]
    if b == 0:
        cclass = FREUD
    elif family_k is not None and max(mults) == 1:
        cclass = FINITE_RANK
    elif b == 1 and a == 1:
        cclass = RAY
    elif b == 2 and a <= 1 and mults == [1] and all(
            p.kind in (END_POLE, HARD_EDGE) for p in poles if not p.at_infinity):
        cclass = SEGMENT
    elif a < b and len(mults) == 1 and mults[0] == b and b >= 2 and poles[0].order == b:
        cclass = PETAL
    elif a < b and max(mults) == 1:
        raise UnsupportedContourClass(
            "deg A < deg B with only simple roots of B needs Pochhammer-type contours")
    else:
        cclass = GENERAL

    branch = _default_branch(cclass, centers, poles, d_inf)
    sym = SymbolFns(tp, thp, poly_part, tuple(centers), tuple(principal), tuple(logc), branch,
                    theta_prime_num=rnum.to_numeric(), theta_prime_den=rden.to_numeric())
    return SemiclassicalType(An, Bn, Ae, Be, a, b, d, d_inf, Lambda, tuple(poles), sym, cclass,
                             family_k=family_k, nonprime=allow_nonprime)


def _default_branch(cclass, centers, poles, d_inf) -> BranchSpec:
    finite = [p for p in poles if not p.at_infinity and p.kind != HARD_EDGE]
    inf = [p for p in poles if p.at_infinity]
    angles = []
    escape = mpf(0)
    if inf and inf[0].order >= 2:
        escape = _directions(inf[0])[-1]
    for i, c in enumerate(centers):
        pole = finite[i]
        if cclass == SEGMENT and len(centers) == 2:
            other = centers[1 - i]
            angles.append(mp.arg(c - other))
        elif cclass == SEGMENT:
            # one endpoint is a hard edge; point the cut away from it
            other = [p.location for p in poles if p.kind == HARD_EDGE][0]
            angles.append(mp.arg(c - other))
        elif cclass == PETAL:
            # through the gap between petals at the first descent direction
            angles.append(mp.arg(pole.leading) / pole.d_c)
        elif cclass == RAY and pole.kind == FLAG_POLE:
            # inside the lasso, which runs along the first descent direction
            angles.append(_directions(inf[0])[0])
        else:
            angles.append(escape)
    return BranchSpec(tuple(angles))


def symbol_sum_of_residues(t: SemiclassicalType) -> mpc:
    """Sum of residues of theta' dz over all poles including infinity."""
    return mp.fsum(p.residue for p in t.poles if not p.at_infinity) - t.Lambda
