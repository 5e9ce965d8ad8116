"""Exact checks for the one-parameter families with ``A = k B'`` and for lifted functionals.

For ``A = k B'`` the weight is ``e^theta = B^{-(k+1)}`` and the moment
functionals are residues at the (simple) roots of B. With
``n = k deg B + 1`` every ``P = int_0^z B^k + C`` is maximally degenerate
for the weights ``1 / P(beta_l)``, so the roots of P form a continuum of
Stieltjes-Bethe solutions. Everything here runs in exact Gaussian-rational
arithmetic when B has rational roots; otherwise the same code runs on mp
floats.

The second half multiplies A and B by ``(z - c)^K`` and solves for the
delta-function weights that keep the same P maximally degenerate.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from mpmath import mp, mpc, mpf
from scipy.optimize import linear_sum_assignment

from .contours import Integrand, WeightedContourSet, apply_functional, build_contours
from .contours import integrate_weighted
from .numkernel import GaussRational, Polynomial, exact_gcd, parse_exact
from .semiclassical import SemiclassicalType


class MultipleRootError(ValueError):
    """B has a repeated root, so ``k B'`` is not coprime with B."""


class IrrationalRootError(ValueError):
    """Exact residues were requested but B has a non-rational root."""


class InconsistentLiftError(ValueError):
    """The lifting center is a root of P and the delta weights have no solution.

    ``obstruction`` is ``M[P / (z - c)]``, the right-hand side of the
    equation whose coefficient vanishes.
    """

    def __init__(self, msg, obstruction=None):
        super().__init__(msg)
        self.obstruction = obstruction


def _exact_poly(B) -> Polynomial:
    if isinstance(B, Polynomial):
        if not B.exact:
            raise TypeError("B must have exact coefficients")
        return B
    return Polynomial([parse_exact(c) if isinstance(c, (str, list, tuple)) else c for c in B],
                      exact=True)


# ------------------------------------------------------------------ family


@dataclass(frozen=True)
class FamilyInstance:
    """``P = int_0^z B^k + C`` with ``n = k deg B + 1``."""

    B: Polynomial
    k: int
    C: GaussRational
    P: Polynomial
    n: int

    @property
    def A(self) -> Polynomial:
        return self.B.derivative().scale(self.k)

    def lame_residual(self) -> Polynomial:
        """``B P'' - k B' P'``, identically zero."""
        return self.B * self.P.derivative(2) - self.A * self.P.derivative()

    def roots(self) -> list:
        """Numerical roots of P at the current precision."""
        return self.P.to_numeric().roots()


def family_polynomial(B, k: int, C=0) -> FamilyInstance:
    """Build the family member with constant ``C`` and check the Lame identity exactly.

    Raises
    ------
    MultipleRootError
        When ``gcd(B, B')`` is not constant.
    """
    B = _exact_poly(B)
    if k < 1:
        raise ValueError("k must be a positive integer")
    if B.degree < 1:
        raise ValueError("B must be nonconstant")
    if exact_gcd(B, B.derivative()).degree >= 1:
        raise MultipleRootError("B has a multiple root")
    C = parse_exact(C)
    P = (B ** k).antiderivative(C)
    n = k * int(B.degree) + 1
    inst = FamilyInstance(B, k, C, P, n)
    if P.derivative() != B ** k or P.degree != n:
        raise AssertionError("P' = B^k failed")
    if not inst.lame_residual().is_zero():
        raise AssertionError("B P'' - k B' P' is not identically zero")
    return inst


def rational_roots(B: Polynomial, max_den: int = 10 ** 12) -> list:
    """All roots of an exact B as Gaussian rationals, each checked by ``B(beta) == 0``.

    Raises
    ------
    IrrationalRootError
        If some root is not a Gaussian rational (with denominator ``<= max_den``).
    """
    B = _exact_poly(B)
    out = []
    with mp.workdps(max(mp.dps, 40)):
        approx = B.to_numeric().roots()
    for r in approx:
        beta = GaussRational(Fraction(str(r.real)).limit_denominator(max_den),
                             Fraction(str(r.imag)).limit_denominator(max_den))
        if B(beta) != 0:
            raise IrrationalRootError(f"root near {mp.nstr(r, 10)} is not rational")
        out.append(beta)
    return out


def _series_inverse(a: list, order: int) -> list:
    inv = [1 / a[0]]
    for m in range(1, order + 1):
        acc = 0
        for i in range(1, m + 1):
            if i < len(a):
                acc = acc + a[i] * inv[m - i]
        inv.append(-acc / a[0])
    return inv


def residue_at_simple_root(q: Polynomial, B: Polynomial, beta, power: int):
    """``res_{z=beta} q(z) / B(z)^power`` for a simple root ``beta`` of B.

    With ``B = (z - beta) G``, this is the ``u^{power-1}`` Taylor
    coefficient of ``q(beta+u) G(beta+u)^{-power}``.
    """
    G, rem = B.divmod(Polynomial([-beta, 1], exact=B.exact))
    if not rem.is_zero():
        raise ValueError("beta is not a root of B")
    order = power - 1
    Gs = (G ** power).taylor_shift(beta)
    qs = q.taylor_shift(beta)
    inv = _series_inverse([Gs[i] for i in range(order + 1)], order)
    return sum((qs[i] * inv[order - i] for i in range(order + 1)), GaussRational(0)
               if B.exact else mpc(0))


def residue_moments(B, k: int, j_max: int, roots=None) -> list:
    """``[[res_{beta_l} z^j / B^{k+1} for j <= j_max] for l]``."""
    B = B if isinstance(B, Polynomial) else _exact_poly(B)
    roots = rational_roots(B) if roots is None else roots
    return [[residue_at_simple_root(Polynomial.monomial(j, exact=B.exact), B, b, k + 1)
             for j in range(j_max + 1)] for b in roots]


def family_weights(inst: FamilyInstance, roots=None) -> list:
    """``s_l = 1 / P(beta_l)``.

    Raises
    ------
    ZeroDivisionError
        If P vanishes at a root of B.
    """
    roots = rational_roots(inst.B) if roots is None else roots
    vals = [inst.P(b) for b in roots]
    if any(v == 0 for v in vals):
        raise ZeroDivisionError("P vanishes at a root of B")
    return [1 / v for v in vals]


def residue_functional(inst: FamilyInstance, j_max: int, roots=None) -> list:
    """Exact moments ``mu_j = sum_l res_{beta_l} z^j / (P(beta_l) B^{k+1})``."""
    roots = rational_roots(inst.B) if roots is None else roots
    s = family_weights(inst, roots)
    per = residue_moments(inst.B, inst.k, j_max, roots)
    return [sum((s[l] * per[l][j] for l in range(len(roots))), GaussRational(0))
            for j in range(j_max + 1)]


def family_orthogonality(inst: FamilyInstance) -> list:
    """``M[P z^m]`` for ``m = 0..n+d-2`` (all exactly zero), ``d = deg B - 1``."""
    d = int(inst.B.degree) - 1
    top = inst.n + d - 2
    mu = residue_functional(inst, inst.n + top)
    return [sum((inst.P[i] * mu[i + m] for i in range(inst.n + 1)), GaussRational(0))
            for m in range(top + 1)]


def family_sweep(B, k: int, C_values) -> list:
    """Roots of ``P_C`` along a list of C values, matched from one C to the next.

    Returns rows ``(C, root index, root)``; the index follows each root
    continuously by optimal assignment between consecutive steps.
    """
    rows, prev = [], None
    for C in C_values:
        inst = family_polynomial(B, k, C)
        r = inst.roots()
        if prev is not None:
            cost = np.array([[abs(complex(a) - complex(b)) for b in r] for a in prev])
            _, cols = linear_sum_assignment(cost)
            r = [r[c] for c in cols]
        rows.extend((inst.C, i, z) for i, z in enumerate(r))
        prev = r
    return rows


def sweep_to_csv(rows, digits: int = 20) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["C_re", "C_im", "index", "re", "im"])
    for C, i, z in rows:
        w.writerow([str(C.re), str(C.im), i, mp.nstr(z.real, digits), mp.nstr(z.imag, digits)])
    return buf.getvalue()


# ------------------------------------------------------------- lifting


@dataclass(frozen=True)
class LiftedFunctional:
    """Base weights plus delta weights ``s~_1..s~_K`` at ``c``.

    ``residuals[m]`` and ``relative[m]`` are ``|M~[P z^m]|`` and its size
    against the cancelling terms, ``m = 0..n+d+K-2``. ``minimal`` records
    that zeroing any single delta weight pushes some residual above tol.
    """

    s: tuple
    c: mpc
    K: int
    s_tilde: tuple
    residuals: tuple
    relative: tuple
    tol: mpf
    passed: bool
    minimal: bool
    wcs: WeightedContourSet


def _taylor(p: Polynomial, c) -> list:
    """Coefficients of ``p`` in powers of ``(z - c)``."""
    return list(p.to_numeric().taylor_shift(c).coeffs)


def _delta_term(p: Polynomial, c, s_tilde) -> tuple:
    """``sum_l (l-1)! s~_l res_c p/(z-c)^l`` and the sum of moduli of its terms."""
    tc = _taylor(p, c)
    val, mag = mpc(0), mpf(0)
    for l, st in enumerate(s_tilde, start=1):
        coef = tc[l - 1] if l - 1 < len(tc) else mpc(0)
        term = mp.factorial(l - 1) * st * coef
        val += term
        mag += abs(term)
    return val, mag


def lift_primality(t: SemiclassicalType, wcs: WeightedContourSet, P: Polynomial, c, K: int,
                   tol=None, quad_tol=None) -> LiftedFunctional:
    """Delta weights at ``c`` keeping P maximally degenerate after ``A, B -> (z-c)^K A, B``.

    The conditions against ``(z - c)^m``, ``m < K``, form an upper
    triangular Toeplitz system in the unknowns ``(l-1)! s~_l`` whose entries
    are the Taylor coefficients of P at c (``P(c)`` on the diagonal); it is
    solved by back-substitution. The lifted functional is then checked on
    ``P z^m`` for ``m = 0..n+d+K-2`` by quadrature along contours moved away
    from c.

    Parameters
    ----------
    tol : real, optional
        Bound on relative residuals (default ``10**(-dps/2)``); also the
        threshold ``|P(c)| <= tol |P| max(1,|c|)^n`` for the inconsistent case.

    Raises
    ------
    InconsistentLiftError
        When c is (numerically) a root of P.
    """
    if wcs.s is None:
        raise ValueError("weights are not set")
    if K < 1:
        raise ValueError("K must be >= 1")
    c = mpc(c)
    P = P.to_numeric()
    n = int(P.degree)
    d = t.d
    tol = mpf(10) ** (-(mp.dps // 2)) if tol is None else mpf(tol)
    Pc = P(c)
    if abs(Pc) <= tol * P.norm() * max(mpf(1), abs(c)) ** n:
        q, _ = P.divmod(Polynomial([-c, 1]))
        obstruction = apply_functional(wcs, t.symbol, q, quad_tol)
        raise InconsistentLiftError(
            f"P(c) = {mp.nstr(Pc, 5)}: the last delta equation reads 0 = "
            f"M[P/(z-c)] = {mp.nstr(obstruction, 8)}", obstruction)

    moved = build_contours(t, avoid=[c]).with_weights(wcs.s)
    top = n + d + K - 2
    # int_{gamma_j} z^i (z-c)^{-K} e^theta for i <= n + top
    f = Integrand.powers(n + top, extra=lambda z: 1 / (z - c) ** K, singular=(c,))
    J = [integrate_weighted(g, f, t.symbol, quad_tol).value for g in moved.contours]
    s = moved.s

    # right-hand sides: sum_j s_j int P (z-c)^{m-K} e^theta, m < K
    pc = _taylor(P, c)
    rhs = []
    for m in range(K):
        shifted = P * Polynomial([-c, 1]) ** m
        rhs.append(mp.fsum(sj * mp.fsum(shifted[i] * J[j][i] for i in range(n + m + 1))
                           for j, sj in enumerate(s)))
    # row m: sum_{l > m} pc_{l-m-1} x_l = -rhs_m with x_l = (l-1)! s~_l
    x = [mpc(0)] * (K + 1)
    for m in range(K - 1, -1, -1):
        acc = -rhs[m] - mp.fsum(pc[l - m - 1] * x[l] for l in range(m + 2, K + 1)
                                if l - m - 1 < len(pc))
        x[m + 1] = acc / pc[0]
    s_tilde = tuple(x[l] / mp.factorial(l - 1) for l in range(1, K + 1))

    def check(st):
        res, rel = [], []
        for m in range(top + 1):
            q = P * Polynomial.monomial(m)
            val = mp.fsum(sj * mp.fsum(q[i] * J[j][i] for i in range(n + m + 1))
                          for j, sj in enumerate(s))
            mag = mp.fsum(abs(sj) * mp.fsum(abs(q[i] * J[j][i]) for i in range(n + m + 1))
                          for j, sj in enumerate(s))
            dv, dm = _delta_term(q, c, st)
            res.append(abs(val + dv))
            rel.append(abs(val + dv) / (mag + dm) if mag + dm else mpf(0))
        return res, rel

    res, rel = check(s_tilde)
    passed = all(r < tol for r in rel)
    minimal = True
    for l in range(K):
        dropped = list(s_tilde)
        dropped[l] = mpc(0)
        if all(r < tol for r in check(dropped)[1]):
            minimal = False
    return LiftedFunctional(tuple(s), c, K, s_tilde, tuple(res), tuple(rel), tol, passed,
                            minimal, moved)
