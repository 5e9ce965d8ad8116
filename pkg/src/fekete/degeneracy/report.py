"""Degeneracy diagnostics for a candidate polynomial and the Heine-Stieltjes check."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

from mpmath import mp, mpc, mpf

from ..contours import WeightedContourSet, moments as contour_moments, per_contour_moments
from ..numkernel import Determinant, Polynomial, to_mpc
from ..semiclassical import SemiclassicalType
from .hankel import hankel_det, hankel_slice, min_abs_eigenvalue, square_hankel

SKIPPED = "skipped"


def heine_stieltjes_Q(t: SemiclassicalType, P: Polynomial):
    """Quotient Q of ``B P'' - A P'`` by P and the relative size of the remainder.

    The remainder norm is divided by ``|B| |P''| + |A| |P'|``.

    Returns ``(Q, relative_remainder, degree_ok)``; ``degree_ok`` says whether
    ``deg Q <= d - 1`` (only meaningful when the remainder is negligible).
    """
    if P.is_zero():
        raise ValueError("P must be nonzero")
    num = t.B * P.derivative(2) - t.A * P.derivative()
    if num.is_zero():
        return Polynomial([mpc(0)]), mpf(0), True
    Q, rem = num.divmod(P)
    # measured against the terms that cancel, since the dividend itself can be ~0
    scale = t.B.norm() * P.derivative(2).norm() + t.A.norm() * P.derivative().norm()
    rel = rem.norm() / scale if not rem.is_zero() else mpf(0)
    degree_ok = Q.is_zero() or Q.degree <= t.d - 1
    return Q, rel, degree_ok


def _log10(x):
    return mp.log10(x) if x > 0 else -mp.inf


def _det_json(D: Determinant, digits=12):
    return {"log10_abs": None if D.log_abs == -mp.inf else mp.nstr(D.log10_abs, digits),
            "phase": [mp.nstr(D.phase.real, digits), mp.nstr(D.phase.imag, digits)]}


@dataclass
class DegeneracyReport:
    """Orthogonality residuals plus the determinant and eigenvalue diagnostics.

    ``orth_residuals[k] = |M[P z^k]|``; ``orth_relative[k]`` divides by the
    sum of moduli of the terms that cancel in it. Fields that were not
    computed hold :data:`SKIPPED`.
    """

    n: int
    d: int
    ell: int
    D_n0: object
    D_n1_list: list
    min_eig_n0: object
    min_eig_n1: list
    orth_residuals: list
    orth_relative: list
    tol: mpf
    passed: bool
    ode_residual: object = SKIPPED
    Q: object = SKIPPED
    Q_degree_ok: object = SKIPPED
    wronskian_spread: object = SKIPPED
    wronskian_values: list = field(default_factory=list)

    @property
    def gap_log10(self):
        """``log10 |lambda_min(H_{n,0})| - max_k log10 |lambda_min(H_{n+1,k})|``."""
        if self.min_eig_n0 == SKIPPED or not self.min_eig_n1:
            return SKIPPED
        worst = max(_log10(e.modulus) for e in self.min_eig_n1)
        return _log10(self.min_eig_n0.modulus) - worst

    def to_json(self, digits: int = 12) -> dict:
        def num(x):
            return SKIPPED if x == SKIPPED else mp.nstr(x, digits)

        gap = self.gap_log10
        return {
            "n": self.n, "d": self.d, "ell": self.ell,
            "passed": self.passed,
            "tol": mp.nstr(self.tol, 3),
            "log10_D_n0": _det_json(self.D_n0, digits),
            "log10_D_n1": [_det_json(D, digits) for D in self.D_n1_list],
            "log10_min_eig_n0": SKIPPED if self.min_eig_n0 == SKIPPED else
            mp.nstr(_log10(self.min_eig_n0.modulus), digits),
            "log10_min_eig_n1": [mp.nstr(_log10(e.modulus), digits) for e in self.min_eig_n1],
            "eig_upper_bound_flags": [e.upper_bound for e in self.min_eig_n1],
            "log10_gap": num(gap),
            "log10_orth_residuals": [mp.nstr(_log10(x), digits) for x in self.orth_residuals],
            "orth_relative": [mp.nstr(x, 4) for x in self.orth_relative],
            "ode_residual": num(self.ode_residual),
            "Q": SKIPPED if self.Q == SKIPPED else self.Q.to_json(digits),
            "Q_degree_ok": self.Q_degree_ok,
            "wronskian_spread": num(self.wronskian_spread),
        }

    def to_csv(self) -> str:
        """One row per diagnostic: name, index, log10 magnitude."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["quantity", "k", "log10_abs"])
        w.writerow(["D_n0", "", mp.nstr(self.D_n0.log10_abs, 10)])
        for k, D in enumerate(self.D_n1_list):
            w.writerow(["D_n1", k, mp.nstr(D.log10_abs, 10)])
        if self.min_eig_n0 != SKIPPED:
            w.writerow(["lambda_min_n0", "", mp.nstr(_log10(self.min_eig_n0.modulus), 10)])
        for k, e in enumerate(self.min_eig_n1):
            w.writerow(["lambda_min_n1", k, mp.nstr(_log10(e.modulus), 10)])
        for k, r in enumerate(self.orth_residuals):
            w.writerow(["orth_residual", k, mp.nstr(_log10(r), 10)])
        return buf.getvalue()


def orthogonality_residuals(wcs: WeightedContourSet, sym, P: Polynomial, k_max: int, tol=None):
    """``(|M[P z^k]|, relative)`` for ``k = 0..k_max``.

    The relative value divides by ``sum_i |p_i| m_{i+k}`` with ``m_q`` the
    running maximum over ``q' <= q`` of ``sum_j |s_j| |int_{gamma_j} z^{q'}|``,
    the size of the terms that must cancel. The running maximum keeps the
    scale honest when symmetry makes whole classes of moments vanish.
    """
    n = int(P.degree)
    per = per_contour_moments(wcs, sym, n + k_max, tol)
    mu = [mp.fsum(s * per[j][q] for j, s in enumerate(wcs.s)) for q in range(n + k_max + 1)]
    mag, run = [], mpf(0)
    for q in range(n + k_max + 1):
        run = max(run, mp.fsum(abs(s) * abs(per[j][q]) for j, s in enumerate(wcs.s)))
        mag.append(run)
    res, rel = [], []
    for k in range(k_max + 1):
        val = mp.fsum(to_mpc(P[i]) * mu[i + k] for i in range(n + 1))
        scale = mp.fsum(abs(to_mpc(P[i])) * mag[i + k] for i in range(n + 1))
        res.append(abs(val))
        rel.append(abs(val) / scale if scale else mpf(0))
    return res, rel


def verify_degeneracy(t: SemiclassicalType, wcs: WeightedContourSet, P: Polynomial,
                      ell: int | None = None, tol=None, moment_tol=None,
                      eigen: bool = True) -> DegeneracyReport:
    """Check ``M[P z^k] = 0`` for ``k <= n + ell - 1`` and collect diagnostics.

    Parameters
    ----------
    ell : int, optional
        Degeneracy order to test; the maximal ``d - 1`` by default.
    tol : real, optional
        Bound on the relative orthogonality residuals (default ``10**(-dps/2)``).
    eigen : bool
        Also run the smallest-eigenvalue diagnostics.
    """
    if wcs.s is None:
        raise ValueError("weights are not set")
    n = int(P.degree)
    d = t.d
    ell = d - 1 if ell is None else ell
    tol = mpf(10) ** (-(mp.dps // 2)) if tol is None else mpf(tol)
    k_top = max(n + ell - 1, 0)
    need = max(2 * n + d - 2, n + k_top, 2 * n)
    mu = contour_moments(wcs, t.symbol, need, moment_tol)
    res, rel = orthogonality_residuals(wcs, t.symbol, P, k_top, moment_tol)
    if n + ell - 1 < 0:
        res, rel = [], []
    D_n0 = hankel_det(mu, n - 1, 0) if n > 0 else Determinant(mpc(1), mpf(0), mpc(1))
    D_n1 = [hankel_det(mu, n, k) for k in range(max(d - 1, 0))]
    eig_n0, eig_n1 = SKIPPED, []
    if eigen:
        if n > 0:
            eig_n0 = min_abs_eigenvalue(square_hankel(mu, n))
        eig_n1 = [min_abs_eigenvalue(hankel_slice(mu, n, k)) for k in range(max(d - 1, 0))]
    passed = all(r < tol for r in rel)
    return DegeneracyReport(n, d, ell, D_n0, D_n1, eig_n0, eig_n1, res, rel, tol, passed)
