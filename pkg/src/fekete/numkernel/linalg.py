"""Dense linear algebra at mp precision: LU, determinants, solves, smallest eigenvalue."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from mpmath import mp, mpc, mpf


class SingularMatrixError(ArithmeticError):
    pass


@dataclass(frozen=True)
class LUFactors:
    """Row-pivoted LU factors packed in one matrix (unit-lower L below the diagonal)."""

    lu: tuple
    perm: tuple
    sign: int
    n: int
    exact_zero_pivot: bool


@dataclass(frozen=True)
class Determinant:
    """Determinant as phase times ``exp(log_abs)``; ``value`` is the raw product."""

    phase: mpc
    log_abs: mpf
    value: mpc

    @property
    def log10_abs(self) -> mpf:
        if self.log_abs == -mp.inf:
            return -mp.inf
        return self.log_abs / mp.log(10)


def _as_rows(a) -> list[list]:
    return [[mpc(x) for x in row] for row in a]


def lu_factor(a) -> LUFactors:
    """Gaussian elimination with partial pivoting (never raises on singularity)."""
    m = _as_rows(a)
    n = len(m)
    perm = list(range(n))
    sign = 1
    zero_pivot = False
    for k in range(n):
        p = max(range(k, n), key=lambda i: abs(m[i][k]))
        if p != k:
            m[k], m[p] = m[p], m[k]
            perm[k], perm[p] = perm[p], perm[k]
            sign = -sign
        piv = m[k][k]
        if piv == 0:
            zero_pivot = True
            continue
        for i in range(k + 1, n):
            f = m[i][k] / piv
            m[i][k] = f
            if f:
                row_i, row_k = m[i], m[k]
                for j in range(k + 1, n):
                    row_i[j] -= f * row_k[j]
    return LUFactors(tuple(tuple(r) for r in m), tuple(perm), sign, n, zero_pivot)


def determinant(a) -> Determinant:
    if len(a) == 0:
        return Determinant(mpc(1), mpf(0), mpc(1))
    f = lu_factor(a)
    phase = mpc(f.sign)
    log_abs = mpf(0)
    value = mpc(f.sign)
    for k in range(f.n):
        piv = f.lu[k][k]
        value *= piv
        if piv == 0:
            return Determinant(mpc(0), -mp.inf, mpc(0))
        phase *= piv / abs(piv)
        log_abs += mp.log(abs(piv))
    return Determinant(phase, log_abs, value)


def lu_solve(f: LUFactors, b) -> list:
    if f.exact_zero_pivot:
        raise SingularMatrixError("matrix is exactly singular")
    n = f.n
    y = [mpc(b[f.perm[i]]) for i in range(n)]
    for i in range(n):
        row = f.lu[i]
        s = y[i]
        for j in range(i):
            s -= row[j] * y[j]
        y[i] = s
    for i in range(n - 1, -1, -1):
        row = f.lu[i]
        s = y[i]
        for j in range(i + 1, n):
            s -= row[j] * y[j]
        y[i] = s / row[i]
    return y


def solve(a, b) -> list:
    return lu_solve(lu_factor(a), b)


def matvec(a, x) -> list:
    return [mp.fsum(row[j] * x[j] for j in range(len(x))) for row in a]


@dataclass(frozen=True)
class EigenEstimate:
    """Smallest-modulus eigenvalue estimate.

    ``upper_bound`` is set when the matrix was singular to working
    precision and ``modulus`` is only an upper bound.
    """

    modulus: mpf
    value: mpc
    iterations: int
    upper_bound: bool = False


def min_abs_eigenvalue(a, rng_seed: int = 0, restarts: int = 3, max_iter: int = 200,
                       rel_tol=None) -> EigenEstimate:
    """Eigenvalue of smallest modulus by inverse power iteration (shift 0).

    A Rayleigh-quotient estimate is tracked; iteration stops when the
    eigen-residual ``|A w - lam w|`` drops below ``rel_tol`` (default
    ``10**(-dps/2)``) relative to ``|lam|``. If no start settles, the
    smallest eigenvalue from mpmath's QR solver is used instead.
    The best of ``restarts`` random starts (fixed ``rng_seed``) is kept.
    """
    n = len(a)
    if n == 0:
        raise ValueError("empty matrix")
    if rel_tol is None:
        rel_tol = mpf(10) ** (-(mp.dps // 2))
    rows = _as_rows(a)
    f = lu_factor(rows)
    if f.exact_zero_pivot:
        return EigenEstimate(mpf(10) ** (-mp.dps), mpc(0), 0, upper_bound=True)
    scale = max(abs(x) for row in rows for x in row)
    if min(abs(f.lu[k][k]) for k in range(n)) < n * scale * mpf(10) ** (-mp.dps):
        return EigenEstimate(mpf(10) ** (-mp.dps), mpc(0), 0, upper_bound=True)
    rng = np.random.default_rng(rng_seed)
    best = None
    settled = False
    for _ in range(restarts):
        v = [mpc(complex(x, y)) for x, y in rng.standard_normal((n, 2))]
        nv = mp.sqrt(mp.fsum(abs(x) ** 2 for x in v))
        v = [x / nv for x in v]
        lam = None
        its = 0
        for its in range(1, max_iter + 1):
            w = lu_solve(f, v)
            nw = mp.sqrt(mp.fsum(abs(x) ** 2 for x in w))
            w = [x / nw for x in w]
            aw = matvec(rows, w)
            lam = mp.fsum(mp.conj(w[i]) * aw[i] for i in range(n))
            v = w
            res = mp.sqrt(mp.fsum(abs(aw[i] - lam * w[i]) ** 2 for i in range(n)))
            if res <= rel_tol * abs(lam) + n * scale * mpf(10) ** (-mp.dps + 2):
                settled = True
                break
        if best is None or abs(lam) < best.modulus:
            best = EigenEstimate(abs(lam), lam, its)
    if not settled:
        # two eigenvalues of (nearly) equal modulus: fall back to a full QR solve
        evs = mp.eig(mp.matrix(rows), left=False, right=False)
        lam = min(evs, key=abs)
        best = EigenEstimate(abs(lam), mpc(lam), best.iterations)
    return best
