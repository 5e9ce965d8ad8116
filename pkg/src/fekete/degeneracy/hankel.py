"""Hankel slices, their determinants and orthogonal polynomials from moments."""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp, mpc, mpf

from ..numkernel import Determinant, Polynomial, determinant, lu_factor, lu_solve
from ..numkernel import min_abs_eigenvalue as _min_abs_eigenvalue


class SingularHankelError(ArithmeticError):
    """The n x n Hankel system is singular to working precision."""

    def __init__(self, msg, det: Determinant | None = None):
        super().__init__(msg)
        self.det = det


@dataclass(frozen=True)
class HankelSlice:
    """``H_{n+1,k}``: rows ``mu_{i+j}`` for ``i < n`` and a last row shifted by k."""

    n: int
    k: int
    entries: tuple

    def as_rows(self) -> list:
        return [list(r) for r in self.entries]


def hankel_slice(moments, n: int, k: int = 0) -> HankelSlice:
    if n < 0 or k < 0:
        raise ValueError("n and k must be non-negative")
    if len(moments) < 2 * n + k + 1:
        raise ValueError(f"need moments through index {2 * n + k}, got {len(moments)}")
    rows = [tuple(mpc(moments[i + j]) for j in range(n + 1)) for i in range(n)]
    rows.append(tuple(mpc(moments[n + k + j]) for j in range(n + 1)))
    return HankelSlice(n, k, tuple(rows))


def square_hankel(moments, n: int) -> list:
    """The ordinary n x n Hankel matrix ``[mu_{i+j}]`` (equals ``H_{n,0}``)."""
    if len(moments) < 2 * n - 1:
        raise ValueError(f"need moments through index {2 * n - 2}")
    return [[mpc(moments[i + j]) for j in range(n)] for i in range(n)]


def hankel_det(moments, n: int, k: int = 0) -> Determinant:
    """``D_{n+1,k} = det H_{n+1,k}`` as (phase, log|.|, value).

    ``hankel_det(mu, n - 1, 0)`` is the ordinary ``D_{n,0}``.
    """
    return determinant(hankel_slice(moments, n, k).as_rows())


def min_abs_eigenvalue(H, rng_seed: int = 0):
    """Smallest eigenvalue modulus of a square matrix (inverse iteration)."""
    if isinstance(H, HankelSlice):
        H = H.as_rows()
    return _min_abs_eigenvalue(H, rng_seed=rng_seed)


def orthopoly_from_moments(moments, n: int, guard: int = 5) -> Polynomial:
    """Monic P_n with ``M[P_n z^i] = 0`` for ``i < n``.

    Solves ``sum_j c_j mu_{i+j} = -mu_{i+n}`` by pivoted LU.

    Raises
    ------
    SingularHankelError
        When the smallest LU pivot is below ``10**(guard - dps)`` times the
        largest entry, i.e. ``D_{n,0}`` vanishes to working precision.
    """
    if n == 0:
        return Polynomial([mpc(1)])
    if len(moments) < 2 * n:
        raise ValueError(f"need moments through index {2 * n - 1}")
    H = square_hankel(moments, n)
    f = lu_factor(H)
    scale = max(abs(x) for row in H for x in row)
    pivots = [abs(f.lu[i][i]) for i in range(n)]
    if scale == 0 or f.exact_zero_pivot or min(pivots) < scale * mpf(10) ** (guard - mp.dps):
        raise SingularHankelError(f"Hankel system of size {n} is singular", determinant(H))
    c = lu_solve(f, [-mpc(moments[i + n]) for i in range(n)])
    return Polynomial(list(c) + [mpc(1)])


def orthopoly_determinant_form(moments, n: int) -> Polynomial:
    """``det[[mu_0..mu_n], ..., [mu_{n-1}..mu_{2n-1}], [1, z, ..., z^n]]`` unnormalized.

    The coefficient of ``z^j`` is the cofactor of the last-row entry j.
    """
    if n == 0:
        return Polynomial([mpc(1)])
    rows = [[mpc(moments[i + j]) for j in range(n + 1)] for i in range(n)]
    coeffs = []
    for j in range(n + 1):
        minor = [[r[m] for m in range(n + 1) if m != j] for r in rows]
        coeffs.append((-1) ** (n + j) * determinant(minor).value)
    return Polynomial(coeffs)


def determinant_form_scale(moments, n: int) -> mpf:
    """Hadamard bound for the cofactors: product of the moment row norms."""
    out = mpf(1)
    for i in range(n):
        out *= mp.sqrt(mp.fsum(abs(mpc(moments[i + j])) ** 2 for j in range(n + 1)))
    return out
