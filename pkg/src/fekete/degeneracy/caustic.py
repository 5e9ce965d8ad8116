"""Weights on the locus where two consecutive Hankel determinants vanish together."""

from __future__ import annotations

from dataclasses import dataclass

from mpmath import mp, mpc, mpf

from ..numkernel import Polynomial, determinant
from .hankel import determinant_form_scale, orthopoly_determinant_form


@dataclass(frozen=True)
class CausticResult:
    """Weights ``s`` with ``D_{n,0} = D_{n+1,0} = 0`` and the collapsed P_n.

    ``relative`` is the largest determinant-form coefficient divided by the
    Hadamard bound of its cofactors.
    """

    s: tuple
    D_n0: mpc
    D_n1: mpc
    P: Polynomial
    relative: mpf


def _mix(per, s):
    return [mp.fsum(sj * row[k] for sj, row in zip(s, per)) for k in range(len(per[0]))]


def _hankel_value(mu, size):
    return determinant([[mu[i + j] for j in range(size)] for i in range(size)]).value


def _shifted_hankel_value(mu, size):
    return determinant([[mu[i + j + 1] for j in range(size)] for i in range(size)]).value


def caustic_weights(per_contour, n: int, guesses=None, max_tries: int = 12, seed: int = 0):
    """Weights ``s = (1, s_2, s_3)`` with ``D_{n,0}(s) = D_{n+1,0}(s) = 0``.

    ``per_contour[j][k]`` are the single-contour moments (three contours,
    indices through ``2n``). By the Desnanot-Jacobi identity
    ``D_{n+1,0} D'_{n-1} = D_{n,0} D''_n - (D'_n)^2`` (primes shift every
    index by one or two), ``D_{n+1,0}`` vanishes quadratically on that locus,
    so Newton (``mp.findroot``) is run on the transversal pair
    ``D_{n,0} = D'_n = 0`` instead; ``D_{n+1,0}`` is then evaluated
    independently and returned.

    Raises
    ------
    ArithmeticError
        When no start converges.
    """
    if len(per_contour) != 3:
        raise ValueError("the caustic locus is a point only for three contours")
    if n < 1:
        raise ValueError("n must be >= 1")
    if any(len(row) < 2 * n + 1 for row in per_contour):
        raise ValueError(f"need moments through index {2 * n}")
    ref = _mix(per_contour, (1, 1, 1))
    sc = determinant_form_scale(ref, n)

    def f0(a, b):
        return _hankel_value(_mix(per_contour, (1, a, b)), n) / sc

    def f1(a, b):
        return _shifted_hankel_value(_mix(per_contour, (1, a, b)), n) / sc

    def jac(a, b):
        # the determinants are polynomials in (a, b): central differences are ample
        h = mpf(10) ** (-(mp.dps // 3))
        cols = []
        for da, db in ((h, 0), (0, h)):
            cols.append([(f(a + da, b + db) - f(a - da, b - db)) / (2 * h) for f in (f0, f1)])
        return mp.matrix([[cols[0][0], cols[1][0]], [cols[0][1], cols[1][1]]])

    if guesses is None:
        import numpy as np
        rng = np.random.default_rng(seed)
        guesses = [(mpc(*rng.normal(size=2)), mpc(*rng.normal(size=2)))
                   for _ in range(max_tries)]
    last = None
    for g in guesses:
        try:
            sol = mp.findroot([f0, f1], g, J=jac, tol=mpf(10) ** (-(2 * mp.dps - 20)),
                              maxsteps=60)
        except (ValueError, ZeroDivisionError) as exc:
            last = exc
            continue
        a, b = mpc(sol[0]), mpc(sol[1])
        s = (mpc(1), a, b)
        mu = _mix(per_contour, s)
        P = orthopoly_determinant_form(mu, n)
        scale = determinant_form_scale(mu, n)
        if scale == 0:
            continue
        rel = max(abs(c) for c in P.coeffs) / scale
        return CausticResult(s, _hankel_value(mu, n), _hankel_value(mu, n + 1), P, rel)
    raise ArithmeticError(f"no start converged to the caustic locus ({last})")
