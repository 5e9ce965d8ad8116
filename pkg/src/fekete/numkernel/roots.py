"""Polynomial root finding: companion-matrix seeds, Aberth-Ehrlich iteration, Newton polish."""

from __future__ import annotations

import numpy as np
from mpmath import mp, mpc, mpf


class RootFindingError(RuntimeError):
    pass


def _initial_guesses(cs: list) -> list:
    n = len(cs) - 1
    try:
        c = np.array([complex(x) for x in cs], dtype=complex)
        if not np.all(np.isfinite(c)) or c[-1] == 0:
            raise FloatingPointError
        guesses = np.roots(c[::-1])
        if len(guesses) != n or not np.all(np.isfinite(guesses)):
            raise FloatingPointError
    except (FloatingPointError, OverflowError, np.linalg.LinAlgError, ValueError):
        # Cauchy-bound circle, rotated off the real axis to break symmetry
        lead = abs(cs[-1])
        rad = 1 + max(abs(x) for x in cs[:-1]) / lead
        guesses = [complex(rad * mp.cos(2 * mp.pi * k / n + 0.4), rad * mp.sin(2 * mp.pi * k / n + 0.4))
                   for k in range(n)]
    out = [mpc(complex(g)) for g in guesses]
    # nudge exact duplicates apart so the Aberth correction is defined
    scale = max([abs(g) for g in out] + [mpf(1)])
    for i in range(n):
        for j in range(i):
            if abs(out[i] - out[j]) < scale * mpf(10) ** -12:
                out[i] += scale * mpf(10) ** -6 * mp.expjpi(mpf(i) / (n + 1))
    return out


def _horner_with_derivative(cs, z):
    p = cs[-1]
    dp = mpc(0)
    for c in reversed(cs[:-1]):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def poly_roots(p, max_iter: int = 500, polish_steps: int = 3) -> list:
    """All complex roots of ``p`` with multiplicity.

    Seeds come from numpy's companion-matrix eigenvalues in double
    precision; the Aberth-Ehrlich simultaneous iteration then runs at the
    current ``mp.dps`` and each root is finished with a few Newton steps,
    accepted only when they reduce the residual.

    Raises
    ------
    RootFindingError
        If the Aberth iteration does not settle within ``max_iter`` sweeps.
    """
    q = p.to_numeric()
    if q.degree < 1:
        raise ValueError("poly_roots needs a polynomial of degree >= 1")
    cs = list(q.coeffs)
    n = len(cs) - 1
    if n == 1:
        return [-cs[0] / cs[1]]
    z = _initial_guesses(cs)
    eps = mpf(10) ** (-(mp.dps - 3))
    converged = [False] * n
    best, stale = None, 0
    for _ in range(max_iter):
        biggest = mpf(0)
        for i in range(n):
            if converged[i]:
                continue
            pv, dpv = _horner_with_derivative(cs, z[i])
            if pv == 0:
                converged[i] = True
                continue
            if dpv == 0:
                dpv = mpc(eps)
            ratio = pv / dpv
            s = mpc(0)
            for j in range(n):
                if j != i:
                    s += 1 / (z[i] - z[j])
            w = ratio / (1 - ratio * s)
            z[i] -= w
            rel = abs(w) / max(abs(z[i]), mpf(1))
            if rel < eps:
                converged[i] = True
            biggest = max(biggest, rel)
        if all(converged):
            break
        # multiple roots stall at ~eps**(1/m); stop once updates stop shrinking
        if best is None or biggest < best / 2:
            best, stale = biggest, 0
        else:
            stale += 1
            if stale >= 40:
                break
    else:
        raise RootFindingError(f"Aberth iteration did not converge in {max_iter} sweeps")
    for zi in z:
        scale = sum(abs(c) * abs(zi) ** k for k, c in enumerate(cs))
        if abs(q(zi)) > scale * mpf(10) ** (-(mp.dps // 3)):
            raise RootFindingError("Aberth iteration stalled away from a root")
    for i in range(n):
        zi = z[i]
        pv, dpv = _horner_with_derivative(cs, zi)
        for _ in range(polish_steps):
            if dpv == 0 or pv == 0:
                break
            cand = zi - pv / dpv
            pc, dpc = _horner_with_derivative(cs, cand)
            if abs(pc) >= abs(pv):
                break
            zi, pv, dpv = cand, pc, dpc
        z[i] = zi
    return z
