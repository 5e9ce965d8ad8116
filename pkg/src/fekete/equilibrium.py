"""Stieltjes-Bethe equations: residual, Jacobian, energy and a damped Newton solver."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from mpmath import mp, mpc, mpf

from .numkernel import Polynomial, SingularMatrixError, fmt_complex, lu_factor, lu_solve
from .semiclassical import FREUD, PETAL, RAY, SEGMENT, SemiclassicalType


class SolverError(RuntimeError):
    pass


class CollisionError(SolverError):
    """Two points coincide (relative to the configuration diameter)."""


class PoleCollisionError(SolverError):
    """A point sits on a zero of B."""


class SingularJacobianError(SolverError):
    pass


class ConvergenceError(SolverError):
    pass


class BoundWarning(UserWarning):
    """The integrability bound on n fails; weight recovery will diverge."""


CLASSICAL_ZEROS = "classical-zeros"
ROOTS_OF_UNITY = "scaled-roots-of-unity"
USER_LIST = "user-list"
RANDOM_DISK = "random-disk"
STRATEGIES = (CLASSICAL_ZEROS, ROOTS_OF_UNITY, USER_LIST, RANDOM_DISK)


@dataclass(frozen=True)
class SeedSpec:
    """How to pick the starting configuration.

    ``scale`` multiplies the strategy's natural size (``None`` means 1);
    ``jitter`` is the size of the random perturbation relative to that
    size, real-valued when ``real_jitter`` is set.
    """

    strategy: str = CLASSICAL_ZEROS
    scale: float | None = None
    jitter: float = 0.0
    rng_seed: int = 0
    points: tuple | None = None
    real_jitter: bool = False

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown seed strategy {self.strategy!r}")
        if self.jitter < 0:
            raise ValueError("jitter must be >= 0")
        if self.strategy == USER_LIST and not self.points:
            raise ValueError("user-list strategy needs points")


@dataclass(frozen=True)
class Configuration:
    points: tuple
    n: int
    residual_norm: mpf
    converged: bool
    iterations: int
    retries: int = 0
    history: tuple = field(default=(), repr=False)

    def polynomial(self) -> Polynomial:
        """Monic ``P_n = prod (z - z_j)``."""
        return Polynomial.from_roots(self.points)

    def diameter(self) -> mpf:
        pts = self.points
        if len(pts) < 2:
            return mpf(1)
        return max(abs(pts[i] - pts[j]) for i in range(len(pts)) for j in range(i))

    def to_json(self, digits: int | None = None) -> dict:
        return {
            "n": self.n,
            "points": [fmt_complex(z, digits) for z in self.points],
            "residual_norm": mp.nstr(self.residual_norm, 5),
            "converged": self.converged,
            "iterations": self.iterations,
            "retries": self.retries,
        }

    def to_csv(self, digits: int | None = None) -> str:
        rows = ["re,im"]
        rows += [",".join(fmt_complex(z, digits)) for z in self.points]
        return "\n".join(rows) + "\n"


def _points(cfg) -> list:
    if isinstance(cfg, Configuration):
        return list(cfg.points)
    return [mpc(z) for z in cfg]


def _check_points(t: SemiclassicalType, pts: list, sep_digits: int | None = None):
    n = len(pts)
    if sep_digits is None:
        sep_digits = mp.dps // 2
    if n >= 2:
        diam = max(abs(pts[i] - pts[j]) for i in range(n) for j in range(i))
        thresh = mpf(10) ** (-sep_digits) * max(diam, mpf(10) ** (-sep_digits))
        for i in range(n):
            for j in range(i):
                if abs(pts[i] - pts[j]) < thresh:
                    raise CollisionError(f"points {j} and {i} coincide")
    for i, z in enumerate(pts):
        if t.B(z) == 0:
            raise PoleCollisionError(f"point {i} is a zero of B")


def residual(t: SemiclassicalType, cfg) -> list:
    """``r_j = sum_{k != j} 1/(z_j - z_k) - A(z_j)/(2 B(z_j))``."""
    pts = _points(cfg)
    _check_points(t, pts)
    out = []
    for j, zj in enumerate(pts):
        s = mp.fsum(1 / (zj - zk) for k, zk in enumerate(pts) if k != j)
        out.append(s - t.A(zj) / (2 * t.B(zj)))
    return out


def _field_derivative(t: SemiclassicalType):
    A, B = t.A, t.B
    num = A.derivative() * B - A * B.derivative()
    den = (B * B).scale(2)
    return num, den


def jacobian(t: SemiclassicalType, cfg) -> list:
    """Analytic Jacobian of :func:`residual` (quotient rule for (A/2B)')."""
    pts = _points(cfg)
    _check_points(t, pts)
    num, den = _field_derivative(t)
    n = len(pts)
    J = [[mpc(0)] * n for _ in range(n)]
    for j in range(n):
        diag = mpc(0)
        for k in range(n):
            if k != j:
                inv2 = 1 / (pts[j] - pts[k]) ** 2
                J[j][k] = inv2
                diag -= inv2
        J[j][j] = diag - num(pts[j]) / den(pts[j])
    return J


def theta_hat_real(t: SemiclassicalType, z) -> mpf:
    """``Re theta_hat`` with ``theta_hat' = A/B`` (unanchored).

    Since ``theta_hat = -theta - log B`` up to a constant, only the real
    parts of theta and log B are needed.
    """
    s = t.symbol
    val = s.poly_part(z)
    re = val.real
    for i, c in enumerate(s.log_centers):
        delta = z - c
        for power, coeff in s.principal[i]:
            re += (coeff * delta ** power).real
        r = s.log_coeffs[i]
        if r:
            re += (r * s.log_term(i, delta, check_cut=False)).real
    return -re - mp.log(abs(t.B(z)))


def energy(t: SemiclassicalType, cfg) -> mpf:
    """``E = -2 sum_{i<j} log|z_i - z_j| + sum_j Q(z_j)`` with ``Q = Re theta_hat``.

    ``theta_hat`` is anchored by ``theta_hat(0) = 0`` when 0 is not a zero
    of B. With this normalization the gradient of E vanishes exactly at
    solutions of the Stieltjes-Bethe system.
    """
    pts = _points(cfg)
    _check_points(t, pts)
    n = len(pts)
    inter = -2 * mp.fsum(mp.log(abs(pts[i] - pts[j])) for i in range(n) for j in range(i))
    anchor = mpf(0)
    if t.B(0) != 0:
        anchor = theta_hat_real(t, mpc(0))
    return inter + mp.fsum(theta_hat_real(t, z) - anchor for z in pts)


# ------------------------------------------------------------------ seeding

def _classical_seeds(t: SemiclassicalType, n: int) -> list:
    cls = t.contour_class
    if cls == FREUD:
        a = t.a
        lc = t.A.leading
        herm = np.polynomial.hermite.hermgauss(n)[0] if n > 1 else np.array([0.0])
        u = herm / np.sqrt(2 * n)
        radius = (mpf(2 * n) * 2 / abs(lc)) ** (mpf(1) / (a + 1))
        rot = mp.expj(-mp.arg(lc) / (a + 1))
        center = -t.A[a - 1] / (a * lc) if a >= 1 else mpc(0)
        return [center + rot * radius * mpf(float(x)) for x in u]
    if cls == RAY:
        c = -t.B[0]
        a1 = t.A[1]
        nodes = np.polynomial.laguerre.laggauss(n)[0]
        return [c + mpf(float(x)) / a1 for x in nodes]
    if cls == SEGMENT:
        from .numkernel import poly_roots
        c1, c2 = poly_roots(t.B)
        nodes = np.polynomial.legendre.leggauss(n)[0]
        return [(c1 + c2) / 2 + (c2 - c1) / 2 * mpf(float(x)) for x in nodes]
    return _unity_seeds(t, n)


def _unity_seeds(t: SemiclassicalType, n: int) -> list:
    center = mpc(0)
    radius = mpf(1)
    if t.contour_class == PETAL:
        center = -t.B[t.b - 1] / t.b
    roots = [mpc(p.location) for p in t.poles if not p.at_infinity]
    if roots:
        radius = 1 + max(abs(r - center) for r in roots)
    if t.a >= 1 and t.a >= t.b:
        radius = max(radius, (mpf(2 * n) * 2 / abs(t.A.leading)) ** (mpf(1) / (t.a - t.b + 1)))
    return [center + radius * mp.expjpi(mpf(2 * j + 1) / n) for j in range(n)]


def make_seeds(t: SemiclassicalType, n: int, seed: SeedSpec, attempt: int = 0) -> list:
    """Starting points for attempt number ``attempt`` (later attempts are re-jittered)."""
    scale = mpf(seed.scale) if seed.scale is not None else mpf(1)
    if seed.strategy == USER_LIST:
        base = [mpc(z) if not isinstance(z, (list, tuple)) else mpc(mpf(z[0]), mpf(z[1]))
                for z in seed.points]
        if len(base) != n:
            raise ValueError(f"user-list has {len(base)} points, expected {n}")
    elif seed.strategy == CLASSICAL_ZEROS:
        base = _classical_seeds(t, n)
        c0 = mp.fsum(base) / n
        base = [c0 + scale * (z - c0) for z in base]
    elif seed.strategy == ROOTS_OF_UNITY:
        base = _unity_seeds(t, n)
        c0 = mp.fsum(base) / n
        base = [c0 + scale * (z - c0) for z in base]
    else:
        rng = np.random.default_rng([seed.rng_seed, 7919])
        r = np.sqrt(rng.uniform(0, 1, n))
        phi = rng.uniform(0, 2 * np.pi, n)
        base = [scale * mpc(complex(rr * np.cos(p), rr * np.sin(p))) for rr, p in zip(r, phi)]
    jitter = seed.jitter if (seed.jitter > 0 or attempt == 0) else 1e-3
    if jitter > 0:
        rng = np.random.default_rng([seed.rng_seed, attempt])
        size = max([abs(z) for z in base] + [mpf(1)])
        noise = rng.standard_normal((n, 2))
        if seed.real_jitter:
            noise[:, 1] = 0
        base = [z + mpf(jitter) * size * mpc(complex(x, y)) for z, (x, y) in zip(base, noise)]
    return base


# ------------------------------------------------------------------- Newton

def _norm2(v):
    return mp.sqrt(mp.fsum(abs(x) ** 2 for x in v))


def _norm_inf(v):
    return max(abs(x) for x in v) if v else mpf(0)


def _newton(t, pts, tol, max_iter, max_halvings=30):
    r = residual(t, pts)
    hist = [_norm_inf(r)]
    it = 0
    while _norm_inf(r) >= tol:
        if it >= max_iter:
            raise ConvergenceError(f"no convergence in {max_iter} Newton steps "
                                   f"(residual {mp.nstr(_norm_inf(r), 5)})")
        it += 1
        J = jacobian(t, pts)
        f = lu_factor(J)
        scale = max(abs(x) for row in J for x in row)
        if f.exact_zero_pivot or min(abs(f.lu[k][k]) for k in range(len(pts))) \
                < scale * mpf(10) ** (-mp.dps + 3):
            raise SingularJacobianError("Jacobian is numerically singular")
        step = lu_solve(f, [-x for x in r])
        lam = mpf(1)
        base = _norm2(r)
        for _ in range(max_halvings + 1):
            cand = [z + lam * s for z, s in zip(pts, step)]
            try:
                rc = residual(t, cand)
            except (CollisionError, PoleCollisionError):
                rc = None
            if rc is not None and _norm2(rc) < base:
                break
            lam /= 2
        else:
            raise ConvergenceError("step halving failed to reduce the residual")
        pts, r = cand, rc
        hist.append(_norm_inf(r))
    # one extra full step squeezes out the last digits when it helps
    try:
        J = jacobian(t, pts)
        step = lu_solve(lu_factor(J), [-x for x in r])
        cand = [z + s for z, s in zip(pts, step)]
        rc = residual(t, cand)
        if _norm_inf(rc) < _norm_inf(r):
            pts, r = cand, rc
            hist.append(_norm_inf(r))
    except (SolverError, SingularMatrixError, ZeroDivisionError):
        pass
    return pts, r, it, hist


def solve(t: SemiclassicalType, n: int, seed: SeedSpec | None = None, tol=None,
          max_iter: int = 100, max_retries: int = 5) -> Configuration:
    """Damped Newton solve of the Stieltjes-Bethe system for ``n`` points.

    Parameters
    ----------
    t : SemiclassicalType
    n : int
        Number of points.
    seed : SeedSpec, optional
        Starting configuration recipe; defaults to classical zeros.
    tol : real, optional
        Stop when the max-norm residual is below ``tol`` (default
        ``10**-(dps - 15)``, but never looser than ``10**-(2 dps / 3)``).
    max_iter : int
        Newton steps per attempt.
    max_retries : int
        Reseeds (new jitter) after collisions or stalled damping.

    Returns
    -------
    Configuration
        With ``converged=True``; failures raise instead.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    seed = seed or SeedSpec()
    if tol is None:
        tol = mpf(10) ** (-max(mp.dps - 15, (2 * mp.dps) // 3))
    tol = mpf(tol)
    if not t.integrability_bound_ok(n):
        warnings.warn(f"integrability bound 2n > 1 - deg B - Re(Lambda) fails for n={n}",
                      BoundWarning, stacklevel=2)
    last = None
    for attempt in range(max_retries + 1):
        pts = make_seeds(t, n, seed, attempt)
        try:
            pts, r, it, hist = _newton(t, pts, tol, max_iter)
        except (CollisionError, PoleCollisionError, ConvergenceError) as exc:
            last = exc
            continue
        return Configuration(tuple(pts), n, _norm_inf(r), True, it, attempt, tuple(hist))
    raise ConvergenceError(f"solver failed after {max_retries + 1} attempts: {last}")
