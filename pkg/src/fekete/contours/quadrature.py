"""Adaptive high-precision quadrature of ``m(z) exp(+-theta(z))`` along contours.

Log terms of theta are not evaluated through a fixed branch. They are
fixed once at the contour anchor and continued along the path, so each
contour carries one continuous determination of ``exp(theta)`` even when
it winds around a log pole or runs along a cut.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Callable

import numpy as np
from mpmath import mp, mpc, mpf

from ..semiclassical import BranchCutError, SymbolFns
from .geometry import ALGEBRAIC, ESSENTIAL, Arc, Contour, Radial

GL_ORDER = 32
MAX_PANELS = 6000
MAX_DEPTH = 48


class QuadratureError(RuntimeError):
    pass


class PoleOnPathError(QuadratureError):
    pass


@dataclass(frozen=True)
class QuadratureReport:
    value: object          # mpc, or list of mpc for vector integrands
    abs_error_estimate: mpf
    panels: int


@dataclass(frozen=True)
class Integrand:
    """``factor(z) * exp(sign * theta(z)) dz`` with a vector-valued factor.

    ``singular`` lists points where the factor blows up; paths must keep
    clear of them.
    """

    factor: Callable
    size: int = 1
    sign: int = 1
    singular: tuple = ()
    label: str = ""

    @classmethod
    def powers(cls, k_max: int, extra: Callable | None = None, singular=()):
        """Factors ``z**k * extra(z)`` for ``k = 0..k_max``."""
        def f(z):
            e = extra(z) if extra is not None else 1
            out, p = [], e
            for _ in range(k_max + 1):
                out.append(p)
                p = p * z
            return out
        return cls(f, k_max + 1, 1, tuple(singular), f"z^0..z^{k_max}")

    @classmethod
    def polynomial(cls, p, sign: int = 1):
        return cls(lambda z: [p(z)], 1, sign, (), "p")

    @classmethod
    def dual(cls, B, P):
        """``1/(B P^2) exp(-theta)``, the weight recovery integrand."""
        return cls(lambda z: [1 / (B(z) * P(z) ** 2)], 1, -1, tuple(P.roots()) if P.degree > 0
                   else (), "dual")


# ----------------------------------------------------------- Gauss-Legendre

_GL_CACHE: dict = {}
_GL_LOCK = threading.Lock()


def gauss_legendre(order: int = GL_ORDER):
    """Nodes and weights on [-1, 1] at the current precision (cached)."""
    key = (order, mp.prec)
    with _GL_LOCK:
        hit = _GL_CACHE.get(key)
    if hit is not None:
        return hit
    seeds = np.polynomial.legendre.leggauss(order)[0]
    nodes, weights = [], []
    for x0 in seeds:
        x = mpf(float(x0))
        for _ in range(100):
            p0, p1 = mpf(1), x
            for k in range(2, order + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = order * (x * p1 - p0) / (x * x - 1)
            dx = p1 / dp
            x -= dx
            if abs(dx) < mpf(2) ** (-mp.prec - 4):
                break
        p0, p1 = mpf(1), x
        for k in range(2, order + 1):
            p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
        dp = order * (x * p1 - p0) / (x * x - 1)
        nodes.append(x)
        weights.append(2 / ((1 - x * x) * dp * dp))
    out = (tuple(nodes), tuple(weights))
    with _GL_LOCK:
        _GL_CACHE[key] = out
    return out


# ------------------------------------------------------- log continuation

def _principal_ratio_log(num, den):
    return mp.log(num / den)


def _continue_logs(piece, sym: SymbolFns, t_from, logs_from, t_to, steps: int = 8):
    """Continue every log term from ``t_from`` to ``t_to`` along ``piece``."""
    out = []
    centers = sym.log_centers
    for i, c in enumerate(centers):
        L = logs_from[i]
        if L is None:
            out.append(None)
            continue
        if isinstance(piece, Arc) and piece.pole == i:
            out.append(L + 1j * (t_to - t_from))
            continue
        if isinstance(piece, Radial):
            # a straight line sees any point off it under an angle below pi
            out.append(L + _principal_ratio_log(piece.offset(i, t_to, c),
                                                piece.offset(i, t_from, c)))
            continue
        n = steps
        while True:
            ts = [t_from + (t_to - t_from) * k / n for k in range(n + 1)]
            ds = [piece.offset(i, t, c) for t in ts]
            incs = [_principal_ratio_log(ds[k + 1], ds[k]) for k in range(n)]
            if all(abs(x.imag) < mp.pi / 4 for x in incs) or n > 4096:
                break
            n *= 4
        out.append(L + mp.fsum(incs))
    return out


def _anchor_logs(contour: Contour, sym: SymbolFns, branch=None):
    k, t = contour.anchor
    piece = contour.pieces[k]
    logs = []
    for i, c in enumerate(sym.log_centers):
        if not sym.log_coeffs[i]:
            logs.append(mpc(0))
            continue
        delta = piece.offset(i, t, c)
        try:
            logs.append(sym.log_term(i, delta, branch))
        except BranchCutError:
            logs.append(sym.log_term(i, delta, branch, check_cut=False))
    return logs


def _piece_references(contour: Contour, sym: SymbolFns, branch=None):
    """A (parameter, logs) pair on every piece, continued from the anchor."""
    pieces = contour.pieces
    k0, t0 = contour.anchor
    refs = [None] * len(pieces)
    refs[k0] = (t0, _anchor_logs(contour, sym, branch))
    for k in range(k0 + 1, len(pieces)):
        tp, Lp = refs[k - 1]
        prev = pieces[k - 1]
        end = prev.t1
        L_end = _continue_logs(prev, sym, tp, Lp, end)
        refs[k] = (pieces[k].t0, _rebase(pieces[k - 1], pieces[k], end, L_end, sym))
    for k in range(k0 - 1, -1, -1):
        tn, Ln = refs[k + 1]
        nxt = pieces[k + 1]
        start = nxt.t0
        L_start = _continue_logs(nxt, sym, tn, Ln, start)
        refs[k] = (pieces[k].t1, _rebase(pieces[k + 1], pieces[k], start, L_start, sym))
    return refs


def _rebase(src, dst, t_src, L, sym):
    # the junction is the same point on both pieces; logs carry over,
    # except that a pole-centered arc keeps its angle parameter
    return list(L)


# ------------------------------------------------------------- evaluation

class _Evaluator:
    def __init__(self, piece, sym: SymbolFns, f: Integrand, t_ref, L_ref):
        self.piece = piece
        self.sym = sym
        self.f = f
        self.t_ref = t_ref
        self.L_ref = L_ref
        self.nlog = len(sym.log_centers)

    def logs_at(self, t_mid, L_mid, t):
        sym, pc = self.sym, self.piece
        out = []
        for i, c in enumerate(sym.log_centers):
            if isinstance(pc, Arc) and pc.pole == i:
                out.append(L_mid[i] + 1j * (t - t_mid))
            else:
                out.append(L_mid[i] + mp.log(pc.offset(i, t, c) / pc.offset(i, t_mid, c)))
        return out

    def value(self, t, L):
        sym, pc = self.sym, self.piece
        z = pc.point(t)
        th = sym.poly_part(z)
        for i, c in enumerate(sym.log_centers):
            delta = pc.offset(i, t, c)
            for power, coeff in sym.principal[i]:
                th += coeff * delta ** power
            r = sym.log_coeffs[i]
            if r:
                th += r * L[i]
        w = mp.exp(self.f.sign * th) * pc.dpoint(t)
        return [w * m for m in self.f.factor(z)]

    def at(self, t, t_mid, L_mid):
        return self.value(t, self.logs_at(t_mid, L_mid, t))

    def mid_logs(self, t_mid):
        return _continue_logs(self.piece, self.sym, self.t_ref, self.L_ref, t_mid)

    def magnitude(self, t):
        try:
            L = self.mid_logs(t)
            v = self.value(t, L)
        except (ZeroDivisionError, ValueError):
            return mp.inf
        return max(abs(x) for x in v)


def _gl_panel(ev: _Evaluator, a, b, L_mid=None):
    nodes, weights = gauss_legendre()
    h = (b - a) / 2
    m = (a + b) / 2
    if L_mid is None:
        L_mid = ev.mid_logs(m)
    acc = [mpc(0)] * ev.f.size
    acc_abs = [mpf(0)] * ev.f.size
    for x, w in zip(nodes, weights):
        v = ev.at(m + h * x, m, L_mid)
        for k in range(ev.f.size):
            acc[k] += w * v[k]
            acc_abs[k] += w * abs(v[k])
    ah = abs(h)
    return [h * s for s in acc], [ah * s for s in acc_abs], L_mid


def _ts_panel(ev: _Evaluator, a, b, tol_abs=None):
    """tanh-sinh on a terminal panel whose parameter-0 end is singular.

    Nodes are generated as distances from the singular end,
    ``t = h / (1 + exp(-pi sinh u))``, so points extremely close to the
    pole keep full relative precision (a generic ``a + (b - a) x`` map
    loses them and with them the integrable mass near the endpoint).
    """
    h = b if a == 0 else a
    sgn = 1 if a == 0 else -1
    m = h / 2
    L_mid = ev.mid_logs(m)
    size = ev.f.size
    umax = mp.asinh(4 * mp.dps * mp.log(10) / mp.pi)
    cache = {}

    def term(u):
        if u not in cache:
            e = mp.exp(-mp.pi * mp.sinh(u))
            t = h / (1 + e)
            dt = h * mp.pi * mp.cosh(u) * e / (1 + e) ** 2
            if t == 0 or dt == 0:
                cache[u] = ([mpc(0)] * size, [mpf(0)] * size)
            else:
                v = ev.at(t, m, L_mid)
                cache[u] = ([x * dt for x in v], [abs(x) * dt for x in v])
        return cache[u]

    prev = None
    step = mpf(1) / 2
    for level in range(12):
        n = int(mp.ceil(umax / step))
        vals = [mpc(0)] * size
        abss = [mpf(0)] * size
        for k in range(-n, n + 1):
            v, av = term(k * step)
            for j in range(size):
                vals[j] += v[j]
                abss[j] += av[j]
        vals = [step * x * sgn for x in vals]
        abss = [step * x for x in abss]
        if prev is not None:
            err = max(abs(x - y) for x, y in zip(vals, prev))
            lim = tol_abs if tol_abs is not None else mpf(10) ** (-mp.dps)
            if level >= 3 and err <= lim * mpf(10) ** -3:
                return vals, abss, err
            if level >= 4 and err ** 2 <= lim * max(max(abss), mpf(10) ** -mp.dps) * \
                    mpf(10) ** -3:
                return vals, abss, err
        prev = vals
        step /= 2
    raise QuadratureError("tanh-sinh did not converge at a singular endpoint")


# ------------------------------------------------------------- truncation

def _log_mag(ev: _Evaluator, t):
    v = ev.magnitude(t)
    if v == 0:
        return -mp.inf
    if v == mp.inf:
        return mp.inf
    return mp.log(v) + mp.log(max(abs(t), mpf(1)))


def truncation_point(ev: _Evaluator, t_fin, toward_inf: bool, r_scale=1):
    """Parameter beyond which the integrand is negligible.

    For ``toward_inf`` the search doubles t away from ``t_fin``; otherwise
    it halves t toward 0 (essential singularity at a pole). The result is
    refined by bisection on ``log|f|``.
    """
    drop = (mp.dps + 5) * mp.log(10)
    t = abs(t_fin) if toward_inf else abs(t_fin)
    t = max(t, mpf(1) / 8) if toward_inf else t
    samples = []
    ts = []
    for k in range(400):
        ts.append(t)
        samples.append(_log_mag(ev, t))
        peak = max(s for s in samples if s != mp.inf) if any(s != mp.inf for s in samples) \
            else -mp.inf
        if len(samples) >= 3 and samples[-1] < peak - drop and samples[-1] <= samples[-2]:
            break
        t = t * 2 if toward_inf else t / 2
    else:
        raise QuadratureError("integrand does not decay along an infinite leg" if toward_inf
                              else "integrand does not vanish at the pole endpoint")
    lo, hi = ts[-2], ts[-1]
    target = peak - drop
    for _ in range(30):
        mid = (lo + hi) / 2 if toward_inf else mp.sqrt(lo * hi)
        if _log_mag(ev, mid) < target:
            hi = mid
        else:
            lo = mid
    if toward_inf:
        return hi * r_scale
    return hi / r_scale


# ---------------------------------------------------------- piece schedule

def _breaks(a, b, graded_at_a: bool, n_lin: int = 4):
    if not graded_at_a:
        return [a + (b - a) * k / n_lin for k in range(n_lin + 1)]
    # geometric grading toward the end at ``a`` (which is t = 0 or tiny)
    out = [b]
    x = b
    span = b - a
    while abs(x - a) > abs(span) / 64:
        x = a + (x - a) / 2
        out.append(x)
    out.append(a)
    return out[::-1]


def _is_integer(x):
    tol = mpf(10) ** (-mp.dps // 2)
    return abs(x.imag) < tol and abs(x.real - mp.nint(x.real)) < tol


def _schedule(contour: Contour, sym: SymbolFns, f: Integrand, branch, r_scale):
    """Initial panels: list of (evaluator, a, b, tanh_sinh_flag)."""
    refs = _piece_references(contour, sym, branch)
    sched = []
    for k, pc in enumerate(contour.pieces):
        t_ref, L_ref = refs[k]
        ev = _Evaluator(pc, sym, f, t_ref, L_ref)
        if isinstance(pc, Arc):
            sweep = pc.phi1 - pc.phi0
            n = max(2, int(mp.ceil(abs(sweep) / (mp.pi / 4))))
            b = [pc.phi0 + sweep * j / n for j in range(n + 1)]
            sched.extend((ev, b[j], b[j + 1], False) for j in range(n))
            continue
        t0, t1 = pc.t0, pc.t1
        lo_end, hi_end = min(t0, t1), max(t0, t1)
        start = abs(t_ref) if t_ref else (lo_end if lo_end > 0 else mpf(1))
        if hi_end == mp.inf:
            hi_end = truncation_point(ev, max(start, lo_end), True, r_scale)
        tanh = graded = False
        if lo_end == 0 and pc.pole is not None and pc.end_kind == ESSENTIAL:
            lo_end = truncation_point(ev, min(start, hi_end), False, r_scale)
            graded = True
        elif lo_end == 0 and pc.pole is not None and pc.end_kind == ALGEBRAIC:
            tanh = not _is_integer(sym.log_coeffs[pc.pole] * f.sign)
            graded = True
        if hi_end <= lo_end:
            continue
        if pc.infinite:
            seq = [lo_end]
            x = 2 * lo_end if lo_end > 0 else mpf(1) / 4
            while x < hi_end:
                seq.append(x)
                x *= 2
            seq.append(hi_end)
            if graded:
                seq = _breaks(seq[0], seq[1], True)[:-1] + seq[1:]
        else:
            seq = _breaks(lo_end, hi_end, graded, 4)
        panels = [(seq[j], seq[j + 1]) for j in range(len(seq) - 1)]
        rev = t0 > t1
        if rev:
            panels = [(b_, a_) for a_, b_ in reversed(panels)]
        for j, (a_, b_) in enumerate(panels):
            ts = tanh and ((not rev and j == 0) or (rev and j == len(panels) - 1))
            sched.append((ev, a_, b_, ts))
    return sched


def _check_clear(contour: Contour, f: Integrand, sym: SymbolFns):
    if not f.singular:
        return
    pts = contour.polyline(64, None)
    from .geometry import polyline_distance
    for p in f.singular:
        pc = complex(p)
        d = polyline_distance(pts, pc)
        scale = max(1.0, abs(pc))
        if d < 1e-12 * scale:
            raise PoleOnPathError(f"integrand pole at {mp.nstr(p, 8)} lies on {contour.label}")


def integrate_weighted(c: Contour, f: Integrand, sym: SymbolFns, tol=None, branch=None,
                       r_scale=1) -> QuadratureReport:
    """Integrate ``f.factor(z) exp(f.sign theta(z)) dz`` along a contour.

    Parameters
    ----------
    c : Contour
    f : Integrand
    sym : SymbolFns
    tol : real, optional
        Relative tolerance against the integral of the modulus (default
        ``10**-(dps - 10)``).
    branch : BranchSpec, optional
        Branch used at the contour anchor.
    r_scale : real
        Multiplies truncation radii at infinity (and divides those at
        essential endpoints); used to test truncation stability.

    Returns
    -------
    QuadratureReport
        ``value`` is a list when ``f.size > 1``.
    """
    if tol is None:
        tol = mpf(10) ** (-(mp.dps - 10))
    tol = mpf(tol)
    _check_clear(c, f, sym)
    sched = _schedule(c, sym, f, branch, mpf(r_scale))
    size = f.size
    first = []
    l1 = [mpf(0)] * size
    for ev, a, b, ts in sched:
        if ts:
            val, ab, err = _ts_panel(ev, a, b)
            first.append(("ts", ev, a, b, val, ab, err))
        else:
            val, ab, L_mid = _gl_panel(ev, a, b)
            first.append(("gl", ev, a, b, val, ab, L_mid))
        for k in range(size):
            l1[k] += ab[k]
    floor = mpf(10) ** (-mp.dps)
    tol_abs = [tol * max(x, floor) for x in l1]
    total = [mpc(0)] * size
    err_total = mpf(0)
    panels = 0
    stack = []
    for item in first:
        if item[0] == "ts":
            _, ev, a, b, val, ab, err = item
            for k in range(size):
                total[k] += val[k]
            err_total += err
            panels += 1
        else:
            _, ev, a, b, val, ab, L_mid = item
            stack.append((ev, a, b, val, L_mid, 0))
    per_panel = [x / max(1, len(stack)) for x in tol_abs]
    while stack:
        ev, a, b, whole, L_mid, depth = stack.pop()
        m = (a + b) / 2
        left, _, Ll = _gl_panel(ev, a, m, None if L_mid is None else
                                ev.logs_at((a + b) / 2, L_mid, (a + m) / 2))
        right, _, Lr = _gl_panel(ev, m, b, None if L_mid is None else
                                 ev.logs_at((a + b) / 2, L_mid, (m + b) / 2))
        diff = [abs(whole[k] - left[k] - right[k]) for k in range(size)]
        ok = all(diff[k] <= per_panel[k] for k in range(size))
        if ok or depth >= MAX_DEPTH:
            if not ok:
                raise QuadratureError(f"panel did not converge on {c.label}")
            for k in range(size):
                total[k] += left[k] + right[k]
            err_total += max(diff)
            panels += 2
            continue
        stack.append((ev, a, m, left, Ll, depth + 1))
        stack.append((ev, m, b, right, Lr, depth + 1))
        if len(stack) + panels > MAX_PANELS:
            raise QuadratureError(f"panel budget exhausted on {c.label}")
    value = total if size > 1 else total[0]
    return QuadratureReport(value, err_total, panels)


def theta_at_anchor(c: Contour, sym: SymbolFns, branch=None) -> mpc:
    """theta at the contour anchor, with the logs used by :func:`integrate_weighted`."""
    k, t = c.anchor
    piece = c.pieces[k]
    L = _anchor_logs(c, sym, branch)
    z = piece.point(t)
    th = sym.poly_part(z)
    for i, cen in enumerate(sym.log_centers):
        delta = piece.offset(i, t, cen)
        for power, coeff in sym.principal[i]:
            th += coeff * delta ** power
        r = sym.log_coeffs[i]
        if r:
            th += r * L[i]
    return th
