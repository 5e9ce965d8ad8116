"""The remainder function R_n and the Wronskian built from it.

``R_n(z) = (1/2 pi i) sum_j s_j int_{gamma_j} P_n(w) exp(theta(w)) dw / (w - z)``
is evaluated either as that Cauchy sum or, for maximally degenerate
``P_n``, as ``P_n exp(theta) int_base^z exp(-theta) / (B P_n^2) / (2 pi i)``
with the base point fixed by the region containing z.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from mpmath import mp, mpc, mpf

from ..contours import (Arc, Contour, Integrand, Radial, WeightedContourSet, freud_center,
                        integrate_weighted, polyline_distance, theta_at_anchor, type_scale)
from ..contours.geometry import CIRCLE, ESSENTIAL
from ..numkernel import Polynomial
from ..semiclassical import FINITE_RANK, FREUD, PETAL, SemiclassicalType

CAUCHY_SUM = "cauchy-sum"
BASEPOINT = "basepoint-integral"


class ContourProximityError(ValueError):
    """The evaluation point is too close to a contour."""


def _check_off_contours(t, wcs: WeightedContourSet, z, margin=None):
    S = type_scale(t)
    margin = mpf("1e-3") * S if margin is None else mpf(margin)
    r_max = float(2 * abs(z) + 10 * S)
    for c in wcs.contours:
        if polyline_distance(c.polyline(192, r_max), complex(z)) <= float(margin):
            raise ContourProximityError(f"z = {mp.nstr(z, 8)} lies within {mp.nstr(margin, 3)} "
                                        f"of {c.label}")


def cauchy_sum(t: SemiclassicalType, wcs: WeightedContourSet, P: Polynomial, z, tol=None,
               derivative: bool = False):
    """``R_n(z)`` (and ``R_n'(z)`` through the squared Cauchy kernel)."""
    z = mpc(z)
    if wcs.s is None:
        raise ValueError("weights are not set")
    _check_off_contours(t, wcs, z)
    if all(x == 0 for x in wcs.s):
        return (mpc(0), mpc(0)) if derivative else mpc(0)
    if derivative:
        f = Integrand(lambda w: [P(w) / (w - z), P(w) / (w - z) ** 2], 2, 1, (z,), "cauchy")
    else:
        f = Integrand(lambda w: [P(w) / (w - z)], 1, 1, (z,), "cauchy")
    acc = [mpc(0)] * f.size
    for s, c in zip(wcs.s, wcs.contours):
        if s == 0:
            continue
        val = integrate_weighted(c, f, t.symbol, tol).value
        val = val if f.size > 1 else [val]
        for k in range(f.size):
            acc[k] += s * val[k]
    out = [x / (2j * mp.pi) for x in acc]
    return (out[0], out[1]) if derivative else out[0]


# ------------------------------------------------------------ base points

def _wrap(x):
    """Representative of an angle in [0, 2 pi)."""
    return x - 2 * mp.pi * mp.floor(x / (2 * mp.pi))


def _freud_path(t, wcs, z):
    c0 = freud_center(t)
    delta = z - c0
    rho, psi = abs(delta), mp.arg(delta)
    r0 = wcs.contours[0].pieces[1].radius
    base = None
    if rho > r0:
        for c in wcs.contours:
            a = mp.arg(c.pieces[0].direction)
            width = _wrap(mp.arg(c.pieces[2].direction) - a)
            if 0 < _wrap(psi - a) < width:
                base = a + width / 2
                break
    if base is None:
        base = mp.arg(wcs.duals[0].pieces[0].direction)
    end = base + _wrap(psi - base + mp.pi) - mp.pi
    pieces = (Radial(c0, mp.expj(base), mp.inf, rho), Arc(c0, rho, base, end))
    return Contour(pieces, "base-path", (1, end), "base")


def _petal_path(t, wcs, z):
    pole = t.finite_poles[0]
    p0 = mpc(pole.location)
    idx = [i for i, c in enumerate(t.symbol.log_centers) if c == pole.location][0]
    delta = z - p0
    rho, psi = abs(delta), mp.arg(delta)
    first = wcs.contours[0]
    R0 = first.pieces[0].radius if first.kind == CIRCLE else first.pieces[1].radius
    if rho > R0:
        return Contour((Radial(p0, mp.expj(psi), mp.inf, rho, pole=idx),), "base-path",
                       (0, rho), "base")
    for j, c in enumerate(wcs.contours):
        arc = c.pieces[0] if c.kind == CIRCLE else c.pieces[1]
        a, width = arc.phi0, arc.phi1 - arc.phi0
        x = _wrap(psi - a)
        if x < width:
            base = a + _wrap(mp.arg(wcs.duals[j].pieces[0].direction) - a)
            pieces = (Radial(p0, mp.expj(base), 0, rho, pole=idx, end_kind=ESSENTIAL),
                      Arc(p0, rho, base, a + x, pole=idx))
            return Contour(pieces, "base-path", (1, a + x), "base")
    raise ContourProximityError("z does not fall in any petal region")


def _finite_rank_path(t, wcs, z):
    for j, c in enumerate(wcs.contours):
        arc = c.pieces[0]
        delta = z - arc.center
        if abs(delta) < arc.radius:
            u = delta / abs(delta)
            return Contour((Radial(arc.center, u, 0, abs(delta), pole=arc.pole),),
                           "base-path", (0, abs(delta)), "base")
    centroid = mp.fsum(c.pieces[0].center for c in wcs.contours) / len(wcs.contours)
    u = z - centroid
    u = u / abs(u) if u != 0 else mpc(1)
    return Contour((Radial(z, u, mp.inf, 0),), "base-path", (0, 0), "base")


def base_path(t: SemiclassicalType, wcs: WeightedContourSet, z) -> Contour:
    """Path from the base point of the region containing z to z itself."""
    if t.contour_class == FREUD:
        return _freud_path(t, wcs, z)
    if t.contour_class == PETAL:
        return _petal_path(t, wcs, z)
    if t.contour_class == FINITE_RANK:
        return _finite_rank_path(t, wcs, z)
    raise ValueError(f"no base-point representation for the {t.contour_class!r} class")


def basepoint_integral(t: SemiclassicalType, wcs: WeightedContourSet, P: Polynomial, z,
                       tol=None) -> mpc:
    """``P(z) exp(theta(z)) int_base^z exp(-theta) / (B P^2) dw / (2 pi i)``.

    This is R_n for the unnormalized weights given by the dual integrals.
    """
    z = mpc(z)
    path = base_path(t, wcs, z)
    zeros = tuple(P.roots()) if P.degree > 0 else ()
    f = Integrand(lambda w: [1 / (t.B(w) * P(w) ** 2)], 1, -1, zeros, "base")
    G = integrate_weighted(path, f, t.symbol, tol).value
    th = theta_at_anchor(path, t.symbol)
    return P(z) * mp.exp(th) * G / (2j * mp.pi)


def dual_weights(t: SemiclassicalType, wcs: WeightedContourSet, P: Polynomial, tol=None):
    zeros = tuple(P.roots()) if P.degree > 0 else ()
    f = Integrand(lambda w: [1 / (t.B(w) * P(w) ** 2)], 1, -1, zeros, "dual")
    return [integrate_weighted(c, f, t.symbol, tol).value / (2j * mp.pi) for c in wcs.duals]


@dataclass
class RemainderFn:
    """Callable R_n for fixed (type, contours with weights, P_n).

    For the base-point method the result is rescaled from the dual-integral
    weights to ``wcs.s`` (only the ray of s is meaningful). ``scale_mismatch``
    records how far ``wcs.s`` is from being proportional to them.
    """

    t: SemiclassicalType
    wcs: WeightedContourSet
    P: Polynomial
    method: str = CAUCHY_SUM
    tol: object = None
    _ratio: object = field(default=None, repr=False)
    scale_mismatch: object = None

    def _scale(self):
        if self._ratio is None:
            raw = dual_weights(self.t, self.wcs, self.P, self.tol)
            j = max(range(len(raw)), key=lambda i: abs(raw[i]))
            ratio = self.wcs.s[j] / raw[j]
            self.scale_mismatch = max(abs(s - ratio * r) for s, r in zip(self.wcs.s, raw)) / \
                max(abs(s) for s in self.wcs.s)
            self._ratio = ratio
        return self._ratio

    def __call__(self, z):
        if self.method == CAUCHY_SUM:
            return cauchy_sum(self.t, self.wcs, self.P, z, self.tol)
        if self.method == BASEPOINT:
            if all(x == 0 for x in self.wcs.s):
                return mpc(0)
            _check_off_contours(self.t, self.wcs, mpc(z))
            return self._scale() * basepoint_integral(self.t, self.wcs, self.P, z, self.tol)
        raise ValueError(f"unknown method {self.method!r}")

    def with_derivative(self, z):
        """``(R_n(z), R_n'(z))`` by the Cauchy sum."""
        return cauchy_sum(self.t, self.wcs, self.P, z, self.tol, derivative=True)


def remainder_fn(t: SemiclassicalType, wcs: WeightedContourSet, P: Polynomial, z, tol=None,
                 method: str = CAUCHY_SUM) -> mpc:
    """R_n(z) off the contours.

    Raises
    ------
    ContourProximityError
        When z is within ``1e-3 * scale`` of a contour.
    """
    return RemainderFn(t, wcs, P, method, tol)(z)


def wronskian(t: SemiclassicalType, P: Polynomial, z, R, dR) -> mpc:
    """``W = -(A + B') P R + B (P' R - P R')`` at one point."""
    Ahat = t.A + t.B.derivative()
    Pz, dPz = P(z), P.derivative()(z)
    return -Ahat(z) * Pz * R + t.B(z) * (dPz * R - Pz * dR)


def default_sample_points(t: SemiclassicalType, wcs: WeightedContourSet, P: Polynomial,
                          count: int = 5, rel_margin=mpf("0.05")) -> list:
    """Points away from the contours, the zeros of P and the zeros of B."""
    S = type_scale(t)
    if t.contour_class == FREUD:
        center = freud_center(t)
    elif t.finite_poles:
        center = mp.fsum(p.location for p in t.finite_poles) / len(t.finite_poles)
    else:
        center = mpc(0)
    avoid = list(P.roots()) if P.degree > 0 else []
    avoid += [mpc(p.location) for p in t.poles if not p.at_infinity]
    spread = max([abs(a - center) for a in avoid] + [S])
    out = []
    radii = [mpf(f) * spread for f in ("0.41", "0.83", "1.27", "1.61", "1.93", "2.39", "2.87")]
    angles = [mpf(k) * mp.pi / 7 + mpf("0.3") for k in range(14)]
    for r in radii:
        for phi in angles:
            z = center + r * mp.expj(phi + r)
            if any(abs(z - a) < rel_margin * spread for a in avoid):
                continue
            try:
                _check_off_contours(t, wcs, z, rel_margin * S)
            except ContourProximityError:
                continue
            out.append(z)
            break
        if len(out) == count:
            break
    if len(out) < count:
        raise ValueError("could not place enough sample points")
    return out


def wronskian_check(t: SemiclassicalType, wcs: WeightedContourSet, P: Polynomial,
                    sample_points=None, tol=None):
    """W at each sample point and the spread ``max|W_i - W_j| / max|W_i|``.

    R_n' comes from a second Cauchy integral with kernel ``(w - z)^-2``.
    The spread is reported as 0 when every W vanishes (s = 0).
    """
    if sample_points is None:
        sample_points = default_sample_points(t, wcs, P)
    values = []
    for z in sample_points:
        z = mpc(z)
        R, dR = cauchy_sum(t, wcs, P, z, tol, derivative=True)
        values.append(wronskian(t, P, z, R, dR))
    big = max(abs(w) for w in values)
    if big == 0:
        return values, mpf(0)
    spread = max(abs(a - b) for a in values for b in values) / big
    return values, spread
