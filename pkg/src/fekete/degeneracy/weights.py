"""Recovery of the weights s_j from a solved configuration."""

from __future__ import annotations

from mpmath import mp, mpc, mpf

from ..contours import (Integrand, WeightedContourSet, build_contours, integrate_weighted,
                        polyline_distance)
from ..equilibrium import Configuration
from ..semiclassical import FREUD, SemiclassicalType


class WeightRecoveryError(RuntimeError):
    pass


def _dual_margin_ok(wcs: WeightedContourSet, zeros, margin) -> bool:
    if not zeros:
        return True
    r_max = float(4 * max(abs(z) for z in zeros) + 10)
    for c in wcs.duals:
        pts = c.polyline(192, r_max)
        if min(polyline_distance(pts, complex(z)) for z in zeros) < float(margin):
            return False
    return True


def normalize_weights(s) -> list:
    """Scale so that the largest-modulus component equals 1."""
    s = [mpc(x) for x in s]
    big = max(s, key=abs)
    if big == 0:
        raise WeightRecoveryError("all weights vanish")
    return [x / big for x in s]


def raw_weights(t: SemiclassicalType, cfg, wcs: WeightedContourSet | None = None, tol=None):
    """Unnormalized ``s_j = (1/2 pi i) int_{dual_j} exp(-theta) / (B P^2) dz``.

    Returns ``(s, wcs)`` where ``wcs`` carries geometry whose duals keep a
    margin of ``1e-3 * diameter`` from the zeros. Types with a single
    contour and no duals get ``s = [1]``. ``cfg`` may also be a plain
    sequence of points.
    """
    if not hasattr(cfg, "points"):
        pts = tuple(mpc(z) for z in cfg)
        cfg = Configuration(pts, len(pts), mpf(0), True, 0)
    points = list(cfg.points)
    if not t.integrability_bound_ok(len(points)):
        raise WeightRecoveryError("exp(-theta)/(B P^2) is not integrable at infinity "
                                  f"for n = {len(points)}")
    if wcs is None or not _dual_margin_ok(wcs, points, mpf("1e-3") * cfg.diameter()):
        wcs = build_contours(t, dual_avoid=points)
    if not wcs.duals:
        return [mpc(1)], wcs
    if not _dual_margin_ok(wcs, points, mpf("1e-3") * cfg.diameter()):
        raise WeightRecoveryError("no dual path keeps clear of the zeros of P_n")
    P = cfg.polynomial()
    f = Integrand(lambda z: [1 / (t.B(z) * P(z) ** 2)], 1, -1, tuple(points), "dual")
    s = []
    for c in wcs.duals:
        rep = integrate_weighted(c, f, t.symbol, tol)
        s.append(rep.value / (2j * mp.pi))
    return s, wcs


def weights_from_config(t: SemiclassicalType, cfg, wcs: WeightedContourSet | None = None,
                        tol=None, normalize: bool = True) -> list:
    """Weights making ``P_n = prod(z - z_j)`` maximally degenerate.

    Only the ray of ``(s_j)`` matters; by default the result is scaled so
    that its largest component is 1.

    Raises
    ------
    WeightRecoveryError
        When the integrability bound at infinity fails or no dual path
        keeps its margin from the zeros.
    """
    s, _ = raw_weights(t, cfg, wcs, tol)
    return normalize_weights(s) if normalize else s


def weighted_set_from_config(t: SemiclassicalType, cfg, tol=None, normalize: bool = True):
    """``(WeightedContourSet with weights, raw weights)`` in one call."""
    s, wcs = raw_weights(t, cfg, None, tol)
    use = normalize_weights(s) if normalize else s
    return wcs.with_weights(use), s


def freud_real_imag_basis(s):
    """Write ``s_1 g_1 + s_2 g_2 + s_3 g_3`` as ``alpha R + beta iR`` (quartic Freud).

    Uses ``R ~ -g_1 - g_2`` and ``iR ~ -g_2 - g_3``. Returns
    ``(beta / alpha, alpha, beta, mismatch)`` where ``mismatch`` is the
    relative failure of ``s_2 = s_1 + s_3`` (zero when the combination lies
    in that two-dimensional span).
    """
    if len(s) != 3:
        raise ValueError("the real/imaginary basis needs exactly three sector weights")
    s1, s2, s3 = (mpc(x) for x in s)
    alpha, beta = -s1, -s3
    mismatch = abs(s2 - s1 - s3) / max(abs(s1), abs(s2), abs(s3))
    return beta / alpha, alpha, beta, mismatch


def is_freud(t: SemiclassicalType) -> bool:
    return t.contour_class == FREUD
