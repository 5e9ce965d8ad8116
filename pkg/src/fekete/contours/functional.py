"""Weighted contour sets and the moment functional they define."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field, replace

from mpmath import mp, mpc, mpf

from ..numkernel import Polynomial, to_mpc
from ..semiclassical import SemiclassicalType, SymbolFns
from .geometry import Contour, ContourSystem, build_system
from .quadrature import Integrand, integrate_weighted


@dataclass
class WeightedContourSet:
    """Contours ``gamma_j``, duals and weights ``s_j``.

    ``s`` may be ``None`` until weights are recovered or assigned. Moments
    of single contours are cached per ``(contour index, k)``; the cache is
    guarded by a lock so that concurrent fills of distinct keys are safe.
    """

    contours: tuple
    duals: tuple
    s: tuple | None = None
    extra: tuple = ()
    _cache: dict = field(default_factory=dict, repr=False, compare=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    @property
    def size(self) -> int:
        return len(self.contours)

    def with_weights(self, s) -> "WeightedContourSet":
        s = tuple(mpc(x) for x in s)
        if len(s) != self.size:
            raise ValueError(f"expected {self.size} weights, got {len(s)}")
        out = replace(self, s=s)
        out._cache = self._cache          # geometry unchanged, cache stays valid
        out._lock = self._lock
        return out

    def to_json(self, samples: int = 48, r_max: float | None = None) -> dict:
        return {
            "contours": [c.to_json(samples, r_max) for c in self.contours],
            "duals": [c.to_json(samples, r_max) for c in self.duals],
            "s": None if self.s is None else [[mp.nstr(x.real, 20), mp.nstr(x.imag, 20)]
                                              for x in self.s],
        }


def build_contours(t: SemiclassicalType, avoid=(), dual_avoid=()) -> WeightedContourSet:
    """Contours and duals for a supported class (weights unset).

    Raises
    ------
    UnsupportedContourClass
        For the general class.
    """
    sysm: ContourSystem = build_system(t, avoid, dual_avoid)
    return WeightedContourSet(sysm.contours, sysm.duals, None, sysm.extra)


def _tol_key(tol):
    return (mp.prec, mp.nstr(mpf(tol), 5) if tol is not None else None)


def per_contour_moments(wcs: WeightedContourSet, sym: SymbolFns, k_max: int, tol=None,
                        branch=None) -> list:
    """``[[int_{gamma_j} z^k e^theta dz for k <= k_max] for j]`` (cached)."""
    out = []
    key = _tol_key(tol)
    for j, c in enumerate(wcs.contours):
        with wcs._lock:
            have = [wcs._cache.get((j, k, key)) for k in range(k_max + 1)]
        if all(v is not None for v in have):
            out.append(have)
            continue
        rep = integrate_weighted(c, Integrand.powers(k_max), sym, tol, branch)
        vals = rep.value if k_max > 0 else [rep.value]
        with wcs._lock:
            for k, v in enumerate(vals):
                wcs._cache[(j, k, key)] = v
        out.append(list(vals))
    return out


def moments(wcs: WeightedContourSet, sym: SymbolFns, k_max: int, tol=None, branch=None) -> list:
    """``mu_k = sum_j s_j int_{gamma_j} z^k e^theta dz`` for ``k = 0..k_max``."""
    if wcs.s is None:
        raise ValueError("weights are not set")
    if all(x == 0 for x in wcs.s):
        return [mpc(0)] * (k_max + 1)
    per = per_contour_moments(wcs, sym, k_max, tol, branch)
    return [mp.fsum(s * per[j][k] for j, s in enumerate(wcs.s)) for k in range(k_max + 1)]


def apply_functional(wcs: WeightedContourSet, sym: SymbolFns, p: Polynomial, tol=None,
                     branch=None) -> mpc:
    """``M[p] = sum_j s_j int_{gamma_j} p e^theta dz`` via the cached moments."""
    if p.is_zero():
        return mpc(0)
    deg = int(p.degree)
    mu = moments(wcs, sym, deg, tol, branch)
    return mp.fsum(to_mpc(p[k]) * mu[k] for k in range(deg + 1))


def freud_homology(wcs: WeightedContourSet, sym: SymbolFns, k_max: int, tol=None) -> list:
    """Sum over all sector contours (kept and dropped) of ``int z^k e^theta``.

    Cauchy's theorem makes this vanish for every k.
    """
    if not wcs.extra:
        raise ValueError("only Freud-class sets carry the dropped sector")
    everything = WeightedContourSet(tuple(wcs.contours) + tuple(wcs.extra), ())
    per = per_contour_moments(everything, sym, k_max, tol)
    return [mp.fsum(row[k] for row in per) for k in range(k_max + 1)]


def contour_integral(c: Contour, sym: SymbolFns, factor, sign=1, tol=None, singular=()):
    """Scalar convenience wrapper around :func:`integrate_weighted`."""
    rep = integrate_weighted(c, Integrand(lambda z: [factor(z)], 1, sign, tuple(singular)),
                             sym, tol)
    return rep.value
