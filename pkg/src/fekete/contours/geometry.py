"""Path pieces, contours and the builders for each supported type class."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from mpmath import mp, mpc, mpf

from ..semiclassical import (END_POLE, FINITE_RANK, FLAG_POLE, FREUD, HARD_EDGE, PETAL, RAY,
                             SEGMENT, SemiclassicalType, UnsupportedContourClass, _directions)

SECTOR_ARC = "sector-arc"
HARD_EDGE_SEGMENT = "hard-edge-segment"
LASSO = "lasso"
STEM_LIKE = "stem-like"
DUAL_RAY = "dual-ray"
CIRCLE = "circle"
PETAL_LOOP = "petal"

# how a radial piece behaves at its t = 0 end
REGULAR = "regular"        # ordinary point or hard edge
ALGEBRAIC = "algebraic"    # simple log pole: (z - c)^r
ESSENTIAL = "essential"    # higher-order pole approached along a steepest direction


@dataclass(frozen=True)
class Radial:
    """``z = origin + t * direction`` for t running from ``t0`` to ``t1``.

    Either bound may be ``mp.inf``. When ``pole`` is set the origin is the
    log center with that index, and ``z - c`` is computed as
    ``t * direction`` so that nothing is lost close to the pole.
    """

    origin: mpc
    direction: mpc
    t0: mpf
    t1: mpf
    pole: int | None = None
    end_kind: str = REGULAR

    def point(self, t):
        return self.origin + t * self.direction

    def dpoint(self, t):
        return self.direction

    def offset(self, i, t, center):
        if i == self.pole:
            return t * self.direction
        return self.point(t) - center

    @property
    def infinite(self):
        return self.t0 == mp.inf or self.t1 == mp.inf

    def finite_end(self):
        return self.t1 if self.t0 == mp.inf else self.t0


@dataclass(frozen=True)
class Arc:
    """``z = center + radius * exp(i phi)`` for phi from ``phi0`` to ``phi1``."""

    center: mpc
    radius: mpf
    phi0: mpf
    phi1: mpf
    pole: int | None = None

    def point(self, phi):
        return self.center + self.radius * mp.expj(phi)

    def dpoint(self, phi):
        return 1j * self.radius * mp.expj(phi)

    def offset(self, i, phi, center):
        if i == self.pole:
            return self.radius * mp.expj(phi)
        return self.point(phi) - center

    @property
    def infinite(self):
        return False

    @property
    def t0(self):
        return self.phi0

    @property
    def t1(self):
        return self.phi1


@dataclass(frozen=True)
class Contour:
    """An oriented chain of pieces.

    ``anchor`` is ``(piece index, parameter)`` of a point off every branch
    cut where the log terms take their values from the type's default
    branch; everywhere else they are continued along the path.
    """

    pieces: tuple
    kind: str
    anchor: tuple
    label: str = ""
    start: object = None
    end: object = None

    def anchor_point(self):
        k, t = self.anchor
        return self.pieces[k].point(t)

    def polyline(self, samples: int = 48, r_max: float | None = None) -> list:
        """Complex128 polyline, with infinite legs cut at ``r_max``."""
        pts = []
        for pc in self.pieces:
            if isinstance(pc, Arc):
                c, r = complex(pc.center), float(pc.radius)
                a0, a1 = float(pc.phi0), float(pc.phi1)
                m = max(4, int(samples * abs(a1 - a0) / math.pi) + 1)
                seg = [c + r * cmath.exp(1j * (a0 + (a1 - a0) * s / m)) for s in range(m + 1)]
            else:
                o, u = complex(pc.origin), complex(pc.direction)
                big = r_max if r_max is not None else 100.0
                t0 = big if pc.t0 == mp.inf else float(pc.t0)
                t1 = big if pc.t1 == mp.inf else float(pc.t1)
                seg = [o + (t0 + (t1 - t0) * s / samples) * u for s in range(samples + 1)]
            if pts and abs(pts[-1] - seg[0]) < 1e-12 * (1 + abs(seg[0])):
                seg = seg[1:]
            pts.extend(seg)
        return pts

    def to_json(self, samples: int = 48, r_max: float | None = None) -> dict:
        return {"label": self.label, "kind": self.kind,
                "points": [[z.real, z.imag] for z in self.polyline(samples, r_max)]}


# ----------------------------------------------------------- geometry utils

def _seg_dist(p: complex, a: complex, b: complex) -> float:
    ab = b - a
    if ab == 0:
        return abs(p - a)
    s = ((p - a) * ab.conjugate()).real / abs(ab) ** 2
    s = min(1.0, max(0.0, s))
    return abs(p - (a + s * ab))


def polyline_distance(points: list, p: complex) -> float:
    return min(_seg_dist(p, points[i], points[i + 1]) for i in range(len(points) - 1))


def _cross(a: complex, b: complex) -> float:
    return (a.conjugate() * b).imag


def intersection_number(first: list, second: list, exclude=(), eps: float = 1e-9) -> int:
    """Signed count of transversal crossings of two polylines.

    A crossing counts +1 when the tangent of ``second`` points to the left
    of the tangent of ``first``. Crossings within ``eps`` (relative) of a
    point in ``exclude`` are ignored (shared endpoints at poles).
    """
    scale = max(max(abs(z) for z in first), max(abs(z) for z in second), 1.0)
    total = 0
    for i in range(len(first) - 1):
        a, b = first[i], first[i + 1]
        for j in range(len(second) - 1):
            c, d = second[j], second[j + 1]
            den = _cross(b - a, d - c)
            if abs(den) <= 1e-12 * abs(b - a) * abs(d - c):
                continue    # parallel or collinear pieces do not cross transversally
            s = _cross(c - a, d - c) / den
            u = _cross(c - a, b - a) / den
            if not (0 <= s < 1 and 0 <= u < 1):
                continue
            x = a + s * (b - a)
            if any(abs(x - complex(e)) < eps * scale for e in exclude):
                continue
            total += 1 if den > 0 else -1
    return total


def _best(candidates, avoid, margin_of):
    """Candidate maximizing the distance of its polyline to the avoid points."""
    if not avoid:
        return candidates[0]
    best, best_d = None, -1.0
    for cand in candidates:
        pts = []
        for c in cand:
            pts.extend(c.polyline(24, margin_of))
        d = min(polyline_distance(pts, complex(p)) for p in avoid)
        if d > best_d + 1e-12:
            best, best_d = cand, d
    return best


# ------------------------------------------------------------- builders

def _log_index(t: SemiclassicalType, location):
    for i, c in enumerate(t.symbol.log_centers):
        if c == location:
            return i
    return None


def type_scale(t: SemiclassicalType) -> mpf:
    """A length scale for placing arcs and hubs."""
    if t.contour_class == FREUD:
        lc = abs(t.A.leading)
        return (lc / (t.a + 1)) ** (-mpf(1) / (t.a + 1))
    if t.contour_class == PETAL:
        p = t.finite_poles[0]
        return (abs(p.leading) / p.d_c) ** (mpf(1) / p.d_c)
    locs = [p.location for p in t.poles if not p.at_infinity]
    if len(locs) >= 2:
        return min(abs(x - y) for i, x in enumerate(locs) for y in locs[:i])
    return mpf(1)


def freud_center(t: SemiclassicalType) -> mpc:
    return mpc(-t.A[t.a - 1] / (t.a * t.A.leading))


def _freud_angles(t, offsets=None):
    dirs = _directions(t.infinity)
    step = mp.pi / t.d_inf
    phi = [dirs[0] + ell * step for ell in range(2 * t.d_inf + 1)]
    if offsets:
        phi = [p + offsets.get(ell % (2 * t.d_inf), 0) for ell, p in enumerate(phi)]
    return phi


def freud_sectors(t: SemiclassicalType, avoid=(), r0=None) -> list:
    """All ``a + 1`` sector contours ``inf^(2k-2) -> inf^(2k)`` (their sum is null)."""
    c0 = freud_center(t)
    S = type_scale(t)
    nsec = t.d_inf
    half = mp.pi / (2 * t.d_inf)

    def make(offs, radius):
        phi = _freud_angles(t, offs)
        out = []
        for k in range(1, nsec + 1):
            a, b = phi[2 * k - 2], phi[2 * k]
            pieces = (Radial(c0, mp.expj(a), mp.inf, radius),
                      Arc(c0, radius, a, b),
                      Radial(c0, mp.expj(b), radius, mp.inf))
            out.append(Contour(pieces, SECTOR_ARC, (1, (a + b) / 2), f"gamma_{k}",
                               ("inf", 2 * k - 2), ("inf", 2 * k)))
        return out

    radius = mpf(r0) if r0 is not None else S
    if not avoid:
        return make(None, radius)
    cands = []
    for rad in (radius, radius * mpf(1.5), radius * mpf(0.6), radius * 2):
        for delta in (0, half / 2, -half / 2):
            cands.append(make({2 * m: delta for m in range(nsec)}, rad))
    return _best(cands, avoid, float(8 * S + max(abs(complex(p)) for p in avoid)))


def freud_duals(t: SemiclassicalType, avoid=(), r0=None) -> list:
    """Duals ``inf^(2a+1) -> inf^(2j-1)`` passing within radius ``r0/2`` of the center."""
    c0 = freud_center(t)
    S = type_scale(t)
    r0 = mpf(r0) if r0 is not None else S
    a = t.d_inf - 1
    phi = _freud_angles(t)
    half = mp.pi / (2 * t.d_inf)

    def make(rho, din, dout):
        out = []
        for j in range(1, a + 1):
            pin = phi[2 * a + 1] + din
            pout = phi[2 * j - 1] + dout
            if rho == 0:
                pieces = (Radial(c0, mp.expj(pin), mp.inf, 0),
                          Radial(c0, mp.expj(pout), 0, mp.inf))
                anchor = (1, r0)
            else:
                pieces = (Radial(c0, mp.expj(pin), mp.inf, rho),
                          Arc(c0, rho, pin, pout),
                          Radial(c0, mp.expj(pout), rho, mp.inf))
                anchor = (2, r0)
            out.append(Contour(pieces, DUAL_RAY, anchor, f"dual_{j}",
                               ("inf", 2 * a + 1), ("inf", 2 * j - 1)))
        return out

    if not avoid:
        return make(mpf(0), 0, 0)
    cands = []
    for rho in [mpf(0)] + [r0 * k / 10 for k in range(1, 6)]:
        for din in (0, half / 3, -half / 3):
            for dout in (0, half / 3, -half / 3):
                cands.append(make(rho, din, dout))
    return _best(cands, avoid, float(8 * S + max(abs(complex(p)) for p in avoid)))


def _ray_contours(t, avoid):
    pole = [p for p in t.poles if not p.at_infinity][0]
    c = mpc(pole.location)
    phi0 = _directions(t.infinity)[0]
    S = type_scale(t)
    idx = _log_index(t, pole.location)
    half = mp.pi / 2

    def make(delta, rho):
        phi = phi0 + delta
        u = mp.expj(phi)
        if pole.kind == FLAG_POLE:
            pieces = (Radial(c, u, mp.inf, rho, pole=idx),
                      Arc(c, rho, phi, phi + 2 * mp.pi, pole=idx),
                      Radial(c, u, rho, mp.inf, pole=idx))
            return [Contour(pieces, LASSO, (1, phi + mp.pi), "gamma_1", ("inf", 0), ("inf", 0))]
        kind = ALGEBRAIC if pole.kind == END_POLE else REGULAR
        pieces = (Radial(c, u, 0, mp.inf, pole=idx, end_kind=kind),)
        return [Contour(pieces, STEM_LIKE, (0, S), "gamma_1", c, ("inf", 0))]

    if not avoid:
        return make(0, S / 2)
    cands = [make(dl, rho) for dl in (0, half / 3, -half / 3) for rho in (S / 2, S / 4, S)]
    return _best(cands, avoid, float(8 * S + max(abs(complex(p) - complex(c)) for p in avoid)))


def _segment_contours(t, avoid):
    ends = [p for p in t.poles if not p.at_infinity]
    c1, c2 = mpc(ends[0].location), mpc(ends[1].location)
    L = abs(c2 - c1)
    u = (c2 - c1) / L
    kinds = [ALGEBRAIC if p.kind == END_POLE else REGULAR for p in ends]
    idx = [_log_index(t, p.location) for p in ends]

    def make(h):
        mid = (c1 + c2) / 2 + 1j * u * h
        d1, d2 = mid - c1, mid - c2
        l1, l2 = abs(d1), abs(d2)
        pieces = (Radial(c1, d1 / l1, 0, l1, pole=idx[0], end_kind=kinds[0]),
                  Radial(c2, d2 / l2, l2, 0, pole=idx[1], end_kind=kinds[1]))
        return [Contour(pieces, HARD_EDGE_SEGMENT, (0, l1), "gamma_1", c1, c2)]

    if not avoid:
        return make(mpf(0))
    return _best([make(h * L) for h in (0, mpf(1) / 4, -mpf(1) / 4, mpf(1) / 2, -mpf(1) / 2)],
                 avoid, float(4 * L))


def _petal_contours(t, avoid):
    pole = t.finite_poles[0]
    p0 = mpc(pole.location)
    idx = _log_index(t, pole.location)
    dc = pole.d_c
    dirs = _directions(pole)
    step = mp.pi / dc
    phi = [dirs[0] + ell * step for ell in range(2 * dc + 1)]
    S = type_scale(t)
    r = t.symbol.log_coeffs[idx]
    integer_r = abs(r.imag) < mpf(10) ** (-mp.dps // 2) and \
        abs(r.real - mp.nint(r.real)) < mpf(10) ** (-mp.dps // 2)

    def make(R0):
        out = []
        if dc == 1 and integer_r:
            pieces = (Arc(p0, R0, phi[0], phi[2], pole=idx),)
            return [Contour(pieces, CIRCLE, (0, phi[1]), "gamma_1", None, None)]
        for j in range(dc):
            a, b = phi[2 * j], phi[2 * j + 2]
            pieces = (Radial(p0, mp.expj(a), 0, R0, pole=idx, end_kind=ESSENTIAL),
                      Arc(p0, R0, a, b, pole=idx),
                      Radial(p0, mp.expj(b), R0, 0, pole=idx, end_kind=ESSENTIAL))
            out.append(Contour(pieces, PETAL_LOOP, (1, phi[2 * j + 1]), f"gamma_{j + 1}",
                               (p0, 2 * j), (p0, 2 * j + 2)))
        return out

    if not avoid:
        return make(S)
    return _best([make(S * f) for f in (1, mpf(3) / 2, mpf(2) / 3, 2, mpf(1) / 2)], avoid,
                 float(4 * S + max(abs(complex(p) - complex(p0)) for p in avoid)))


def _petal_duals(t, contours, avoid):
    pole = t.finite_poles[0]
    p0 = mpc(pole.location)
    idx = _log_index(t, pole.location)
    dc = pole.d_c
    dirs = _directions(pole)
    step = mp.pi / dc
    R0 = contours[0].pieces[0].radius if isinstance(contours[0].pieces[0], Arc) \
        else contours[0].pieces[1].radius
    out = []
    for j in range(dc):
        base = dirs[0] + (2 * j + 1) * step
        cands = []
        for delta in (0, step / 6, -step / 6, step / 3, -step / 3):
            u = mp.expj(base + delta)
            pieces = (Radial(p0, u, 0, mp.inf, pole=idx, end_kind=ESSENTIAL),)
            cands.append([Contour(pieces, DUAL_RAY, (0, R0), f"dual_{j + 1}",
                                  (p0, 2 * j + 1), "inf")])
        out.extend(_best(cands, avoid, float(6 * R0 + max(
            [abs(complex(p) - complex(p0)) for p in avoid] + [0]))))
    return out


def _finite_rank_contours(t, avoid):
    roots = [mpc(p.location) for p in t.finite_poles]
    idx = [_log_index(t, r) for r in roots]
    sep = min(abs(x - y) for i, x in enumerate(roots) for y in roots[:i])
    contours, duals = [], []
    for j, beta in enumerate(roots):
        others = [complex(r) for k, r in enumerate(roots) if k != j]
        best = None
        for s in range(24):
            psi = mp.pi * s / 12
            u = complex(mp.expj(psi))
            far = 1e3 * float(sep) + max(abs(complex(p)) for p in roots + list(avoid or [0]))
            seg = [complex(beta), complex(beta) + far * u]
            d = min([_seg_dist(o, *seg) for o in others] +
                    [_seg_dist(complex(p), *seg) for p in avoid])
            if best is None or d > best[0] + 1e-12:
                best = (d, psi)
        psi = best[1]
        rho = sep * mpf("0.3")
        for f in (mpf(1), mpf(2) / 3, mpf(1) / 2, mpf(1) / 3):
            rr = sep * mpf("0.3") * f
            if all(abs(abs(complex(p) - complex(beta)) - float(rr)) > 0.05 * float(sep)
                   for p in avoid):
                rho = rr
                break
        circle = Contour((Arc(beta, rho, psi - mp.pi, psi + mp.pi, pole=idx[j]),), CIRCLE,
                         (0, psi), f"gamma_{j + 1}")
        dual = Contour((Radial(beta, mp.expj(psi), 0, mp.inf, pole=idx[j]),), DUAL_RAY,
                       (0, rho), f"dual_{j + 1}", beta, "inf")
        contours.append(circle)
        duals.append(dual)
    return contours, duals


@dataclass(frozen=True)
class ContourSystem:
    """Contours, their duals and (for the Freud class) the dropped sector."""

    contours: tuple
    duals: tuple
    extra: tuple = field(default=())


def build_system(t: SemiclassicalType, avoid=(), dual_avoid=()) -> ContourSystem:
    """Geometric part of :func:`build_contours`.

    ``avoid`` are points the contours must keep away from (for example a
    multiplier center); ``dual_avoid`` the same for the duals (zeros of P).
    """
    avoid = tuple(mpc(p) for p in avoid)
    dual_avoid = tuple(mpc(p) for p in dual_avoid)
    cls = t.contour_class
    if cls == FREUD:
        sectors = freud_sectors(t, avoid)
        r0 = sectors[0].pieces[1].radius
        duals = freud_duals(t, dual_avoid, r0)
        return ContourSystem(tuple(sectors[:-1]), tuple(duals), (sectors[-1],))
    if cls == RAY:
        return ContourSystem(tuple(_ray_contours(t, avoid)), ())
    if cls == SEGMENT:
        return ContourSystem(tuple(_segment_contours(t, avoid)), ())
    if cls == PETAL:
        cs = _petal_contours(t, avoid)
        return ContourSystem(tuple(cs), tuple(_petal_duals(t, cs, dual_avoid)))
    if cls == FINITE_RANK:
        cs, ds = _finite_rank_contours(t, avoid + dual_avoid)
        return ContourSystem(tuple(cs), tuple(ds))
    raise UnsupportedContourClass(f"no contour builder for the {cls!r} class")


def pairing_matrix(system: ContourSystem, poles=()) -> list:
    """Intersection numbers ``dual_j o gamma_k`` of the discretized paths."""
    exclude = [complex(p) for p in poles]
    big = None
    for c in system.contours + system.duals:
        for pc in c.pieces:
            if isinstance(pc, Arc):
                big = max(big or 0.0, abs(complex(pc.center)) + 4 * float(pc.radius))
            else:
                big = max(big or 0.0, abs(complex(pc.origin)) + 4 * float(pc.finite_end() + 1))
    polys_c = [c.polyline(96, big) for c in system.contours]
    polys_d = [c.polyline(96, big) for c in system.duals]
    return [[intersection_number(dj, ck, exclude) for ck in polys_c] for dj in polys_d]
