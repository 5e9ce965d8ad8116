import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpc, mpf

from fekete.contours import (CIRCLE, Integrand, PoleOnPathError, apply_functional,
                             build_contours, build_system, freud_homology, gauss_legendre,
                             integrate_weighted, moments, pairing_matrix, per_contour_moments)
from fekete.numkernel import Polynomial
from fekete.semiclassical import UnsupportedContourClass, build_type

TOL = lambda: mpf(10) ** (-(mp.dps - 12))


def rel(a, b):
    return abs(a - b) / max(abs(b), mpf(10) ** (-mp.dps))


def weighted(t, s):
    return build_contours(t).with_weights(s)


def test_gauss_legendre_exact_for_degree_63():
    x, w = gauss_legendre(32)
    assert abs(mp.fsum(w) - 2) < mpf(10) ** -45
    assert abs(mp.fsum(wi * xi ** 62 for xi, wi in zip(x, w)) - mpf(2) / 63) < mpf(10) ** -45


def test_gaussian_integral():
    t = build_type([0, 2], [1])
    wcs = build_contours(t)
    rep = integrate_weighted(wcs.contours[0], Integrand.polynomial(Polynomial([1])), t.symbol)
    # the single sector contour runs from +inf to -inf
    assert rel(-rep.value, mp.sqrt(mp.pi)) < TOL()
    assert rep.abs_error_estimate < mpf(10) ** -40


def test_hermite_moments():
    t = build_type([0, 2], [1])
    mu = moments(weighted(t, [-1]), t.symbol, 4)
    rp = mp.sqrt(mp.pi)
    assert rel(mu[0], rp) < TOL() and abs(mu[1]) < TOL()
    assert rel(mu[2], rp / 2) < TOL() and rel(mu[4], 3 * rp / 4) < TOL()


def test_laguerre_moments_are_factorials():
    t = build_type([-1, 1], [0, 1])
    mu = moments(weighted(t, [1]), t.symbol, 8)
    for k in range(9):
        assert rel(mu[k], mp.factorial(k)) < TOL()


def test_laguerre_half_integer_moments():
    al = mpf(1) / 2
    t = build_type([-(al + 1), 1], [0, 1])
    mu = moments(weighted(t, [1]), t.symbol, 5)
    for k in range(6):
        assert rel(mu[k], mp.gamma(k + al + 1)) < TOL()


def test_jacobi_mass_matches_beta_function():
    al, be = mpf(1) / 2, mpf(-1) / 3
    t = build_type([be - al, -(al + be + 2)], [-1, 0, 1])
    wcs = build_contours(t)
    assert len(wcs.contours) == 1 and t.d == 1
    mu0 = moments(wcs.with_weights([1]), t.symbol, 0)[0]
    exact = mpf(2) ** (al + be + 1) * mp.beta(al + 1, be + 1)
    assert rel(abs(mu0), exact) < mpf(10) ** -40


def test_zero_weights_give_zero_moments():
    t = build_type([0, 0, 0, 2], [1])
    assert all(m == 0 for m in moments(weighted(t, [0, 0, 0]), t.symbol, 6))


def test_weights_required():
    t = build_type([0, 2], [1])
    with pytest.raises(ValueError):
        moments(build_contours(t), t.symbol, 2)


def test_functional_of_one_is_mu0():
    t = build_type([0, 0, 0, 2], [1])
    wcs = weighted(t, [1, mpc(0, 2), -1])
    mu = moments(wcs, t.symbol, 0)
    assert abs(apply_functional(wcs, t.symbol, Polynomial([1])) - mu[0]) < TOL()


def test_freud_three_contours_and_homology():
    t = build_type([0, 0, 0, 2], [1])
    wcs = build_contours(t)
    assert len(wcs.contours) == 3 and len(wcs.extra) == 1
    sums = freud_homology(wcs, t.symbol, 20)
    per = per_contour_moments(wcs, t.symbol, 20)
    for k, v in enumerate(sums):
        assert abs(v) < TOL() * (1 + max(abs(row[k]) for row in per))


def test_freud_mixed_functional_closed_form():
    # R + s iR with R ~ -g1 - g2 and iR ~ -g2 - g3; s purely imaginary
    t = build_type([0, 0, 0, 2], [1])
    s = mpc(0, mpf("0.37"))
    wcs = weighted(t, [-1, -1 - s, -s])
    mu = moments(wcs, t.symbol, 21)
    for j in range(11):
        closed = (1 - (-1) ** j * s.imag) * mpf(2) ** (mpf(2 * j - 3) / 4) * \
            mp.gamma(mpf(2 * j + 1) / 4)
        assert rel(mu[2 * j], closed) < mpf(10) ** -40
        assert abs(mu[2 * j + 1]) < mpf(10) ** -45


def test_freud_equation_of_motion():
    t = build_type([0, 0, 0, 2], [1])
    wcs = weighted(t, [1, mpc("0.3", "-1.2"), mpc("2.5")])
    p = Polynomial.monomial(5)
    q = Polynomial.monomial(3, 2) * p - p.derivative()
    assert abs(apply_functional(wcs, t.symbol, q)) < TOL() * 100


SEMI_TYPES = [
    ([0, 2], [1]),
    ([0, 0, 0, 2], [1]),
    ([mpc(1, 1), -2, 0, 2], [1]),
    ([-1, 1], [0, 1]),
    ([-mpf(3) / 2, 1], [0, 1]),
    ([-mpf(5) / 6, -mpf(13) / 6], [-1, 0, 1]),
    ([2, mpf(7) / 3], [0, 0, 1]),        # non-integer exponent at a double pole
    ([2, 3], [0, 0, 1]),                 # integer exponent: circle
    ([1, 0, 2], [0, 0, 0, 1]),           # two petals
    ([0, 2], [-1, 0, 1]),                # A = B': finite rank
]


@settings(max_examples=20, deadline=None)
@given(st.integers(0, len(SEMI_TYPES) - 1),
       st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=7, max_size=7),
       st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=4, max_size=4))
def test_semiclassical_identity(which, pc, sc):
    A, B = SEMI_TYPES[which]
    t = build_type(A, B)
    base = build_contours(t)
    s = [mpc(a, b) / 2 for a, b in sc[:base.size]]
    if all(x == 0 for x in s):
        s[0] = mpc(1)
    wcs = base.with_weights(s)
    p = Polynomial([mpc(a, b) / 3 for a, b in pc])
    if p.is_zero():
        p = Polynomial([mpc(1)])
    lhs = apply_functional(wcs, t.symbol, t.A * p)
    rhs = apply_functional(wcs, t.symbol, t.B * p.derivative())
    per = per_contour_moments(wcs, t.symbol, int((t.A * p).degree) + 2)
    scale = (1 + sum(abs(x) for row in per for x in row)) * max(abs(x) for x in s) * (1 + p.norm())
    assert abs(lhs - rhs) < mpf(10) ** (-(mp.dps - 15)) * scale


@pytest.mark.parametrize("A,B", [([0, 0, 0, 2], [1]), ([-mpf(3) / 2, 1], [0, 1]),
                                 ([2, mpf(7) / 3], [0, 0, 1])])
def test_truncation_stability(A, B):
    t = build_type(A, B)
    wcs = build_contours(t)
    f = Integrand.powers(6)
    for c in wcs.contours:
        a = integrate_weighted(c, f, t.symbol).value
        b = integrate_weighted(c, f, t.symbol, r_scale=2).value
        for x, y in zip(a, b):
            assert abs(x - y) <= mpf(10) ** (-(mp.dps - 10)) * max(abs(y), 1)


@pytest.mark.parametrize("A,B", [([0, 0, 0, 2], [1]), ([0, 0, 0, 0, 3], [1]),
                                 ([1, 0, 2], [0, 0, 0, 1]), ([0, 2], [-1, 0, 1]),
                                 ([-1, 0, 3], [0, -1, 0, 1])])
def test_pairing_is_identity(A, B):
    t = build_type(A, B)
    sysm = build_system(t)
    poles = [p.location for p in t.poles if not p.at_infinity]
    M = pairing_matrix(sysm, poles)
    k = len(sysm.contours)
    assert M == [[int(i == j) for j in range(k)] for i in range(k)]


def test_bessel_integer_order_is_a_circle():
    t = build_type([2, 3], [0, 0, 1])
    wcs = build_contours(t)
    assert t.d == 1 and len(wcs.contours) == 1 and wcs.contours[0].kind == CIRCLE


def test_unsupported_class():
    with pytest.raises(UnsupportedContourClass):
        build_contours(build_type([1], [-1, 0, 1]))


def test_pole_on_path_is_rejected():
    t = build_type([0, 2], [1])
    c = build_contours(t).contours[0]
    f = Integrand(lambda z: [1 / (z - 2)], 1, 1, (mpc(2),))
    with pytest.raises(PoleOnPathError):
        integrate_weighted(c, f, t.symbol)


def test_avoiding_a_point_keeps_moments():
    t = build_type([0, 0, 0, 2], [1])
    plain = per_contour_moments(build_contours(t), t.symbol, 4)
    moved = per_contour_moments(build_contours(t, avoid=[mpc("0.9", "0.1")]), t.symbol, 4)
    for r1, r2 in zip(plain, moved):
        for x, y in zip(r1, r2):
            assert abs(x - y) < TOL() * (1 + abs(x))


def test_contours_export_polylines():
    t = build_type([0, 0, 0, 2], [1])
    data = build_contours(t).to_json(8, 5.0)
    assert len(data["contours"]) == 3 and len(data["duals"]) == 3
    assert all(len(c["points"]) > 4 for c in data["contours"])
