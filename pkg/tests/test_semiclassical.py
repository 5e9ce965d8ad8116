from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp, mpc, mpf

from fekete.numkernel import Polynomial, RationalPoly
from fekete.semiclassical import (END_POLE, FINITE_RANK, FLAG_POLE, FREUD, HARD_EDGE,
                                  HIGHER_ORDER, PETAL, RAY, SEGMENT, BranchCutError,
                                  CoprimalityError, UnsupportedContourClass, build_type,
                                  eval_theta, steepest_directions, symbol_sum_of_residues)

F = Fraction
TOL = mpf(10) ** -45


def ex(*cs):
    return Polynomial([F(c) if not isinstance(c, complex) else c for c in cs], exact=True)


def angles_mod(xs):
    return sorted(float(mp.fmod(x + 20 * mp.pi, 2 * mp.pi)) for x in xs)


def test_freud_example():
    t = build_type(ex(0, 0, 0, 2), ex(1))
    assert t.d == 3 and t.contour_class == FREUD
    assert t.symbol.theta_prime == RationalPoly(ex(0, 0, 0, -2), ex(1))
    assert abs(eval_theta(t.symbol, 2) + 8) < TOL


def test_laguerre_example():
    alpha = F(1, 2)
    t = build_type(ex(-alpha - 1, 1), ex(0, 1))
    assert t.d == 1 and t.contour_class == RAY
    # theta' = alpha/x - 1
    assert t.symbol.theta_prime == RationalPoly(ex(alpha, -1), ex(0, 1))
    (pole,) = t.finite_poles
    assert pole.kind == END_POLE and abs(pole.residue - mpf("0.5")) < TOL
    assert abs(eval_theta(t.symbol, 4) - (-4 + mpf("0.5") * mp.log(4))) < TOL


def test_bessel_table_pair_gives_reversed_symbol():
    nu = 3
    t = build_type(ex(1, 2 - nu), ex(0, 0, 1))
    assert t.d == 1 and t.contour_class == PETAL
    # -(A+B')/B = -(1 + (4 - nu) x)/x^2
    assert t.symbol.theta_prime == RationalPoly(ex(-1, -(4 - nu)), ex(0, 0, 1))
    (pole,) = t.finite_poles
    dirs = steepest_directions(t, pole)
    # theta ~ +1/x: descent along the negative reals (the cardioid cusp direction)
    assert angles_mod(dirs) == pytest.approx(angles_mod([mp.pi, 0]))
    assert abs(mp.cos(dirs[0]) + 1) < TOL


def test_bessel_symbol_minus_one_over_x():
    # A = -1 - (nu + 2) x realizes theta = -1/x + nu log x exactly
    nu = F(3, 10)
    t = build_type(ex(-1, -(nu + 2)), ex(0, 0, 1))
    assert t.symbol.theta_prime == RationalPoly(ex(1, nu), ex(0, 0, 1))
    (pole,) = t.finite_poles
    dirs = steepest_directions(t, pole)
    assert abs(dirs[0]) < TOL and abs(dirs[1] - mp.pi) < TOL


def test_jacobi_example_and_branch():
    a_, b_ = 1, 1
    # theta = a log(1-x) + b log(1+x): theta' = -a/(1-x) + b/(1+x)
    A = ex(a_ - b_, -(a_ + b_ + 2))   # B = x^2 - 1
    B = ex(-1, 0, 1)
    t = build_type(A, B)
    assert t.contour_class == SEGMENT
    expected = RationalPoly(ex(b_ - a_, -(a_ + b_)), ex(1, 0, -1))
    assert t.symbol.theta_prime == expected
    assert abs(eval_theta(t.symbol, 0)) < TOL
    assert abs(eval_theta(t.symbol, mpf("0.5")) - mp.log(mpf("0.75"))) < TOL
    with pytest.raises(BranchCutError):
        eval_theta(t.symbol, 2)


def test_legendre_has_two_hard_edges():
    t = build_type(ex(0, -2), ex(-1, 0, 1))
    assert t.symbol.theta_prime.is_zero()
    assert sorted(float(p.location.real) for p in t.hard_edges) == [-1.0, 1.0]
    assert t.contour_class == SEGMENT and t.d == 1


def test_hermite_directions_and_freud_directions():
    t = build_type(ex(0, 2), ex(1))
    assert angles_mod(steepest_directions(t, t.infinity)[::2]) == pytest.approx([0, float(mp.pi)])
    t = build_type(ex(0, 0, 0, 2), ex(1))
    dirs = steepest_directions(t, t.infinity)
    assert len(dirs) == 8
    assert angles_mod(dirs[::2]) == pytest.approx([float(k * mp.pi / 2) for k in range(4)])
    for phi in dirs[::2]:
        z = 5 * mp.expj(phi)
        assert eval_theta(t.symbol, z).real < -300
    for phi in dirs[1::2]:
        assert eval_theta(t.symbol, 5 * mp.expj(phi)).real > 300


@pytest.mark.parametrize("lead", [mpc(2), mpc(0, 2), mpc(-1, 3)])
def test_directions_at_infinity_complex_lead(lead):
    t = build_type(Polynomial([0, 0, 0, lead]), Polynomial([mpc(1)]))
    dirs = steepest_directions(t, t.infinity)
    for k, phi in enumerate(dirs):
        val = eval_theta(t.symbol, 6 * mp.expj(phi)).real
        assert val < -500 if k % 2 == 0 else val > 500


@pytest.mark.parametrize("lead", [mpc(1), mpc(0, 1), mpc(-2, 1)])
def test_directions_at_finite_pole_complex_lead(lead):
    # B = z^3, A = lead: theta ~ -(T/2) z^-2 near 0
    t = build_type(Polynomial([lead]), Polynomial([0, 0, 0, mpc(1)]))
    (pole,) = t.finite_poles
    assert pole.d_c == 2
    for k, phi in enumerate(steepest_directions(t, pole)):
        val = t.symbol.theta(mpf("0.05") * mp.expj(phi), logs={0: 0}).real
        assert val < -50 if k % 2 == 0 else val > 50


def test_steepest_directions_rejects_simple_pole():
    t = build_type(ex(F(-3, 2), 1), ex(0, 1))
    with pytest.raises(ValueError):
        steepest_directions(t, t.finite_poles[0])


def test_flag_pole_boundary():
    # residue exactly -1/2 counts as a flag pole
    t = build_type(ex(F(-1, 2), 1), ex(0, 1))
    assert t.finite_poles[0].kind == FLAG_POLE
    t = build_type(ex(F(-51, 100), 1), ex(0, 1))
    assert t.finite_poles[0].kind == END_POLE


def test_monic_normalization():
    t = build_type(ex(0, 4), ex(2))
    assert t.B.coeffs == (1,) and t.A_exact == ex(0, 2)


def test_errors():
    with pytest.raises(CoprimalityError):
        build_type(ex(0, 2), ex(0, 0, 1))
    t = build_type(ex(0, 2), ex(0, 0, 1), allow_nonprime=True)
    assert t.nonprime
    with pytest.raises(UnsupportedContourClass):
        build_type(ex(1), ex(-1, 0, 0, 1))
    with pytest.raises(ValueError):
        build_type(ex(1), Polynomial.zero(exact=True))


def test_finite_rank_family_is_accepted():
    t = build_type(ex(0, 2), ex(-1, 0, 1))  # A = B'
    assert t.contour_class == FINITE_RANK and t.family_k == 1


def test_numeric_inputs_are_accepted():
    t = build_type(Polynomial([mpc(0), mpc(-2), mpc(0), mpc(1)]), Polynomial([mpc(1)]))
    assert t.d == 3 and t.a == 3


int_coeff = st.integers(-4, 4)


@settings(max_examples=30, deadline=None)
@given(st.lists(int_coeff, min_size=1, max_size=5), st.lists(int_coeff, min_size=0, max_size=3),
       st.integers(0, 1))
def test_symbol_identities(acs, bcs, extra_double):
    A = ex(*acs)
    B = ex(*bcs, 1)
    if extra_double:
        B = B * ex(-2, 1) ** 2
    try:
        t = build_type(A, B)
    except (CoprimalityError, UnsupportedContourClass, ValueError):
        return
    s = t.symbol
    # theta' + theta_hat' + B'/B = 0
    total = s.theta_prime + s.theta_hat_prime + RationalPoly(B.derivative(), B)
    assert total.is_zero()
    assert abs(symbol_sum_of_residues(t)) < mpf(10) ** (-50 + 10)
    # log coefficients agree with the pole residues
    fin = t.finite_poles
    assert len(fin) == len(s.log_coeffs)
    for p, r in zip(fin, s.log_coeffs):
        assert p.residue == r
    # theta is an antiderivative of theta' (central difference away from poles)
    z0 = mpc("0.37", "1.91")
    h = mpf(10) ** -20
    try:
        fd = (s.theta(z0 + h) - s.theta(z0 - h)) / (2 * h)
    except BranchCutError:
        return
    assert abs(fd - s.theta_prime_at(z0)) < mpf(10) ** -30 * max(1, abs(fd))
