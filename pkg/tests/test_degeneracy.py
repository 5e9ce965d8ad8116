import pytest
from mpmath import mp, mpc, mpf

from fekete.contours import build_contours, moments, per_contour_moments
from fekete.degeneracy import (BASEPOINT, ContourProximityError, SingularHankelError,
                               caustic_weights, freud_real_imag_basis, hankel_det,
                               heine_stieltjes_Q, min_abs_eigenvalue, orthopoly_determinant_form,
                               orthopoly_from_moments, raw_weights, remainder_fn,
                               verify_degeneracy, weighted_set_from_config, weights_from_config,
                               wronskian_check)
from fekete.equilibrium import SeedSpec, solve
from fekete.numkernel import Polynomial, PrecisionContext
from fekete.semiclassical import build_type


GENERIC = [mpc(1), mpc("0.3", "0.7"), mpc("-0.4", "0.1")]


def hermite_moments(k_max):
    rp = mp.sqrt(mp.pi)
    out = []
    for k in range(k_max + 1):
        out.append(mpc(0) if k % 2 else rp * mp.fac2(k - 1) / mpf(2) ** (k // 2))
    return out


@pytest.fixture(scope="module")
def freud10():
    # module fixtures run before the per-test precision fixture
    with PrecisionContext(50, 10):
        t = build_type([0, 0, 0, 2], [1])
        cfg = solve(t, 10, SeedSpec(jitter=1e-3, real_jitter=True))
        wcs, raw = weighted_set_from_config(t, cfg)
    return t, cfg, wcs, raw


# ---------------------------------------------------------------- Hankel

def test_hankel_det_examples():
    mu = hermite_moments(4)
    assert abs(hankel_det(mu, 1, 0).value - mp.pi / 2) < mpf(10) ** -45
    assert abs(hankel_det(mu, 0, 0).value - mp.sqrt(mp.pi)) < mpf(10) ** -45
    D = hankel_det(mu, 1, 0)
    assert abs(D.log10_abs - mp.log10(mp.pi / 2)) < mpf(10) ** -45


def test_min_abs_eigenvalue_examples():
    eye = [[1 if i == j else 0 for j in range(3)] for i in range(3)]
    assert abs(min_abs_eigenvalue(eye).modulus - 1) < mpf(10) ** -40
    tiny = mpf(10) ** -40
    est = min_abs_eigenvalue([[1, 0], [0, tiny]])
    assert abs(est.modulus - tiny) < tiny * mpf(10) ** -20


def test_orthopoly_examples():
    P = orthopoly_from_moments(hermite_moments(4), 2)
    assert abs(P[0] + mpf(1) / 2) < mpf(10) ** -45 and abs(P[1]) < mpf(10) ** -45
    lag = [mp.factorial(k) for k in range(4)]
    P1 = orthopoly_from_moments(lag, 1)
    assert abs(P1[0] + 1) < mpf(10) ** -45
    assert orthopoly_from_moments([mpc(3)], 0).degree == 0


def test_determinant_form_is_scaled_linear_system_form():
    mu = [mp.factorial(k) for k in range(8)]
    n = 3
    monic = orthopoly_from_moments(mu, n)
    raw = orthopoly_determinant_form(mu, n)
    D = hankel_det(mu, n - 1, 0).value
    for k in range(n + 1):
        assert abs(raw[k] - D * monic[k]) < mpf(10) ** -40 * abs(D)


def test_singular_hankel_is_reported():
    mu = [mpc(1)] * 6          # rank-one Hankel matrix
    with pytest.raises(SingularHankelError):
        orthopoly_from_moments(mu, 2)


# -------------------------------------------------------- Heine-Stieltjes

def test_heine_stieltjes_hermite():
    t = build_type([0, 2], [1])
    mu = hermite_moments(12)
    for n in (2, 4, 6):
        P = orthopoly_from_moments(mu, n)
        Q, rel, ok = heine_stieltjes_Q(t, P)
        assert rel < mpf(10) ** -40 and ok
        assert Q.degree == 0 and abs(Q[0] + 2 * n) < mpf(10) ** -40


def test_heine_stieltjes_laguerre_and_negative_control():
    t = build_type([-1, 1], [0, 1])
    Q, rel, ok = heine_stieltjes_Q(t, Polynomial([-1, 1]))
    assert rel == 0 and Q[0] == -1
    Q, rel, ok = heine_stieltjes_Q(t, Polynomial([mpc("0.3", "1"), 2, -1, 1]))
    assert rel > mpf("1e-3")


# ----------------------------------------------------- weight recovery

def test_weights_reproduce_reference_value(freud10):
    t, cfg, wcs, raw = freud10
    s, alpha, beta, mismatch = freud_real_imag_basis(raw)
    assert abs(s - mpc(0, mpf("1.349595e-5"))) < mpf("1e-3") * mpf("1.349595e-5")
    assert mismatch < mpf(10) ** -40


def test_weights_are_normalized(freud10):
    t, cfg, wcs, raw = freud10
    assert max(abs(x) for x in wcs.s) == 1
    assert any(x == 1 for x in wcs.s)


def test_single_contour_types_get_unit_weight():
    t = build_type([-1, 1], [0, 1])
    cfg = solve(t, 4, SeedSpec(jitter=1e-4, real_jitter=True))
    assert weights_from_config(t, cfg) == [1]


def test_weights_refuse_nonintegrable_case():
    from fekete.degeneracy import WeightRecoveryError
    t = build_type([1, 8], [0, 0, 1])
    cfg = type("C", (), {"points": (mpc(1),), "diameter": lambda self: mpf(1)})()
    with pytest.raises(WeightRecoveryError):
        raw_weights(t, cfg)


# ------------------------------------------------------------ roundtrip

def test_roundtrip_recovers_configuration(freud10):
    t, cfg, wcs, raw = freud10
    n = cfg.n
    mu = [mp.fsum(s * row[k] for s, row in zip(wcs.s, per_contour_moments(wcs, t.symbol, 2 * n)))
          for k in range(2 * n + 1)]
    P = orthopoly_from_moments(mu, n)
    got = sorted(P.roots(), key=lambda z: (mp.nstr(z.real, 12), mp.nstr(z.imag, 12)))
    want = sorted(cfg.points, key=lambda z: (mp.nstr(z.real, 12), mp.nstr(z.imag, 12)))
    assert max(abs(a - b) for a, b in zip(got, want)) < mpf(10) ** (-(mp.dps // 3))
    rep = verify_degeneracy(t, wcs, P)
    assert rep.passed and len(rep.orth_residuals) == n + 2
    Q, rel, ok = heine_stieltjes_Q(t, P)
    assert ok and Q.degree <= t.d - 1


def test_degenerate_report_and_gap(freud10):
    t, cfg, wcs, raw = freud10
    rep = verify_degeneracy(t, wcs, cfg.polynomial())
    assert rep.passed
    assert rep.gap_log10 > 30
    D0, D1 = rep.D_n0, rep.D_n1_list[0]
    assert D1.log10_abs - D0.log10_abs < -30
    data = rep.to_json()
    assert data["passed"] and len(data["log10_min_eig_n1"]) == 2
    assert rep.to_csv().splitlines()[0] == "quantity,k,log10_abs"


def test_perturbed_zero_breaks_degeneracy(freud10):
    t, cfg, wcs, raw = freud10
    pts = list(cfg.points)
    pts[0] += mpf("1e-3")
    rep = verify_degeneracy(t, wcs, Polynomial.from_roots(pts), eigen=False)
    assert not rep.passed
    assert rep.orth_relative[cfg.n + 1] > rep.tol


@pytest.mark.parametrize("A,B,n", [([-1, 1], [0, 1], 5), ([-mpf(5) / 6, -mpf(13) / 6],
                                                          [-1, 0, 1], 4)])
def test_classical_types_are_maximally_degenerate(A, B, n):
    t = build_type(A, B)
    cfg = solve(t, n, SeedSpec(jitter=1e-4, real_jitter=True))
    wcs, _ = weighted_set_from_config(t, cfg)
    rep = verify_degeneracy(t, wcs, cfg.polynomial())
    assert rep.passed and rep.ell == 0
    # genericity guard: no zero sits on a root of B
    for p in t.poles:
        if not p.at_infinity:
            assert min(abs(z - p.location) for z in cfg.points) > mpf(10) ** (-(mp.dps // 3))


# ----------------------------------------------------------- remainder

def test_remainder_methods_agree(freud10):
    t, cfg, wcs, raw = freud10
    P = cfg.polynomial()
    for z in (mpc(3, 1), mpc("0.3", "0.2"), mpc(-2, "2.5")):
        a = remainder_fn(t, wcs, P, z)
        b = remainder_fn(t, wcs, P, z, method=BASEPOINT)
        assert abs(a - b) < mpf(10) ** -35 * abs(a)


@pytest.mark.parametrize("A,B,n", [([1, 0, 2], [0, 0, 0, 1], 4), ([-1, 0, 3], [0, -1, 0, 1], 4)])
def test_remainder_methods_agree_on_finite_poles(A, B, n):
    t = build_type(A, B)
    cfg = solve(t, n, SeedSpec(jitter=1e-2, rng_seed=1))
    wcs, _ = weighted_set_from_config(t, cfg)
    P = cfg.polynomial()
    for z in (mpc(3, 1), mpc("0.3", "0.2")):
        a = remainder_fn(t, wcs, P, z)
        b = remainder_fn(t, wcs, P, z, method=BASEPOINT)
        assert abs(a - b) < mpf(10) ** -30 * abs(a)


def test_remainder_decay_separates_maximal_from_ordinary(freud10):
    t, cfg, wcs, raw = freud10
    n, d = cfg.n, t.d
    u = mp.expjpi(mpf(1) / 4)
    R10 = remainder_fn(t, wcs, cfg.polynomial(), 10 * u)
    R20 = remainder_fn(t, wcs, cfg.polynomial(), 20 * u)
    assert abs(mp.log(abs(R10 / R20), 2) - (n + d)) < mpf("0.3")
    # generic weights: a single sector has extra symmetry and extra orthogonality
    plain = build_contours(t).with_weights(GENERIC)
    mu = moments(plain, t.symbol, 2 * n)
    P = orthopoly_from_moments(mu, n)
    R10 = remainder_fn(t, plain, P, 10 * u)
    R20 = remainder_fn(t, plain, P, 20 * u)
    assert abs(mp.log(abs(R10 / R20), 2) - (n + 1)) < mpf("0.3")


def test_remainder_vanishes_for_zero_weights():
    t = build_type([0, 0, 0, 2], [1])
    wcs = build_contours(t).with_weights([0, 0, 0])
    assert remainder_fn(t, wcs, Polynomial([1, 0, 1]), mpc(2, 1)) == 0


def test_remainder_rejects_points_on_contours():
    t = build_type([0, 2], [1])
    wcs = build_contours(t).with_weights([1])
    with pytest.raises(ContourProximityError):
        remainder_fn(t, wcs, Polynomial([1]), mpc(3, 0))


# ----------------------------------------------------------- Wronskian

def test_wronskian_constant_for_maximal_degeneracy(freud10):
    t, cfg, wcs, raw = freud10
    values, spread = wronskian_check(t, wcs, cfg.polynomial())
    assert len(values) == 5 and spread < mpf(10) ** (-(mp.dps // 2))
    # with the dual-integral weights the constant is -1/(2 pi i)
    j = max(range(3), key=lambda i: abs(raw[i]))
    lam = wcs.s[j] / raw[j]
    assert abs(values[0] / lam + 1 / (2j * mp.pi)) < mpf(10) ** -30


def test_wronskian_not_constant_below_maximal_degeneracy():
    t = build_type([0, 0, 0, 2], [1])
    wcs = build_contours(t).with_weights(GENERIC)
    P = orthopoly_from_moments(moments(wcs, t.symbol, 12), 6)
    pts = [mpc(r, mpf(r) / 2) for r in ("0.5", "1.1", "1.7", "2.3", "2.9")]
    _, spread = wronskian_check(t, wcs, P, pts)
    assert spread > mpf("1e-3")


def test_wronskian_zero_weights():
    t = build_type([0, 0, 0, 2], [1])
    wcs = build_contours(t).with_weights([0, 0, 0])
    values, spread = wronskian_check(t, wcs, Polynomial([1, 0, 1]), [mpc(1, 1), mpc(2, -1)])
    assert all(v == 0 for v in values) and spread == 0


# ------------------------------------------------------------- caustic

def test_caustic_collapses_determinant_form():
    # the even quartic has a double root on this locus; a linear term breaks the symmetry
    t = build_type([mpf("0.3"), 1, 0, 2], [1])
    wcs = build_contours(t)
    n = 3
    per = per_contour_moments(wcs, t.symbol, 2 * n + 2)
    res = caustic_weights(per, n)
    assert abs(res.D_n0) < mpf(10) ** -40 and abs(res.D_n1) < mpf(10) ** -40
    assert res.relative < mpf(10) ** -25
