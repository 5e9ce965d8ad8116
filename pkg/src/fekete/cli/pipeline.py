"""Scenario pipelines: solve, verify, roundtrip, lift, family and the classical suite."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import mpmath
import numpy
from mpmath import mp, mpc, mpf

from .. import __version__
from ..contours import build_contours, moments as contour_moments
from ..degeneracy import (SKIPPED, freud_real_imag_basis, heine_stieltjes_Q, verify_degeneracy,
                          wronskian_check, weighted_set_from_config)
from ..equilibrium import Configuration, SeedSpec, residual, solve
from ..exactfam import (family_orthogonality, family_polynomial, family_sweep, family_weights,
                        lift_primality, sweep_to_csv)
from ..numkernel import PrecisionContext, fmt_complex, parse_exact, to_mpc
from ..semiclassical import FREUD, build_type
from .scenario import Scenario, ScenarioError

OK, ERROR, SKIP = "ok", "error", "skipped"


@dataclass
class RunReport:
    """Everything a scenario run produced.

    Only :meth:`to_json` goes into ``report.json``; it holds no timings or
    other run-dependent data, so re-running a scenario reproduces it byte
    for byte. ``timings`` (seconds per stage) and the raw arrays used for
    CSV and SVG output travel alongside.
    """

    scenario: dict
    checks: dict = field(default_factory=dict)
    stages: list = field(default_factory=list)
    results: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    zeros: list = field(default_factory=list)
    moments: list = field(default_factory=list)
    extra_files: dict = field(default_factory=dict)

    @property
    def failed_stage(self):
        for st in self.stages:
            if st["status"] == ERROR:
                return st["stage"]
        return None

    @property
    def passed(self) -> bool:
        return bool(self.checks) and self.failed_stage is None and all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "scenario": self.scenario,
            "passed": self.passed,
            "checks": dict(sorted(self.checks.items())),
            "stages": self.stages,
            "results": self.results,
            "versions": versions(),
        }


def versions() -> dict:
    return {"fekete": __version__, "mpmath": mpmath.__version__, "numpy": numpy.__version__}


class _Abort(Exception):
    pass


class _Runner:
    def __init__(self, report: RunReport):
        self.report = report

    def __call__(self, stage: str, fn):
        t0 = time.perf_counter()
        try:
            out = fn()
        except Exception as exc:            # recorded with its stage tag, report still written
            self.report.stages.append({"stage": stage, "status": ERROR,
                                       "error": f"{type(exc).__name__}: {exc}"})
            raise _Abort from exc
        finally:
            self.report.timings[stage] = time.perf_counter() - t0
        self.report.stages.append({"stage": stage, "status": OK})
        return out

    def skip(self, stage: str, why: str):
        self.report.stages.append({"stage": stage, "status": SKIP, "reason": why})


def _num(x, digits=12):
    return mp.nstr(x, digits)


def _cplx(z, digits=20):
    return fmt_complex(z, digits)


def _tol(sc: Scenario, key: str, default):
    v = sc.tolerances.get(key)
    if v is None:
        return default
    return mpf(v) if isinstance(v, str) else v


def _poly(coeffs):
    return [parse_exact(c) for c in coeffs]


def build_scenario_type(sc: Scenario):
    return build_type(_poly(sc.A), _poly(sc.B), allow_nonprime=sc.allow_nonprime)


def validate(sc: Scenario):
    """Check module preconditions before any heavy computation.

    Raises
    ------
    ScenarioError
        Wrapping the precondition that fails (coprimality, contour class,
        lifting order, point count).
    """
    if sc.pipeline in ("classical", "family"):
        if sc.pipeline == "family":
            try:
                family_polynomial(_poly(sc.family["B"]), sc.family["k"], 0)
            except (ValueError, ZeroDivisionError) as exc:
                raise ScenarioError(f"family: {exc}") from exc
        return
    with PrecisionContext(sc.digits):
        try:
            t = build_scenario_type(sc)
            if sc.pipeline in ("roundtrip", "verify", "lift"):
                build_contours(t)
        except ValueError as exc:
            raise ScenarioError(f"type (A, B): {type(exc).__name__}: {exc}") from exc
    if sc.pipeline == "verify" and not sc.points:
        raise ScenarioError("verify needs at least one point")
    strategy = sc.seed.get("strategy")
    if strategy == "user-list" and len(sc.seed.get("points", ())) != sc.n:
        raise ScenarioError("seed points must number n")


def _seed(sc: Scenario) -> SeedSpec:
    sd = dict(sc.seed)
    pts = sd.pop("points", None)
    if pts:
        sd["points"] = tuple(to_mpc(p) for p in pts)
    sd.setdefault("jitter", 1e-3)
    sd.setdefault("real_jitter", True)
    return SeedSpec(**sd)


def _type_json(t, digits):
    return {"A": t.A.to_json(digits), "B": t.B.to_json(digits), "d": t.d,
            "class": t.contour_class}


# -------------------------------------------------------------- stages


def _solve_stage(sc, t, run, report):
    tol = _tol(sc, "solver", None)
    cfg = run("solve", lambda: solve(t, sc.n, _seed(sc), tol))
    report.zeros = list(cfg.points)
    report.results["configuration"] = cfg.to_json(sc.digits)
    bound = tol if tol is not None else mpf(10) ** (-max(sc.digits - 5, (2 * sc.digits) // 3))
    report.checks["solver_residual"] = cfg.residual_norm < bound
    return cfg


def _given_points_stage(sc, t, run, report):
    def make():
        pts = tuple(to_mpc(p) for p in sc.points)
        r = residual(t, pts)
        return Configuration(pts, len(pts), max(abs(x) for x in r), True, 0)
    cfg = run("load_points", make)
    report.zeros = list(cfg.points)
    report.results["configuration"] = cfg.to_json(sc.digits)
    bound = _tol(sc, "solver", mpf(10) ** (-(sc.digits - 15)))
    report.checks["solver_residual"] = cfg.residual_norm < bound
    return cfg


def _weights_stage(sc, t, cfg, run, report):
    qtol = _tol(sc, "quadrature", None)
    wcs, raw = run("weights", lambda: weighted_set_from_config(t, cfg, qtol))
    report.results["weights"] = {"normalized": [_cplx(x) for x in wcs.s],
                                 "raw": [_cplx(x) for x in raw]}
    if t.contour_class == FREUD and len(raw) == 3:
        ratio, al, be, mis = freud_real_imag_basis(raw)
        report.results["weights"]["real_imag_basis"] = {
            "s": _cplx(ratio), "alpha": _cplx(al), "beta": _cplx(be), "mismatch": _num(mis, 5)}
    return wcs


def _verify_stages(sc, t, cfg, wcs, run, report):
    digits = sc.digits
    qtol = _tol(sc, "quadrature", None)
    P = cfg.polynomial()
    n = len(cfg.points)
    mu = run("moments", lambda: contour_moments(wcs, t.symbol, 2 * n + t.d, qtol))
    report.moments = mu
    dtol = _tol(sc, "degeneracy", None)
    rep = run("degeneracy", lambda: verify_degeneracy(t, wcs, P, tol=dtol, moment_tol=qtol))
    report.results["degeneracy"] = rep.to_json()
    report.checks["orthogonality"] = rep.passed
    if t.d >= 2 and rep.gap_log10 != SKIPPED:
        report.checks["determinant_gap"] = rep.gap_log10 >= _tol(sc, "gap_log10", 30)
    Q, rel, ok = run("heine_stieltjes", lambda: heine_stieltjes_Q(t, P))
    report.results["heine_stieltjes"] = {"Q": Q.to_json(12), "relative_remainder": _num(rel, 5),
                                         "degree_ok": ok}
    report.checks["heine_stieltjes"] = bool(ok) and rel < _tol(sc, "q_remainder",
                                                               mpf(10) ** (-(digits - 15)))
    vals, spread = run("wronskian", lambda: wronskian_check(t, wcs, P, tol=qtol))
    report.results["wronskian"] = {"values": [_cplx(v, 12) for v in vals],
                                   "spread": _num(spread, 5)}
    report.checks["wronskian"] = spread < _tol(sc, "wronskian", mpf(10) ** (-(digits - 30)))
    return P


def _lift_stages(sc, t, cfg, wcs, P, run, report):
    c = to_mpc(sc.lift["c"])
    dtol = _tol(sc, "degeneracy", None)
    qtol = _tol(sc, "quadrature", None)
    out = []
    for K in sc.lift["K"]:
        L = run(f"lift_K{K}", lambda K=K: lift_primality(t, wcs, P, c, K, dtol, qtol))
        out.append({"K": K, "s_tilde": [_cplx(x, 16) for x in L.s_tilde],
                    "relative": [_num(x, 4) for x in L.relative], "passed": L.passed,
                    "minimal": L.minimal})
        report.checks[f"lift_K{K}"] = L.passed and L.minimal
    report.results["lift"] = {"c": _cplx(c), "orders": out}


def _family_stages(sc, run, report):
    fam = sc.family
    B = _poly(fam["B"])
    k = fam["k"]
    members = []
    for i, C in enumerate(fam.get("C", [0])):
        inst = run(f"family_{i}_exact", lambda C=C: family_polynomial(B, k, C))
        orth = run(f"family_{i}_orthogonality", lambda inst=inst: family_orthogonality(inst))
        exact_ok = inst.lame_residual().is_zero() and all(r == 0 for r in orth)
        report.checks[f"family_{i}_exact"] = exact_ok
        roots = run(f"family_{i}_roots", inst.roots)
        t = build_type(inst.A.to_numeric(), inst.B.to_numeric())
        res = max(abs(x) for x in residual(t, roots))
        report.checks[f"family_{i}_residual"] = res < mpf(10) ** (-(sc.digits - 15))

        def match(inst=inst, t=t, roots=roots):
            from ..degeneracy import weights_from_config
            s = weights_from_config(t, roots)
            ref = [x.to_mpc() for x in family_weights(inst)]
            ratios = [a / b for a, b in zip(s, ref)]
            return max(abs(r - ratios[0]) for r in ratios) / abs(ratios[0])
        spread = run(f"family_{i}_weights", match)
        report.checks[f"family_{i}_weights"] = spread < mpf(10) ** (-(sc.digits // 3))
        members.append({"C": [str(inst.C.re), str(inst.C.im)], "n": inst.n,
                        "P": [[str(c.re), str(c.im)] for c in inst.P.coeffs],
                        "roots": [_cplx(z) for z in roots], "residual": _num(res, 5),
                        "weight_scale_spread": _num(spread, 5)})
        report.zeros.extend(roots)
    report.results["family"] = {"B": [[str(c.re), str(c.im)] for c in
                                      family_polynomial(B, k, 0).B.coeffs],
                                "k": k, "members": members}
    if fam.get("C_grid"):
        rows = run("family_sweep", lambda: family_sweep(B, k, fam["C_grid"]))
        report.extra_files["family_sweep.csv"] = sweep_to_csv(rows)


def run_scenario(sc: Scenario) -> RunReport:
    """Execute a validated scenario at its precision; stage failures end the run early."""
    report = RunReport(sc.echo())
    run = _Runner(report)
    with PrecisionContext(sc.digits):
        try:
            if sc.pipeline == "family":
                _family_stages(sc, run, report)
                return report
            t = run("type", lambda: build_scenario_type(sc))
            report.results["type"] = _type_json(t, 20)
            if sc.pipeline == "verify":
                cfg = _given_points_stage(sc, t, run, report)
            else:
                cfg = _solve_stage(sc, t, run, report)
            if sc.pipeline == "solve":
                return report
            wcs = _weights_stage(sc, t, cfg, run, report)
            P = _verify_stages(sc, t, cfg, wcs, run, report)
            if sc.pipeline == "lift":
                _lift_stages(sc, t, cfg, wcs, P, run, report)
        except _Abort:
            pass
    return report


def run_roundtrip(sc: Scenario) -> RunReport:
    """solve, recover weights, moments, degeneracy, Heine-Stieltjes and Wronskian checks."""
    if sc.pipeline != "roundtrip":
        raise ScenarioError("not a roundtrip scenario")
    return run_scenario(sc)


# ------------------------------------------------------------ classical


@dataclass(frozen=True)
class ClassicalRow:
    """A classical weight: its type (A, B) and a three-term recurrence oracle."""

    name: str
    A: tuple
    B: tuple
    recurrence: object        # n -> (diag, offdiag)


def _hermite_rec(n):
    return [mpf(0)] * n, [mp.sqrt(mpf(k) / 2) for k in range(1, n)]


def _laguerre_rec(alpha):
    def rec(n):
        return ([2 * k + alpha + 1 for k in range(n)],
                [mp.sqrt(k * (k + alpha)) for k in range(1, n)])
    return rec


def _jacobi_rec(al, be):
    def rec(n):
        diag, off = [], []
        for k in range(n):
            s = 2 * k + al + be
            diag.append((be ** 2 - al ** 2) / (s * (s + 2)) if s != 0 else (be - al) / (al + be + 2))
        for k in range(1, n):
            s = 2 * k + al + be
            off.append(mp.sqrt(4 * k * (k + al) * (k + be) * (k + al + be) /
                               (s ** 2 * (s + 1) * (s - 1))))
        return diag, off
    return rec


def classical_rows() -> list:
    """Hermite (with ``A = 2z``), Laguerre for alpha 0 and 1/2, Legendre.

    The weight ``e^theta`` with ``theta' = -(A + B')/B`` fixes the signs:
    ``A = 2z`` gives ``e^{-z^2}``; ``A = z - alpha - 1, B = z`` gives
    ``z^alpha e^{-z}``; ``A = (be - al) - (al + be + 2) z, B = z^2 - 1``
    gives the Jacobi weight.
    """
    half = mpf(1) / 2
    return [
        ClassicalRow("hermite", ("0", "2"), ("1",), _hermite_rec),
        ClassicalRow("laguerre_a0", ("-1", "1"), ("0", "1"), _laguerre_rec(mpf(0))),
        ClassicalRow("laguerre_a1_2", ("-3/2", "1"), ("0", "1"), _laguerre_rec(half)),
        ClassicalRow("jacobi_a0_b0", ("0", "-2"), ("-1", "0", "1"), _jacobi_rec(mpf(0), mpf(0))),
    ]


def golub_welsch_nodes(diag, off) -> list:
    """Eigenvalues of the symmetric tridiagonal Jacobi matrix, ascending."""
    n = len(diag)
    m = mp.matrix(n, n)
    for k in range(n):
        m[k, k] = diag[k]
    for k in range(n - 1):
        m[k, k + 1] = m[k + 1, k] = off[k]
    ev = mp.eigsy(m, eigvals_only=True)
    return sorted(mpf(ev[i]) for i in range(n))


def run_classical_case(row: ClassicalRow, n: int, digits: int = 50, rng_seed: int = 0,
                       jitter: float = 1e-3) -> RunReport:
    """Solve from jittered classical seeds and compare with the Jacobi-matrix zeros."""
    sc = {"name": f"{row.name}_n{n}", "pipeline": "classical", "A": list(row.A),
          "B": list(row.B), "n": n, "digits": digits,
          "seed": {"strategy": "classical-zeros", "jitter": jitter, "rng_seed": rng_seed,
                   "real_jitter": True}}
    report = RunReport(sc)
    run = _Runner(report)
    with PrecisionContext(digits):
        try:
            t = run("type", lambda: build_type(_poly(row.A), _poly(row.B)))
            seed = SeedSpec(jitter=jitter, rng_seed=rng_seed, real_jitter=True)
            cfg = run("solve", lambda: solve(t, n, seed))
            report.zeros = list(cfg.points)
            report.results["configuration"] = cfg.to_json(digits)
            report.checks["solver_residual"] = cfg.residual_norm < mpf(10) ** (-(digits - 10))
            oracle = run("oracle", lambda: golub_welsch_nodes(*row.recurrence(n)))
            got = sorted(cfg.points, key=lambda z: z.real)
            err = max(abs(a - b) for a, b in zip(got, oracle))
            report.results["oracle_max_error"] = _num(err, 5)
            report.checks["oracle_match"] = err < mpf(10) ** (-(digits - 15))
            wcs, _ = run("weights", lambda: weighted_set_from_config(t, cfg))
            rep = run("degeneracy", lambda: verify_degeneracy(t, wcs, cfg.polynomial()))
            report.results["degeneracy"] = rep.to_json()
            report.checks["orthogonality"] = rep.passed
        except _Abort:
            pass
    return report


def run_classical_suite(ns=(2, 5, 10), digits: int = 50, rng_seed: int = 0) -> list:
    """Every classical row at every n (sequentially; see the CLI for parallel runs)."""
    return [run_classical_case(row, n, digits, rng_seed) for row in classical_rows() for n in ns]
