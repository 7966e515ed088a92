"""Acceptance criteria 1-10; each test prints one PASS/FAIL line to the terminal."""

import io
import math

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from giantqed import cli, oracles, sweeps, three_level, two_level
from giantqed.core import IncidentPair, ThreeLevelParams, TwoLevelParams, gamma_pm
from giantqed.errors import DegenerateDenominator, DivergentNormalization

PI = math.pi
W0 = 100.0
THETAS = (0.0, 0.5 * PI, 0.75 * PI, 0.85 * PI)


@pytest.fixture
def report(capsys):
    def emit(number, title, passed, detail=""):
        with capsys.disabled():
            print(f"\n{'PASS' if passed else 'FAIL'} criterion {number}: {title} {detail}".rstrip())
        assert passed, detail
    return emit


@pytest.fixture(scope="module")
def suite():
    return oracles.run_verification_suite("all")


def test_criterion_01_pole_regression(report):
    reference = {
        0.5: ((1.03, -0.97), (-0.032, -0.03)),
        0.75: ((0.78, -0.27), (-0.072, -0.025)),
        0.85: ((0.56, -0.091), (-0.11, -0.017)),
    }
    worst = 0.0
    for frac, pair in reference.items():
        gpl, gmi = gamma_pm(ThreeLevelParams(W0, 1.0, frac * PI, 0.5))
        for got, (re, im) in zip((gpl, gmi), pair):
            worst = max(worst, abs(got.real - W0 - re), abs(got.imag - im))
    report(1, "pole regression", worst <= 0.005, f"max component error {worst:.2e} (tol 5e-3)")


def test_criterion_02_two_level_peak_law(report):
    worst_h = worst_x = 0.0
    for th in THETAS:
        p = TwoLevelParams(W0, 1.0, th)
        centre = W0 + math.sin(th)
        res = minimize_scalar(lambda k: -two_level.total_incoherent_F2(p, k), bounds=(centre - 1, centre + 1),
                              method="bounded", options={"xatol": 1e-10})
        height = 4 / (PI * (1 + math.cos(th)))
        worst_h = max(worst_h, abs(-res.fun - height) / height)
        worst_x = max(worst_x, abs(res.x - centre))
    ok = worst_h <= 1e-6 and worst_x <= 1e-6
    report(2, "two-level peak law", ok, f"height rel {worst_h:.2e}, location {worst_x:.2e} (tol 1e-6)")


def test_criterion_03_enhancement_ratio(report):
    r = two_level.f2_peak(TwoLevelParams(W0, 1.0, 0.85 * PI))[1] / two_level.f2_peak(TwoLevelParams(W0, 1.0, 0.0))[1]
    expect = 2 / (1 + math.cos(0.85 * PI))
    rel = abs(r - expect) / expect
    report(3, "enhancement ratio", rel <= 1e-9, f"ratio {r:.6f}, rel {rel:.2e} (tol 1e-9)")


def test_criterion_04_fluorescence_quenching(report):
    x = np.linspace(0, 60, 601)
    worst_f = worst_g = 0.0
    for th in THETAS:
        for rabi in (0.5, 5.0):
            p = ThreeLevelParams(W0, 1.0, th, rabi)
            worst_f = max(worst_f, abs(three_level.total_F3(p, W0)))
            worst_g = max(worst_g, float(np.max(np.abs(three_level.g2_three_level(p, W0, x, "R") - 1))))
    ok = worst_f <= 1e-10 and worst_g <= 1e-10
    report(4, "fluorescence quenching", ok, f"|F(w0)| {worst_f:.1e}, |g2-1| {worst_g:.1e} (tol 1e-10)")


def test_criterion_05_oracle_equivalence(report, suite):
    kinds = {".F_vs_bound_norm": 1e-6, ".S_vs_fourier": 1e-6, ".F_vs_spectrum": 1e-5}
    picked = [r for r in suite if any(k in r.name for k in kinds)]
    tol_ok = all(r.tolerance <= kinds[next(k for k in kinds if k in r.name)] for r in picked)
    bad = [r.name for r in picked if not r.passed]
    worst = max(r.relative_error for r in picked)
    ok = len(picked) == 3 * (24 + 72) and tol_ok and not bad
    report(5, "oracle equivalence", ok, f"{len(picked)} comparisons, worst rel {worst:.2e}, failures {len(bad)}")


def test_criterion_06_limit_reductions(report, suite):
    reduction = [r for r in suite if r.name.startswith("three_level.rabi_zero_limit.")]
    red_ok = len(reduction) == 6 and all(r.passed and r.tolerance <= 1e-3 for r in reduction)
    k = np.linspace(95, 105, 101)
    zero = True
    p2 = TwoLevelParams(W0, 1.0, PI)
    p3 = ThreeLevelParams(W0, 1.0, PI, 0.5)
    pair = IncidentPair(W0 + 0.3, W0 - 0.2)
    x = np.linspace(0, 10, 11)
    zero &= np.all(two_level.bound_state2(p2, pair, x) == 0)
    zero &= np.all(three_level.bound_state3(p3, pair, x) == 0)
    zero &= np.all(two_level.total_incoherent_F2(p2, k) == 0)
    zero &= np.all(three_level.total_F3(p3, k) == 0)
    for chi in (two_level.chi2(p2, k), three_level.chi3(p3, k)):
        zero &= all(np.all(c == 0) for c in chi)
    worst = max(r.relative_error for r in reduction)
    report(6, "limit reductions", bool(red_ok and zero), f"Rabi 1e-4 worst rel {worst:.2e} (tol 1e-3), decoupled zeros {bool(zero)}")


def test_criterion_07_statistics_signatures(report):
    two_map = sweeps.sweep_chi_map("two_level", TwoLevelParams(W0, 1.0, 0.0), workers=4)
    three_map = sweeps.sweep_chi_map("three_level", ThreeLevelParams(W0, 1.0, 0.0, 0.5), workers=4)
    min_r = max_l = None
    for ds in (two_map, three_map):
        r, l = ds.array("chi_R"), ds.array("chi_L")
        min_r = np.nanmin(r) if min_r is None else min(min_r, np.nanmin(r))
        max_l = np.nanmax(l) if max_l is None else max(max_l, np.nanmax(l))
    signs = min_r >= -1e-12 and max_l <= 1e-12
    g0 = []
    for th in THETAS:
        for k in (98.7, 99.6, 100.4, 101.9):
            g0.append(two_level.g2_two_level(TwoLevelParams(W0, 1.0, th), k, 0.0, "L"))
            try:
                g0.append(three_level.g2_three_level(ThreeLevelParams(W0, 1.0, th, 0.5), k, 0.0, "L"))
            except DivergentNormalization:
                pass
    g0_ok = all(v == 0 for v in g0)
    cr, cl = two_level.chi2(TwoLevelParams(W0, 1.0, 0.0), W0)
    res_ok = abs(cr - 1) <= 1e-12 and abs(cl + 1) <= 1e-12
    detail = f"min chi_R {min_r:.1e}, max chi_L {max_l:.1e}, max g2_L(0) {max(g0):.1e}, chi(w0) ({cr:.12f}, {cl:.12f})"
    report(7, "statistics signatures", bool(signs and g0_ok and res_ok), detail)


def test_criterion_08_flux_conservation(report):
    rng = np.random.default_rng(8)
    worst2 = worst3 = 0.0
    n2 = n3 = 0
    while n2 < 1000:
        th, dk = rng.uniform(0, 2 * PI), rng.uniform(-20, 20)
        try:
            a = two_level.amplitudes2(TwoLevelParams(W0, 1.0, th), W0 + dk)
        except DegenerateDenominator:
            continue
        worst2 = max(worst2, abs(a.flux - 1))
        n2 += 1
    while n3 < 1000:
        th, dk = rng.uniform(0, 2 * PI), rng.uniform(-20, 20)
        rabi, delta = rng.uniform(0, 10), rng.uniform(-5, 5)
        try:
            a = three_level.amplitudes3(ThreeLevelParams(W0, 1.0, th, rabi, delta), W0 + dk)
        except DegenerateDenominator:
            continue
        worst3 = max(worst3, abs(a.flux - 1))
        n3 += 1
    ok = worst2 <= 1e-12 and worst3 <= 1e-12
    report(8, "flux conservation", ok, f"worst deviation {worst2:.1e} / {worst3:.1e} over 1000+1000 draws (tol 1e-12)")


def test_criterion_09_divergence_handling(report):
    grid = sweeps.GridSpec("x", 0, 10, 11)
    cases = [("two_level", TwoLevelParams(W0, 1.0, th), W0 + math.sin(th)) for th in THETAS]
    cases += [("three_level", ThreeLevelParams(W0, 1.0, 0.0, rabi), W0 + s * rabi / 2)
              for rabi in (0.5, 5.0) for s in (-1, 1)]
    ok = True
    for model, p, k in cases:
        ds = sweeps.sweep_g2(model, p, k, "R", grid)
        ok &= ds.header["status"] == sweeps.DIVERGENT
        ok &= all(r[1] is None and r[2] == sweeps.DIVERGENT for r in ds.rows)
        fn = two_level.g2_two_level if model == "two_level" else three_level.g2_three_level
        with pytest.raises(DivergentNormalization):
            fn(p, k, 0.0, "R")
    report(9, "divergence handling", bool(ok), f"{len(cases)} cases flagged divergent")


def test_criterion_10_determinism(report, monkeypatch):
    outs = []
    for workers in (1, 4, 1, 8):
        outs.append(sweeps.sweep_F_three_level(ThreeLevelParams(W0, 1.0, 0.85 * PI, 0.5), workers=workers).to_csv())
    cli_runs = []
    for _ in range(2):
        buf = io.StringIO()
        cli.main(["chi", "--k-steps", "41", "--theta-steps", "41", "--workers", "3"], stdout=buf)
        cli_runs.append(buf.getvalue())
    identical = len(set(outs)) == 1 and cli_runs[0] == cli_runs[1]
    good = cli.main(["verify"], stdout=io.StringIO())
    real = three_level.total_F3
    monkeypatch.setattr(three_level, "total_F3", lambda *a, **k: 1.0001 * real(*a, **k))
    corrupted = cli.main(["verify"], stdout=io.StringIO())
    ok = identical and good == 0 and corrupted == 3
    report(10, "determinism", ok, f"byte-identical {identical}, verify exit {good}, corrupted exit {corrupted}")
