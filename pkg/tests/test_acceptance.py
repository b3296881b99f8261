"""Acceptance suite: one test per release criterion, at the stated tolerances.

Run with `pytest tests/test_acceptance.py -v -s` to see one PASS line per
criterion. Statistical criteria use fixed seeds and are fully deterministic.
"""

import math
import subprocess
import sys
import time
import warnings
from dataclasses import replace

import numpy as np
import pytest

from bistaticdc import analytic
from bistaticdc.analytic import bw_optimal, kappa_monostatic, kappa_transition, pdc, pdc_sigmac_limit, ptx_max
from bistaticdc.errors import NoCrossingError
from bistaticdc.experiments import log_slope
from bistaticdc.geometry import BistaticLayout, sin_beta_max
from bistaticdc.montecarlo import SimConfig, SimMode, estimate_pdc, histogram_sin_beta, simulate_trials
from bistaticdc.stochastic import RandomStream
from tests.conftest import needs_compiled, reference_scene, reference_system
from tests.test_analytic import random_parameter_set

CLI = [sys.executable, "-m", "bistaticdc"]


def report(name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {status}: {name}" + (f" ({detail})" if detail else ""))
    assert ok, f"{name}: {detail}"


@needs_compiled
def test_criterion_oracle_algebra():
    """Oracle-mode Monte Carlo vs the co-site beam closed form: |z| <= 3 for
    at least 15 of 16 parameter combinations at 1e5 trials, under 30 s
    single-threaded."""
    system = reference_system()
    base = reference_scene()
    variants = {
        "rho": base,
        "4rho": replace(base, clutter_density=0.004),
        "sigma_c_x0.1": replace(base, clutter_rcs_mean=0.1),
        "sigma_c_x10": replace(base, clutter_rcs_mean=10.0),
    }
    start = time.perf_counter()
    passed = 0
    details = []
    for i_k, kappa in enumerate((10.0, 20.0, 50.0, 100.0)):
        for i_v, (label, scene) in enumerate(variants.items()):
            config = SimConfig(trials=100_000, seed=9000 + 10 * i_k + i_v, mode=SimMode.ORACLE, threads=1)
            est = estimate_pdc(system, scene, kappa, config)
            ok = abs(est.z) <= 3.0
            passed += ok
            details.append(f"kappa={kappa:g}/{label}: z={est.z:+.2f}")
    elapsed = time.perf_counter() - start
    report(
        "oracle algebra (16 combos, 1e5 trials)",
        passed >= 15 and elapsed < 30.0,
        f"{passed}/16 within 3 SE, {elapsed:.1f}s; " + "; ".join(details),
    )


@needs_compiled
def test_criterion_power_law_slopes():
    """Analytic slopes of ln(-ln coverage) vs ln(kappa): exactly 4 (noise) and
    3 (clutter, co-site beam) within 1e-6; geometric-mode estimates within
    0.2 at 1e5 trials per point over kappa in [20, 80].

    KNOWN RED: the clutter-only geometric slope cannot reach 3 +/- 0.2. The
    closed form's kappa^3 law rests on replacing the per-angle cell area
    kappa^2*bw^2/sin(beta(theta)) by its minimum over theta (beta =
    beta_max); the spatial simulator integrates the true 1/sin(beta)
    distribution, whose heavy tail near collinear angles is cut off by the
    arena at a kappa-dependent scale, flattening the measured slope to ~2.2
    at the reference beamwidths (~2.6 with narrow beams, so it is not a
    beamwidth artifact). The oracle mode, which realizes the closed form's
    assumptions exactly, does produce slope 3 (printed below as the
    diagnosis); the geometric clause is asserted as stated and fails
    honestly rather than being loosened."""
    system = reference_system()
    scene = reference_scene()
    noise_scene = replace(scene, clutter_density=0.0)
    clutter_system = replace(system, noise_temperature=0.0)

    kappas = np.geomspace(20.0, 80.0, 9)
    ys_noise = [-math.log(pdc(system, noise_scene, float(k)).pdc) for k in kappas]
    ys_clutter = [-math.log(pdc(clutter_system, scene, float(k)).pdc) for k in kappas]
    slope_noise = log_slope(kappas, ys_noise).slope
    slope_clutter = log_slope(kappas, ys_clutter).slope
    analytic_ok = abs(slope_noise - 4.0) < 1e-6 and abs(slope_clutter - 3.0) < 1e-6

    # Oracle-mode slopes: the closed form's assumptions hold exactly, so the
    # estimated exponents recover both power laws (supporting diagnosis).
    grid = [float(k) for k in np.geomspace(20.0, 80.0, 7)]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        oracle_clutter = []
        for i, k in enumerate(grid):
            est = estimate_pdc(clutter_system, scene, k, SimConfig(trials=100_000, seed=600 + i, mode=SimMode.ORACLE))
            oracle_clutter.append(-math.log(est.p_hat))
        oracle_slope = log_slope(grid, oracle_clutter).slope

        # Geometric mode, as the criterion states: 1e5 trials per point over
        # [20, 80]; points whose estimate hits 0 or 1 cannot enter the
        # ln(-ln p) fit and are dropped (noise-only coverage underflows
        # beyond kappa ~ 65 at these parameters).
        xs_n, ys_mc_noise = [], []
        for i, k in enumerate(grid):
            est = estimate_pdc(system, noise_scene, k, SimConfig(trials=100_000, seed=300 + i))
            if 0.0 < est.p_hat < 1.0:
                xs_n.append(k)
                ys_mc_noise.append(-math.log(est.p_hat))
        xs_c, ys_mc_clutter = [], []
        for i, k in enumerate(grid):
            est = estimate_pdc(clutter_system, scene, k, SimConfig(trials=100_000, seed=400 + i))
            if 0.0 < est.p_hat < 1.0:
                xs_c.append(k)
                ys_mc_clutter.append(-math.log(est.p_hat))
    mc_slope_noise = log_slope(xs_n, ys_mc_noise).slope
    mc_slope_clutter = log_slope(xs_c, ys_mc_clutter).slope
    mc_ok = abs(mc_slope_noise - 4.0) <= 0.2 and abs(mc_slope_clutter - 3.0) <= 0.2
    report(
        "power-law slopes",
        analytic_ok and mc_ok,
        f"analytic {slope_noise:.8f}/{slope_clutter:.8f}; "
        f"geometric MC noise {mc_slope_noise:.3f} (tol 0.2), clutter {mc_slope_clutter:.3f} "
        f"(known red: arena-cut 1/sin(beta) tail, see test docstring); "
        f"oracle-mode clutter slope {oracle_slope:.3f}",
    )


def test_criterion_corollary_cross_checks():
    """100 randomized parameter sets: closed forms match their independent
    numeric solvers within 1e-6 (transition range, saturation power,
    monostatic range) and 0.1% (optimal bandwidth); the transition/power
    round trip closes within 1e-9."""
    stream = RandomStream(31337)
    checked = 0
    worst = {"kt": 0.0, "ptx": 0.0, "km": 0.0, "bw": 0.0, "rt": 0.0}
    while checked < 100:
        system, scene = random_parameter_set(stream)
        kappa = scene.layout.baseline * (1.0 + 3.0 * stream.uniform() + 0.6)
        try:
            kt = kappa_transition(system, scene)
        except NoCrossingError:
            continue
        checked += 1
        pm = ptx_max(system, scene, kappa)
        km = kappa_monostatic(system, scene)
        bw = bw_optimal(system, scene, kappa)
        worst["kt"] = max(worst["kt"], kt.rel_diff)
        worst["ptx"] = max(worst["ptx"], pm.rel_diff)
        worst["km"] = max(worst["km"], km.rel_diff)
        worst["bw"] = max(worst["bw"], bw.rel_diff)
        back = kappa_transition(replace(system, transmit_power=pm.closed_form), scene)
        worst["rt"] = max(worst["rt"], abs(back.closed_form - kappa) / kappa)
    ok = (
        worst["kt"] < 1e-6
        and worst["ptx"] < 1e-6
        and worst["km"] < 1e-6
        and worst["bw"] < 1e-3
        and worst["rt"] < 1e-9
    )
    report(
        "corollary cross-checks (100 random sets)",
        ok,
        f"worst rel diffs: transition {worst['kt']:.2e}, power {worst['ptx']:.2e}, "
        f"monostatic {worst['km']:.2e}, bandwidth {worst['bw']:.2e}, round-trip {worst['rt']:.2e}",
    )


def test_criterion_sigmac_saturation():
    """Strong-clutter limit: coverage at clutter RCS 1e6 within 1e-3 of the
    saturation closed form; clutter exponent monotone over a 50-point grid."""
    system = replace(reference_system(), noise_temperature=0.0)
    kappa = 50.0
    limit = pdc_sigmac_limit(system, reference_scene(), kappa)
    at_1e6 = pdc(system, reference_scene(clutter_rcs_mean=1e6), kappa).pdc
    sat_ok = abs(at_1e6 - limit) < 1e-3

    prev = -1.0
    monotone = True
    for s_c in np.geomspace(0.01, 1e6, 50):
        val = analytic.clutter_exponent_beam_cosite(system, reference_scene(clutter_rcs_mean=float(s_c)), kappa)
        monotone = monotone and val >= prev
        prev = val
    report(
        "strong-clutter saturation",
        sat_ok and monotone,
        f"|pdc(1e6) - limit| = {abs(at_1e6 - limit):.2e}, exponent monotone over 50 points: {monotone}",
    )


def test_criterion_distribution_studies():
    """sin(beta) histogram (1e4 trials): maximum-mass bin contains
    sin_beta_max = 0.09987; normalized minimum range (2e3 trials): every
    sample in [0.95 - 1e-6, 1]."""
    hist = histogram_sin_beta(5.0, 50.0, trials=10_000, bins=50, seed=0)
    s_max = sin_beta_max(5.0, 50.0)
    lo, hi = hist.mode_bin
    sinbeta_ok = lo <= s_max <= hi and abs(s_max - 0.09987) < 1e-4

    batch = simulate_trials(
        replace(reference_system(), noise_temperature=0.0),
        reference_scene(clutter_density=0.0),
        50.0,
        SimConfig(trials=2000, seed=0),
    )
    rmin = batch.rmin_over_kappa
    rmin_ok = rmin.min() >= 0.95 - 1e-6 and rmin.max() <= 1.0
    report(
        "distribution studies",
        sinbeta_ok and rmin_ok,
        f"mode bin [{lo:.5f}, {hi:.5f}] contains {s_max:.5f}; "
        f"rmin range [{rmin.min():.6f}, {rmin.max():.6f}]",
    )


@needs_compiled
def test_criterion_geometric_model_bias():
    """Full geometric simulation vs the co-site beam closed form at
    kappa in {30, 50, 80}, 1e5 trials: absolute gap at most 0.05; the gap's
    sign (analytic above the estimate's lower bound) is reported."""
    system = reference_system()
    scene = reference_scene()
    details = []
    ok = True
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for i, kappa in enumerate((30.0, 50.0, 80.0)):
            est = estimate_pdc(system, scene, kappa, SimConfig(trials=100_000, seed=500 + i))
            gap = est.p_hat - est.analytic_pdc
            ok = ok and abs(gap) <= 0.05 and est.analytic_pdc >= est.ci_low
            details.append(f"kappa={kappa:g}: mc-analytic={gap:+.4f}")
    report("geometric model bias", ok, "; ".join(details))


def test_criterion_monotonicity_suite():
    """Since the published absolute curves are not reproducible (their gain
    constant and threshold are unstated), acceptance substitutes sign checks:
    coverage non-increasing in range, density, threshold, temperature,
    bandwidth (beam cell) and non-decreasing in power, gain, target RCS over
    200 random parameter sets."""
    stream = RandomStream(777)
    checked = 0
    ok = True
    eps = 1e-4
    while checked < 200:
        system, scene = random_parameter_set(stream)
        kappa = scene.layout.baseline * (1.0 + 4.0 * stream.uniform() + 0.6)
        base = pdc(system, scene, kappa).pdc
        if not 1e-12 < base < 1.0 - 1e-12:
            continue
        checked += 1
        ok = ok and pdc(system, scene, kappa * (1 + eps)).pdc <= base
        ok = ok and pdc(system, replace(scene, clutter_density=scene.clutter_density * (1 + eps)), kappa).pdc <= base
        ok = ok and pdc(system, replace(scene, threshold=scene.threshold * (1 + eps)), kappa).pdc <= base
        ok = ok and pdc(replace(system, noise_temperature=system.noise_temperature * (1 + eps)), scene, kappa).pdc <= base
        ok = ok and pdc(replace(system, bandwidth=system.bandwidth * (1 + eps)), scene, kappa).pdc <= base
        ok = ok and pdc(replace(system, transmit_power=system.transmit_power * (1 + eps)), scene, kappa).pdc >= base
        ok = ok and pdc(replace(system, gain_constant=system.gain_constant * (1 + eps)), scene, kappa).pdc >= base
        ok = ok and pdc(system, replace(scene, target_rcs_mean=scene.target_rcs_mean * (1 + eps)), kappa).pdc >= base
        if not ok:
            break
    report("monotonicity suite (200 random sets)", ok, f"{checked} parameter sets checked")


def test_criterion_determinism(tmp_path):
    """simulate and sweep with fixed seeds are byte-identical across
    single-threaded and multi-threaded runs."""
    sim_argv = ["simulate", "--kappa", "30", "--trials", "5000", "--seed", "77", "--mode", "geometric"]
    one = subprocess.run(CLI + sim_argv + ["--threads", "1"], capture_output=True, text=True)
    four = subprocess.run(CLI + sim_argv + ["--threads", "4"], capture_output=True, text=True)
    sim_ok = one.returncode == 0 and one.stdout == four.stdout

    out1 = tmp_path / "s1.csv"
    out4 = tmp_path / "s4.csv"
    sweep_argv = ["sweep", "--panel", "d", "--trials", "1000", "--seed", "5", "--mode", "oracle"]
    r1 = subprocess.run(CLI + sweep_argv + ["--out", str(out1), "--threads", "1"], capture_output=True)
    r4 = subprocess.run(CLI + sweep_argv + ["--out", str(out4), "--threads", "4"], capture_output=True)
    sweep_ok = (
        r1.returncode == 0
        and r4.returncode == 0
        and out1.read_bytes() == out4.read_bytes()
        and (tmp_path / "s1.markers.csv").read_bytes() == (tmp_path / "s4.markers.csv").read_bytes()
    )
    report("determinism across thread counts", sim_ok and sweep_ok)
