import math

import numpy as np
import pytest

from bistaticdc import analytic
from bistaticdc.errors import SplitRegimeError
from bistaticdc.geometry import (
    BistaticLayout,
    CellKind,
    cell_area_beamwidth,
    cell_area_range,
    sin_beta_max,
    solve_geometry,
    target_position,
)
from bistaticdc.montecarlo import (
    RangeBinRule,
    SimConfig,
    SimMode,
    estimate_pdc,
    histogram_rmin,
    histogram_sin_beta,
    in_beam_cell,
    in_range_cell,
    run_trial,
    simulate_trials,
    wilson_interval,
    z_score,
)
from bistaticdc.stochastic import RandomStream
from tests.conftest import DEG5, needs_compiled, reference_scene, reference_system


class TestWilson:
    def test_published_value(self):
        # Wilson 95% interval for 8 successes in 10 trials: (0.490, 0.943).
        lo, hi = wilson_interval(8, 10)
        assert lo == pytest.approx(0.4901, abs=5e-4)
        assert hi == pytest.approx(0.9433, abs=5e-4)

    def test_contains_p_hat(self):
        for k, n in ((0, 50), (50, 50), (1, 17), (33, 40)):
            lo, hi = wilson_interval(k, n)
            assert lo <= k / n <= hi
            assert 0.0 <= lo <= hi <= 1.0

    def test_z_score_edges(self):
        assert z_score(0.5, 0.5, 100) == 0.0
        assert z_score(1.0, 1.0, 100) == 0.0
        assert z_score(0.9, 1.0, 100) == -math.inf
        assert z_score(0.6, 0.5, 100) == pytest.approx(2.0, rel=1e-12)


class TestBeamCellMembership:
    def test_target_itself_inside(self):
        layout = BistaticLayout(5.0)
        tgt = target_position(5.0, 50.0, 1.1)
        assert in_beam_cell(layout, tgt, tgt, DEG5, DEG5)

    def test_point_behind_transmitter_outside(self):
        layout = BistaticLayout(5.0)
        tgt = target_position(5.0, 50.0, math.pi / 2.0)  # roughly (0, +50)
        assert not in_beam_cell(layout, tgt, (2.5, -80.0), DEG5, DEG5)

    @staticmethod
    def _mc_area(L, kappa, theta, bw, n_points, seed=12345):
        layout = BistaticLayout(L)
        sol = solve_geometry(L, kappa, theta)
        tgt = target_position(L, kappa, theta)
        half = 1.3 * kappa * bw / math.sin(sol.bistatic_angle)
        rng = np.random.default_rng(seed)  # independent generator for the oracle
        xs = rng.uniform(tgt[0] - half, tgt[0] + half, n_points)
        ys = rng.uniform(tgt[1] - half, tgt[1] + half, n_points)
        hits = sum(1 for x, y in zip(xs, ys) if in_beam_cell(layout, tgt, (x, y), bw, bw))
        return hits / n_points * (2.0 * half) ** 2, sol

    @pytest.mark.parametrize(
        "L,kappa,theta,n_points",
        [
            (10.0, 30.0, math.pi / 2.0, 1_000_000),
            (10.0, 40.0, 2.0, 300_000),
            (12.0, 30.0, 1.2, 300_000),
        ],
    )
    def test_area_estimate_matches_formula(self, L, kappa, theta, n_points):
        # Monte Carlo area of the accepted region vs the closed-form cell
        # area within 2%. Valid where the cell formula itself is: the crossing
        # angle beta must clear the summed half-beamwidths by a wide margin
        # (1-degree beams here), else the sector intersection diverges.
        bw = math.radians(1.0)
        area, sol = self._mc_area(L, kappa, theta, bw, n_points)
        assert sol.bistatic_angle > 10.0 * bw
        expected = cell_area_beamwidth(kappa, bw, bw, sol.bistatic_angle)
        assert area == pytest.approx(expected, rel=0.02)

    def test_near_parallel_beams_exceed_formula(self):
        # With 5-degree beams at kappa/L = 10, beta_max (0.0999) barely clears
        # the summed half-beamwidths (0.0873): the sector intersection is far
        # larger than the crossed-strip formula, diverging as the margin
        # closes. This is what the cell formula's near-parallel proviso means.
        area, sol = self._mc_area(5.0, 50.0, math.pi / 2.0, DEG5, 300_000)
        expected = cell_area_beamwidth(50.0, DEG5, DEG5, sol.bistatic_angle)
        assert area > 1.3 * expected


class TestRangeCellMembership:
    def test_target_itself_inside(self):
        layout = BistaticLayout(5.0)
        tgt = target_position(5.0, 50.0, 0.3)
        assert in_range_cell(layout, tgt, tgt, DEG5, 0.5e-9)

    def test_same_bearing_wrong_range_outside(self):
        layout = BistaticLayout(5.0)
        tgt = target_position(5.0, 50.0, math.pi / 2.0)
        # Same receiver bearing, pushed 5 m outward: range-sum off by metres
        # while c*dtau/2 is only 7.5 cm.
        scale = (50.0 + 5.0) / 50.0
        outward = (tgt[0] + scale * (tgt[0] + 2.5) - (tgt[0]), tgt[1] * scale)
        outward = ((tgt[0] + 2.5) * scale - 2.5, tgt[1] * scale)
        assert not in_range_cell(layout, tgt, outward, DEG5, 0.5e-9)

    @pytest.mark.parametrize("theta", [0.0, math.pi / 2.0])
    def test_area_estimate_matches_formula_receiver_side(self, theta):
        # kappa/L = 10; receiver-side and broadside targets: the accepted
        # region tracks c*dtau*R_min*dtheta_rx/(2 cos^2 beta) within 5%.
        L, kappa, dtau = 5.0, 50.0, 4e-9
        layout = BistaticLayout(L)
        sol = solve_geometry(L, kappa, theta)
        tgt = target_position(L, kappa, theta)
        expected = cell_area_range(dtau, min(sol.tx_range, sol.rx_range), DEG5, sol.bistatic_angle)
        half = 6.0
        rng = np.random.default_rng(777)
        xs = rng.uniform(tgt[0] - half, tgt[0] + half, 400_000)
        ys = rng.uniform(tgt[1] - half, tgt[1] + half, 400_000)
        hits = sum(1 for x, y in zip(xs, ys) if in_range_cell(layout, tgt, (x, y), DEG5, dtau))
        area = hits / 400_000 * (2 * half) ** 2
        assert area == pytest.approx(expected, rel=0.05)

    def test_area_estimate_transmitter_side_documented_bias(self):
        # Transmitter-side target: the receiver-lobe footprint scales with
        # R_rx = R_max, while the closed form uses R_min, so the accepted
        # area exceeds the formula by about R_max/R_min (~10% at kappa/L=10).
        L, kappa, dtau = 5.0, 50.0, 4e-9
        layout = BistaticLayout(L)
        sol = solve_geometry(L, kappa, math.pi)
        tgt = target_position(L, kappa, math.pi)
        r_min = min(sol.tx_range, sol.rx_range)
        r_max = max(sol.tx_range, sol.rx_range)
        expected = cell_area_range(dtau, r_min, DEG5, sol.bistatic_angle)
        half = 6.0
        rng = np.random.default_rng(778)
        xs = rng.uniform(tgt[0] - half, tgt[0] + half, 400_000)
        ys = rng.uniform(tgt[1] - half, tgt[1] + half, 400_000)
        hits = sum(1 for x, y in zip(xs, ys) if in_range_cell(layout, tgt, (x, y), DEG5, dtau))
        area = hits / 400_000 * (2 * half) ** 2
        assert area / expected == pytest.approx(r_max / r_min, rel=0.03)
        assert area / expected > 1.05  # the structural deviation is real

    def test_full_width_rule_doubles_annulus(self):
        L, kappa, dtau = 5.0, 50.0, 4e-9
        layout = BistaticLayout(L)
        tgt = target_position(L, kappa, 0.0)
        rng = np.random.default_rng(779)
        xs = rng.uniform(tgt[0] - 4, tgt[0] + 4, 100_000)
        ys = rng.uniform(tgt[1] - 4, tgt[1] + 4, 100_000)
        half_hits = sum(
            1 for x, y in zip(xs, ys) if in_range_cell(layout, tgt, (x, y), DEG5, dtau, RangeBinRule.HALF_WIDTH)
        )
        full_hits = sum(
            1 for x, y in zip(xs, ys) if in_range_cell(layout, tgt, (x, y), DEG5, dtau, RangeBinRule.FULL_WIDTH)
        )
        assert full_hits == pytest.approx(2.0 * half_hits, rel=0.05)


class TestRunTrial:
    def test_no_noise_no_clutter_always_detected(self):
        system = reference_system(noise_temperature=0.0)
        scene = reference_scene(clutter_density=0.0)
        config = SimConfig(trials=100, seed=0)
        for i in range(50):
            outcome = run_trial(system, scene, 30.0, config, RandomStream(0, (i,)))
            assert outcome.detected
            assert outcome.scnr == math.inf

    def test_huge_threshold_never_detected(self):
        system = reference_system()
        scene = reference_scene(threshold=1e15)
        config = SimConfig(trials=100, seed=0)
        for i in range(50):
            outcome = run_trial(system, scene, 30.0, config, RandomStream(0, (i,)))
            assert not outcome.detected

    def test_split_regime_rejected(self):
        with pytest.raises(SplitRegimeError):
            run_trial(reference_system(), reference_scene(), 1.0, SimConfig(trials=100, seed=0), RandomStream(0))

    def test_detected_flag_matches_threshold(self):
        system = reference_system()
        scene = reference_scene()
        config = SimConfig(trials=100, seed=0)
        for i in range(100):
            o = run_trial(system, scene, 40.0, config, RandomStream(3, (i,)))
            assert o.detected == (o.scnr >= scene.threshold)


class TestEstimatePdc:
    def test_degenerate_all_detected(self):
        system = reference_system(noise_temperature=0.0)
        scene = reference_scene(clutter_density=0.0)
        est = estimate_pdc(system, scene, 30.0, SimConfig(trials=500, seed=1))
        assert est.p_hat == 1.0
        assert est.ci_high == 1.0
        assert est.analytic_pdc == 1.0

    def test_minimum_trials_enforced(self):
        with pytest.raises(ValueError):
            estimate_pdc(reference_system(), reference_scene(), 30.0, SimConfig(trials=99, seed=1))

    def test_region_must_contain_sites(self):
        from bistaticdc.stochastic import Rectangle

        config = SimConfig(trials=200, seed=1, region=Rectangle(0.0, 50.0, -50.0, 50.0))
        with pytest.raises(ValueError):
            estimate_pdc(reference_system(), reference_scene(), 30.0, config)

    def test_cell_outside_arena_warns(self):
        config = SimConfig(trials=200, seed=1)
        with pytest.warns(UserWarning, match="arena"):
            estimate_pdc(reference_system(), reference_scene(), 80.0, config)

    def test_oracle_estimate_matches_closed_form(self):
        est = estimate_pdc(
            reference_system(), reference_scene(), 10.0, SimConfig(trials=20_000, seed=7, mode=SimMode.ORACLE)
        )
        assert abs(est.z) <= 3.0
        assert est.ci_low <= est.p_hat <= est.ci_high

    @needs_compiled
    def test_oracle_grid_validates_closed_form(self):
        # 3x3x3x3 grid over (kappa, density, clutter RCS, threshold); every
        # combination within 3 binomial standard errors at 1e5 trials. This is
        # the zero-geometric-approximation check of the coverage algebra.
        system = reference_system()
        failures = []
        for i_k, kappa in enumerate((10.0, 20.0, 50.0)):
            for i_r, rho in enumerate((0.0005, 0.001, 0.002)):
                for i_s, s_c in enumerate((0.5, 1.0, 2.0)):
                    for i_g, gamma in enumerate((0.5, 1.0, 2.0)):
                        scene = reference_scene(
                            clutter_density=rho, clutter_rcs_mean=s_c, threshold=gamma
                        )
                        seed = 1000 * i_k + 100 * i_r + 10 * i_s + i_g
                        est = estimate_pdc(
                            system, scene, kappa, SimConfig(trials=100_000, seed=seed, mode=SimMode.ORACLE)
                        )
                        if abs(est.z) > 3.0:
                            failures.append((kappa, rho, s_c, gamma, est.z))
        assert not failures, f"oracle z-test failures: {failures}"

    @needs_compiled
    def test_wilson_coverage(self):
        # 500 independent oracle estimates; the 95% interval must cover the
        # analytic value at least 93% of the time.
        system = reference_system()
        scene = reference_scene()
        p = analytic.pdc(system, scene, 10.0).pdc
        covered = 0
        for rep in range(500):
            est = estimate_pdc(system, scene, 10.0, SimConfig(trials=2000, seed=rep, mode=SimMode.ORACLE))
            if est.ci_low <= p <= est.ci_high:
                covered += 1
        assert covered >= 0.93 * 500

    @needs_compiled
    def test_geometric_monotone_in_kappa(self):
        # Across the kappa sweep the geometric estimate is non-increasing,
        # allowing one violation within the interval widths.
        system = reference_system()
        scene = reference_scene()
        kappas = np.geomspace(5.0, 100.0, 10)
        estimates = []
        import warnings

        for i, kappa in enumerate(kappas):
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                estimates.append(
                    estimate_pdc(system, scene, float(kappa), SimConfig(trials=20_000, seed=100 + i))
                )
        violations = 0
        for a, b in zip(estimates, estimates[1:]):
            slack = (a.ci_high - a.ci_low + b.ci_high - b.ci_low) / 2.0
            if b.p_hat > a.p_hat + slack:
                violations += 1
        assert violations <= 1

    def test_lemniscate_resamples_logged(self):
        system = reference_system()
        scene = reference_scene()
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            est = estimate_pdc(system, scene, 2.5, SimConfig(trials=2000, seed=3))
        # Half the angle support is dead: roughly one resample per trial.
        assert est.theta_resamples > 1000


class TestHistograms:
    def test_sin_beta_mode_bin_contains_max(self):
        hist = histogram_sin_beta(5.0, 50.0, trials=10_000, bins=50, seed=0)
        s_max = sin_beta_max(5.0, 50.0)
        lo, hi = hist.mode_bin
        assert lo <= s_max <= hi
        assert hist.annotation == s_max
        assert int(hist.counts.sum()) == 10_000

    def test_sin_beta_monostatic_degenerate(self):
        hist = histogram_sin_beta(0.0, 50.0, trials=1000, seed=0)
        assert len(hist.counts) == 1
        assert hist.counts[0] == 1000
        assert hist.bin_edges[0] == 0.0

    def test_sin_beta_top_decile_mass_matches_quadrature(self):
        # Oracle: fraction of theta in [0, 2*pi) with sin(beta) >= 0.9*max,
        # by midpoint quadrature on a fine grid. (The oracle value is ~0.29,
        # not >= 0.5; see the decisions ledger.)
        L, kappa = 5.0, 50.0
        s_max = sin_beta_max(L, kappa)
        n = 200_000
        inside = 0
        for i in range(n):
            theta = (i + 0.5) * 2.0 * math.pi / n
            if math.sin(solve_geometry(L, kappa, theta).bistatic_angle) >= 0.9 * s_max:
                inside += 1
        oracle = inside / n
        assert oracle == pytest.approx(0.287, abs=0.005)

        hist = histogram_sin_beta(L, kappa, trials=10_000, bins=10, seed=1)
        empirical = hist.counts[-1] / hist.counts.sum()  # top decile of [0, s_max]
        assert empirical == pytest.approx(oracle, abs=0.02)

    def test_rmin_support(self):
        batch = simulate_trials(
            reference_system(noise_temperature=0.0),
            reference_scene(clutter_density=0.0),
            50.0,
            SimConfig(trials=2000, seed=0),
        )
        samples = batch.rmin_over_kappa
        assert samples.min() >= 1.0 - 5.0 / (2.0 * 50.0) - 1e-6
        assert samples.min() >= 0.95 - 1e-6
        assert samples.max() <= 1.0 + 1e-12

    def test_rmin_monostatic_all_ones(self):
        batch = simulate_trials(
            reference_system(noise_temperature=0.0),
            reference_scene(clutter_density=0.0, layout=BistaticLayout(0.0)),
            50.0,
            SimConfig(trials=500, seed=0),
        )
        assert np.all(batch.rmin_over_kappa == 1.0)

    def test_rmin_histogram(self):
        hist = histogram_rmin(5.0, 50.0, trials=2000, bins=25, seed=0)
        assert hist.annotation == pytest.approx(0.95, rel=1e-12)
        assert int(hist.counts.sum()) == 2000
        assert hist.bin_edges[0] == pytest.approx(0.95, rel=1e-12)
        assert hist.bin_edges[-1] == 1.0

    def test_cosite_required(self):
        with pytest.raises(ValueError):
            histogram_sin_beta(5.0, 2.5)
        with pytest.raises(ValueError):
            histogram_rmin(5.0, 1.0)
