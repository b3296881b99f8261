import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bistaticdc import geometry
from bistaticdc.constants import LEMNISCATE_SIN_BETA
from bistaticdc.errors import NoTargetError, SplitRegimeError, UnboundedCellError
from bistaticdc.geometry import (
    Regime,
    beta_max,
    cell_area_beamwidth,
    cell_area_range,
    classify_regime,
    los_propagation,
    sin_beta_max,
    solve_geometry,
    solve_radial,
    target_position,
)
from bistaticdc.stochastic import RandomStream

TWO_PI = 2.0 * math.pi

# Co-site (L, kappa) pairs with headroom from the lemniscate boundary.
cosite_pairs = st.tuples(
    st.floats(min_value=1e-2, max_value=1e4),  # kappa scale
    st.floats(min_value=0.0, max_value=1.8),  # L / kappa
).map(lambda t: (t[0] * t[1], t[0]))
angles = st.floats(min_value=0.0, max_value=TWO_PI, exclude_max=True)


def quartic_residual(L, kappa, theta, r):
    """Directly substitute r back into the defining law-of-cosines quartic."""
    lhs = (r * r + L * L / 4.0) ** 2 - (r * L * math.cos(theta)) ** 2
    return abs(lhs - kappa**4)


class TestClassifyRegime:
    def test_reference_values(self):
        assert classify_regime(5.0, 50.0) is Regime.COSITE
        assert classify_regime(5.0, 2.5) is Regime.LEMNISCATE
        assert classify_regime(5.0, 1.0) is Regime.SPLIT

    def test_tolerance_band(self):
        assert classify_regime(5.0 * (1.0 + 1e-10), 2.5) is Regime.LEMNISCATE
        assert classify_regime(5.0 * (1.0 + 1e-8), 2.5) is Regime.SPLIT

    def test_validation(self):
        with pytest.raises(ValueError):
            classify_regime(-1.0, 5.0)
        with pytest.raises(ValueError):
            classify_regime(1.0, 0.0)


class TestSolveRadial:
    def test_monostatic_is_exact(self):
        assert solve_radial(0.0, 50.0, 1.234) == 50.0
        assert solve_radial(0.0, 0.1, 4.0) == 0.1

    def test_broadside(self):
        # At theta=pi/2 the quadratic collapses to r^2 = kappa^2 - L^2/4.
        r = solve_radial(5.0, 50.0, math.pi / 2.0)
        assert r == pytest.approx(math.sqrt(50.0**2 - 5.0**2 / 4.0), rel=1e-12)
        assert r == pytest.approx(49.9375, abs=1e-3)
        assert quartic_residual(5.0, 50.0, math.pi / 2.0, r) < 1e-9 * 50.0**4

    def test_collinear(self):
        r = solve_radial(5.0, 50.0, 0.0)
        assert r == pytest.approx(math.sqrt(50.0**2 + 5.0**2 / 4.0), rel=1e-12)
        assert r == pytest.approx(50.0625, abs=1e-3)

    def test_split_raises(self):
        with pytest.raises(SplitRegimeError):
            solve_radial(5.0, 1.0, 0.3)

    def test_lemniscate_branch(self):
        L, kappa = 5.0, 2.5
        r = solve_radial(L, kappa, 0.1)
        assert r == pytest.approx(L * math.sqrt(0.5 * math.cos(0.2)), rel=1e-12)
        with pytest.raises(NoTargetError):
            solve_radial(L, kappa, math.pi / 2.0)

    @given(pair=cosite_pairs, theta=angles)
    @settings(max_examples=200)
    def test_residual_property(self, pair, theta):
        L, kappa = pair
        r = solve_radial(L, kappa, theta)
        assert quartic_residual(L, kappa, theta, r) < 1e-9 * kappa**4

    def test_residual_bulk_random(self):
        # 1e4 random placements at the reference geometry.
        stream = RandomStream(2024)
        L, kappa = 5.0, 50.0
        worst = 0.0
        for _ in range(10_000):
            theta = TWO_PI * stream.uniform()
            r = solve_radial(L, kappa, theta)
            worst = max(worst, quartic_residual(L, kappa, theta, r))
        assert worst < 1e-9 * kappa**4


class TestSolveGeometry:
    def test_monostatic_reduction_is_exact(self):
        for kappa in (50.0, 0.1, 3.7, 123.456):
            sol = solve_geometry(0.0, kappa, 0.7)
            assert sol.tx_range == kappa
            assert sol.rx_range == kappa
            assert sol.bistatic_angle == 0.0

    def test_collinear_ranges(self):
        sol = solve_geometry(5.0, 50.0, 0.0)
        assert sol.tx_range == pytest.approx(52.5625, abs=1e-3)
        assert sol.rx_range == pytest.approx(47.5625, abs=1e-3)
        assert sol.tx_range * sol.rx_range == pytest.approx(2500.0, rel=1e-12)

    def test_broadside_matches_sin_beta_max(self):
        sol = solve_geometry(5.0, 50.0, math.pi / 2.0)
        assert math.sin(sol.bistatic_angle) == pytest.approx(sin_beta_max(5.0, 50.0), rel=1e-9)

    @given(pair=cosite_pairs, theta=angles)
    @settings(max_examples=200)
    def test_product_identity_and_triangle(self, pair, theta):
        L, kappa = pair
        sol = solve_geometry(L, kappa, theta)
        assert sol.tx_range * sol.rx_range == pytest.approx(kappa * kappa, rel=1e-9)
        assert abs(sol.tx_range - sol.rx_range) <= L + 1e-9 * max(1.0, L)
        assert sol.tx_range + sol.rx_range >= L

    @given(pair=cosite_pairs, theta=angles)
    @settings(max_examples=200)
    def test_swap_symmetry(self, pair, theta):
        L, kappa = pair
        mirrored = math.pi - theta if theta <= math.pi else 3.0 * math.pi - theta
        a = solve_geometry(L, kappa, theta)
        b = solve_geometry(L, kappa, mirrored)
        assert a.tx_range == pytest.approx(b.rx_range, rel=1e-9)
        assert a.rx_range == pytest.approx(b.tx_range, rel=1e-9)

    def test_sin_beta_bounded_by_max(self):
        # Holds whenever beta_max <= pi/2, i.e. L <= sqrt(2)*kappa; beyond
        # that the angle sweeps through pi/2 where sin(beta) = 1 exceeds the
        # formula value (see test below).
        stream = RandomStream(99)
        for L, kappa in ((5.0, 50.0), (20.0, 30.0), (1.0, 0.8)):
            bound = sin_beta_max(L, kappa) + 1e-9
            for _ in range(10_000):
                theta = TWO_PI * stream.uniform()
                sol = solve_geometry(L, kappa, theta)
                assert math.sin(sol.bistatic_angle) <= bound

    def test_sin_beta_exceeds_formula_past_right_angle(self):
        # For sqrt(2)*kappa < L < 2*kappa the maximum *angle* is obtuse, so
        # sin(beta) peaks at 1 for some angle, above the formula value.
        L, kappa = 30.0, 20.0
        assert beta_max(L, kappa) > math.pi / 2.0
        stream = RandomStream(7)
        peak = max(
            math.sin(solve_geometry(L, kappa, TWO_PI * stream.uniform()).bistatic_angle)
            for _ in range(10_000)
        )
        assert peak > sin_beta_max(L, kappa)


class TestSinBetaMax:
    def test_endpoints(self):
        assert sin_beta_max(0.0, 7.0) == 0.0
        assert sin_beta_max(5.0, 2.5) == 0.0  # formula value at L = 2*kappa

    def test_reference_value(self):
        expected = math.sqrt(5.0**2 / 50.0**2 - 5.0**4 / (4.0 * 50.0**4))
        assert sin_beta_max(5.0, 50.0) == pytest.approx(expected, rel=1e-15)
        assert sin_beta_max(5.0, 50.0) == pytest.approx(0.0998749, abs=1e-7)

    def test_domain(self):
        with pytest.raises(ValueError):
            sin_beta_max(5.1, 2.5)

    def test_lemniscate_constant_is_separate(self):
        assert LEMNISCATE_SIN_BETA == math.sqrt(3.0)
        assert LEMNISCATE_SIN_BETA > 1.0  # impossible as a sine; kept verbatim

    def test_beta_max_consistent(self):
        assert math.sin(beta_max(5.0, 50.0)) == pytest.approx(sin_beta_max(5.0, 50.0), rel=1e-12)
        assert beta_max(0.0, 3.0) == 0.0
        # Beyond L = sqrt(2)*kappa the maximum angle passes pi/2.
        assert beta_max(1.9, 1.0) > math.pi / 2.0


class TestLosPropagation:
    def test_values(self):
        four_pi_cubed = (4.0 * math.pi) ** 3
        assert los_propagation(0.005, 10.0) == pytest.approx(0.005**2 / (four_pi_cubed * 10.0**4), rel=1e-14)
        assert los_propagation(0.005, 50.0) == pytest.approx(0.005**2 / (four_pi_cubed * 50.0**4), rel=1e-14)
        # Spot values, recomputed independently.
        assert los_propagation(0.005, 10.0) == pytest.approx(1.2598255637968554e-12, rel=1e-12)
        assert los_propagation(0.005, 50.0) == pytest.approx(2.0157209020749686e-15, rel=1e-12)

    def test_scalings(self):
        assert los_propagation(0.005, 25.0) / los_propagation(0.005, 50.0) == pytest.approx(16.0, rel=1e-12)
        assert los_propagation(0.01, 50.0) / los_propagation(0.005, 50.0) == pytest.approx(4.0, rel=1e-12)

    def test_domain(self):
        with pytest.raises(ValueError):
            los_propagation(0.0, 50.0)
        with pytest.raises(ValueError):
            los_propagation(0.005, 0.0)


class TestCellAreas:
    def test_beamwidth_reference(self):
        beta = math.asin(0.0998749)
        area = cell_area_beamwidth(50.0, 0.0873, 0.0873, beta)
        assert area == pytest.approx(50.0**2 * 0.0873 * 0.0873 / 0.0998749, rel=1e-9)
        assert area == pytest.approx(190.77, abs=0.05)

    def test_beamwidth_bilinear(self):
        beta = 0.5
        a = cell_area_beamwidth(40.0, 0.08, 0.06, beta)
        b = cell_area_beamwidth(40.0, 0.04, 0.03, beta)
        assert b == pytest.approx(a / 4.0, rel=1e-15)

    def test_beamwidth_unbounded(self):
        with pytest.raises(UnboundedCellError):
            cell_area_beamwidth(50.0, 0.0873, 0.0873, 0.0)

    def test_range_reference(self):
        c = 299_792_458.0
        area = cell_area_range(0.5e-9, 50.0, 0.0873, 0.0)
        assert area == pytest.approx(c * 0.5e-9 * 50.0 * 0.0873 / 2.0, rel=1e-12)
        assert area == pytest.approx(0.3272, abs=2e-4)

    def test_range_linearity(self):
        a = cell_area_range(0.5e-9, 50.0, 0.0873, 0.2)
        b = cell_area_range(1.0e-9, 50.0, 0.0873, 0.2)
        assert b == pytest.approx(2.0 * a, rel=1e-15)

    def test_range_unbounded(self):
        with pytest.raises(UnboundedCellError):
            cell_area_range(0.5e-9, 50.0, 0.0873, math.pi / 2.0)


class TestTargetPosition:
    @given(pair=cosite_pairs, theta=angles)
    @settings(max_examples=100)
    def test_embedding_matches_ranges(self, pair, theta):
        L, kappa = pair
        sol = solve_geometry(L, kappa, theta)
        x, y = target_position(L, kappa, theta)
        d_tx = math.hypot(x - L / 2.0, y)
        d_rx = math.hypot(x + L / 2.0, y)
        assert d_tx == pytest.approx(sol.tx_range, rel=1e-9, abs=1e-12 * kappa)
        assert d_rx == pytest.approx(sol.rx_range, rel=1e-9, abs=1e-12 * kappa)


class TestValidation:
    def test_layout(self):
        with pytest.raises(ValueError):
            geometry.BistaticLayout(-0.1)

    def test_placement(self):
        with pytest.raises(ValueError):
            geometry.TargetPlacement(0.0, 1.0)
        with pytest.raises(ValueError):
            geometry.TargetPlacement(5.0, 7.0)

    def test_cell_spec(self):
        with pytest.raises(ValueError):
            geometry.ResolutionCellSpec(geometry.CellKind.RANGE, 0.1, 0.1, pulse_width=None)
        with pytest.raises(ValueError):
            geometry.ResolutionCellSpec(geometry.CellKind.BEAMWIDTH, 4.0, 0.1)
