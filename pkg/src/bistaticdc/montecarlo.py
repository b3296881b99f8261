"""Spatial Monte Carlo estimation of the detection coverage probability.

Two modes:

* GEOMETRIC reproduces the full protocol: draw the target angle uniformly,
  solve the bistatic geometry, draw a Poisson clutter field over the arena,
  keep the scatterers inside the resolution cell (membership tests below),
  sum their returns with their own propagation factors, and threshold the
  resulting SCNR. Its gap to the closed form is the model bias of the
  sin(beta) ~ sin(beta_max) and h_clutter ~ h_target approximations.

* ORACLE bypasses geometry entirely: the in-cell clutter count is drawn
  straight from Poisson(rho * A_c) with A_c the cell area the closed form
  assumes, every return shares the target's propagation factor, so the
  estimate converges to the closed form exactly. It validates the
  Poisson-functional/Swerling algebra with zero geometric approximation.

Trials are independent; trial i draws from substream (seed, i), so estimates
are bit-identical for any thread count or chunking.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import analytic, geometry, kernels
from .analytic import AreaVariant, RadarSystem, Scene
from .constants import LEMNISCATE_SIN_BETA, SPEED_OF_LIGHT
from .errors import SplitRegimeError
from .geometry import CellKind, Regime
from .stochastic import RandomStream, Rectangle, stream_key

__all__ = [
    "SimMode",
    "RangeBinRule",
    "SimConfig",
    "TrialOutcome",
    "TrialBatch",
    "PdcEstimate",
    "Histogram",
    "wilson_interval",
    "z_score",
    "in_beam_cell",
    "in_range_cell",
    "run_trial",
    "simulate_trials",
    "estimate_pdc",
    "oracle_cell_area",
    "histogram_sin_beta",
    "histogram_rmin",
]

DEFAULT_REGION = Rectangle(-100.0, 100.0, -100.0, 100.0)
WILSON_Z = 1.959963984540054  # two-sided 95%


class SimMode(Enum):
    GEOMETRIC = "geometric"
    ORACLE = "oracle"


class RangeBinRule(Enum):
    """Accepted |bistatic range sum - target sum| for range-cell membership."""

    HALF_WIDTH = "half"  # c * dtau / 2 (default)
    FULL_WIDTH = "full"  # c * dtau (sensitivity studies)


@dataclass(frozen=True)
class SimConfig:
    """Monte Carlo run configuration."""

    trials: int
    seed: int
    region: Rectangle = DEFAULT_REGION
    mode: SimMode = SimMode.GEOMETRIC
    cell_kind: CellKind = CellKind.BEAMWIDTH
    range_bin_rule: RangeBinRule = RangeBinRule.HALF_WIDTH
    threads: int = 1

    def __post_init__(self) -> None:
        if not self.trials >= 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not self.threads >= 1:
            raise ValueError(f"threads must be >= 1, got {self.threads}")


@dataclass(frozen=True)
class TrialOutcome:
    """One Monte Carlo realization."""

    scnr: float
    detected: bool
    bistatic_angle: float
    rmin_over_kappa: float
    clutter_in_cell: int


@dataclass(frozen=True)
class TrialBatch:
    """Column-wise trial results (what the kernels return)."""

    scnr: np.ndarray
    bistatic_angle: np.ndarray
    rmin_over_kappa: np.ndarray
    clutter_in_cell: np.ndarray
    theta_resamples: int

    def outcome(self, i: int, threshold: float) -> TrialOutcome:
        s = float(self.scnr[i])
        return TrialOutcome(
            scnr=s,
            detected=s >= threshold,
            bistatic_angle=float(self.bistatic_angle[i]),
            rmin_over_kappa=float(self.rmin_over_kappa[i]),
            clutter_in_cell=int(self.clutter_in_cell[i]),
        )


@dataclass(frozen=True)
class PdcEstimate:
    """Monte Carlo coverage estimate with its analytic partner."""

    p_hat: float
    ci_low: float
    ci_high: float
    trials: int
    analytic_pdc: float
    theta_resamples: int = 0

    @property
    def z(self) -> float:
        return z_score(self.p_hat, self.analytic_pdc, self.trials)


@dataclass(frozen=True)
class Histogram:
    """Equal-width histogram with closed right edge on the last bin."""

    bin_edges: np.ndarray  # length n_bins + 1
    counts: np.ndarray  # length n_bins
    samples: int = 0
    annotation: float = math.nan  # reference value for plots

    @property
    def mode_bin(self) -> tuple[float, float]:
        i = int(np.argmax(self.counts))
        return (float(self.bin_edges[i]), float(self.bin_edges[i + 1]))


def wilson_interval(successes: int, trials: int, z: float = WILSON_Z) -> tuple[float, float]:
    """Two-sided Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError(f"trials must be > 0, got {trials}")
    p = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (p + z2 / (2.0 * trials)) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials)) / denom
    # Wilson always contains the point estimate; enforce it under rounding.
    lo = min(max(0.0, center - half), p)
    hi = max(min(1.0, center + half), p)
    return (lo, hi)


def z_score(p_hat: float, p: float, trials: int) -> float:
    """(p_hat - p) in binomial standard errors under the analytic null p."""
    var = p * (1.0 - p) / trials
    if var <= 0.0:
        return 0.0 if p_hat == p else math.inf if p_hat > p else -math.inf
    return (p_hat - p) / math.sqrt(var)


# ---------------------------------------------------------------------------
# Cell membership
# ---------------------------------------------------------------------------


def _within_sector(apex_x: float, tip_x: float, tip_y: float, px: float, py: float, half_tan: float) -> bool:
    """Is (px, py) within the sector of half-angle atan(half_tan) around apex->tip?

    Equivalent to angle(apex->tip, apex->point) <= half-beamwidth for
    half-beamwidths below pi/2 (guaranteed by the beamwidth invariants);
    written with a tangent comparison so the membership predicate is the same
    arithmetic the kernels run.
    """
    ax = tip_x - apex_x
    ay = tip_y
    bx = px - apex_x
    by = py
    dot = ax * bx + ay * by
    cross = ax * by - ay * bx
    return dot > 0.0 and abs(cross) <= half_tan * dot


def in_beam_cell(
    layout: geometry.BistaticLayout,
    target_xy: tuple[float, float],
    clutter_xy: tuple[float, float],
    beamwidth_tx: float,
    beamwidth_rx: float,
) -> bool:
    """Is the clutter point inside the main lobes of both antennas?

    Both boresights point at the target; membership requires the angle at the
    transmitter between (tx->target) and (tx->clutter) to be at most
    beamwidth_tx/2, and the receiver-side analogue.
    """
    tx_x = 0.5 * layout.baseline
    rx_x = -0.5 * layout.baseline
    tx, ty = target_xy
    cx, cy = clutter_xy
    return _within_sector(rx_x, tx, ty, cx, cy, math.tan(0.5 * beamwidth_rx)) and _within_sector(
        tx_x, tx, ty, cx, cy, math.tan(0.5 * beamwidth_tx)
    )


def in_range_cell(
    layout: geometry.BistaticLayout,
    target_xy: tuple[float, float],
    clutter_xy: tuple[float, float],
    beamwidth_rx: float,
    pulse_width: float,
    rule: RangeBinRule = RangeBinRule.HALF_WIDTH,
) -> bool:
    """Is the clutter point inside the receiver lobe and the isorange annulus?

    The annulus accepts |(R_tx_c + R_rx_c) - (R_tx + R_rx)| up to c*dtau/2
    (HALF_WIDTH, default) or c*dtau (FULL_WIDTH).
    """
    tx_x = 0.5 * layout.baseline
    rx_x = -0.5 * layout.baseline
    tx, ty = target_xy
    cx, cy = clutter_xy
    if not _within_sector(rx_x, tx, ty, cx, cy, math.tan(0.5 * beamwidth_rx)):
        return False
    sum_target = math.hypot(tx - tx_x, ty) + math.hypot(tx - rx_x, ty)
    sum_clutter = math.hypot(cx - tx_x, cy) + math.hypot(cx - rx_x, cy)
    halfwidth = _range_halfwidth(pulse_width, rule)
    return abs(sum_clutter - sum_target) <= halfwidth


def _range_halfwidth(pulse_width: float, rule: RangeBinRule) -> float:
    w = SPEED_OF_LIGHT * pulse_width
    return 0.5 * w if rule is RangeBinRule.HALF_WIDTH else w


# ---------------------------------------------------------------------------
# Trials
# ---------------------------------------------------------------------------


def oracle_cell_area(
    system: RadarSystem, scene: Scene, kappa: float, cell_kind: CellKind, regime: Regime
) -> float:
    """Resolution-cell area the closed form assumes (oracle mode's Poisson mean / rho).

    Chosen so the oracle-mode detection probability equals the closed form
    exactly: kappa^3*bw_tx*bw_rx/L for the co-site beam cell (the
    sin(beta_max) ~ L/kappa cell), kappa^2*bw^2/sqrt(3) for the lemniscate,
    and the derived range-cell area c*dtau*dtheta*kappa/(2 cos^2(beta_max)).
    """
    if cell_kind is CellKind.RANGE:
        return analytic.range_cell_area(system, scene, kappa, variant=AreaVariant.DERIVED)
    L = scene.layout.baseline
    if regime is Regime.COSITE:
        if L <= 0.0:
            raise ValueError("co-site beam cell needs baseline > 0")
        return (kappa**3) * system.beamwidth_tx * system.beamwidth_rx / L
    if regime is Regime.LEMNISCATE:
        return (kappa**2) * system.beamwidth_tx * system.beamwidth_rx / LEMNISCATE_SIN_BETA
    raise SplitRegimeError(f"unsupported regime {regime}")


def _kernel_args_geometric(
    system: RadarSystem, scene: Scene, kappa: float, config: SimConfig, regime: Regime
) -> tuple:
    r = config.region
    return (
        scene.layout.baseline,
        kappa,
        regime is Regime.LEMNISCATE,
        config.cell_kind is CellKind.RANGE,
        system.beamwidth_tx,
        system.beamwidth_rx,
        _range_halfwidth(system.effective_pulse_width, config.range_bin_rule),
        r.x_min,
        r.x_max,
        r.y_min,
        r.y_max,
        scene.clutter_density * r.area,
        scene.target_rcs_mean,
        scene.clutter_rcs_mean,
        system.transmit_power * system.gain_constant / (system.beamwidth_tx * system.beamwidth_rx),
        system.wavelength,
        system.noise_power,
    )


def _kernel_args_oracle(
    system: RadarSystem, scene: Scene, kappa: float, config: SimConfig, regime: Regime
) -> tuple:
    h = geometry.los_propagation(system.wavelength, kappa)
    signal_coeff = (
        system.transmit_power * system.gain_constant * h / (system.beamwidth_tx * system.beamwidth_rx)
    )
    cell_area = oracle_cell_area(system, scene, kappa, config.cell_kind, regime)
    return (
        scene.target_rcs_mean,
        scene.clutter_rcs_mean,
        scene.clutter_density * cell_area,
        signal_coeff,
        system.noise_power,
    )


def _check_region(scene: Scene, kappa: float, system: RadarSystem, config: SimConfig) -> None:
    r = config.region
    L = scene.layout.baseline
    if not (r.contains(0.5 * L, 0.0) and r.contains(-0.5 * L, 0.0)):
        raise ValueError(f"region {r} does not contain the radar sites (+/-{0.5 * L}, 0)")
    if scene.clutter_density == 0.0:
        return
    # Warn when the resolution cell can poke outside the arena: clutter there
    # is absent by construction and the estimate loses part of the cell.
    reach = math.sqrt(kappa * kappa + 0.25 * L * L)
    if config.cell_kind is CellKind.BEAMWIDTH:
        sin_max = geometry.sin_beta_max(L, kappa) if L <= 2.0 * kappa else 1.0
        if sin_max > 0.0:
            reach += 0.5 * kappa * system.beamwidth_tx / sin_max
        else:
            reach = math.inf
    else:
        reach += 0.5 * kappa * system.beamwidth_rx + SPEED_OF_LIGHT * system.effective_pulse_width
    bound = min(-r.x_min, r.x_max, -r.y_min, r.y_max)
    if reach > bound:
        warnings.warn(
            f"resolution cell may extend to ~{reach:.1f} m but the arena only reaches "
            f"{bound:.1f} m; clutter outside is absent by construction",
            stacklevel=3,
        )


def run_trial(
    system: RadarSystem, scene: Scene, kappa: float, config: SimConfig, stream: RandomStream
) -> TrialOutcome:
    """One Monte Carlo realization drawn from `stream`.

    Consumes the stream from its current position through the single-trial
    reference kernels, so run_trial with a fresh RandomStream(seed, (i,)) is
    bit-identical to element i of simulate_trials(seed=seed).
    """
    from .kernels import _reference

    regime = geometry.classify_regime(scene.layout.baseline, kappa)
    if regime is Regime.SPLIT:
        raise SplitRegimeError(f"kappa {kappa} is below half the baseline {scene.layout.baseline}")
    if config.mode is SimMode.ORACLE:
        args = _kernel_args_oracle(system, scene, kappa, config, regime)
        scnr, count, counter = _reference.oracle_single(stream.key, stream._counter, *args)
        stream._counter = counter
        return TrialOutcome(
            scnr=scnr,
            detected=scnr >= scene.threshold,
            bistatic_angle=geometry.beta_max(scene.layout.baseline, kappa),
            rmin_over_kappa=1.0,
            clutter_in_cell=count,
        )
    args = _kernel_args_geometric(system, scene, kappa, config, regime)
    scnr, beta, rmin_ratio, count, _, counter = _reference.geometric_single(
        stream.key, stream._counter, *args
    )
    stream._counter = counter
    return TrialOutcome(
        scnr=scnr,
        detected=scnr >= scene.threshold,
        bistatic_angle=beta,
        rmin_over_kappa=rmin_ratio,
        clutter_in_cell=count,
    )


def simulate_trials(system: RadarSystem, scene: Scene, kappa: float, config: SimConfig) -> TrialBatch:
    """All trials of a run as columns; deterministic for any thread count."""
    regime = geometry.classify_regime(scene.layout.baseline, kappa)
    if regime is Regime.SPLIT:
        raise SplitRegimeError(f"kappa {kappa} is below half the baseline {scene.layout.baseline}")
    base_key = stream_key(config.seed)
    if config.mode is SimMode.ORACLE:
        args = _kernel_args_oracle(system, scene, kappa, config, regime)
        runner = kernels.oracle_trials
    else:
        _check_region(scene, kappa, system, config)
        args = _kernel_args_geometric(system, scene, kappa, config, regime)
        runner = kernels.geometric_trials

    n = config.trials
    chunks = _chunk_ranges(n, config.threads)
    if len(chunks) == 1:
        results = [runner(base_key, 0, n, *args)]
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            futures = [pool.submit(runner, base_key, start, count, *args) for start, count in chunks]
            results = [f.result() for f in futures]

    if config.mode is SimMode.ORACLE:
        scnr = np.concatenate([r[0] for r in results])
        counts = np.concatenate([r[1] for r in results])
        beta = np.full(n, geometry.beta_max(scene.layout.baseline, kappa))
        rmin = np.ones(n)
        resamples = 0
    else:
        scnr = np.concatenate([r[0] for r in results])
        beta = np.concatenate([r[1] for r in results])
        rmin = np.concatenate([r[2] for r in results])
        counts = np.concatenate([r[3] for r in results])
        resamples = sum(r[4] for r in results)
    return TrialBatch(
        scnr=scnr,
        bistatic_angle=beta,
        rmin_over_kappa=rmin,
        clutter_in_cell=counts,
        theta_resamples=resamples,
    )


def _chunk_ranges(n: int, threads: int) -> list[tuple[int, int]]:
    workers = max(1, min(threads, n))
    base = n // workers
    rem = n % workers
    chunks = []
    start = 0
    for i in range(workers):
        count = base + (1 if i < rem else 0)
        if count:
            chunks.append((start, count))
        start += count
    return chunks


def estimate_pdc(system: RadarSystem, scene: Scene, kappa: float, config: SimConfig) -> PdcEstimate:
    """Estimate the coverage probability and attach the matching closed form."""
    if config.trials < 100:
        raise ValueError(f"need at least 100 trials for an estimate, got {config.trials}")
    batch = simulate_trials(system, scene, kappa, config)
    detected = int(np.count_nonzero(batch.scnr >= scene.threshold))
    p_hat = detected / config.trials
    ci_low, ci_high = wilson_interval(detected, config.trials)
    breakdown = analytic.pdc(system, scene, kappa, cell_kind=config.cell_kind)
    return PdcEstimate(
        p_hat=p_hat,
        ci_low=ci_low,
        ci_high=ci_high,
        trials=config.trials,
        analytic_pdc=breakdown.pdc,
        theta_resamples=batch.theta_resamples,
    )


# ---------------------------------------------------------------------------
# Distribution studies
# ---------------------------------------------------------------------------


def _geometry_samples(baseline: float, kappa: float, trials: int, seed: int) -> TrialBatch:
    """Angle-only trials: geometry outputs with no clutter and no noise."""
    scene = Scene(
        layout=geometry.BistaticLayout(baseline),
        clutter_density=0.0,
        target_rcs_mean=1.0,
        clutter_rcs_mean=1.0,
        threshold=1.0,
    )
    system = RadarSystem(
        transmit_power=1.0,
        beamwidth_tx=0.1,
        beamwidth_rx=0.1,
        wavelength=1.0,
        noise_temperature=0.0,
        bandwidth=1.0,
    )
    config = SimConfig(trials=trials, seed=seed)
    return simulate_trials(system, scene, kappa, config)


def _make_histogram(samples: np.ndarray, bins: int, lo: float, hi: float, annotation: float) -> Histogram:
    if hi <= lo:
        # Degenerate support (e.g. monostatic sin(beta) = 0): one point bin.
        edges = np.array([lo, lo])
        counts = np.array([samples.size], dtype=np.int64)
        return Histogram(bin_edges=edges, counts=counts, samples=samples.size, annotation=annotation)
    # Samples can round a hair outside the analytic support; keep the total.
    clipped = np.clip(samples, lo, hi)
    counts, edges = np.histogram(clipped, bins=bins, range=(lo, hi))
    return Histogram(bin_edges=edges, counts=counts.astype(np.int64), samples=samples.size, annotation=annotation)


def histogram_sin_beta(
    baseline: float, kappa: float, trials: int = 10_000, bins: int = 50, seed: int = 0
) -> Histogram:
    """Distribution of sin(beta) over uniform target angles (co-site only).

    Binned over [0, sin_beta_max]; the density diverges at the maximum, so the
    top bin (which contains sin_beta_max) carries the most mass.
    """
    if geometry.classify_regime(baseline, kappa) is not Regime.COSITE:
        raise ValueError(f"(L={baseline}, kappa={kappa}) is not co-site")
    batch = _geometry_samples(baseline, kappa, trials, seed)
    s_max = geometry.sin_beta_max(baseline, kappa)
    samples = np.sin(batch.bistatic_angle)
    return _make_histogram(samples, bins, 0.0, s_max, annotation=s_max)


def histogram_rmin(
    baseline: float, kappa: float, trials: int = 2_000, bins: int = 50, seed: int = 0
) -> Histogram:
    """Distribution of min(R_tx, R_rx)/kappa over uniform target angles.

    Supported on [1 - L/(2*kappa), 1]; annotated with that lower bound.
    """
    if geometry.classify_regime(baseline, kappa) is not Regime.COSITE:
        raise ValueError(f"(L={baseline}, kappa={kappa}) is not co-site")
    batch = _geometry_samples(baseline, kappa, trials, seed)
    lo = 1.0 - baseline / (2.0 * kappa)
    return _make_histogram(batch.rmin_over_kappa, bins, lo, 1.0, annotation=lo)
