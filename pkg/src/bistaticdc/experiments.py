"""Parameter sweeps pairing the closed forms with Monte Carlo estimates.

Each sweep varies one parameter over a strictly monotone grid and records,
per grid point, the analytic coverage probability, the Monte Carlo estimate
with its Wilson interval, the exponent split, and the seed that reproduces
the point. Built-in panels:

    a  ln(coverage) vs ln(kappa), branches: noise-only, clutter-only, both
    b  coverage vs kappa for several common beamwidths
    c  coverage vs transmit power for several kappa
    d  coverage vs mean clutter RCS for several clutter densities
    e  coverage vs noise temperature for several clutter densities
    f  coverage vs bandwidth for several kappa (range-limited cell)

Design markers (transition range, monostatic range, saturation power, optimal
bandwidth) are emitted as separate annotation rows so a plotting front end can
draw labeled vertical lines without recomputing any physics.

CSV schema (fixed):
    panel,swept_name,swept_value,kappa_m,pdc_analytic,pdc_mc,ci_low,ci_high,noise_exp,clutter_exp,trials,seed
Marker files carry rows of panel,marker_name,marker_value. All numbers are
rendered with 17 significant digits so re-parsing is round-trip exact.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import Iterable

from . import analytic, montecarlo
from .analytic import RadarSystem, Scene
from .errors import CoverageError, NoCrossingError
from .geometry import BistaticLayout, CellKind
from .montecarlo import SimConfig, SimMode
from .stochastic import derive_key, stream_key

__all__ = [
    "SweepSpec",
    "SweepRow",
    "MarkerRow",
    "SweepResult",
    "LogSlope",
    "run_sweep",
    "panel_sweeps",
    "log_slope",
    "format_number",
    "write_sweep_csv",
    "write_markers_csv",
    "SWEEP_HEADER",
    "MARKER_HEADER",
]

SWEEP_HEADER = (
    "panel,swept_name,swept_value,kappa_m,pdc_analytic,pdc_mc,ci_low,ci_high,"
    "noise_exp,clutter_exp,trials,seed"
)
MARKER_HEADER = "panel,marker_name,marker_value"

MIN_SWEEP_TRIALS = 1000


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: a grid for one named parameter, everything else fixed."""

    panel: str
    swept_name: str
    grid: tuple[float, ...]
    system: RadarSystem
    scene: Scene
    kappa: float
    trials: int
    seed: int
    cell_kind: CellKind = CellKind.BEAMWIDTH
    mode: SimMode = SimMode.GEOMETRIC
    threads: int = 1

    def __post_init__(self) -> None:
        if len(self.grid) < 2:
            raise ValueError("grid needs at least 2 points")
        diffs = [b - a for a, b in zip(self.grid, self.grid[1:])]
        if not (all(d > 0 for d in diffs) or all(d < 0 for d in diffs)):
            raise ValueError("grid must be strictly monotone")
        if self.trials < MIN_SWEEP_TRIALS:
            raise ValueError(f"sweeps need >= {MIN_SWEEP_TRIALS} trials, got {self.trials}")


@dataclass(frozen=True)
class SweepRow:
    panel: str
    swept_name: str
    swept_value: float
    kappa: float
    pdc_analytic: float
    pdc_mc: float
    ci_low: float
    ci_high: float
    noise_exp: float
    clutter_exp: float
    trials: int
    seed: int


@dataclass(frozen=True)
class MarkerRow:
    panel: str
    marker_name: str
    marker_value: float


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]
    markers: tuple[MarkerRow, ...]


@dataclass(frozen=True)
class LogSlope:
    slope: float
    stderr: float


SWEEPABLE = ("kappa", "ptx", "rho", "sigma_c", "sigma_t", "ts", "bw", "dtheta", "gamma", "L")


def _apply_value(
    system: RadarSystem, scene: Scene, kappa: float, name: str, value: float
) -> tuple[RadarSystem, Scene, float]:
    """Rebuild (system, scene, kappa) with one named parameter replaced."""
    if name == "kappa":
        return system, scene, value
    if name == "ptx":
        return replace(system, transmit_power=value), scene, kappa
    if name == "rho":
        return system, replace(scene, clutter_density=value), kappa
    if name == "sigma_c":
        return system, replace(scene, clutter_rcs_mean=value), kappa
    if name == "sigma_t":
        return system, replace(scene, target_rcs_mean=value), kappa
    if name == "ts":
        return replace(system, noise_temperature=value), scene, kappa
    if name == "bw":
        return replace(system, bandwidth=value), scene, kappa
    if name == "dtheta":
        return replace(system, beamwidth_tx=value, beamwidth_rx=value), scene, kappa
    if name == "gamma":
        return system, replace(scene, threshold=value), kappa
    if name == "L":
        return system, replace(scene, layout=BistaticLayout(value)), kappa
    raise ValueError(f"unknown swept parameter {name!r}; known: {SWEEPABLE}")


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Evaluate the sweep point by point, analytic and Monte Carlo paired.

    Each point draws from the substream derived from (seed, point index), so
    rows are individually reproducible: feeding a row's seed to a simulate run
    with the row's parameters regenerates its Monte Carlo estimate. Points
    whose evaluation fails record NaN values instead of aborting the sweep.
    """
    rows = []
    base_key = stream_key(spec.seed)
    for index, value in enumerate(spec.grid):
        row_seed = derive_key(base_key, index)
        system, scene, kappa = _apply_value(spec.system, spec.scene, spec.kappa, spec.swept_name, value)
        try:
            breakdown = analytic.pdc(system, scene, kappa, cell_kind=spec.cell_kind)
            config = SimConfig(
                trials=spec.trials,
                seed=row_seed,
                mode=spec.mode,
                cell_kind=spec.cell_kind,
                threads=spec.threads,
            )
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")  # arena-coverage warnings are per-sweep noise
                estimate = montecarlo.estimate_pdc(system, scene, kappa, config)
            rows.append(
                SweepRow(
                    panel=spec.panel,
                    swept_name=spec.swept_name,
                    swept_value=value,
                    kappa=kappa,
                    pdc_analytic=breakdown.pdc,
                    pdc_mc=estimate.p_hat,
                    ci_low=estimate.ci_low,
                    ci_high=estimate.ci_high,
                    noise_exp=breakdown.noise_exponent,
                    clutter_exp=breakdown.clutter_exponent,
                    trials=spec.trials,
                    seed=row_seed,
                )
            )
        except (CoverageError, ValueError) as exc:
            warnings.warn(f"sweep point {spec.panel}/{spec.swept_name}={value} failed: {exc}", stacklevel=2)
            rows.append(
                SweepRow(
                    panel=spec.panel,
                    swept_name=spec.swept_name,
                    swept_value=value,
                    kappa=kappa,
                    pdc_analytic=math.nan,
                    pdc_mc=math.nan,
                    ci_low=math.nan,
                    ci_high=math.nan,
                    noise_exp=math.nan,
                    clutter_exp=math.nan,
                    trials=spec.trials,
                    seed=row_seed,
                )
            )
    return SweepResult(rows=tuple(rows), markers=())


def log_slope(xs: Iterable[float], ys: Iterable[float]) -> LogSlope:
    """Least-squares slope of ln(y) against ln(x), with its standard error.

    Callers fitting a power law p in (-ln coverage) ~ kappa^p pass
    ys = -ln(coverage). All xs and ys must be positive; needs >= 3 points.
    """
    x = [float(v) for v in xs]
    y = [float(v) for v in ys]
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} xs vs {len(y)} ys")
    if len(x) < 3:
        raise ValueError(f"need at least 3 points, got {len(x)}")
    if any(v <= 0.0 for v in x) or any(v <= 0.0 for v in y):
        raise ValueError("log_slope needs strictly positive xs and ys")
    lx = [math.log(v) for v in x]
    ly = [math.log(v) for v in y]
    n = len(lx)
    mx = sum(lx) / n
    my = sum(ly) / n
    sxx = sum((v - mx) ** 2 for v in lx)
    sxy = sum((a - mx) * (b - my) for a, b in zip(lx, ly))
    if sxx == 0.0:
        raise ValueError("xs are all identical")
    slope = sxy / sxx
    intercept = my - slope * mx
    ss_res = sum((b - (intercept + slope * a)) ** 2 for a, b in zip(lx, ly))
    stderr = math.sqrt(ss_res / (n - 2) / sxx) if n > 2 else 0.0
    return LogSlope(slope=slope, stderr=stderr)


# ---------------------------------------------------------------------------
# Built-in panels
# ---------------------------------------------------------------------------


def _log_grid(lo: float, hi: float, n: int) -> tuple[float, ...]:
    step = (math.log(hi) - math.log(lo)) / (n - 1)
    return tuple(math.exp(math.log(lo) + i * step) for i in range(n))


def _lin_grid(lo: float, hi: float, n: int) -> tuple[float, ...]:
    step = (hi - lo) / (n - 1)
    return tuple(lo + i * step for i in range(n))


def panel_sweeps(
    panel: str,
    system: RadarSystem,
    scene: Scene,
    kappa: float = 50.0,
    trials: int = 2000,
    seed: int = 0,
    mode: SimMode = SimMode.GEOMETRIC,
    threads: int = 1,
) -> tuple[list[SweepSpec], list[MarkerRow]]:
    """Sweep specs and design markers for one of the built-in panels a..f.

    Branches of a panel are separate specs whose panel ids carry a branch
    suffix (e.g. "a/noise"), each with its own derived seed. Markers fall
    back to the closed form when the numeric solver has no root in bracket.
    """
    base_key = stream_key(seed)

    def branch_seed(i: int) -> int:
        return derive_key(base_key, 1000 + i)

    common = dict(system=system, scene=scene, kappa=kappa, trials=trials, mode=mode, threads=threads)
    specs: list[SweepSpec] = []
    markers: list[MarkerRow] = []

    if panel == "a":
        grid = _log_grid(5.0, 200.0, 20)
        noise_only = replace(scene, clutter_density=0.0)
        clutter_only_sys = replace(system, noise_temperature=0.0)
        specs = [
            SweepSpec(panel="a/noise", swept_name="kappa", grid=grid, seed=branch_seed(0),
                      **{**common, "scene": noise_only}),
            SweepSpec(panel="a/clutter", swept_name="kappa", grid=grid, seed=branch_seed(1),
                      **{**common, "system": clutter_only_sys}),
            SweepSpec(panel="a/both", swept_name="kappa", grid=grid, seed=branch_seed(2), **common),
        ]
        markers.append(
            MarkerRow(
                "a/both",
                "kappa_transition",
                _marker_value(
                    analytic.kappa_transition,
                    system,
                    scene,
                    closed_fallback=lambda s, sc: analytic._kappa_transition_closed(s, sc)[0],
                ),
            )
        )
        markers.append(MarkerRow("a/both", "kappa_mono", _marker_value(analytic.kappa_monostatic, system, scene)))
    elif panel == "b":
        grid = _log_grid(5.0, 200.0, 20)
        for i, dtheta_deg in enumerate((2.5, 5.0, 10.0)):
            dtheta = math.radians(dtheta_deg)
            sys_b = replace(system, beamwidth_tx=dtheta, beamwidth_rx=dtheta)
            label = f"b/dtheta={dtheta_deg}deg"
            specs.append(
                SweepSpec(panel=label, swept_name="kappa", grid=grid, seed=branch_seed(i),
                          **{**common, "system": sys_b})
            )
            markers.append(MarkerRow(label, "kappa_mono", _marker_value(analytic.kappa_monostatic, sys_b, scene)))
    elif panel == "c":
        grid = _log_grid(1e-3, 1e3, 20)
        for i, k in enumerate((10.0, 30.0, 50.0)):
            label = f"c/kappa={k:g}"
            specs.append(
                SweepSpec(panel=label, swept_name="ptx", grid=grid, seed=branch_seed(i),
                          **{**common, "kappa": k})
            )
            markers.append(
                MarkerRow(
                    label,
                    "ptx_max",
                    _marker_value(lambda s, sc, k=k: analytic.ptx_max(s, sc, k), system, scene),
                )
            )
    elif panel == "d":
        grid = _log_grid(0.1, 10.0, 20)
        for i, rho in enumerate((0.0005, 0.001, 0.002)):
            label = f"d/rho={rho:g}"
            specs.append(
                SweepSpec(panel=label, swept_name="sigma_c", grid=grid, seed=branch_seed(i),
                          **{**common, "scene": replace(scene, clutter_density=rho)})
            )
    elif panel == "e":
        grid = _lin_grid(50.0, 1000.0, 20)
        for i, rho in enumerate((0.0005, 0.001, 0.002)):
            label = f"e/rho={rho:g}"
            specs.append(
                SweepSpec(panel=label, swept_name="ts", grid=grid, seed=branch_seed(i),
                          **{**common, "scene": replace(scene, clutter_density=rho)})
            )
    elif panel == "f":
        grid = _log_grid(1e7, 1e11, 20)
        for i, k in enumerate((20.0, 30.0, 50.0)):
            label = f"f/kappa={k:g}"
            specs.append(
                SweepSpec(panel=label, swept_name="bw", grid=grid, seed=branch_seed(i),
                          cell_kind=CellKind.RANGE, **{**common, "kappa": k})
            )
            markers.append(
                MarkerRow(
                    label,
                    "bw_opt",
                    _marker_value(lambda s, sc, k=k: analytic.bw_optimal(s, sc, k), system, scene),
                )
            )
    else:
        raise ValueError(f"unknown panel {panel!r}; expected one of a..f")
    return specs, markers


def _marker_value(solver, system: RadarSystem, scene: Scene, closed_fallback=None) -> float:
    """Numeric design value for a marker row.

    Falls back to the consistent closed form when the root lies outside the
    solver's search bracket, and to NaN when the corollary does not apply at
    all (the plotting side skips NaN markers).
    """
    try:
        return solver(system, scene).numeric
    except NoCrossingError:
        if closed_fallback is None:
            return math.nan
        try:
            return closed_fallback(system, scene)
        except ValueError:
            return math.nan
    except (CoverageError, ValueError):
        return math.nan


# ---------------------------------------------------------------------------
# CSV output
# ---------------------------------------------------------------------------


def format_number(value) -> str:
    """Render round-trip exact: 17 significant digits for floats."""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    return format(float(value), ".17g")


def _row_to_csv(row: SweepRow) -> str:
    return ",".join(
        [
            row.panel,
            row.swept_name,
            format_number(row.swept_value),
            format_number(row.kappa),
            format_number(row.pdc_analytic),
            format_number(row.pdc_mc),
            format_number(row.ci_low),
            format_number(row.ci_high),
            format_number(row.noise_exp),
            format_number(row.clutter_exp),
            str(row.trials),
            str(row.seed),
        ]
    )


def write_sweep_csv(path: str, rows: Iterable[SweepRow], timestamp: str | None = None) -> None:
    """Write sweep rows; the optional timestamp is a leading comment line."""
    lines = []
    if timestamp is not None:
        lines.append(f"# generated {timestamp}")
    lines.append(SWEEP_HEADER)
    lines.extend(_row_to_csv(r) for r in rows)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_markers_csv(path: str, markers: Iterable[MarkerRow]) -> None:
    lines = [MARKER_HEADER]
    lines.extend(f"{m.panel},{m.marker_name},{format_number(m.marker_value)}" for m in markers)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
