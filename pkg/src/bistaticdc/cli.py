"""Command-line interface.

Subcommands: geometry, analytic, design, simulate, sweep, hist. Parameters
come from built-in defaults, overridden by a flat JSON config file
(--config), overridden by command-line flags. Angle values accept a "deg"
suffix ("5deg") or plain radians; the threshold accepts a "dB" suffix
("3dB") or a plain linear value.

Exit codes: 0 success, 1 usage/config error, 2 domain or numeric failure,
3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

from . import analytic, experiments, montecarlo
from .analytic import AreaVariant, RadarSystem, Scene
from .errors import CoverageError
from .geometry import BistaticLayout, CellKind, Regime, classify_regime, solve_geometry
from .montecarlo import RangeBinRule, SimConfig, SimMode
from .stochastic import Rectangle

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_IO = 3

# Built-in parameter defaults (the reference deployment used throughout the
# docs and tests): 5 m baseline, 10 W, 5 degree beams, 5 mm wavelength, 300 K,
# 2 GHz, unit mean cross-sections, 0.001 clutter points per m^2, unit (0 dB)
# threshold, gain constant 1, 200 m x 200 m arena.
DEFAULTS: dict = {
    "L": 5.0,
    "ptx": 10.0,
    "a0": 1.0,
    "dtheta_tx": math.radians(5.0),
    "dtheta_rx": math.radians(5.0),
    "wavelength": 0.005,
    "ts": 300.0,
    "bw": 2.0e9,
    "pulse_width": None,
    "rho": 0.001,
    "sigma_t": 1.0,
    "sigma_c": 1.0,
    "gamma": 1.0,
    "region": [-100.0, 100.0, -100.0, 100.0],
}

_ANGLE_KEYS = {"dtheta_tx", "dtheta_rx"}
_GAMMA_KEYS = {"gamma"}
_PLAIN_FLOAT_KEYS = {"L", "ptx", "a0", "wavelength", "ts", "bw", "pulse_width", "rho", "sigma_t", "sigma_c"}


class UsageError(Exception):
    """Bad flags or config; mapped to exit code 1."""


def parse_angle(text) -> float:
    """Angle in radians; accepts a number or a 'deg'-suffixed string."""
    if isinstance(text, (int, float)):
        return float(text)
    s = str(text).strip()
    if s.endswith("deg"):
        return math.radians(float(s[: -len("deg")]))
    if s.endswith("rad"):
        return float(s[: -len("rad")])
    return float(s)


def parse_gamma(text) -> float:
    """Linear threshold; accepts a number or a 'dB'-suffixed string."""
    if isinstance(text, (int, float)):
        return float(text)
    s = str(text).strip()
    if s.endswith("dB"):
        return 10.0 ** (float(s[: -len("dB")]) / 10.0)
    return float(s)


@dataclass
class RunConfig:
    """Flat, validated parameter set feeding RadarSystem/Scene/SimConfig."""

    values: dict

    @classmethod
    def load(cls, config_path: str | None, flag_values: dict) -> "RunConfig":
        values = dict(DEFAULTS)
        if config_path is not None:
            try:
                with open(config_path, "r", encoding="utf-8") as fh:
                    doc = json.load(fh)
            except OSError as exc:
                raise UsageError(f"cannot read config {config_path}: {exc}") from exc
            except json.JSONDecodeError as exc:
                raise UsageError(f"config {config_path} is not valid JSON: {exc}") from exc
            if not isinstance(doc, dict):
                raise UsageError(f"config {config_path} must be a JSON object")
            for key, value in doc.items():
                if key not in DEFAULTS:
                    raise UsageError(f"unknown config key {key!r}; known keys: {sorted(DEFAULTS)}")
                values[key] = value
        for key, value in flag_values.items():
            if value is not None:
                values[key] = value
        return cls(values=cls._normalize(values))

    @staticmethod
    def _normalize(values: dict) -> dict:
        out = dict(values)
        try:
            for key in _ANGLE_KEYS:
                out[key] = parse_angle(out[key])
            for key in _GAMMA_KEYS:
                out[key] = parse_gamma(out[key])
            for key in _PLAIN_FLOAT_KEYS:
                if out[key] is not None:
                    out[key] = float(out[key])
            region = out["region"]
            if not (isinstance(region, (list, tuple)) and len(region) == 4):
                raise ValueError(f"region must be [x_min, x_max, y_min, y_max], got {region!r}")
            out["region"] = [float(v) for v in region]
        except (TypeError, ValueError) as exc:
            raise UsageError(f"bad parameter value: {exc}") from exc
        return out

    def system(self) -> RadarSystem:
        v = self.values
        return RadarSystem(
            transmit_power=v["ptx"],
            beamwidth_tx=v["dtheta_tx"],
            beamwidth_rx=v["dtheta_rx"],
            wavelength=v["wavelength"],
            noise_temperature=v["ts"],
            bandwidth=v["bw"],
            gain_constant=v["a0"],
            pulse_width=v["pulse_width"],
        )

    def scene(self) -> Scene:
        v = self.values
        return Scene(
            layout=BistaticLayout(v["L"]),
            clutter_density=v["rho"],
            target_rcs_mean=v["sigma_t"],
            clutter_rcs_mean=v["sigma_c"],
            threshold=v["gamma"],
        )

    def region(self) -> Rectangle:
        return Rectangle(*self.values["region"])

    def as_json_dict(self) -> dict:
        return dict(self.values)


def _fmt(value: float) -> str:
    return experiments.format_number(value)


def _default_threads() -> int:
    env = os.environ.get("BISTATICDC_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"BISTATICDC_THREADS must be an integer, got {env!r}")
    return 1


def _add_common_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--L", help="baseline length in meters")
    p.add_argument("--ptx", help="transmit power in watts")
    p.add_argument("--a0", help="antenna gain constant A_0")
    p.add_argument("--dtheta", help="both beamwidths (radians, or e.g. 5deg)")
    p.add_argument("--dtheta-tx", dest="dtheta_tx", help="transmit beamwidth")
    p.add_argument("--dtheta-rx", dest="dtheta_rx", help="receive beamwidth")
    p.add_argument("--wavelength", help="carrier wavelength in meters")
    p.add_argument("--ts", help="system noise temperature in kelvin")
    p.add_argument("--bw", help="receiver bandwidth in hertz")
    p.add_argument("--pulse-width", dest="pulse_width", help="pulse width in seconds (default 1/bw)")
    p.add_argument("--rho", help="clutter density per square meter")
    p.add_argument("--sigma-t", dest="sigma_t", help="mean target cross-section in m^2")
    p.add_argument("--sigma-c", dest="sigma_c", help="mean clutter cross-section in m^2")
    p.add_argument("--gamma", help="detection threshold (linear, or e.g. 3dB)")
    p.add_argument("--region", nargs=4, type=float, metavar=("XMIN", "XMAX", "YMIN", "YMAX"))


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    flags = {}
    for key in DEFAULTS:
        if hasattr(args, key):
            flags[key] = getattr(args, key)
    both = getattr(args, "dtheta", None)
    if both is not None:
        flags["dtheta_tx"] = both
        flags["dtheta_rx"] = both
    return RunConfig.load(getattr(args, "config", None), flags)


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; the CLI contract wants 1."""

    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bistaticdc", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_geo = sub.add_parser("geometry", help="solve the bistatic geometry for one target")
    p_geo.add_argument("--L", required=True, help="baseline length in meters")
    p_geo.add_argument("--kappa", required=True, type=float, help="bistatic range in meters")
    p_geo.add_argument("--theta", required=True, type=float, help="polar angle in radians")
    p_geo.add_argument("--format", choices=("text", "json"), default="text")

    p_ana = sub.add_parser("analytic", help="closed-form coverage probability")
    _add_common_params(p_ana)
    p_ana.add_argument("--kappa", required=True, type=float)
    p_ana.add_argument("--cell", choices=("beam", "range"), default="beam")
    p_ana.add_argument("--regime", choices=("auto", "cosite", "lemniscate"), default="auto")
    p_ana.add_argument("--kappa-m", dest="kappa_m", type=float, help="kappa_m for the verbatim range cell")
    p_ana.add_argument("--verbatim", action="store_true", help="as-published constant variants")
    p_ana.add_argument("--format", choices=("text", "json"), default="text")

    p_des = sub.add_parser("design", help="design corollaries: closed form vs numeric solver")
    _add_common_params(p_des)
    p_des.add_argument(
        "--solve",
        required=True,
        choices=("kappa-transition", "ptx-max", "kappa-mono", "bw-opt"),
    )
    p_des.add_argument("--kappa", type=float, help="bistatic range (ptx-max, bw-opt)")
    p_des.add_argument("--verbatim", action="store_true")
    p_des.add_argument("--format", choices=("text", "json"), default="text")

    p_sim = sub.add_parser("simulate", help="Monte Carlo coverage estimate")
    _add_common_params(p_sim)
    p_sim.add_argument("--kappa", required=True, type=float)
    p_sim.add_argument("--trials", type=int, default=10000)
    p_sim.add_argument("--seed", type=int, default=None)
    p_sim.add_argument("--mode", choices=("geometric", "oracle"), default="geometric")
    p_sim.add_argument("--cell", choices=("beam", "range"), default="beam")
    p_sim.add_argument("--range-bin", dest="range_bin", choices=("half", "full"), default="half")
    p_sim.add_argument("--threads", type=int, default=None)
    p_sim.add_argument("--dump", help="write per-trial outcomes to this CSV path")
    p_sim.add_argument("--strict-repro", action="store_true", help="require an explicit --seed")
    p_sim.add_argument("--format", choices=("text", "json"), default="text")

    p_swp = sub.add_parser("sweep", help="run a built-in parameter sweep panel")
    _add_common_params(p_swp)
    p_swp.add_argument("--panel", required=True, choices=tuple("abcdef"))
    p_swp.add_argument("--out", required=True, help="output CSV path (markers go to *.markers.csv)")
    p_swp.add_argument("--kappa", type=float, default=50.0, help="fixed kappa for panels c/d/e/f")
    p_swp.add_argument("--trials", type=int, default=2000)
    p_swp.add_argument("--seed", type=int, default=None)
    p_swp.add_argument("--mode", choices=("geometric", "oracle"), default="geometric")
    p_swp.add_argument("--threads", type=int, default=None)
    p_swp.add_argument("--timestamp", action="store_true", help="prepend a timestamp comment line")
    p_swp.add_argument("--strict-repro", action="store_true", help="require an explicit --seed")

    p_hist = sub.add_parser("hist", help="geometry distribution studies")
    p_hist.add_argument("--which", required=True, choices=("sinbeta", "rmin"))
    p_hist.add_argument("--L", required=True, help="baseline length in meters")
    p_hist.add_argument("--kappa", required=True, type=float)
    p_hist.add_argument("--trials", type=int, default=None, help="default 10000 (sinbeta) / 2000 (rmin)")
    p_hist.add_argument("--bins", type=int, default=50)
    p_hist.add_argument("--seed", type=int, default=0)
    p_hist.add_argument("--out", help="write histogram CSV here (markers to *.markers.csv)")

    return parser


# ---------------------------------------------------------------------------
# Subcommand bodies
# ---------------------------------------------------------------------------


def _cmd_geometry(args) -> int:
    sol = solve_geometry(float(args.L), args.kappa, args.theta)
    result = {
        "r_t": sol.radial_distance,
        "R_tx": sol.tx_range,
        "R_rx": sol.rx_range,
        "beta": sol.bistatic_angle,
        "sin_beta": math.sin(sol.bistatic_angle),
        "regime": sol.regime.value,
    }
    if args.format == "json":
        doc = {
            "config": {"L": float(args.L), "kappa": args.kappa, "theta": args.theta},
            "result": result,
        }
        print(json.dumps(doc, indent=2))
    else:
        for key, value in result.items():
            print(f"{key}={value if isinstance(value, str) else _fmt(value)}")
    return EXIT_OK


def _regime_from_arg(name: str, baseline: float, kappa: float) -> Regime | None:
    if name == "auto":
        return None
    requested = Regime.COSITE if name == "cosite" else Regime.LEMNISCATE
    actual = classify_regime(baseline, kappa)
    if requested is not actual:
        raise CoverageError(f"requested regime {name} but (L={baseline}, kappa={kappa}) is {actual.value}")
    return requested


def _cmd_analytic(args) -> int:
    cfg = _config_from_args(args)
    system = cfg.system()
    scene = cfg.scene()
    regime = _regime_from_arg(args.regime, scene.layout.baseline, args.kappa)
    variant = AreaVariant.VERBATIM if args.verbatim else AreaVariant.DERIVED
    breakdown = analytic.pdc(
        system,
        scene,
        args.kappa,
        cell_kind=CellKind.RANGE if args.cell == "range" else CellKind.BEAMWIDTH,
        regime=regime,
        variant=variant,
        kappa_m=args.kappa_m,
        verbatim=args.verbatim,
    )
    result = {
        "pdc": breakdown.pdc,
        "noise_exponent": breakdown.noise_exponent,
        "clutter_exponent": breakdown.clutter_exponent,
    }
    if args.format == "json":
        print(json.dumps({"config": cfg.as_json_dict(), "kappa": args.kappa, "result": result}, indent=2))
    else:
        for key, value in result.items():
            print(f"{key}={_fmt(value)}")
    return EXIT_OK


def _cmd_design(args) -> int:
    cfg = _config_from_args(args)
    system = cfg.system()
    scene = cfg.scene()
    name = args.solve
    if name == "kappa-transition":
        dv = analytic.kappa_transition(system, scene)
    elif name == "ptx-max":
        if args.kappa is None:
            raise UsageError("ptx-max needs --kappa")
        dv = analytic.ptx_max(system, scene, args.kappa)
    elif name == "kappa-mono":
        dv = analytic.kappa_monostatic(system, scene)
    else:
        if args.kappa is None:
            raise UsageError("bw-opt needs --kappa")
        dv = analytic.bw_optimal(system, scene, args.kappa, verbatim=args.verbatim)

    closed = dv.verbatim_closed_form if (args.verbatim and name != "bw-opt") else dv.closed_form
    scale = max(abs(closed), abs(dv.numeric))
    rel = abs(closed - dv.numeric) / scale if scale else 0.0
    result = {"closed_form": closed, "numeric": dv.numeric, "rel_diff": rel}
    if args.format == "json":
        print(json.dumps({"config": cfg.as_json_dict(), "solve": name, "result": result}, indent=2))
    else:
        for key, value in result.items():
            print(f"{key}={_fmt(value)}")
    if rel > 1e-6:
        print(
            f"WARN: closed form and numeric solver disagree by {rel:.3e} "
            "(verbatim constants do not satisfy the defining balance; "
            "the consistent form does)"
        )
    return EXIT_OK


def _require_seed(args) -> int:
    if args.seed is None:
        if args.strict_repro:
            raise UsageError("--strict-repro requires an explicit --seed")
        return 0
    return args.seed


def _cmd_simulate(args) -> int:
    cfg = _config_from_args(args)
    system = cfg.system()
    scene = cfg.scene()
    seed = _require_seed(args)
    threads = args.threads if args.threads is not None else _default_threads()
    if args.trials < 100:
        raise UsageError("simulate needs --trials >= 100")
    config = SimConfig(
        trials=args.trials,
        seed=seed,
        region=cfg.region(),
        mode=SimMode.ORACLE if args.mode == "oracle" else SimMode.GEOMETRIC,
        cell_kind=CellKind.RANGE if args.cell == "range" else CellKind.BEAMWIDTH,
        range_bin_rule=RangeBinRule.FULL_WIDTH if args.range_bin == "full" else RangeBinRule.HALF_WIDTH,
        threads=threads,
    )
    estimate = montecarlo.estimate_pdc(system, scene, args.kappa, config)
    result = {
        "p_hat": estimate.p_hat,
        "ci_low": estimate.ci_low,
        "ci_high": estimate.ci_high,
        "trials": estimate.trials,
        "analytic_pdc": estimate.analytic_pdc,
        "z": estimate.z,
        "theta_resamples": estimate.theta_resamples,
        "seed": seed,
        "mode": args.mode,
    }
    if args.dump:
        batch = montecarlo.simulate_trials(system, scene, args.kappa, config)
        try:
            with open(args.dump, "w", encoding="utf-8", newline="\n") as fh:
                fh.write("trial,scnr,detected,beta,rmin_over_kappa,clutter_in_cell\n")
                for i in range(config.trials):
                    o = batch.outcome(i, scene.threshold)
                    fh.write(
                        f"{i},{_fmt(o.scnr)},{int(o.detected)},{_fmt(o.bistatic_angle)},"
                        f"{_fmt(o.rmin_over_kappa)},{o.clutter_in_cell}\n"
                    )
        except OSError as exc:
            print(f"I/O error writing {args.dump}: {exc}", file=sys.stderr)
            return EXIT_IO
    if args.format == "json":
        print(json.dumps({"config": cfg.as_json_dict(), "kappa": args.kappa, "result": result}, indent=2))
    else:
        for key, value in result.items():
            if isinstance(value, str):
                print(f"{key}={value}")
            elif isinstance(value, int):
                print(f"{key}={value}")
            else:
                print(f"{key}={_fmt(value)}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cfg = _config_from_args(args)
    system = cfg.system()
    scene = cfg.scene()
    seed = _require_seed(args)
    threads = args.threads if args.threads is not None else _default_threads()
    specs, markers = experiments.panel_sweeps(
        args.panel,
        system,
        scene,
        kappa=args.kappa,
        trials=args.trials,
        seed=seed,
        mode=SimMode.ORACLE if args.mode == "oracle" else SimMode.GEOMETRIC,
        threads=threads,
    )
    rows = []
    for spec in specs:
        rows.extend(run_sweep_rows(spec))
    timestamp = None
    if args.timestamp:
        import datetime

        timestamp = datetime.datetime.now(datetime.timezone.utc).isoformat()
    try:
        experiments.write_sweep_csv(args.out, rows, timestamp=timestamp)
        experiments.write_markers_csv(_markers_path(args.out), markers)
    except OSError as exc:
        print(f"I/O error writing {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {len(rows)} rows to {args.out} and {len(markers)} markers to {_markers_path(args.out)}")
    return EXIT_OK


def run_sweep_rows(spec) -> list:
    return list(experiments.run_sweep(spec).rows)


def _markers_path(out: str) -> str:
    base, ext = os.path.splitext(out)
    return f"{base}.markers{ext or '.csv'}"


def _cmd_hist(args) -> int:
    baseline = float(args.L)
    if args.which == "sinbeta":
        trials = args.trials if args.trials is not None else 10000
        hist = montecarlo.histogram_sin_beta(baseline, args.kappa, trials=trials, bins=args.bins, seed=args.seed)
        marker_name = "sin_beta_max"
    else:
        trials = args.trials if args.trials is not None else 2000
        hist = montecarlo.histogram_rmin(baseline, args.kappa, trials=trials, bins=args.bins, seed=args.seed)
        marker_name = "rmin_lower_bound"
    lines = ["bin_left,bin_right,count"]
    for i in range(len(hist.counts)):
        lines.append(f"{_fmt(hist.bin_edges[i])},{_fmt(hist.bin_edges[i + 1])},{int(hist.counts[i])}")
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write("\n".join(lines) + "\n")
            experiments.write_markers_csv(
                _markers_path(args.out),
                [experiments.MarkerRow(f"hist/{args.which}", marker_name, hist.annotation)],
            )
        except OSError as exc:
            print(f"I/O error writing {args.out}: {exc}", file=sys.stderr)
            return EXIT_IO
        print(f"wrote {len(hist.counts)} bins to {args.out}")
    else:
        print("\n".join(lines))
        print(f"# {marker_name}={_fmt(hist.annotation)}")
    return EXIT_OK


_COMMANDS = {
    "geometry": _cmd_geometry,
    "analytic": _cmd_analytic,
    "design": _cmd_design,
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "hist": _cmd_hist,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CoverageError, ValueError, ZeroDivisionError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
