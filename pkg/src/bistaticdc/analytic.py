"""Closed-form detection coverage probability and the design corollaries.

The coverage probability for a target at bistatic range kappa factors as

    P_dc = exp(-noise_exponent - clutter_exponent)

with a noise term growing as kappa^4,

    noise_exponent = gamma * N_s * bw_tx * bw_rx / (P_tx * A_0 * sigma_t_bar * h(kappa)),

h the line-of-sight propagation factor, and a clutter term

    clutter_exponent = rho * A_c * gamma * sigma_c_bar / (sigma_t_bar + gamma * sigma_c_bar)

where A_c is the effective resolution-cell area of the regime:

    co-site beam cell      kappa^3 * bw_tx * bw_rx / L               (~ kappa^3)
    lemniscate beam cell   kappa^2 * bw_tx * bw_rx / sqrt(3)
    range cell (derived)   c * dtau * dtheta * kappa / (2 cos^2(beta_max))
    range cell (verbatim)  c * dtau * dtheta * kappa^2 / (2 (kappa_m + sqrt(kappa_m^2 - L^2)))

The gamma * sigma_c_bar / (sigma_t_bar + gamma * sigma_c_bar) factor is the
exponential-clutter expectation E[1 - exp(-gamma*sigma_c/sigma_t_bar)] closed
by the Poisson point process generating functional; `verbatim=True` drops the
gamma in its numerator (and the (4*pi)^3 constant in the transition
corollaries), reproducing the as-published constant choices for comparison.
The defaults keep the forms internally consistent, so every closed-form design
value agrees with its independent numeric solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from . import geometry
from .constants import BOLTZMANN_CONSTANT, FOUR_PI_CUBED, LEMNISCATE_SIN_BETA, SPEED_OF_LIGHT
from .errors import DegenerateOptimumError, NoCrossingError
from .geometry import BistaticLayout, CellKind, Regime
from .solvers import bisect_log, golden_section_min_log

__all__ = [
    "RadarSystem",
    "Scene",
    "PdcBreakdown",
    "DesignValue",
    "AreaVariant",
    "noise_power",
    "noise_exponent",
    "clutter_exponent_beam_cosite",
    "clutter_exponent_beam_lemniscate",
    "clutter_exponent_range",
    "clutter_exponent",
    "pdc",
    "kappa_transition",
    "ptx_max",
    "kappa_monostatic",
    "pdc_sigmac_limit",
    "bw_optimal",
]


@dataclass(frozen=True)
class RadarSystem:
    """Transmitter/receiver hardware parameters.

    gain_constant is the proportionality A_0 in
    G_tx_max * G_rx_max = A_0 / (bw_tx * bw_rx); it folds aperture, matching
    and loss efficiencies and defaults to 1. pulse_width defaults to
    1/bandwidth when left None.
    """

    transmit_power: float  # P_tx, W
    beamwidth_tx: float  # radians
    beamwidth_rx: float  # radians
    wavelength: float  # m
    noise_temperature: float  # T_s, K
    bandwidth: float  # Hz
    gain_constant: float = 1.0  # A_0
    pulse_width: float | None = None  # s

    def __post_init__(self) -> None:
        if not self.transmit_power > 0.0:
            raise ValueError(f"transmit_power must be > 0, got {self.transmit_power}")
        for name in ("beamwidth_tx", "beamwidth_rx"):
            value = getattr(self, name)
            if not 0.0 < value < math.pi:
                raise ValueError(f"{name} must be in (0, pi), got {value}")
        if not self.wavelength > 0.0:
            raise ValueError(f"wavelength must be > 0, got {self.wavelength}")
        if not self.noise_temperature >= 0.0:
            raise ValueError(f"noise_temperature must be >= 0, got {self.noise_temperature}")
        if not self.bandwidth > 0.0:
            raise ValueError(f"bandwidth must be > 0, got {self.bandwidth}")
        if not self.gain_constant > 0.0:
            raise ValueError(f"gain_constant must be > 0, got {self.gain_constant}")
        if self.pulse_width is not None and not self.pulse_width > 0.0:
            raise ValueError(f"pulse_width must be > 0, got {self.pulse_width}")

    @property
    def effective_pulse_width(self) -> float:
        return self.pulse_width if self.pulse_width is not None else 1.0 / self.bandwidth

    @property
    def noise_power(self) -> float:
        return noise_power(self.noise_temperature, self.bandwidth)


@dataclass(frozen=True)
class Scene:
    """Deployment: layout, clutter field statistics, target and threshold."""

    layout: BistaticLayout
    clutter_density: float  # rho, 1/m^2
    target_rcs_mean: float  # m^2
    clutter_rcs_mean: float  # m^2
    threshold: float = 1.0  # gamma, linear

    def __post_init__(self) -> None:
        if not self.clutter_density >= 0.0:
            raise ValueError(f"clutter_density must be >= 0, got {self.clutter_density}")
        if not self.target_rcs_mean > 0.0:
            raise ValueError(f"target_rcs_mean must be > 0, got {self.target_rcs_mean}")
        if not self.clutter_rcs_mean > 0.0:
            raise ValueError(f"clutter_rcs_mean must be > 0, got {self.clutter_rcs_mean}")
        if not self.threshold > 0.0:
            raise ValueError(f"threshold must be > 0, got {self.threshold}")


@dataclass(frozen=True)
class PdcBreakdown:
    """Coverage probability with its exponent split into noise and clutter parts."""

    noise_exponent: float
    clutter_exponent: float

    @property
    def pdc(self) -> float:
        return math.exp(-self.noise_exponent - self.clutter_exponent)


@dataclass(frozen=True)
class DesignValue:
    """A design quantity: consistent closed form, independent numeric solution,
    their relative difference, and the as-published (verbatim) closed form."""

    closed_form: float
    numeric: float
    verbatim_closed_form: float

    @property
    def rel_diff(self) -> float:
        scale = max(abs(self.closed_form), abs(self.numeric))
        if scale == 0.0:
            return 0.0
        return abs(self.closed_form - self.numeric) / scale


class AreaVariant:
    """Range-cell area variants (strings so the CLI can pass them through)."""

    DERIVED = "derived"
    VERBATIM = "verbatim"


def noise_power(noise_temperature: float, bandwidth: float) -> float:
    """Receiver noise power k_B * T_s * BW in watts."""
    if not noise_temperature >= 0.0:
        raise ValueError(f"noise_temperature must be >= 0, got {noise_temperature}")
    if not bandwidth > 0.0:
        raise ValueError(f"bandwidth must be > 0, got {bandwidth}")
    return BOLTZMANN_CONSTANT * noise_temperature * bandwidth


def noise_exponent(system: RadarSystem, scene: Scene, kappa: float) -> float:
    """Noise part of -ln(P_dc); grows as kappa^4."""
    h = geometry.los_propagation(system.wavelength, kappa)
    return (
        scene.threshold
        * system.noise_power
        * system.beamwidth_tx
        * system.beamwidth_rx
        / (system.transmit_power * system.gain_constant * scene.target_rcs_mean * h)
    )


def _clutter_rcs_factor(scene: Scene, verbatim: bool) -> float:
    """Exponential-clutter expectation gamma*s_c/(s_t + gamma*s_c).

    verbatim drops the gamma in the numerator (the as-published constant).
    """
    gamma = scene.threshold
    num = scene.clutter_rcs_mean if verbatim else gamma * scene.clutter_rcs_mean
    return num / (scene.target_rcs_mean + gamma * scene.clutter_rcs_mean)


def clutter_exponent_beam_cosite(
    system: RadarSystem, scene: Scene, kappa: float, verbatim: bool = False
) -> float:
    """Clutter part of -ln(P_dc) for a beam cell in the co-site regime.

    rho * kappa^3 * bw_tx * bw_rx / L times the clutter RCS factor; grows as
    kappa^3. Needs 0 < L < 2*kappa (a monostatic layout has an unbounded beam
    cell).
    """
    L = scene.layout.baseline
    if L <= 0.0:
        raise ValueError("co-site beam cell needs baseline > 0 (monostatic cell is unbounded)")
    if geometry.classify_regime(L, kappa) is not Regime.COSITE:
        raise ValueError(f"(L={L}, kappa={kappa}) is not in the co-site regime")
    if scene.clutter_density == 0.0:
        return 0.0
    cell = (kappa**3) * system.beamwidth_tx * system.beamwidth_rx / L
    return scene.clutter_density * cell * _clutter_rcs_factor(scene, verbatim)


def clutter_exponent_beam_lemniscate(
    system: RadarSystem, scene: Scene, kappa: float, verbatim: bool = False
) -> float:
    """Clutter part for a beam cell at L = 2*kappa.

    Uses the sqrt(3) constant verbatim (see constants.LEMNISCATE_SIN_BETA):
    rho * kappa^2 * bw_tx * bw_rx / sqrt(3) times the clutter RCS factor.
    """
    L = scene.layout.baseline
    if geometry.classify_regime(L, kappa) is not Regime.LEMNISCATE:
        raise ValueError(f"(L={L}, kappa={kappa}) is not in the lemniscate regime")
    if scene.clutter_density == 0.0:
        return 0.0
    cell = (kappa**2) * system.beamwidth_tx * system.beamwidth_rx / LEMNISCATE_SIN_BETA
    return scene.clutter_density * cell * _clutter_rcs_factor(scene, verbatim)


def _require_common_beamwidth(system: RadarSystem) -> float:
    if not math.isclose(system.beamwidth_tx, system.beamwidth_rx, rel_tol=1e-12):
        raise ValueError(
            "range-cell closed forms assume a common beamwidth; "
            f"got tx={system.beamwidth_tx}, rx={system.beamwidth_rx}"
        )
    return system.beamwidth_tx


def cos2_beta_max(baseline: float, kappa: float) -> float:
    """cos^2 of the maximum bistatic angle: (1 - L^2/(2*kappa^2))^2."""
    c = 1.0 - (baseline * baseline) / (2.0 * kappa * kappa)
    return c * c


def range_cell_area(
    system: RadarSystem,
    scene: Scene,
    kappa: float,
    variant: str = AreaVariant.DERIVED,
    kappa_m: float | None = None,
) -> float:
    """Effective range-limited cell area for the closed forms.

    derived:  c * dtau * dtheta * kappa / (2 * cos^2(beta_max)), i.e. the
              target-placement cell with R_min ~ kappa and beta ~ beta_max.
    verbatim: c * dtau * dtheta * kappa^2 / (2 * (kappa_m + sqrt(kappa_m^2 - L^2)))
              with the caller-supplied normalization range kappa_m (default
              kappa). The two differ; both are exposed on purpose.
    """
    L = scene.layout.baseline
    if L > 2.0 * kappa * (1.0 + geometry.REGIME_EPS):
        raise ValueError(f"need L <= 2*kappa, got L={L}, kappa={kappa}")
    dtheta = _require_common_beamwidth(system)
    dtau = system.effective_pulse_width
    if variant == AreaVariant.DERIVED:
        return SPEED_OF_LIGHT * dtau * dtheta * kappa / (2.0 * cos2_beta_max(L, kappa))
    if variant == AreaVariant.VERBATIM:
        km = kappa if kappa_m is None else kappa_m
        if km < L:
            raise ValueError(f"kappa_m={km} below baseline {L}: sqrt(kappa_m^2 - L^2) undefined")
        return SPEED_OF_LIGHT * dtau * dtheta * (kappa**2) / (2.0 * (km + math.sqrt(km * km - L * L)))
    raise ValueError(f"unknown range-cell variant {variant!r}")


def clutter_exponent_range(
    system: RadarSystem,
    scene: Scene,
    kappa: float,
    variant: str = AreaVariant.DERIVED,
    kappa_m: float | None = None,
    verbatim: bool = False,
) -> float:
    """Clutter part of -ln(P_dc) for a range-limited cell (L <= 2*kappa)."""
    if scene.clutter_density == 0.0:
        _require_common_beamwidth(system)
        return 0.0
    cell = range_cell_area(system, scene, kappa, variant=variant, kappa_m=kappa_m)
    return scene.clutter_density * cell * _clutter_rcs_factor(scene, verbatim)


def clutter_exponent(
    system: RadarSystem,
    scene: Scene,
    kappa: float,
    cell_kind: CellKind = CellKind.BEAMWIDTH,
    regime: Regime | None = None,
    variant: str = AreaVariant.DERIVED,
    kappa_m: float | None = None,
    verbatim: bool = False,
) -> float:
    """Clutter exponent matching (cell_kind, regime); regime None means classify."""
    if scene.clutter_density == 0.0:
        return 0.0
    actual = geometry.classify_regime(scene.layout.baseline, kappa)
    if regime is None:
        regime = actual
    elif regime is not actual:
        raise ValueError(f"requested regime {regime} but (L, kappa) classify as {actual}")
    if cell_kind is CellKind.RANGE:
        return clutter_exponent_range(
            system, scene, kappa, variant=variant, kappa_m=kappa_m, verbatim=verbatim
        )
    if regime is Regime.COSITE:
        return clutter_exponent_beam_cosite(system, scene, kappa, verbatim=verbatim)
    if regime is Regime.LEMNISCATE:
        return clutter_exponent_beam_lemniscate(system, scene, kappa, verbatim=verbatim)
    raise ValueError(f"unsupported regime {regime}")


def pdc(
    system: RadarSystem,
    scene: Scene,
    kappa: float,
    cell_kind: CellKind = CellKind.BEAMWIDTH,
    regime: Regime | None = None,
    variant: str = AreaVariant.DERIVED,
    kappa_m: float | None = None,
    verbatim: bool = False,
) -> PdcBreakdown:
    """Detection coverage probability P(SCNR >= gamma) with its exponent split.

    The exponents add, so P_dc factors exactly into a clutter-free and a
    noise-free part. clutter_density = 0 short-circuits the clutter term
    (no cell geometry needed), making monostatic noise-only studies legal.
    """
    return PdcBreakdown(
        noise_exponent=noise_exponent(system, scene, kappa),
        clutter_exponent=clutter_exponent(
            system,
            scene,
            kappa,
            cell_kind=cell_kind,
            regime=regime,
            variant=variant,
            kappa_m=kappa_m,
            verbatim=verbatim,
        ),
    )


# ---------------------------------------------------------------------------
# Design corollaries: each returns the closed form, an independent numeric
# solution of its defining equation, and the verbatim-constant variant.
# ---------------------------------------------------------------------------

KAPPA_SEARCH_MAX = 1.0e6  # m, upper end of the transition-range bracket


def kappa_transition(system: RadarSystem, scene: Scene) -> DesignValue:
    """Bistatic range where noise-limited and clutter-limited behaviour swap.

    Defined by noise_exponent(kappa) = clutter_exponent(kappa) (beam cell,
    co-site); since their ratio is linear in kappa the crossing is unique.
    Closed form:

        kappa~ = rho*s_c*s_t*P_tx*A_0*lambda^2 / ((4*pi)^3 * L * (s_t + gamma*s_c) * N_s)

    gamma cancels in the balance, so kappa~ is threshold-independent. The
    verbatim form omits the (4*pi)^3. The numeric value is a bisection root on
    log(kappa) over [L/2*(1+1e-6), 1e6]; NoCrossingError if the exponents do
    not cross there.
    """
    closed, core = _kappa_transition_closed(system, scene)
    L = scene.layout.baseline
    numeric = bisect_log(
        lambda k: noise_exponent(system, scene, k) - clutter_exponent_beam_cosite(system, scene, k),
        0.5 * L * (1.0 + 1e-6),
        KAPPA_SEARCH_MAX,
        rel_tol=1e-10,
    )
    return DesignValue(closed_form=closed, numeric=numeric, verbatim_closed_form=core)


def _kappa_transition_closed(system: RadarSystem, scene: Scene) -> tuple[float, float]:
    """(consistent, verbatim) closed forms of the noise/clutter transition range."""
    L = scene.layout.baseline
    if L <= 0.0:
        raise ValueError("kappa_transition needs baseline > 0")
    n_s = system.noise_power
    if not n_s > 0.0:
        raise ValueError("kappa_transition needs N_s > 0")
    if not scene.clutter_density > 0.0:
        raise ValueError("kappa_transition needs clutter_density > 0")
    s_t = scene.target_rcs_mean
    s_c = scene.clutter_rcs_mean
    gamma = scene.threshold
    core = (
        scene.clutter_density
        * s_c
        * s_t
        * system.transmit_power
        * system.gain_constant
        * system.wavelength**2
        / (L * (s_t + gamma * s_c) * n_s)
    )
    return core / FOUR_PI_CUBED, core


def ptx_max(system: RadarSystem, scene: Scene, kappa: float) -> DesignValue:
    """Transmit power beyond which clutter, not noise, caps the coverage at kappa.

    Inverse of kappa_transition: the power making the two exponents equal at
    this kappa. Closed form:

        P_max = (4*pi)^3 * L * kappa * (s_t + gamma*s_c) * N_s / (rho*s_c*s_t*A_0*lambda^2)

    (verbatim omits the (4*pi)^3). Numeric: bisection on log(P_tx) of the
    exponent balance, independent of the algebra above.
    """
    L = scene.layout.baseline
    if L <= 0.0:
        raise ValueError("ptx_max needs baseline > 0")
    n_s = system.noise_power
    if not n_s > 0.0:
        raise ValueError("ptx_max needs N_s > 0")
    if not scene.clutter_density > 0.0:
        raise ValueError("ptx_max needs clutter_density > 0")
    s_t = scene.target_rcs_mean
    s_c = scene.clutter_rcs_mean
    gamma = scene.threshold
    core = (
        L
        * kappa
        * (s_t + gamma * s_c)
        * n_s
        / (scene.clutter_density * s_c * s_t * system.gain_constant * system.wavelength**2)
    )
    closed = FOUR_PI_CUBED * core

    clutter = clutter_exponent_beam_cosite(system, scene, kappa)

    def balance(p: float) -> float:
        return noise_exponent(replace(system, transmit_power=p), scene, kappa) - clutter

    numeric = bisect_log(balance, 1e-18, 1e18, rel_tol=1e-10)
    return DesignValue(closed_form=closed, numeric=numeric, verbatim_closed_form=core)


def kappa_monostatic(system: RadarSystem, scene: Scene) -> DesignValue:
    """Bistatic range at which clutter alone drags coverage to exp(-1).

    Beyond it the beam cell has grown so large that the bistatic layout
    behaves monostatically. Defined by clutter_exponent(kappa) = 1:

        kappa- = (L * (s_t + gamma*s_c) / (rho * bw_tx * bw_rx * gamma * s_c))^(1/3)

    The verbatim form drops the gamma next to s_c in the denominator.
    """
    L = scene.layout.baseline
    if L <= 0.0:
        raise ValueError("kappa_monostatic needs baseline > 0")
    if not scene.clutter_density > 0.0:
        raise ValueError("kappa_monostatic needs clutter_density > 0")
    s_t = scene.target_rcs_mean
    s_c = scene.clutter_rcs_mean
    gamma = scene.threshold
    beams = system.beamwidth_tx * system.beamwidth_rx
    closed = (L * (s_t + gamma * s_c) / (scene.clutter_density * beams * gamma * s_c)) ** (1.0 / 3.0)
    verbatim_closed = (L * (s_t + gamma * s_c) / (scene.clutter_density * beams * s_c)) ** (1.0 / 3.0)
    numeric = bisect_log(
        lambda k: clutter_exponent_beam_cosite(system, scene, k) - 1.0,
        0.5 * L * (1.0 + 1e-6),
        1e12,
        rel_tol=1e-10,
    )
    return DesignValue(closed_form=closed, numeric=numeric, verbatim_closed_form=verbatim_closed)


def pdc_sigmac_limit(system: RadarSystem, scene: Scene, kappa: float, verbatim: bool = False) -> float:
    """Clutter-only coverage in the strong-clutter limit (clutter RCS -> inf).

    The clutter RCS factor saturates at 1, leaving exp(-rho*kappa^3*bw_tx*bw_rx/L):
    independent of both the target RCS and the threshold. The verbatim variant
    keeps a residual 1/gamma (saturation of the gamma-less factor).
    """
    L = scene.layout.baseline
    if L <= 0.0:
        raise ValueError("pdc_sigmac_limit needs baseline > 0")
    exponent = scene.clutter_density * (kappa**3) * system.beamwidth_tx * system.beamwidth_rx / L
    if verbatim:
        exponent = exponent / scene.threshold
    return math.exp(-exponent)


BW_SEARCH_LO = 1.0  # Hz
BW_SEARCH_HI = 1.0e16  # Hz


def bw_optimal(system: RadarSystem, scene: Scene, kappa: float, verbatim: bool = False) -> DesignValue:
    """Bandwidth maximizing range-cell coverage for an impulse waveform (dtau = 1/BW).

    Noise grows linearly in BW while the range-cell clutter shrinks as 1/BW,
    so the total exponent a*BW + b/BW has the interior minimum BW = sqrt(b/a).
    With the consistent exponents the threshold cancels:

        BW_max^2 = rho*c*kappa*s_c*s_t*P_tx*A_0*h(kappa)
                   / (2*cos^2(beta_max)*(s_t + gamma*s_c)*k_B*T_s*dtheta)

    The verbatim variant pairs the gamma-less clutter exponent with its own
    stationary point (the same expression divided by gamma). Numeric: coarse
    log-BW grid plus golden-section refinement of the matching exponent.
    Raises DegenerateOptimumError when rho = 0 (monotone decreasing coverage)
    or T_s = 0 (monotone increasing).
    """
    dtheta = _require_common_beamwidth(system)
    L = scene.layout.baseline
    if not scene.clutter_density > 0.0:
        raise DegenerateOptimumError("clutter_density = 0: coverage is monotone in bandwidth")
    if not system.noise_temperature > 0.0:
        raise DegenerateOptimumError("noise_temperature = 0: coverage is monotone in bandwidth")
    h = geometry.los_propagation(system.wavelength, kappa)
    s_t = scene.target_rcs_mean
    s_c = scene.clutter_rcs_mean
    gamma = scene.threshold
    common = (
        scene.clutter_density
        * SPEED_OF_LIGHT
        * kappa
        * s_c
        * s_t
        * system.transmit_power
        * system.gain_constant
        * h
        / (
            2.0
            * cos2_beta_max(L, kappa)
            * (s_t + gamma * s_c)
            * BOLTZMANN_CONSTANT
            * system.noise_temperature
            * dtheta
        )
    )
    closed = math.sqrt(common)
    verbatim_closed = math.sqrt(common / gamma)

    def total_exponent(bw: float) -> float:
        sys_bw = replace(system, bandwidth=bw, pulse_width=1.0 / bw)
        return noise_exponent(sys_bw, scene, kappa) + clutter_exponent_range(
            sys_bw, scene, kappa, variant=AreaVariant.DERIVED, verbatim=verbatim
        )

    numeric = golden_section_min_log(total_exponent, BW_SEARCH_LO, BW_SEARCH_HI, rel_tol=1e-10)
    return DesignValue(
        closed_form=verbatim_closed if verbatim else closed,
        numeric=numeric,
        verbatim_closed_form=verbatim_closed,
    )
