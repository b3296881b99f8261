"""Bistatic geometry on Cassini ovals.

The transmitter sits at (+L/2, 0) and the receiver at (-L/2, 0). A target is
described by its bistatic range kappa = sqrt(R_tx * R_rx) (the geometric mean
of the two one-way ranges) and a polar angle theta in [0, 2*pi). For fixed
kappa and L the locus of targets is a Cassini oval:

    co-site     L < 2*kappa   one closed oval around both sites
    lemniscate  L = 2*kappa   figure-of-eight through the origin
    split       L > 2*kappa   two disjoint lobes (classification only)

The radial distance r solves the law-of-cosines quartic

    (r^2 + L^2/4)^2 - r^2 L^2 cos^2(theta) = kappa^4,

a quadratic in u = r^2. In the co-site regime the constant term
L^4/16 - kappa^4 is negative, so exactly one root is nonnegative and root
selection is forced. The one-way ranges and the bistatic angle beta (angle at
the target between the two sites) follow as

    R_tx^2  = r^2 + L^2/4 + r L cos(theta)
    R_rx^2  = r^2 + L^2/4 - r L cos(theta)
    cos(beta) = (R_tx^2 + R_rx^2 - L^2) / (2 kappa^2) = (r^2 - L^2/4) / kappa^2.

These formulas fix the polar axis so theta = 0 points away from the
transmitter; target_position() gives the matching Cartesian embedding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .constants import FOUR_PI_CUBED, SPEED_OF_LIGHT
from .errors import NoTargetError, NumericalFailureError, SplitRegimeError, UnboundedCellError

__all__ = [
    "Regime",
    "CellKind",
    "BistaticLayout",
    "TargetPlacement",
    "GeometrySolution",
    "ResolutionCellSpec",
    "classify_regime",
    "solve_radial",
    "solve_geometry",
    "sin_beta_max",
    "beta_max",
    "los_propagation",
    "cell_area_beamwidth",
    "cell_area_range",
    "target_position",
]

# Relative half-width of the band around L = 2*kappa that counts as lemniscate.
REGIME_EPS = 1e-9
# cos(beta) values within this distance of +/-1 are clamped; beyond it the
# geometry is declared numerically broken.
COS_BETA_CLAMP = 1e-9


class Regime(Enum):
    """Cassini-oval regime for a (baseline, bistatic range) pair."""

    COSITE = "cosite"
    LEMNISCATE = "lemniscate"
    SPLIT = "split"


class CellKind(Enum):
    """Which resolution cell bounds the clutter contribution."""

    BEAMWIDTH = "beam"
    RANGE = "range"


@dataclass(frozen=True)
class BistaticLayout:
    """Transmitter/receiver placement: sites at (+L/2, 0) and (-L/2, 0)."""

    baseline: float  # L, meters

    def __post_init__(self) -> None:
        if not self.baseline >= 0.0:
            raise ValueError(f"baseline must be >= 0, got {self.baseline}")


@dataclass(frozen=True)
class TargetPlacement:
    """Target described by bistatic range and polar angle."""

    bistatic_range: float  # kappa, meters
    polar_angle: float  # theta, radians in [0, 2*pi)

    def __post_init__(self) -> None:
        if not self.bistatic_range > 0.0:
            raise ValueError(f"bistatic_range must be > 0, got {self.bistatic_range}")
        if not 0.0 <= self.polar_angle < 2.0 * math.pi:
            raise ValueError(f"polar_angle must be in [0, 2*pi), got {self.polar_angle}")


@dataclass(frozen=True)
class GeometrySolution:
    """One solved target placement.

    Invariants (enforced by construction, checked by the test suite):
    tx_range * rx_range = kappa^2 to 1e-9 relative; |tx_range - rx_range| <= L;
    bistatic_angle in [0, pi].
    """

    radial_distance: float  # r, meters
    tx_range: float  # R_tx, meters
    rx_range: float  # R_rx, meters
    bistatic_angle: float  # beta, radians
    regime: Regime


@dataclass(frozen=True)
class ResolutionCellSpec:
    """Resolution-cell parameters independent of target placement."""

    cell_kind: CellKind
    beamwidth_tx: float  # radians
    beamwidth_rx: float  # radians
    pulse_width: float | None = None  # seconds, range-limited cells only

    def __post_init__(self) -> None:
        for name, value in (("beamwidth_tx", self.beamwidth_tx), ("beamwidth_rx", self.beamwidth_rx)):
            if not 0.0 < value < math.pi:
                raise ValueError(f"{name} must be in (0, pi), got {value}")
        if self.cell_kind is CellKind.RANGE:
            if self.pulse_width is None or not self.pulse_width > 0.0:
                raise ValueError("range-limited cell needs pulse_width > 0")


def classify_regime(baseline: float, kappa: float, eps: float = REGIME_EPS) -> Regime:
    """Classify the Cassini-oval regime of (baseline, kappa).

    Co-site when L < 2*kappa*(1 - eps), lemniscate when |L - 2*kappa| is
    within 2*kappa*eps, split otherwise.
    """
    if not baseline >= 0.0:
        raise ValueError(f"baseline must be >= 0, got {baseline}")
    if not kappa > 0.0:
        raise ValueError(f"kappa must be > 0, got {kappa}")
    two_kappa = 2.0 * kappa
    if baseline < two_kappa * (1.0 - eps):
        return Regime.COSITE
    if abs(baseline - two_kappa) <= two_kappa * eps:
        return Regime.LEMNISCATE
    return Regime.SPLIT


def _radial_squared(baseline: float, kappa: float, theta: float, regime: Regime) -> float:
    """u = r^2 for a pre-classified regime; shared by every radial consumer.

    The Monte Carlo kernels evaluate exactly these expressions, so everything
    downstream of u is bit-identical between the library and the kernels.
    """
    L2 = baseline * baseline
    cos2t = math.cos(2.0 * theta)
    if regime is Regime.LEMNISCATE:
        if cos2t < 0.0:
            raise NoTargetError(
                f"no lemniscate point at theta={theta}: cos(2*theta)={cos2t} < 0"
            )
        u = 0.5 * L2 * cos2t
        return 0.0 if u < 0.0 else u
    k2 = kappa * kappa
    k4 = k2 * k2
    b = 0.5 * L2 * cos2t
    disc = b * b + (4.0 * k4 - 0.25 * (L2 * L2))
    return 0.5 * (b + math.sqrt(disc))


def solve_radial(baseline: float, kappa: float, theta: float) -> float:
    """Radial distance r of the target at polar angle theta.

    Solves the quadratic in u = r^2. Co-site: the unique nonnegative root
    (the root product L^4/16 - kappa^4 is negative). Lemniscate: the nonzero
    root r = L*sqrt(cos(2*theta)/2), which exists only where cos(2*theta) >= 0.

    Raises NoTargetError in the lemniscate dead zones and SplitRegimeError
    when L > 2*kappa.
    """
    regime = classify_regime(baseline, kappa)
    if regime is Regime.SPLIT:
        raise SplitRegimeError(
            f"baseline {baseline} exceeds twice the bistatic range {kappa}; split ovals are unsupported"
        )
    return math.sqrt(_radial_squared(baseline, kappa, theta, regime))


def solve_geometry(baseline: float, kappa: float, theta: float) -> GeometrySolution:
    """Full geometry for a target at (kappa, theta): r, R_tx, R_rx, beta.

    cos(beta) is computed as (r^2 - L^2/4)/kappa^2, which equals the
    (R_tx^2 + R_rx^2 - L^2)/(2 kappa^2) law-of-cosines form identically;
    values within COS_BETA_CLAMP of +/-1 are clamped, values further out
    raise NumericalFailureError.
    """
    regime = classify_regime(baseline, kappa)
    if regime is Regime.SPLIT:
        raise SplitRegimeError(
            f"baseline {baseline} exceeds twice the bistatic range {kappa}; split ovals are unsupported"
        )
    rt2 = _radial_squared(baseline, kappa, theta, regime)
    r = math.sqrt(rt2)
    quarter = 0.25 * (baseline * baseline)
    term = r * baseline * math.cos(theta)
    tx2 = rt2 + quarter + term
    rx2 = rt2 + quarter - term
    # Guard rounding: both squares are >= (r - L/2)^2 >= 0 mathematically.
    if tx2 < 0.0:
        tx2 = 0.0
    if rx2 < 0.0:
        rx2 = 0.0
    cos_beta = (rt2 - quarter) / (kappa * kappa)
    if cos_beta > 1.0:
        if cos_beta > 1.0 + COS_BETA_CLAMP:
            raise NumericalFailureError(f"cos(beta) = {cos_beta} above 1 beyond tolerance")
        cos_beta = 1.0
    elif cos_beta < -1.0:
        if cos_beta < -1.0 - COS_BETA_CLAMP:
            raise NumericalFailureError(f"cos(beta) = {cos_beta} below -1 beyond tolerance")
        cos_beta = -1.0
    return GeometrySolution(
        radial_distance=r,
        tx_range=math.sqrt(tx2),
        rx_range=math.sqrt(rx2),
        bistatic_angle=math.acos(cos_beta),
        regime=regime,
    )


def sin_beta_max(baseline: float, kappa: float) -> float:
    """Largest sin(beta) over the oval, reached at theta = pi/2.

    Evaluates sqrt(L^2/kappa^2 - L^4/(4*kappa^4)). Requires L <= 2*kappa; the
    value is 0 at both L = 0 and L = 2*kappa. (The lemniscate closed form uses
    constants.LEMNISCATE_SIN_BETA = sqrt(3) instead; the two are deliberately
    not reconciled.)
    """
    if not kappa > 0.0:
        raise ValueError(f"kappa must be > 0, got {kappa}")
    if baseline < 0.0 or baseline > 2.0 * kappa:
        raise ValueError(f"need 0 <= baseline <= 2*kappa, got L={baseline}, kappa={kappa}")
    x = (baseline * baseline) / (kappa * kappa)
    s2 = x - 0.25 * x * x
    if s2 < 0.0:  # rounding at the L = 2*kappa boundary
        s2 = 0.0
    return math.sqrt(s2)


def beta_max(baseline: float, kappa: float) -> float:
    """Largest bistatic angle over the oval: acos(1 - L^2/(2*kappa^2)).

    Valid over the whole co-site/lemniscate range (unlike asin of
    sin_beta_max, which folds angles beyond pi/2).
    """
    if not kappa > 0.0:
        raise ValueError(f"kappa must be > 0, got {kappa}")
    if baseline < 0.0 or baseline > 2.0 * kappa:
        raise ValueError(f"need 0 <= baseline <= 2*kappa, got L={baseline}, kappa={kappa}")
    c = 1.0 - (baseline * baseline) / (2.0 * kappa * kappa)
    if c < -1.0:
        c = -1.0
    return math.acos(c)


def los_propagation(wavelength: float, kappa: float) -> float:
    """Two-way line-of-sight propagation factor lambda^2/((4*pi)^3 * kappa^4)."""
    if not wavelength > 0.0:
        raise ValueError(f"wavelength must be > 0, got {wavelength}")
    if not kappa > 0.0:
        raise ValueError(f"kappa must be > 0, got {kappa}")
    k2 = kappa * kappa
    return (wavelength * wavelength) / (FOUR_PI_CUBED * (k2 * k2))


def cell_area_beamwidth(
    kappa: float,
    beamwidth_tx: float,
    beamwidth_rx: float,
    beta: float,
    eps_beta: float = 1e-6,
) -> float:
    """Beamwidth-limited cell area kappa^2 * dtheta_tx * dtheta_rx / sin(beta).

    Raises UnboundedCellError when sin(beta) <= eps_beta: with (near-)parallel
    beams the main-lobe intersection is unbounded.
    """
    sin_beta = math.sin(beta)
    if sin_beta <= eps_beta:
        raise UnboundedCellError(
            f"sin(beta) = {sin_beta} <= {eps_beta}: beam intersection is unbounded"
        )
    return (kappa * kappa) * beamwidth_tx * beamwidth_rx / sin_beta


def cell_area_range(
    pulse_width: float,
    r_min: float,
    beamwidth_rx: float,
    beta: float,
    eps_cos: float = 1e-6,
) -> float:
    """Range-limited cell area c * dtau * R_min * dtheta_rx / (2 cos^2(beta)).

    R_min is the smaller of the two one-way ranges. Raises UnboundedCellError
    when cos^2(beta) <= eps_cos (forward-scatter geometry).
    """
    cos_beta = math.cos(beta)
    cos2 = cos_beta * cos_beta
    if cos2 <= eps_cos:
        raise UnboundedCellError(f"cos^2(beta) = {cos2} <= {eps_cos}: range cell is unbounded")
    return SPEED_OF_LIGHT * pulse_width * r_min * beamwidth_rx / (2.0 * cos2)


def target_position(baseline: float, kappa: float, theta: float) -> tuple[float, float]:
    """Cartesian position of the target consistent with the range formulas.

    With the transmitter at (+L/2, 0), R_tx^2 = r^2 + L^2/4 + r*L*cos(theta)
    requires the polar axis to point away from the transmitter, i.e. the
    target sits at (-r*cos(theta), r*sin(theta)).
    """
    r = solve_radial(baseline, kappa, theta)
    return (-r * math.cos(theta), r * math.sin(theta))
