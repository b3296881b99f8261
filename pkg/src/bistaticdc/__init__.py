"""Bistatic radar detection coverage probability under Poisson point clutter.

Closed-form coverage probabilities for beamwidth- and range-limited resolution
cells, the design corollaries derived from them (every closed form paired with
an independent numeric solver), and a from-scratch spatial Monte Carlo
validator with deterministic splittable random streams.
"""

from .analytic import (
    AreaVariant,
    DesignValue,
    PdcBreakdown,
    RadarSystem,
    Scene,
    bw_optimal,
    kappa_monostatic,
    kappa_transition,
    noise_exponent,
    noise_power,
    pdc,
    pdc_sigmac_limit,
    ptx_max,
)
from .errors import (
    CoverageError,
    DegenerateOptimumError,
    NoCrossingError,
    NoTargetError,
    NumericalFailureError,
    SplitRegimeError,
    UnboundedCellError,
)
from .geometry import (
    BistaticLayout,
    CellKind,
    GeometrySolution,
    Regime,
    TargetPlacement,
    classify_regime,
    los_propagation,
    sin_beta_max,
    solve_geometry,
    solve_radial,
)
from .kernels import BACKEND
from .montecarlo import (
    PdcEstimate,
    RangeBinRule,
    SimConfig,
    SimMode,
    TrialOutcome,
    estimate_pdc,
    histogram_rmin,
    histogram_sin_beta,
    run_trial,
    simulate_trials,
)
from .stochastic import (
    ClutterField,
    RandomStream,
    Rectangle,
    SwerlingOneTarget,
    WeibullClutterRcs,
    sample_clutter_points,
    sample_clutter_rcs,
    sample_target_rcs,
)

__version__ = "0.1.0"
