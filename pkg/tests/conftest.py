import math

import pytest

from bistaticdc.analytic import RadarSystem, Scene
from bistaticdc.geometry import BistaticLayout
from bistaticdc.kernels import BACKEND

DEG5 = math.radians(5.0)

# Heavy statistical tests (1e5+ trials) only run on the compiled kernels; the
# pure-Python backend is proven bit-identical at small trial counts in
# test_kernels.py, so the statistical results transfer exactly.
needs_compiled = pytest.mark.skipif(
    BACKEND != "compiled",
    reason="statistical workload needs the compiled kernels (reference backend is bit-identical)",
)


def reference_system(**overrides) -> RadarSystem:
    """The reference deployment: 10 W, 5 deg beams, 5 mm, 300 K, 2 GHz."""
    params = dict(
        transmit_power=10.0,
        beamwidth_tx=DEG5,
        beamwidth_rx=DEG5,
        wavelength=0.005,
        noise_temperature=300.0,
        bandwidth=2.0e9,
        gain_constant=1.0,
    )
    params.update(overrides)
    return RadarSystem(**params)


def reference_scene(**overrides) -> Scene:
    params = dict(
        layout=BistaticLayout(5.0),
        clutter_density=0.001,
        target_rcs_mean=1.0,
        clutter_rcs_mean=1.0,
        threshold=1.0,
    )
    params.update(overrides)
    return Scene(**params)


@pytest.fixture
def ref_system() -> RadarSystem:
    return reference_system()


@pytest.fixture
def ref_scene() -> Scene:
    return reference_scene()
