"""Random models and deterministic splittable random streams.

The generator is counter-based: output i of a stream with 64-bit key k is
mix64(k + i*GAMMA), the SplitMix64 sequence. Substreams are derived by hashing
(key, index) with a salted remix, so every (seed, path) pair names one
reproducible sequence no matter how work is scheduled across threads. The
compiled Monte Carlo kernels re-implement exactly these integer and libm
operations; the test suite asserts bit-identical agreement.

Random models:

* Swerling-1 target cross-section: exponential with mean sigma_t_bar.
* Weibull clutter cross-section with shape alpha in (0, 1], parameterized so
  its mean is exactly sigma_c_bar for every alpha (scale = mean/Gamma(1+1/alpha));
  alpha = 1 reduces bit-identically to the exponential sampler.
* Poisson point process clutter fields over an axis-aligned rectangle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "RandomStream",
    "Rectangle",
    "SwerlingOneTarget",
    "WeibullClutterRcs",
    "ClutterField",
    "sample_target_rcs",
    "sample_clutter_rcs",
    "sample_clutter_points",
    "pdf_target_rcs",
    "pdf_clutter_rcs",
    "stream_key",
    "derive_key",
    "key_uniform",
]

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15  # golden-ratio increment of SplitMix64
SUBSTREAM_SALT = 0xD6E8FEB86659FD93  # decouples substream derivation from outputs
_INV_2_53 = 2.0**-53


def mix64(z: int) -> int:
    """SplitMix64 finalizer: a 64-bit avalanche permutation."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_key(key: int, index: int) -> int:
    """Key of substream `index` of the stream with key `key`."""
    return mix64(((key ^ SUBSTREAM_SALT) + ((index & MASK64) * GAMMA)) & MASK64)


def stream_key(seed: int, path: tuple[int, ...] = ()) -> int:
    """Key of the stream named by (seed, path)."""
    key = mix64(seed & MASK64)
    for index in path:
        key = derive_key(key, index)
    return key


def key_uniform(key: int, counter: int) -> float:
    """counter-th uniform [0, 1) variate of the stream with key `key` (counter >= 1)."""
    word = mix64((key + (counter & MASK64) * GAMMA) & MASK64)
    return (word >> 11) * _INV_2_53


class RandomStream:
    """A value-like random stream addressed by (seed, path).

    The same (seed, path) always yields the identical sample sequence, across
    runs, platforms and thread counts. Substreams are independent streams and
    may be handed to other threads; there is no global state.
    """

    __slots__ = ("seed", "path", "_key", "_counter")

    def __init__(self, seed: int, path: tuple[int, ...] = ()):
        self.seed = int(seed)
        self.path = tuple(int(p) for p in path)
        self._key = stream_key(self.seed, self.path)
        self._counter = 0

    def __repr__(self) -> str:
        return f"RandomStream(seed={self.seed}, path={self.path})"

    @property
    def key(self) -> int:
        return self._key

    def substream(self, *path: int) -> "RandomStream":
        """Fresh stream for (seed, self.path + path); does not consume randomness."""
        return RandomStream(self.seed, self.path + path)

    def uniform(self) -> float:
        """Next uniform variate in [0, 1)."""
        self._counter += 1
        return key_uniform(self._key, self._counter)

    def uniforms(self, n: int) -> np.ndarray:
        """Next n uniform variates as a float64 array."""
        from . import kernels  # deferred: kernels imports nothing from here at module scope

        out = kernels.uniform_block(self._key, self._counter, int(n))
        self._counter += int(n)
        return out

    def exponential(self, mean: float) -> float:
        """Exponential variate by inverse CDF: -mean*log(1 - U)."""
        return -mean * math.log(1.0 - self.uniform())

    def poisson(self, mean: float) -> int:
        """Poisson variate by counting unit-exponential arrivals before `mean`.

        Equivalent to the classic product method but immune to exp(-mean)
        underflow. mean <= 0 returns 0 without consuming randomness, so a
        zero-density process is surely empty.
        """
        if mean <= 0.0:
            return 0
        count = 0
        total = 0.0
        while True:
            total += -math.log(1.0 - self.uniform())
            if total >= mean:
                return count
            count += 1


@dataclass(frozen=True)
class Rectangle:
    """Axis-aligned rectangle, the arena for clutter fields and simulations."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self) -> None:
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise ValueError(f"degenerate rectangle {self}")

    @property
    def area(self) -> float:
        return (self.x_max - self.x_min) * (self.y_max - self.y_min)

    def contains(self, x: float, y: float) -> bool:
        return self.x_min <= x <= self.x_max and self.y_min <= y <= self.y_max


@dataclass(frozen=True)
class SwerlingOneTarget:
    """Slowly fluctuating many-scatterer target: exponential cross-section."""

    mean_rcs: float  # m^2

    def __post_init__(self) -> None:
        if not self.mean_rcs > 0.0:
            raise ValueError(f"mean_rcs must be > 0, got {self.mean_rcs}")


@dataclass(frozen=True)
class WeibullClutterRcs:
    """Weibull clutter cross-section, mean-parameterized.

    shape = 1 is the exponential special case assumed by every closed form.
    Shapes in (0, 1) model heavier-tailed discrete clutter.
    """

    mean_rcs: float  # m^2
    shape: float = 1.0  # alpha

    def __post_init__(self) -> None:
        if not self.mean_rcs > 0.0:
            raise ValueError(f"mean_rcs must be > 0, got {self.mean_rcs}")
        if not 0.0 < self.shape <= 1.0:
            raise ValueError(f"shape must be in (0, 1], got {self.shape}")

    @property
    def scale(self) -> float:
        """Weibull scale such that the distribution mean equals mean_rcs."""
        return self.mean_rcs / math.gamma(1.0 + 1.0 / self.shape)


@dataclass(frozen=True)
class ClutterField:
    """Homogeneous Poisson point process of clutter scatterers on a rectangle."""

    density: float  # points per m^2
    region: Rectangle

    def __post_init__(self) -> None:
        if not self.density >= 0.0:
            raise ValueError(f"density must be >= 0, got {self.density}")

    @property
    def mean_count(self) -> float:
        return self.density * self.region.area


def sample_target_rcs(model: SwerlingOneTarget, stream: RandomStream) -> float:
    """One Swerling-1 cross-section draw: Exp(mean_rcs) by inverse CDF."""
    return -model.mean_rcs * math.log(1.0 - stream.uniform())


def sample_clutter_rcs(model: WeibullClutterRcs, stream: RandomStream) -> float:
    """One Weibull cross-section draw by inverse CDF.

    shape = 1 takes the exponential branch so it consumes and transforms the
    stream identically to sample_target_rcs.
    """
    u = stream.uniform()
    if model.shape == 1.0:
        return -model.mean_rcs * math.log(1.0 - u)
    return model.scale * math.pow(-math.log(1.0 - u), 1.0 / model.shape)


def sample_clutter_points(field: ClutterField, stream: RandomStream) -> np.ndarray:
    """One realization of the clutter field: an (N, 2) array of positions.

    N ~ Poisson(density*area); positions are i.i.d. uniform over the region,
    drawn x-then-y per point.
    """
    n = stream.poisson(field.mean_count)
    out = np.empty((n, 2), dtype=np.float64)
    r = field.region
    wx = r.x_max - r.x_min
    wy = r.y_max - r.y_min
    for i in range(n):
        out[i, 0] = r.x_min + wx * stream.uniform()
        out[i, 1] = r.y_min + wy * stream.uniform()
    return out


def pdf_target_rcs(sigma: float, mean_rcs: float) -> float:
    """Swerling-1 density (1/mean)*exp(-sigma/mean) at sigma >= 0."""
    if sigma < 0.0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    if not mean_rcs > 0.0:
        raise ValueError(f"mean_rcs must be > 0, got {mean_rcs}")
    return math.exp(-sigma / mean_rcs) / mean_rcs


def pdf_clutter_rcs(sigma: float, mean_rcs: float, shape: float = 1.0) -> float:
    """Mean-parameterized Weibull density at sigma >= 0.

    (alpha/s)*(sigma/s)^(alpha-1)*exp(-(sigma/s)^alpha) with scale s chosen so
    the mean is mean_rcs. Diverges at sigma = 0 for shape < 1.
    """
    if sigma < 0.0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    model = WeibullClutterRcs(mean_rcs=mean_rcs, shape=shape)
    s = model.scale
    a = model.shape
    if sigma == 0.0:
        return 1.0 / s if a == 1.0 else math.inf
    z = sigma / s
    return (a / s) * math.pow(z, a - 1.0) * math.exp(-math.pow(z, a))
