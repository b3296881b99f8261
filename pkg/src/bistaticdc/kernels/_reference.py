"""Pure-Python Monte Carlo kernels.

This is the reference implementation of the hot loops; the Cython module
`_compiled` is a line-for-line port and must produce bit-identical output
(both use the same libm calls and the same IEEE-754 operation order; the
extension is built with -ffp-contract=off to keep it that way). Any change
here must be mirrored there.

Per-trial randomness: trial i of a run keyed by `key` uses the substream
derive_key(key, i) with draw counter starting at 0, so any partition of the
trial range over threads reproduces the same per-trial values. The
single-trial helpers are exposed so montecarlo.run_trial consumes a
RandomStream through the identical code path.

Draw order within a geometric trial: theta (repeated in the lemniscate regime
until cos(2*theta) >= 0), target cross-section, Poisson arrival draws for the
clutter count, then per clutter point x, y, cross-section.
"""

from __future__ import annotations

import math

import numpy as np

from ..constants import FOUR_PI_CUBED, TWO_PI
from ..stochastic import derive_key, key_uniform

__all__ = ["uniform_block", "oracle_trials", "geometric_trials", "oracle_single", "geometric_single"]

_INF = math.inf


def uniform_block(key: int, start_counter: int, n: int) -> np.ndarray:
    """Uniforms start_counter+1 .. start_counter+n of the stream with `key`."""
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        out[i] = key_uniform(key, start_counter + 1 + i)
    return out


def _poisson_count(key: int, counter: int, mean: float) -> tuple[int, int]:
    """Unit-exponential arrival counting; returns (count, updated counter)."""
    count = 0
    total = 0.0
    while True:
        counter += 1
        total += -math.log(1.0 - key_uniform(key, counter))
        if total >= mean:
            return count, counter
        count += 1


def oracle_single(
    key: int,
    counter: int,
    sigma_t_mean: float,
    sigma_c_mean: float,
    clutter_mean_count: float,
    signal_coeff: float,
    noise_power: float,
) -> tuple[float, int, int]:
    """One geometry-free trial; returns (scnr, clutter_count, counter)."""
    counter += 1
    sigma_t = -sigma_t_mean * math.log(1.0 - key_uniform(key, counter))
    m = 0
    if clutter_mean_count > 0.0:
        m, counter = _poisson_count(key, counter, clutter_mean_count)
    clutter_sum = 0.0
    for _ in range(m):
        counter += 1
        clutter_sum += -sigma_c_mean * math.log(1.0 - key_uniform(key, counter))
    s_pow = signal_coeff * sigma_t
    denom = signal_coeff * clutter_sum + noise_power
    if denom > 0.0:
        scnr = s_pow / denom
    elif s_pow > 0.0:
        scnr = _INF
    else:
        scnr = 0.0
    return scnr, m, counter


def oracle_trials(
    key: int,
    start_trial: int,
    n_trials: int,
    sigma_t_mean: float,
    sigma_c_mean: float,
    clutter_mean_count: float,
    signal_coeff: float,
    noise_power: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Trials that bypass geometry: clutter count straight from Poisson(rho*A_c).

    Signal and every clutter return share the propagation factor of the
    nominal bistatic range (signal_coeff = P_tx*A_0*h(kappa)/(bw_tx*bw_rx)),
    so the detection probability equals the closed form exactly and the run
    validates the Poisson/Swerling algebra with zero geometric approximation.

    Returns (scnr, clutter_count) arrays of length n_trials.
    """
    scnr = np.empty(n_trials, dtype=np.float64)
    n_in_cell = np.empty(n_trials, dtype=np.int64)
    for i in range(n_trials):
        k = derive_key(key, start_trial + i)
        scnr[i], n_in_cell[i], _ = oracle_single(
            k, 0, sigma_t_mean, sigma_c_mean, clutter_mean_count, signal_coeff, noise_power
        )
    return scnr, n_in_cell


def geometric_single(
    key: int,
    counter: int,
    baseline: float,
    kappa: float,
    lemniscate: bool,
    range_cell: bool,
    beamwidth_tx: float,
    beamwidth_rx: float,
    range_halfwidth: float,
    x_min: float,
    x_max: float,
    y_min: float,
    y_max: float,
    clutter_mean_count: float,
    sigma_t_mean: float,
    sigma_c_mean: float,
    power_gain: float,
    wavelength: float,
    noise_power: float,
) -> tuple[float, float, float, int, int, int]:
    """One full spatial trial.

    Returns (scnr, beta, rmin_over_kappa, clutter_in_cell, theta_resamples,
    counter).
    """
    L2 = baseline * baseline
    quarter = 0.25 * L2
    k2 = kappa * kappa
    k4 = k2 * k2
    tx_x = 0.5 * baseline
    rx_x = -0.5 * baseline
    tan_tx = math.tan(0.5 * beamwidth_tx)
    tan_rx = math.tan(0.5 * beamwidth_rx)
    lam2_spread = (wavelength * wavelength) / FOUR_PI_CUBED
    wx = x_max - x_min
    wy = y_max - y_min

    resamples = 0
    while True:
        counter += 1
        theta = TWO_PI * key_uniform(key, counter)
        if not lemniscate:
            break
        if math.cos(2.0 * theta) >= 0.0:
            break
        resamples += 1
    cos2t = math.cos(2.0 * theta)
    if lemniscate:
        u_rt = 0.5 * L2 * cos2t
        if u_rt < 0.0:
            u_rt = 0.0
    else:
        b = 0.5 * L2 * cos2t
        u_rt = 0.5 * (b + math.sqrt(b * b + (4.0 * k4 - 0.25 * (L2 * L2))))
    rt = math.sqrt(u_rt)
    cos_t = math.cos(theta)
    term = rt * baseline * cos_t
    tx2 = u_rt + quarter + term
    rx2 = u_rt + quarter - term
    if tx2 < 0.0:
        tx2 = 0.0
    if rx2 < 0.0:
        rx2 = 0.0
    rtx = math.sqrt(tx2)
    rrx = math.sqrt(rx2)
    cos_beta = (u_rt - quarter) / k2
    if cos_beta > 1.0:
        cos_beta = 1.0
    elif cos_beta < -1.0:
        cos_beta = -1.0
    beta = math.acos(cos_beta)
    rmin = rtx if rtx < rrx else rrx

    tgt_x = -rt * cos_t
    tgt_y = rt * math.sin(theta)

    counter += 1
    sigma_t = -sigma_t_mean * math.log(1.0 - key_uniform(key, counter))
    prod_t = tx2 * rx2
    h_t = lam2_spread / prod_t if prod_t > 0.0 else _INF

    m = 0
    if clutter_mean_count > 0.0:
        m, counter = _poisson_count(key, counter, clutter_mean_count)

    a_tx_x = tgt_x - tx_x
    a_tx_y = tgt_y
    a_rx_x = tgt_x - rx_x
    a_rx_y = tgt_y
    rsum_t = rtx + rrx

    clutter_sum = 0.0
    n_in = 0
    for _ in range(m):
        counter += 1
        x = x_min + wx * key_uniform(key, counter)
        counter += 1
        y = y_min + wy * key_uniform(key, counter)
        counter += 1
        sigma_c = -sigma_c_mean * math.log(1.0 - key_uniform(key, counter))

        b_rx_x = x - rx_x
        b_rx_y = y
        dot_rx = a_rx_x * b_rx_x + a_rx_y * b_rx_y
        cross_rx = a_rx_x * b_rx_y - a_rx_y * b_rx_x
        if dot_rx <= 0.0 or abs(cross_rx) > tan_rx * dot_rx:
            continue
        b_tx_x = x - tx_x
        b_tx_y = y
        if range_cell:
            rtxc2 = b_tx_x * b_tx_x + b_tx_y * b_tx_y
            rrxc2 = b_rx_x * b_rx_x + b_rx_y * b_rx_y
            if abs(math.sqrt(rtxc2) + math.sqrt(rrxc2) - rsum_t) > range_halfwidth:
                continue
        else:
            dot_tx = a_tx_x * b_tx_x + a_tx_y * b_tx_y
            cross_tx = a_tx_x * b_tx_y - a_tx_y * b_tx_x
            if dot_tx <= 0.0 or abs(cross_tx) > tan_tx * dot_tx:
                continue
            rtxc2 = b_tx_x * b_tx_x + b_tx_y * b_tx_y
            rrxc2 = b_rx_x * b_rx_x + b_rx_y * b_rx_y
        prod_c = rtxc2 * rrxc2
        h_c = lam2_spread / prod_c if prod_c > 0.0 else _INF
        clutter_sum += sigma_c * h_c
        n_in += 1

    s_pow = power_gain * sigma_t * h_t
    denom = power_gain * clutter_sum + noise_power
    if denom > 0.0:
        scnr = s_pow / denom
    elif s_pow > 0.0:
        scnr = _INF
    else:
        scnr = 0.0
    return scnr, beta, rmin / kappa, n_in, resamples, counter


def geometric_trials(
    key: int,
    start_trial: int,
    n_trials: int,
    baseline: float,
    kappa: float,
    lemniscate: bool,
    range_cell: bool,
    beamwidth_tx: float,
    beamwidth_rx: float,
    range_halfwidth: float,
    x_min: float,
    x_max: float,
    y_min: float,
    y_max: float,
    clutter_mean_count: float,
    sigma_t_mean: float,
    sigma_c_mean: float,
    power_gain: float,
    wavelength: float,
    noise_power: float,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, int]:
    """Full spatial trials: geometry, clutter field, cell membership, SCNR.

    power_gain = P_tx*A_0/(bw_tx*bw_rx); clutter_mean_count = density * region
    area; range_halfwidth is the accepted |bistatic range sum - target sum|.

    Returns (scnr, beta, rmin_over_kappa, clutter_in_cell, theta_resamples).
    """
    scnr = np.empty(n_trials, dtype=np.float64)
    beta_out = np.empty(n_trials, dtype=np.float64)
    rmin_out = np.empty(n_trials, dtype=np.float64)
    n_in_cell = np.empty(n_trials, dtype=np.int64)
    resamples = 0
    for i in range(n_trials):
        k = derive_key(key, start_trial + i)
        scnr[i], beta_out[i], rmin_out[i], n_in_cell[i], res, _ = geometric_single(
            k,
            0,
            baseline,
            kappa,
            lemniscate,
            range_cell,
            beamwidth_tx,
            beamwidth_rx,
            range_halfwidth,
            x_min,
            x_max,
            y_min,
            y_max,
            clutter_mean_count,
            sigma_t_mean,
            sigma_c_mean,
            power_gain,
            wavelength,
            noise_power,
        )
        resamples += res
    return scnr, beta_out, rmin_out, n_in_cell, resamples
