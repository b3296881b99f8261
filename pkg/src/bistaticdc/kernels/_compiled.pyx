# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled Monte Carlo kernels.

Line-for-line port of `_reference`; see that module for the contract. The two
must stay bit-identical: same libm calls, same operation order, no fused
multiply-adds (built with -ffp-contract=off). Any change there must be
mirrored here.
"""

import numpy as np

from libc.math cimport INFINITY, M_PI, acos, cos, fabs, log, sin, sqrt, tan
from libc.stdint cimport int64_t, uint64_t

cdef uint64_t GAMMA = 0x9E3779B97F4A7C15ULL
cdef uint64_t SUBSTREAM_SALT = 0xD6E8FEB86659FD93ULL
cdef double INV_2_53 = 1.0 / 9007199254740992.0  # 2**-53

cdef double TWO_PI = 2.0 * M_PI
cdef double _FOUR_PI = 4.0 * M_PI
cdef double FOUR_PI_CUBED = _FOUR_PI * _FOUR_PI * _FOUR_PI


cdef inline uint64_t mix64(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline uint64_t c_derive_key(uint64_t key, uint64_t index) nogil:
    return mix64((key ^ SUBSTREAM_SALT) + index * GAMMA)


cdef inline double c_key_uniform(uint64_t key, uint64_t counter) nogil:
    return <double> (mix64(key + counter * GAMMA) >> 11) * INV_2_53


def uniform_block(key, start_counter, n):
    """Uniforms start_counter+1 .. start_counter+n of the stream with `key`."""
    cdef uint64_t k = <uint64_t> (int(key) & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t c0 = <uint64_t> (int(start_counter) & 0xFFFFFFFFFFFFFFFF)
    cdef Py_ssize_t count = int(n)
    out = np.empty(count, dtype=np.float64)
    cdef double[::1] view = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(count):
            view[i] = c_key_uniform(k, c0 + 1 + <uint64_t> i)
    return out


cdef inline int64_t c_poisson_count(uint64_t key, uint64_t* counter, double mean) nogil:
    cdef int64_t count = 0
    cdef double total = 0.0
    while True:
        counter[0] += 1
        total += -log(1.0 - c_key_uniform(key, counter[0]))
        if total >= mean:
            return count
        count += 1


def oracle_trials(
    key,
    start_trial,
    n_trials,
    double sigma_t_mean,
    double sigma_c_mean,
    double clutter_mean_count,
    double signal_coeff,
    double noise_power,
):
    """Geometry-free trials; see _reference.oracle_trials."""
    cdef uint64_t base = <uint64_t> (int(key) & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t start = <uint64_t> (int(start_trial) & 0xFFFFFFFFFFFFFFFF)
    cdef Py_ssize_t n = int(n_trials)
    scnr = np.empty(n, dtype=np.float64)
    n_in_cell = np.empty(n, dtype=np.int64)
    cdef double[::1] scnr_v = scnr
    cdef int64_t[::1] cell_v = n_in_cell
    cdef Py_ssize_t i
    cdef int64_t m, j
    cdef uint64_t k, c
    cdef double sigma_t, clutter_sum, s_pow, denom
    with nogil:
        for i in range(n):
            k = c_derive_key(base, start + <uint64_t> i)
            c = 1
            sigma_t = -sigma_t_mean * log(1.0 - c_key_uniform(k, c))
            m = 0
            if clutter_mean_count > 0.0:
                m = c_poisson_count(k, &c, clutter_mean_count)
            clutter_sum = 0.0
            for j in range(m):
                c += 1
                clutter_sum += -sigma_c_mean * log(1.0 - c_key_uniform(k, c))
            s_pow = signal_coeff * sigma_t
            denom = signal_coeff * clutter_sum + noise_power
            if denom > 0.0:
                scnr_v[i] = s_pow / denom
            elif s_pow > 0.0:
                scnr_v[i] = INFINITY
            else:
                scnr_v[i] = 0.0
            cell_v[i] = m
    return scnr, n_in_cell


def geometric_trials(
    key,
    start_trial,
    n_trials,
    double baseline,
    double kappa,
    bint lemniscate,
    bint range_cell,
    double beamwidth_tx,
    double beamwidth_rx,
    double range_halfwidth,
    double x_min,
    double x_max,
    double y_min,
    double y_max,
    double clutter_mean_count,
    double sigma_t_mean,
    double sigma_c_mean,
    double power_gain,
    double wavelength,
    double noise_power,
):
    """Full spatial trials; see _reference.geometric_trials."""
    cdef uint64_t base = <uint64_t> (int(key) & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t start = <uint64_t> (int(start_trial) & 0xFFFFFFFFFFFFFFFF)
    cdef Py_ssize_t n = int(n_trials)
    scnr = np.empty(n, dtype=np.float64)
    beta_out = np.empty(n, dtype=np.float64)
    rmin_out = np.empty(n, dtype=np.float64)
    n_in_cell = np.empty(n, dtype=np.int64)
    cdef double[::1] scnr_v = scnr
    cdef double[::1] beta_v = beta_out
    cdef double[::1] rmin_v = rmin_out
    cdef int64_t[::1] cell_v = n_in_cell
    cdef int64_t resamples = 0

    cdef double L2 = baseline * baseline
    cdef double quarter = 0.25 * L2
    cdef double k2 = kappa * kappa
    cdef double k4 = k2 * k2
    cdef double tx_x = 0.5 * baseline
    cdef double rx_x = -0.5 * baseline
    cdef double tan_tx = tan(0.5 * beamwidth_tx)
    cdef double tan_rx = tan(0.5 * beamwidth_rx)
    cdef double lam2_spread = (wavelength * wavelength) / FOUR_PI_CUBED
    cdef double wx = x_max - x_min
    cdef double wy = y_max - y_min

    cdef Py_ssize_t i
    cdef int64_t m, j, n_in
    cdef uint64_t k, c
    cdef double theta, cos2t, b, u_rt, rt, cos_t, term, tx2, rx2, rtx, rrx
    cdef double cos_beta, beta, rmin, tgt_x, tgt_y, sigma_t, prod_t, h_t
    cdef double a_tx_x, a_tx_y, a_rx_x, a_rx_y, rsum_t, clutter_sum
    cdef double x, y, sigma_c, b_rx_x, b_rx_y, dot_rx, cross_rx
    cdef double b_tx_x, b_tx_y, dot_tx, cross_tx, rtxc2, rrxc2, prod_c, h_c
    cdef double s_pow, denom

    with nogil:
        for i in range(n):
            k = c_derive_key(base, start + <uint64_t> i)
            c = 0
            while True:
                c += 1
                theta = TWO_PI * c_key_uniform(k, c)
                if not lemniscate:
                    break
                if cos(2.0 * theta) >= 0.0:
                    break
                resamples += 1
            cos2t = cos(2.0 * theta)
            if lemniscate:
                u_rt = 0.5 * L2 * cos2t
                if u_rt < 0.0:
                    u_rt = 0.0
            else:
                b = 0.5 * L2 * cos2t
                u_rt = 0.5 * (b + sqrt(b * b + (4.0 * k4 - 0.25 * (L2 * L2))))
            rt = sqrt(u_rt)
            cos_t = cos(theta)
            term = rt * baseline * cos_t
            tx2 = u_rt + quarter + term
            rx2 = u_rt + quarter - term
            if tx2 < 0.0:
                tx2 = 0.0
            if rx2 < 0.0:
                rx2 = 0.0
            rtx = sqrt(tx2)
            rrx = sqrt(rx2)
            cos_beta = (u_rt - quarter) / k2
            if cos_beta > 1.0:
                cos_beta = 1.0
            elif cos_beta < -1.0:
                cos_beta = -1.0
            beta = acos(cos_beta)
            rmin = rtx if rtx < rrx else rrx

            tgt_x = -rt * cos_t
            tgt_y = rt * sin(theta)

            c += 1
            sigma_t = -sigma_t_mean * log(1.0 - c_key_uniform(k, c))
            prod_t = tx2 * rx2
            h_t = lam2_spread / prod_t if prod_t > 0.0 else INFINITY

            m = 0
            if clutter_mean_count > 0.0:
                m = c_poisson_count(k, &c, clutter_mean_count)

            a_tx_x = tgt_x - tx_x
            a_tx_y = tgt_y
            a_rx_x = tgt_x - rx_x
            a_rx_y = tgt_y
            rsum_t = rtx + rrx

            clutter_sum = 0.0
            n_in = 0
            for j in range(m):
                c += 1
                x = x_min + wx * c_key_uniform(k, c)
                c += 1
                y = y_min + wy * c_key_uniform(k, c)
                c += 1
                sigma_c = -sigma_c_mean * log(1.0 - c_key_uniform(k, c))

                b_rx_x = x - rx_x
                b_rx_y = y
                dot_rx = a_rx_x * b_rx_x + a_rx_y * b_rx_y
                cross_rx = a_rx_x * b_rx_y - a_rx_y * b_rx_x
                if dot_rx <= 0.0 or fabs(cross_rx) > tan_rx * dot_rx:
                    continue
                b_tx_x = x - tx_x
                b_tx_y = y
                if range_cell:
                    rtxc2 = b_tx_x * b_tx_x + b_tx_y * b_tx_y
                    rrxc2 = b_rx_x * b_rx_x + b_rx_y * b_rx_y
                    if fabs(sqrt(rtxc2) + sqrt(rrxc2) - rsum_t) > range_halfwidth:
                        continue
                else:
                    dot_tx = a_tx_x * b_tx_x + a_tx_y * b_tx_y
                    cross_tx = a_tx_x * b_tx_y - a_tx_y * b_tx_x
                    if dot_tx <= 0.0 or fabs(cross_tx) > tan_tx * dot_tx:
                        continue
                    rtxc2 = b_tx_x * b_tx_x + b_tx_y * b_tx_y
                    rrxc2 = b_rx_x * b_rx_x + b_rx_y * b_rx_y
                prod_c = rtxc2 * rrxc2
                h_c = lam2_spread / prod_c if prod_c > 0.0 else INFINITY
                clutter_sum += sigma_c * h_c
                n_in += 1

            s_pow = power_gain * sigma_t * h_t
            denom = power_gain * clutter_sum + noise_power
            if denom > 0.0:
                scnr_v[i] = s_pow / denom
            elif s_pow > 0.0:
                scnr_v[i] = INFINITY
            else:
                scnr_v[i] = 0.0
            beta_v[i] = beta
            rmin_v[i] = rmin / kappa
            cell_v[i] = n_in
    return scnr, beta_out, rmin_out, n_in_cell, int(resamples)
