"""Physical and numeric constants shared by every module.

All values are CODATA 2018 (the Boltzmann constant and the speed of light are
exact by definition since the 2019 SI revision). Keeping them in one place
guarantees the analytic formulas, the Monte Carlo kernels and the CLI all agree
bit for bit.
"""

import math

SPEED_OF_LIGHT = 299_792_458.0  # m/s, exact
BOLTZMANN_CONSTANT = 1.380_649e-23  # J/K, exact

# (4*pi)**3, the free-space spreading constant of the two-way link budget.
# Built from explicit multiplications so the compiled kernels can reproduce
# the identical double from 4.0 * M_PI.
_FOUR_PI = 4.0 * math.pi
FOUR_PI_CUBED = _FOUR_PI * _FOUR_PI * _FOUR_PI

TWO_PI = 2.0 * math.pi

# Value used by the lemniscate-regime coverage formula in place of
# sin(beta_max). It exceeds 1 and is therefore geometrically impossible as a
# sine; geometry.sin_beta_max reports the formula value (0 at L = 2*kappa)
# instead. Both are exposed deliberately so the discrepancy stays observable.
LEMNISCATE_SIN_BETA = math.sqrt(3.0)
