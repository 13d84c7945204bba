from typing import Union

import numpy as np
import scipy.special

from spatial_iv.exceptions import DomainError
from spatial_iv.numerics.numkernel import bessel_k

MATERN_NU = 2
SMALL_ARGUMENT = 1e-6


def matern_corr(
    dist: Union[float, np.ndarray],
    theta: float,
    scaled_argument: bool = False,
) -> Union[float, np.ndarray]:
    """Matérn correlation with smoothness 2 and range theta.

    rho(d) = 2^(1-nu) / Gamma(nu) * z^nu * K_nu(z) with z = d / theta, or
    z = sqrt(2 nu) d / theta when `scaled_argument` is set.
    """
    if not np.isfinite(theta) or theta <= 0:
        raise DomainError(f"matern range must be positive, got {theta}")

    distances = np.asarray(dist, dtype=float)
    if np.any(~np.isfinite(distances)) or np.any(distances < 0):
        raise DomainError("matern distances must be finite and non-negative")

    scale = np.sqrt(2.0 * MATERN_NU) if scaled_argument else 1.0
    z = scale * distances / theta

    result = np.ones_like(z)
    small = (z > 0) & (z < SMALL_ARGUMENT)
    result[small] = 1.0 - z[small] ** 2 / (4.0 * (MATERN_NU - 1))

    regular = z >= SMALL_ARGUMENT
    if np.any(regular):
        normalizer = 2.0 ** (1 - MATERN_NU) / scipy.special.gamma(MATERN_NU)
        zr = z[regular]
        result[regular] = \
            normalizer * zr ** MATERN_NU * bessel_k(MATERN_NU, zr)

    if result.ndim == 0:
        return float(result)
    return result
