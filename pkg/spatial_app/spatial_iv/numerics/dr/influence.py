import numpy as np

from spatial_iv.exceptions import DimensionMismatch
from spatial_iv.model.data.dr_estimates import InfluenceFunctions


def smoother_influence(
    at_or_above: np.ndarray,
    xi: np.ndarray,
    nu_hat: float,
    smoother_weights: np.ndarray,
) -> np.ndarray:
    """n * w_i * (xi_i - nu_hat) on the smoothed units, zero elsewhere.

    `xi` and `smoother_weights` are indexed over the smoothed units only.
    """
    n = at_or_above.shape[0]
    if xi.shape[0] != int(at_or_above.sum()) \
            or smoother_weights.shape != xi.shape:
        raise DimensionMismatch("smoother weights do not match the "
                                "subpopulation")
    phi = np.zeros(n)
    phi[at_or_above] = n * smoother_weights * (xi - nu_hat)
    return phi


def influence_functions(
    a: np.ndarray,
    y: np.ndarray,
    xi: np.ndarray,
    nu_hat: float,
    smoother_weights: np.ndarray,
    c: float,
) -> InfluenceFunctions:
    """Influence functions of (theta1, theta2, theta3, theta4) on the full
    sample."""
    a = np.asarray(a, dtype=float)
    y = np.asarray(y, dtype=float)
    below = a < c

    share_below = below.mean()
    mean_below = y[below].mean() if below.any() else 0.0

    return InfluenceFunctions(
        phi1=smoother_influence(~below, np.asarray(xi), nu_hat,
                                np.asarray(smoother_weights)),
        phi2=below.astype(float) - share_below,
        phi3=np.where(below, y - mean_below, 0.0),
        phi4=y - y.mean(),
    )
