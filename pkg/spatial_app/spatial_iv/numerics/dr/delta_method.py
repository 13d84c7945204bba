from typing import Optional, Sequence

import numpy as np

from spatial_iv.exceptions import DimensionMismatch, ZeroDenominator
from spatial_iv.model.data.dr_estimates import DeltaMethodResult, \
    InfluenceFunctions

Z_95 = 1.96


def truncated_ratio(theta: Sequence[float]) -> float:
    theta1, theta2, theta3, theta4 = theta
    if theta4 == 0:
        raise ZeroDenominator("mean outcome is zero")
    return (theta1 * (1.0 - theta2) + theta3 * theta2) / theta4


def gradient(theta: Sequence[float]) -> np.ndarray:
    theta1, theta2, theta3, theta4 = theta
    if theta4 == 0:
        raise ZeroDenominator("mean outcome is zero")
    return np.array([
        (1.0 - theta2) / theta4,
        (theta3 - theta1) / theta4,
        theta2 / theta4,
        -(theta1 * (1.0 - theta2) + theta2 * theta3) / theta4 ** 2,
    ])


def delta_method(
    phi: InfluenceFunctions,
    theta: Sequence[float],
    n: Optional[int] = None,
) -> DeltaMethodResult:
    """se = sqrt(g' S g / n), with S the empirical covariance of the four
    influence functions and g the gradient of the ratio at theta."""
    stacked = phi.stacked()
    n = n or stacked.shape[0]
    if stacked.shape[0] != n:
        raise DimensionMismatch(
            f"influence functions have {stacked.shape[0]} rows, expected {n}"
        )

    grad = gradient(theta)
    centered = stacked - stacked.mean(axis=0)
    covariance = centered.T @ centered / n
    variance = max(float(grad @ covariance @ grad), 0.0)

    psi = truncated_ratio(theta)
    se = float(np.sqrt(variance / n))
    return DeltaMethodResult(
        psi=psi,
        se=se,
        ci=(psi - Z_95 * se, psi + Z_95 * se),
        gradient=grad,
    )
