"""Doubly robust estimate of E(Y(min(A, c))) / E(Y).

psi = (theta1 (1 - theta2) + theta3 theta2) / theta4 with
  theta1  the adjusted mean outcome at exposure c among units with A >= c,
  theta2  the share of units with A < c,
  theta3  the mean outcome among units with A < c (0 when there are none),
  theta4  the mean outcome.
"""
from typing import Optional

import numpy as np
from loguru import logger

from spatial_iv.exceptions import InsufficientData, InvalidDataset
from spatial_iv.model.data.dr_estimates import TruncatedEffectEstimate
from spatial_iv.model.data.spatial_basis import ExposureDecomposition
from spatial_iv.model.data.spatial_dataset import SpatialDataset
from spatial_iv.model.method import AdjustmentSet
from spatial_iv.model.run_config import EstimationConfig
from spatial_iv.numerics.dr.delta_method import delta_method, \
    truncated_ratio
from spatial_iv.numerics.dr.influence import influence_functions
from spatial_iv.numerics.dr.local_linear import MIN_POINTS, \
    default_bandwidth_grid, local_linear
from spatial_iv.numerics.dr.nuisances import adjustment_features, \
    fit_nuisance_models
from spatial_iv.numerics.dr.pseudo_outcome import pseudo_outcome


def truncated_effect(
    d: SpatialDataset,
    adjust: AdjustmentSet,
    dec: Optional[ExposureDecomposition],
    c: float,
    config: Optional[EstimationConfig] = None,
) -> TruncatedEffectEstimate:
    if d.outcome is None:
        raise InvalidDataset("truncated effect needs an outcome")
    config = config or EstimationConfig()

    a, y = d.exposure, d.outcome
    below = a < c
    theta2 = float(below.mean())
    theta3 = float(y[below].mean()) if below.any() else 0.0
    theta4 = float(y.mean())

    if below.all():
        # truncation at c changes nothing
        theta = (theta3, theta2, theta3, theta4)
        psi = truncated_ratio(theta)
        return TruncatedEffectEstimate(
            psi=psi, theta=theta, ci=(psi, psi), se=0.0,
            bandwidth=float('nan'), clamped_count=0,
            min_density=float('nan'), c=float(c),
        )

    above = ~below
    if above.sum() < MIN_POINTS:
        raise InsufficientData(
            f"only {int(above.sum())} units with exposure >= {c}"
        )

    w = adjustment_features(d, adjust, dec, config.use_covariates)
    nf = fit_nuisance_models(w[above], a[above], y[above], config)
    xi = pseudo_outcome(
        w[above], a[above], y[above], nf, c,
        y_range=(float(y.min()), float(y.max())),
    )

    grid = config.bandwidths or default_bandwidth_grid(a)
    smoother = local_linear(xi, a[above], grid, c)
    theta = (smoother.value, theta2, theta3, theta4)

    phi = influence_functions(a, y, xi.xi, smoother.value,
                              smoother.weights, c)
    result = delta_method(phi, theta, d.n)

    logger.debug(
        f"truncated effect c={c} adjust={adjust.value}: psi={result.psi:.5f} "
        f"se={result.se:.4g} theta={np.round(theta, 5).tolist()}"
    )
    return TruncatedEffectEstimate(
        psi=result.psi,
        theta=theta,
        ci=result.ci,
        se=result.se,
        bandwidth=smoother.bandwidth,
        clamped_count=xi.clamped_count,
        min_density=xi.min_density,
        c=float(c),
    )
