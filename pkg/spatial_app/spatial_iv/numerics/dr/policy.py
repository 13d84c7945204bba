import warnings
from typing import Optional

import numpy as np
from loguru import logger

from spatial_iv.exceptions import InvalidDataset, PositivityWarning, \
    ZeroDenominator
from spatial_iv.model.data.dr_estimates import Policy, PolicyEstimate, \
    PolicyKind
from spatial_iv.model.data.spatial_basis import ExposureDecomposition
from spatial_iv.model.data.spatial_dataset import SpatialDataset
from spatial_iv.model.method import AdjustmentSet
from spatial_iv.model.run_config import EstimationConfig
from spatial_iv.numerics.dr.nuisances import adjustment_features, \
    fit_nuisance_models


def silverman_bandwidth(a: np.ndarray) -> float:
    return 1.06 * float(np.std(a)) * a.shape[0] ** (-1 / 5)


def policy_effect(
    d: SpatialDataset,
    adjust: AdjustmentSet,
    dec: Optional[ExposureDecomposition],
    policy: Policy,
    config: Optional[EstimationConfig] = None,
) -> PolicyEstimate:
    """Outcome-regression plug-in for a modified exposure policy q(a).

    Shift and identity report mean mu(w, q(a)) - mean mu(w, a); cap reports
    the ratio mean mu(w, q(a)) / mean mu(w, a). No doubly robust correction.
    """
    if d.outcome is None:
        raise InvalidDataset("policy effects need an outcome")
    config = config or EstimationConfig()

    a = d.exposure
    w = adjustment_features(d, adjust, dec, config.use_covariates)
    nf = fit_nuisance_models(w, a, d.outcome, config)

    shifted = policy.apply(a)
    margin = config.positivity_margin or silverman_bandwidth(a)
    outside = (shifted < a.min() - margin) | (shifted > a.max() + margin)
    extrapolating = int(outside.sum())
    if extrapolating:
        message = f"{extrapolating} units leave the observed exposure " \
                  f"range under {policy} (margin {margin:.4g})"
        logger.warning(message)
        warnings.warn(message, PositivityWarning, stacklevel=2)

    if policy.kind == PolicyKind.CAP and np.array_equal(shifted, a):
        estimate = 1.0
    elif policy.kind == PolicyKind.CAP:
        observed = float(np.mean(nf.outcome_at(w, a)))
        if observed == 0:
            raise ZeroDenominator("mean fitted outcome is zero")
        estimate = float(np.mean(nf.outcome_at(w, shifted))) / observed
    elif np.array_equal(shifted, a):
        estimate = 0.0
    else:
        estimate = float(np.mean(nf.outcome_at(w, shifted))
                         - np.mean(nf.outcome_at(w, a)))

    return PolicyEstimate(
        policy=policy,
        estimate=estimate,
        extrapolating_units=extrapolating,
    )
