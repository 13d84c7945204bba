"""Linear instrumental-variable fits using the small-scale exposure
component a_uc as the instrument.

With a basis that spans the constant, the three strategies return the same
beta up to rounding.
"""
import warnings

import numpy as np
from loguru import logger

from spatial_iv.exceptions import BasisWithoutConstant, DimensionMismatch, \
    ZeroInstrumentVariance, ZeroInstrumentWarning
from spatial_iv.model.data.iv_fit import IvFit, IvStrategy
from spatial_iv.model.data.spatial_basis import ExposureDecomposition, \
    SpatialBasis
from spatial_iv.numerics.basis import ZERO_INSTRUMENT_SHARE, decompose
from spatial_iv.numerics.numkernel import least_squares


def _require_instrument(dec: ExposureDecomposition):
    total = float(np.var(dec.a))
    instrument = float(np.var(dec.a_uc))
    if total <= 0 or instrument / total < ZERO_INSTRUMENT_SHARE:
        raise ZeroInstrumentVariance(
            f"instrument variance {instrument:.3g} is zero relative to "
            f"exposure variance {total:.3g}"
        )


def _as_outcome(y, n: int) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if y.ndim != 1 or y.shape[0] != n:
        raise DimensionMismatch(f"outcome of shape {y.shape} does not match "
                                f"n={n}")
    return y


def fit_2sls(y: np.ndarray, dec: ExposureDecomposition) -> IvFit:
    y = _as_outcome(y, dec.n)
    _require_instrument(dec)

    fit = least_squares(np.column_stack([np.ones(dec.n), dec.a_uc]), y)
    return IvFit(
        beta=float(fit.coefficients[1]),
        intercept=float(fit.coefficients[0]),
        strategy=IvStrategy.TWO_SLS,
        instrument_variance_share=dec.instrument_variance_share,
    )


def fit_2sri(y: np.ndarray, dec: ExposureDecomposition) -> IvFit:
    y = _as_outcome(y, dec.n)
    _require_instrument(dec)

    fit = least_squares(
        np.column_stack([np.ones(dec.n), dec.a_uc, dec.a_c]), y
    )
    return IvFit(
        beta=float(fit.coefficients[1]),
        intercept=float(fit.coefficients[0]),
        strategy=IvStrategy.TWO_SRI,
        instrument_variance_share=dec.instrument_variance_share,
    )


def fit_double_prediction(
    y: np.ndarray,
    a: np.ndarray,
    b: SpatialBasis,
) -> IvFit:
    if not b.includes_constant:
        raise BasisWithoutConstant(
            "double prediction needs a basis that spans the constant"
        )
    y = _as_outcome(y, b.n)

    dec = decompose(a, b)
    _require_instrument(dec)
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', ZeroInstrumentWarning)
        y_uc = decompose(y, b).a_uc

    fit = least_squares(np.column_stack([np.ones(b.n), dec.a_uc]), y_uc)
    return IvFit(
        beta=float(fit.coefficients[1]),
        intercept=float(fit.coefficients[0]),
        strategy=IvStrategy.DOUBLE_PREDICTION,
        instrument_variance_share=dec.instrument_variance_share,
    )


def fit_spatial_plus(
    y: np.ndarray,
    a: np.ndarray,
    b: SpatialBasis,
) -> IvFit:
    """Unsmoothed two-regression spatial+: residualise exposure on the basis,
    then regress outcome on that residual plus the same basis columns."""
    y = _as_outcome(y, b.n)

    dec = decompose(a, b)
    _require_instrument(dec)

    fit = least_squares(np.column_stack([dec.a_uc, b.matrix]), y)
    beta = float(fit.coefficients[0])
    logger.debug(f"spatial+ beta={beta:.6g} basis={b}")
    return IvFit(
        beta=beta,
        intercept=float(np.mean(y - beta * dec.a_uc)),
        strategy=IvStrategy.SPATIAL_PLUS,
        instrument_variance_share=dec.instrument_variance_share,
    )


STRATEGIES = {
    IvStrategy.TWO_SLS: lambda y, a, b: fit_2sls(y, decompose(a, b)),
    IvStrategy.TWO_SRI: lambda y, a, b: fit_2sri(y, decompose(a, b)),
    IvStrategy.DOUBLE_PREDICTION: fit_double_prediction,
    IvStrategy.SPATIAL_PLUS: fit_spatial_plus,
}
