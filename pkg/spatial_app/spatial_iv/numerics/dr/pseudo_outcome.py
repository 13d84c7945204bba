from typing import Optional, Tuple

import numpy as np
from loguru import logger

from spatial_iv.exceptions import DimensionMismatch, EmptySubpopulation
from spatial_iv.model.data.dr_estimates import PseudoOutcome


def pseudo_outcome(
    w: np.ndarray,
    a: np.ndarray,
    y: np.ndarray,
    nf,
    c: float,
    y_range: Optional[Tuple[float, float]] = None,
) -> PseudoOutcome:
    """Doubly robust pseudo-outcome on the units passed in.

    xi_i = (y_i - mu(w_i, a_i)) / pi(a_i | w_i) * mean_j pi(a_i | w_j)
           + mean_j mu(w_j, a_i)

    Averages run over the same units. Values are clamped to `y_range`
    (default: the range of `y`).
    """
    a = np.asarray(a, dtype=float)
    y = np.asarray(y, dtype=float)
    if a.shape[0] == 0:
        raise EmptySubpopulation(f"no units with exposure >= {c}")
    if y.shape != a.shape or w.shape[0] != a.shape[0]:
        raise DimensionMismatch("pseudo-outcome inputs differ in length")

    own_outcome = nf.outcome_at(w, a)
    own_density = nf.density(a, w)
    marginal_density = nf.mean_density_over(w, a)
    marginal_outcome = nf.mean_outcome_over(w, a)

    with np.errstate(divide='ignore', invalid='ignore'):
        xi = (y - own_outcome) / own_density * marginal_density \
            + marginal_outcome

    lo, hi = y_range if y_range is not None else (y.min(), y.max())
    # zero density: inf is clamped below; 0/0 keeps the regression term
    xi = np.where(np.isnan(xi), marginal_outcome, xi)
    clamped = int(np.sum((xi < lo) | (xi > hi)))
    xi = np.clip(xi, lo, hi)

    if clamped:
        logger.debug(f"clamped {clamped} of {a.shape[0]} pseudo-outcomes "
                     f"to [{lo:.4g}, {hi:.4g}]")

    return PseudoOutcome(
        xi=xi,
        clamped_count=clamped,
        c=float(c),
        min_density=float(np.min(own_density)),
    )
