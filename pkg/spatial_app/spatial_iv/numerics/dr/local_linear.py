"""Gaussian-kernel local linear regression with leave-one-out bandwidth
selection."""
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from loguru import logger

from spatial_iv.exceptions import DegenerateWindow, DimensionMismatch, \
    DomainError, InsufficientData
from spatial_iv.model.data.dr_estimates import PseudoOutcome, SmootherFit

MIN_POINTS = 5
MIN_KERNEL_MASS = 3.0
DEGENERATE_DETERMINANT = 1e-12
GRID_SIZE = 20
LOO_CHUNK = 1024


def default_bandwidth_grid(
    a: np.ndarray,
    count: int = GRID_SIZE,
) -> np.ndarray:
    sd = float(np.std(a))
    if not sd > 0:
        sd = 1.0
    return np.geomspace(0.05 * sd, 2.0 * sd, count)


def _inputs(x, y, bandwidths) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or x.shape != y.shape:
        raise DimensionMismatch(
            f"exposure {x.shape} and response {y.shape} differ"
        )
    if x.shape[0] < MIN_POINTS:
        raise InsufficientData(
            f"local linear smoothing needs at least {MIN_POINTS} points, got "
            f"{x.shape[0]}"
        )
    grid = np.sort(np.asarray(bandwidths, dtype=float).ravel())
    if grid.size == 0 or not np.all(np.isfinite(grid)) or np.any(grid <= 0):
        raise DomainError(f"bandwidth grid must be positive, got {grid}")
    return x, y, grid


def _loo_risk(x: np.ndarray, y: np.ndarray, h: float) -> float:
    n = x.shape[0]
    squared_errors = np.empty(n)
    for start in range(0, n, LOO_CHUNK):
        rows = np.arange(start, min(n, start + LOO_CHUNK))
        offsets = x[np.newaxis, :] - x[rows, np.newaxis]
        kernel = np.exp(-0.5 * (offsets / h) ** 2)
        kernel[np.arange(rows.shape[0]), rows] = 0.0

        s0 = kernel.sum(axis=1)
        s1 = (kernel * offsets).sum(axis=1)
        s2 = (kernel * offsets ** 2).sum(axis=1)
        if np.any(s0 <= 0):
            return np.inf

        determinant = s0 * s2 - s1 ** 2
        linear = (s2 > 0) & (determinant > DEGENERATE_DETERMINANT * s0 * s2)
        local = kernel * (s2[:, np.newaxis] - offsets * s1[:, np.newaxis])
        with np.errstate(divide='ignore', invalid='ignore'):
            prediction = np.where(
                linear,
                (local @ y) / determinant,
                (kernel @ y) / s0,
            )
        squared_errors[rows] = (y[rows] - prediction) ** 2

    risk = float(squared_errors.mean())
    return risk if np.isfinite(risk) else np.inf


def select_bandwidth(x, y, bandwidths) -> Tuple[int, np.ndarray]:
    """Leave-one-out CV over an ascending grid. Returns the index of the
    chosen bandwidth (ties go to the smallest) and the risk per bandwidth."""
    x, y, grid = _inputs(x, y, bandwidths)
    risks = np.array([_loo_risk(x, y, h) for h in grid])
    if not np.any(np.isfinite(risks)):
        raise DegenerateWindow("no bandwidth in the grid leaves a usable "
                               "leave-one-out window")
    return int(np.argmin(risks)), risks


def kernel_mass(x: np.ndarray, eval_at: float, h: float) -> float:
    return float(np.exp(-0.5 * ((x - eval_at) / h) ** 2).sum())


def smoother_weights(x: np.ndarray, eval_at: float, h: float) -> np.ndarray:
    """Weights w with nu(eval_at) = w . y, normalized to sum to one."""
    offsets = x - eval_at
    kernel = np.exp(-0.5 * (offsets / h) ** 2)
    s0, s1, s2 = kernel.sum(), kernel @ offsets, kernel @ offsets ** 2
    determinant = s0 * s2 - s1 ** 2
    if s2 > 0 and determinant > DEGENERATE_DETERMINANT * s0 * s2:
        weights = kernel * (s2 - offsets * s1)
    else:
        # coincident exposures: fall back to the local constant
        weights = kernel
    return weights / weights.sum()


def local_linear_at(
    x,
    y,
    bandwidths,
    start: int,
    eval_at: float,
    risks: Optional[np.ndarray] = None,
) -> SmootherFit:
    """Evaluate at `eval_at`, widening from grid position `start` until the
    window holds enough kernel mass."""
    x, y, grid = _inputs(x, y, bandwidths)
    for position in range(start, grid.size):
        h = float(grid[position])
        if kernel_mass(x, eval_at, h) < MIN_KERNEL_MASS:
            continue
        if position > start:
            logger.debug(f"widened bandwidth {grid[start]:.4g} -> {h:.4g} "
                         f"at {eval_at:.4g}")
        weights = smoother_weights(x, eval_at, h)
        return SmootherFit(
            value=float(weights @ y),
            bandwidth=h,
            weights=weights,
            cv_risk=float(risks[position]) if risks is not None else np.nan,
        )

    raise DegenerateWindow(
        f"kernel mass below {MIN_KERNEL_MASS:g} at {eval_at:.4g} for every "
        f"bandwidth up to {grid[-1]:.4g}"
    )


def local_linear(
    xi: Union[PseudoOutcome, np.ndarray],
    a: np.ndarray,
    bandwidths: Sequence[float],
    eval_at: float,
) -> SmootherFit:
    y = xi.xi if isinstance(xi, PseudoOutcome) else xi
    chosen, risks = select_bandwidth(a, y, bandwidths)
    fit = local_linear_at(a, y, bandwidths, chosen, eval_at, risks)
    logger.debug(f"local linear at {eval_at:.4g}: value={fit.value:.6g} "
                 f"bandwidth={fit.bandwidth:.4g}")
    return fit
