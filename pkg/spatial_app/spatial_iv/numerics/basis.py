"""Spatial basis construction and exposure decomposition.

A basis spans the large-scale spatial variation of exposure. Projecting
exposure onto it gives the confounded component a_c; the residual a_uc is
the instrument.
"""
import warnings
from typing import Callable, Iterable, Optional, Tuple

import numpy as np
import scipy.linalg
from loguru import logger
from scipy.spatial.distance import cdist

from spatial_iv.exceptions import DegenerateCoordinates, DfOutOfRange, \
    DimensionMismatch, DomainError, MOutOfRange, NoRegionLabels, \
    ZeroInstrumentWarning
from spatial_iv.model.data.spatial_basis import BasisKind, \
    ExposureDecomposition, SpatialBasis
from spatial_iv.model.data.spatial_dataset import SpatialDataset
from spatial_iv.model.data.sym_matrix import EigenDecomposition, SymMatrix
from spatial_iv.numerics.matern import matern_corr
from spatial_iv.numerics.numkernel import cholesky_jittered, \
    least_squares, sym_eigen
from spatial_iv.numerics.spatial_data import distance_matrix

MIN_TPS_DF = 4
ZERO_INSTRUMENT_SHARE = 1e-12

SMOOTHEST = 'smoothest'
ROUGHEST = 'roughest'


def _thin_plate_radial(r: np.ndarray) -> np.ndarray:
    safe = np.where(r > 0, r, 1.0)
    return np.where(r > 0, r ** 2 * np.log(safe), 0.0)


def maximin_knots(coords: np.ndarray, count: int) -> np.ndarray:
    """Farthest-point subsample of `coords`, seeded by the point closest to
    the centroid. Ties go to the lowest index."""
    centroid = coords.mean(axis=0)
    first = int(np.argmin(np.linalg.norm(coords - centroid, axis=1)))

    chosen = [first]
    nearest = np.linalg.norm(coords - coords[first], axis=1)
    while len(chosen) < count:
        following = int(np.argmax(nearest))
        chosen.append(following)
        nearest = np.minimum(
            nearest, np.linalg.norm(coords - coords[following], axis=1)
        )
    return np.array(chosen, dtype=int)


def tps_basis(d: SpatialDataset, df: int) -> SpatialBasis:
    if df < MIN_TPS_DF or df > d.n:
        raise DfOutOfRange(
            f"thin plate spline df must lie in [{MIN_TPS_DF}, {d.n}], got {df}"
        )
    if np.all(d.coords == d.coords[0]):
        raise DegenerateCoordinates("all coordinates are identical")

    knots = maximin_knots(d.coords, df - 3)
    radial = _thin_plate_radial(cdist(d.coords, d.coords[knots]))
    matrix = np.column_stack([np.ones(d.n), d.coords, radial])

    logger.debug(f"tps basis df={df} knots={knots.tolist()}")
    return SpatialBasis(
        kind=BasisKind.THIN_PLATE_SPLINE,
        matrix=matrix,
        meta=tuple(int(k) for k in knots),
    )


def basis_from_eigen(
    eigen: EigenDecomposition,
    m: int,
    which: str = SMOOTHEST,
    kind: BasisKind = BasisKind.LAPLACIAN_EIGEN,
) -> SpatialBasis:
    n = eigen.n
    if m < 1 or m > n:
        raise MOutOfRange(f"basis dimension must lie in [1, {n}], got {m}")

    if which == SMOOTHEST:
        columns = np.arange(m)
    elif which == ROUGHEST:
        columns = np.arange(n - m, n)
    else:
        raise DomainError(f"unknown eigenvector selection '{which}'")

    return SpatialBasis(
        kind=kind,
        matrix=eigen.eigenvectors[:, columns],
        meta=tuple(float(v) for v in eigen.eigenvalues[columns]),
    )


def eigen_basis(
    laplacian: SymMatrix,
    m: int,
    which: str = SMOOTHEST,
    kind: BasisKind = BasisKind.LAPLACIAN_EIGEN,
) -> SpatialBasis:
    if m < 1 or m > laplacian.n:
        raise MOutOfRange(
            f"basis dimension must lie in [1, {laplacian.n}], got {m}"
        )
    return basis_from_eigen(sym_eigen(laplacian), m, which, kind)


def precision_basis(precision: SymMatrix, m: int) -> SpatialBasis:
    # the ICAR precision D - W shares its eigenvector ordering with L
    return eigen_basis(precision, m, SMOOTHEST, BasisKind.PRECISION_EIGEN)


def region_basis(d: SpatialDataset) -> SpatialBasis:
    if d.region is None or not d.region_levels():
        raise NoRegionLabels("dataset has no region labels")

    levels = d.region_levels()
    matrix = np.column_stack(
        [(d.region == level).astype(float) for level in levels]
    )
    return SpatialBasis(
        kind=BasisKind.REGION_INDICATOR, matrix=matrix, meta=levels
    )


def _warn_if_zero_instrument(a: np.ndarray, a_uc: np.ndarray):
    total = float(np.var(a))
    share = float(np.var(a_uc)) / total if total > 0 else 0.0
    if share < ZERO_INSTRUMENT_SHARE:
        message = f"instrument variance share {share:.3g} is below " \
                  f"{ZERO_INSTRUMENT_SHARE:g}; exposure is collinear with " \
                  f"the spatial basis"
        logger.warning(message)
        warnings.warn(message, ZeroInstrumentWarning, stacklevel=3)


def decompose(a: np.ndarray, b: SpatialBasis) -> ExposureDecomposition:
    a = np.asarray(a, dtype=float)
    if a.ndim != 1 or a.shape[0] != b.n:
        raise DimensionMismatch(
            f"exposure of shape {a.shape} does not match basis with "
            f"{b.n} rows"
        )

    fit = least_squares(b.matrix, a)
    a_c = fit.fitted
    a_uc = a - a_c
    _warn_if_zero_instrument(a, a_uc)

    return ExposureDecomposition(
        a=a, a_c=a_c, a_uc=a_uc, basis=b, projection_rank=fit.rank
    )


def kriging_decompose(
    d: SpatialDataset,
    theta: float,
    nugget: float,
    scaled_argument: bool = False,
) -> ExposureDecomposition:
    """Kriging smoother of exposure at the data locations.

    Uses a Matérn(theta, nu=2) correlation plus a nugget variance ratio and a
    constant mean estimated by generalized least squares.
    """
    if nugget < 0:
        raise DomainError(f"nugget must be non-negative, got {nugget}")

    a = d.exposure
    correlation = matern_corr(
        distance_matrix(d).entries, theta, scaled_argument
    )
    factor = cholesky_jittered(
        SymMatrix(correlation + nugget * np.eye(d.n))
    )
    cholesky = (factor.lower, True)

    ones = np.ones(d.n)
    solved_ones = scipy.linalg.cho_solve(cholesky, ones)
    mean = float(solved_ones @ a / (solved_ones @ ones))

    a_c = mean + correlation @ scipy.linalg.cho_solve(cholesky, a - mean)
    a_uc = a - a_c
    _warn_if_zero_instrument(a, a_uc)

    logger.debug(f"kriging decomposition theta={theta} nugget={nugget} "
                 f"gls_mean={mean:.6g}")
    return ExposureDecomposition(
        a=a, a_c=a_c, a_uc=a_uc, basis=None, projection_rank=None,
        method='kriging',
    )


def select_dimension(
    a: np.ndarray,
    candidates: Iterable[int],
    target: float,
    build: Callable[[int], SpatialBasis],
) -> Tuple[int, ExposureDecomposition]:
    """Pick the candidate dimension whose confounded variance share is
    closest to `target`; ties go to the smaller dimension."""
    if not 0 <= target <= 1:
        raise DomainError(f"variance target must lie in [0, 1], got {target}")

    best: Optional[Tuple[float, int, ExposureDecomposition]] = None
    for m in sorted(set(int(c) for c in candidates)):
        with warnings.catch_warnings():
            warnings.simplefilter('ignore', ZeroInstrumentWarning)
            decomposition = decompose(a, build(m))
        gap = abs(decomposition.confounded_variance_share - target)
        if best is None or gap < best[0]:
            best = (gap, m, decomposition)

    if best is None:
        raise MOutOfRange("no candidate dimensions given")

    _, m, decomposition = best
    logger.info(
        f"selected basis dimension {m} with confounded variance share "
        f"{decomposition.confounded_variance_share:.4f} (target {target})"
    )
    return m, decomposition
