"""Dense linear algebra and special-function kernels.

Every function here is pure: inputs are never mutated and outputs are
read-only arrays, so callers may share them across threads.
"""
from typing import Sequence, Union

import numpy as np
import scipy.linalg
import scipy.special
from loguru import logger

from spatial_iv.exceptions import DimensionMismatch, DomainError, \
    NoConvergence, NotPositiveDefinite
from spatial_iv.model.data.sym_matrix import CholeskyFactor, \
    EigenDecomposition, LeastSquaresFit, SymMatrix

DEFAULT_JITTER_LADDER = (0.0, 1e-10, 1e-8, 1e-6)
RANK_TOLERANCE = 1e-10
SIGN_TIE_TOLERANCE = 1e-12
SUPPORTED_BESSEL_ORDERS = (0, 1, 2)


def cholesky_jittered(
    m: SymMatrix,
    jitter_ladder: Sequence[float] = DEFAULT_JITTER_LADDER,
) -> CholeskyFactor:
    ladder = list(jitter_ladder)
    if not ladder or ladder[0] != 0 or any(
        b < a for a, b in zip(ladder, ladder[1:])
    ):
        raise DomainError(
            f"jitter ladder must be ascending and start at 0, got {ladder}"
        )

    identity = np.eye(m.n)
    for jitter in ladder:
        try:
            lower = scipy.linalg.cholesky(
                m.entries + jitter * identity,
                lower=True,
                check_finite=True,
            )
        except (scipy.linalg.LinAlgError, ValueError):
            continue

        if not np.all(np.isfinite(lower)):
            continue

        if jitter > 0:
            logger.warning(
                f"cholesky needed jitter={jitter:g} on a {m.n}x{m.n} matrix"
            )
        return CholeskyFactor(lower=lower, jitter=float(jitter))

    raise NotPositiveDefinite(ladder)


def _canonical_signs(vectors: np.ndarray) -> np.ndarray:
    # largest-magnitude entry positive; near-ties go to the lowest index
    vectors = vectors.copy()
    magnitudes = np.abs(vectors)
    peak = magnitudes.max(axis=0)
    for j in range(vectors.shape[1]):
        candidates = np.flatnonzero(
            magnitudes[:, j] >= peak[j] * (1.0 - SIGN_TIE_TOLERANCE)
        )
        if vectors[candidates[0], j] < 0:
            vectors[:, j] = -vectors[:, j]
    return vectors


def sym_eigen(m: SymMatrix) -> EigenDecomposition:
    if not np.all(np.isfinite(m.entries)):
        raise DomainError("matrix has non-finite entries")

    try:
        eigenvalues, eigenvectors = scipy.linalg.eigh(m.entries)
    except scipy.linalg.LinAlgError as e:
        raise NoConvergence(
            f"symmetric eigensolver failed on a {m.n}x{m.n} matrix: {e}"
        ) from e

    order = np.argsort(eigenvalues, kind='stable')
    return EigenDecomposition(
        eigenvalues=eigenvalues[order],
        eigenvectors=_canonical_signs(eigenvectors[:, order]),
    )


def least_squares(design: np.ndarray, response: np.ndarray) -> LeastSquaresFit:
    design = np.asarray(design, dtype=float)
    response = np.asarray(response, dtype=float)
    if design.ndim == 1:
        design = design[:, np.newaxis]

    if design.ndim != 2 or response.ndim != 1:
        raise DimensionMismatch(
            f"expected an n x p design and an n-vector response, got "
            f"{design.shape} and {response.shape}"
        )
    n, p = design.shape
    if n < 1 or p < 1 or response.shape[0] != n:
        raise DimensionMismatch(
            f"design {design.shape} does not match response {response.shape}"
        )

    coefficients, _, rank, _ = scipy.linalg.lstsq(
        design, response, cond=RANK_TOLERANCE, lapack_driver='gelsd'
    )
    fitted = design @ coefficients
    return LeastSquaresFit(
        coefficients=coefficients,
        fitted=fitted,
        residuals=response - fitted,
        rank=int(rank),
    )


def bessel_k(
    nu: int,
    x: Union[float, np.ndarray],
) -> Union[float, np.ndarray]:
    """Modified Bessel function of the second kind K_nu for nu in {0, 1, 2}."""
    if nu not in SUPPORTED_BESSEL_ORDERS:
        raise DomainError(
            f"bessel_k supports orders {SUPPORTED_BESSEL_ORDERS}, got {nu}"
        )

    values = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(values)) or np.any(values <= 0):
        raise DomainError("bessel_k requires finite x > 0")

    result = scipy.special.kn(nu, values)
    if np.ndim(result) == 0:
        return float(result)
    return result
