from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from spatial_iv.exceptions import DimensionMismatch, MOutOfRange

CONSTANT_SPAN_TOLERANCE = 1e-8


class BasisKind(str, Enum):
    THIN_PLATE_SPLINE = 'tps'
    LAPLACIAN_EIGEN = 'laplacian'
    PRECISION_EIGEN = 'precision'
    REGION_INDICATOR = 'region'


def _read_only(values) -> np.ndarray:
    values = np.array(values, dtype=float)
    values.setflags(write=False)
    return values


def spans_constant(matrix: np.ndarray) -> bool:
    n = matrix.shape[0]
    ones = np.ones(n)
    coefficients, *_ = np.linalg.lstsq(matrix, ones, rcond=None)
    residual = ones - matrix @ coefficients
    return bool(np.max(np.abs(residual)) < CONSTANT_SPAN_TOLERANCE)


@dataclass(frozen=True)
class SpatialBasis:
    kind: BasisKind
    matrix: np.ndarray
    meta: Tuple = ()
    includes_constant: bool = field(default=False, init=False)

    def __post_init__(self):
        matrix = _read_only(self.matrix)
        if matrix.ndim != 2 or matrix.shape[1] < 1:
            raise MOutOfRange(
                f"a basis needs at least one column, got shape {matrix.shape}"
            )
        norms = np.linalg.norm(matrix, axis=0)
        if not np.all(np.isfinite(norms)) or np.any(norms <= 0):
            raise DimensionMismatch("basis columns must have finite, "
                                    "non-zero norms")

        object.__setattr__(self, 'matrix', matrix)
        object.__setattr__(self, 'meta', tuple(self.meta))
        object.__setattr__(self, 'includes_constant', spans_constant(matrix))

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def m(self) -> int:
        return self.matrix.shape[1]

    def with_columns(self, extra: np.ndarray) -> 'SpatialBasis':
        return SpatialBasis(
            kind=self.kind,
            matrix=np.column_stack([self.matrix, extra]),
            meta=self.meta,
        )

    def __repr__(self):
        return f"<SpatialBasis kind={self.kind.value} n={self.n} m={self.m} " \
               f"constant={self.includes_constant}>"


def _variance(values: np.ndarray) -> float:
    return float(np.var(values))


@dataclass(frozen=True)
class ExposureDecomposition:
    a: np.ndarray
    a_c: np.ndarray
    a_uc: np.ndarray
    basis: Optional[SpatialBasis]
    projection_rank: Optional[int]
    method: str = 'projection'

    def __post_init__(self):
        for name in ('a', 'a_c', 'a_uc'):
            object.__setattr__(self, name, _read_only(getattr(self, name)))
        if not (self.a.shape == self.a_c.shape == self.a_uc.shape):
            raise DimensionMismatch("decomposition components differ in "
                                    "length")

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def instrument_variance_share(self) -> float:
        total = _variance(self.a)
        if total == 0:
            return 0.0
        return min(1.0, max(0.0, _variance(self.a_uc) / total))

    @property
    def confounded_variance_share(self) -> float:
        total = _variance(self.a)
        if total == 0:
            return 0.0
        return min(1.0, max(0.0, _variance(self.a_c) / total))

    def __repr__(self):
        return f"<ExposureDecomposition n={self.n} method={self.method} " \
               f"rank={self.projection_rank} " \
               f"instrument_share={self.instrument_variance_share:.4f}>"
