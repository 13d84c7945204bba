from dataclasses import dataclass

import numpy as np

from spatial_iv.exceptions import DimensionMismatch


def _frozen(values: np.ndarray) -> np.ndarray:
    values = np.array(values, dtype=float)
    values.setflags(write=False)
    return values


@dataclass(frozen=True)
class SymMatrix:
    entries: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise DimensionMismatch(
                f"expected a non-empty square matrix, got shape {m.shape}"
            )
        object.__setattr__(self, 'entries', _frozen((m + m.T) / 2.0))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.entries)))

    def __repr__(self):
        return f"<SymMatrix n={self.n}>"


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'eigenvalues', _frozen(self.eigenvalues))
        object.__setattr__(self, 'eigenvectors', _frozen(self.eigenvectors))

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]

    def near_zero_count(self, tolerance: float = 1e-10) -> int:
        scale = max(1.0, float(np.max(np.abs(self.eigenvalues))))
        return int(np.sum(np.abs(self.eigenvalues) < tolerance * scale))


@dataclass(frozen=True)
class CholeskyFactor:
    lower: np.ndarray
    jitter: float

    def __post_init__(self):
        object.__setattr__(self, 'lower', _frozen(self.lower))


@dataclass(frozen=True)
class LeastSquaresFit:
    coefficients: np.ndarray
    fitted: np.ndarray
    residuals: np.ndarray
    rank: int
