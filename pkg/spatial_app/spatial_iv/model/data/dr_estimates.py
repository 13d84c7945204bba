from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np
import pandas as pd


@dataclass(frozen=True)
class PseudoOutcome:
    xi: np.ndarray
    clamped_count: int
    c: float
    min_density: float


@dataclass(frozen=True)
class SmootherFit:
    value: float
    bandwidth: float
    weights: np.ndarray
    cv_risk: float


@dataclass(frozen=True)
class InfluenceFunctions:
    phi1: np.ndarray
    phi2: np.ndarray
    phi3: np.ndarray
    phi4: np.ndarray

    def stacked(self) -> np.ndarray:
        return np.column_stack([self.phi1, self.phi2, self.phi3, self.phi4])


@dataclass(frozen=True)
class DeltaMethodResult:
    psi: float
    se: float
    ci: Tuple[float, float]
    gradient: np.ndarray


@dataclass(frozen=True)
class TruncatedEffectEstimate:
    psi: float
    theta: Tuple[float, float, float, float]
    ci: Tuple[float, float]
    se: float
    bandwidth: float
    clamped_count: int
    min_density: float
    c: float

    def as_row(self) -> dict:
        return {
            'cutoff': self.c,
            'psi': self.psi,
            'ci_lo': self.ci[0],
            'ci_hi': self.ci[1],
            'se': self.se,
            'bandwidth': self.bandwidth,
            'clamped_count': self.clamped_count,
            'min_density': self.min_density,
        }


@dataclass(frozen=True)
class ErcCurve:
    table: pd.DataFrame
    bandwidth: float
    clamped_count: int
    risk_ratio: Optional[float] = None


class PolicyKind(str, Enum):
    SHIFT = 'shift'
    CAP = 'cap'
    IDENTITY = 'identity'


@dataclass(frozen=True)
class Policy:
    kind: PolicyKind
    value: float = 0.0

    def apply(self, a: np.ndarray) -> np.ndarray:
        if self.kind == PolicyKind.SHIFT:
            return a + self.value
        if self.kind == PolicyKind.CAP:
            return np.minimum(a, self.value)
        return a

    def __str__(self):
        if self.kind == PolicyKind.IDENTITY:
            return 'identity'
        return f"{self.kind.value}({self.value:g})"


@dataclass(frozen=True)
class PolicyEstimate:
    policy: Policy
    estimate: float
    extrapolating_units: int
