from dataclasses import dataclass
from typing import Optional

import numpy as np

from spatial_iv.model.data.spatial_dataset import SpatialDataset


@dataclass(frozen=True)
class SpatialLayout:
    coords: np.ndarray
    region: Optional[np.ndarray] = None

    @property
    def n(self) -> int:
        return self.coords.shape[0]


@dataclass(frozen=True)
class TruthValue:
    value: float
    mc_se: float


@dataclass(frozen=True)
class SimDraw:
    dataset: SpatialDataset
    a_uc: np.ndarray
    a_c: np.ndarray
    u: np.ndarray
    jitter: float
    seed: int
    true_truncated_effect: Optional[TruthValue] = None

    def __repr__(self):
        return f"<SimDraw n={self.dataset.n} seed={self.seed} " \
               f"jitter={self.jitter:g}>"
