from dataclasses import dataclass
from typing import Callable, Mapping

import pandas as pd

from spatial_iv.model.data.sim_draw import SimDraw

TABLE_COLUMNS = ['replicate', 'seed', 'method', 'estimate', 'ci_lo', 'ci_hi',
                 'failed', 'error']
SUMMARY_COLUMNS = ['method', 'bias', 'rmse', 'n_ok', 'n_failed']


@dataclass(frozen=True)
class PointEstimate:
    estimate: float
    ci_lo: float
    ci_hi: float


Estimator = Callable[[SimDraw], PointEstimate]
EstimatorSuite = Mapping[str, Estimator]


@dataclass(frozen=True)
class ReplicationResult:
    table: pd.DataFrame
    summary: pd.DataFrame
    truth: float

    def failed_count(self) -> int:
        return int(self.table['failed'].sum())
