from dataclasses import dataclass
from enum import Enum


class IvStrategy(str, Enum):
    TWO_SLS = '2sls'
    TWO_SRI = '2sri'
    DOUBLE_PREDICTION = 'doublepred'
    SPATIAL_PLUS = 'spatialplus'


@dataclass(frozen=True)
class IvFit:
    beta: float
    intercept: float
    strategy: IvStrategy
    instrument_variance_share: float

    def as_row(self) -> dict:
        return {
            'beta': self.beta,
            'intercept': self.intercept,
            'strategy': self.strategy.value,
            'instrument_variance_share': self.instrument_variance_share,
        }
