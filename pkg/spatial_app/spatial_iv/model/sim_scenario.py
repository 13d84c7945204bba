from enum import Enum
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from spatial_iv.numerics.numkernel import DEFAULT_JITTER_LADDER

DEFAULT_THETA_C = 0.5
DEFAULT_CROSS_CORR = 0.95
DEFAULT_MEANS = (0.1, -0.2, 0.3)
DEFAULT_N = 503
DEFAULT_REGION_COUNT = 5
RNG_NAME = 'numpy.random.Philox'


class Mechanism(str, Enum):
    M1 = 'M1'
    M2 = 'M2'
    M3 = 'M3'


class OutcomeModel(str, Enum):
    LINEAR = 'linear'
    NONLINEAR = 'nonlinear'


class Layout(str, Enum):
    SYNTHETIC = 'synthetic'
    FILE = 'file'


def default_theta_uc(mechanism: Mechanism) -> float:
    return 0.05 if mechanism == Mechanism.M2 else 0.01


class SimScenario(BaseModel):
    """One data-generating process: a Matérn Gaussian process for
    (a_uc, a_c, u) and an outcome model on top."""
    model_config = ConfigDict(extra='forbid', frozen=True)

    mechanism: Mechanism = Mechanism.M1
    theta_uc: Optional[float] = Field(default=None, gt=0)
    theta_c: float = Field(default=DEFAULT_THETA_C, gt=0)
    cross_corr: float = Field(default=DEFAULT_CROSS_CORR, gt=-1, lt=1)
    means: Tuple[float, float, float] = DEFAULT_MEANS
    outcome_model: OutcomeModel = OutcomeModel.LINEAR
    interaction: float = -0.5
    noise_sd: float = Field(default=1.0, ge=0)
    n: int = Field(default=DEFAULT_N, ge=3)
    seed: int = Field(default=0, ge=0, lt=2 ** 64)
    layout: Layout = Layout.SYNTHETIC
    layout_seed: int = Field(default=0, ge=0)
    region_count: int = Field(default=DEFAULT_REGION_COUNT, ge=1)
    coords_file: Optional[str] = None
    matern_scaled_argument: bool = False
    jitter_ladder: Tuple[float, ...] = DEFAULT_JITTER_LADDER

    @model_validator(mode='before')
    @classmethod
    def _fill_theta_uc(cls, data):
        if isinstance(data, dict) and data.get('theta_uc') is None:
            mechanism = Mechanism(data.get('mechanism', Mechanism.M1))
            data = {**data, 'theta_uc': default_theta_uc(mechanism)}
        return data

    @model_validator(mode='after')
    def _check_layout(self):
        if self.layout == Layout.FILE and not self.coords_file:
            raise ValueError("layout 'file' needs coords_file")
        return self

    def with_seed(self, seed: int) -> 'SimScenario':
        return self.model_copy(update={'seed': seed % 2 ** 64})

    def metadata(self) -> dict:
        return {
            'mechanism': self.mechanism.value,
            'outcome_model': self.outcome_model.value,
            'matern_parameterization': 'sqrt(2nu)*d/theta'
            if self.matern_scaled_argument else 'd/theta',
            'rng': RNG_NAME,
            'seed': str(self.seed),
        }
