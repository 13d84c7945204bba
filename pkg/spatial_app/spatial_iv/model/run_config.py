from enum import Enum
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, \
    model_validator

from spatial_iv.model.data.csv_schema import CsvSchema
from spatial_iv.model.method import BENCHMARK_METHODS, BasisFamily, \
    IV_TPS, METHODS
from spatial_iv.model.sim_scenario import SimScenario

SCHEMA_VERSION = 1
LEARNERS = ['mean', 'linear', 'interactions', 'quadratic']


class StrictModel(BaseModel):
    model_config = ConfigDict(extra='forbid', frozen=True)


class OutputFormat(str, Enum):
    CSV = 'csv'
    JSON = 'json'


class DecompositionKind(str, Enum):
    TPS = 'tps'
    LAPLACIAN = 'laplacian'
    PRECISION = 'precision'
    REGION = 'region'
    KRIGING = 'kriging'


class DatasetConfig(StrictModel):
    path: Optional[str] = None
    columns: CsvSchema = Field(default_factory=CsvSchema)
    edge_list: Optional[str] = None


class DecompositionConfig(StrictModel):
    kind: DecompositionKind = DecompositionKind.TPS
    dimension: Optional[int] = Field(default=None, ge=1)
    variance_target: Optional[float] = Field(default=None, ge=0, le=1)
    candidates: Optional[List[int]] = None
    which: Literal['smoothest', 'roughest'] = 'smoothest'
    knn_k: int = Field(default=6, ge=1)
    kriging_theta: float = Field(default=0.5, gt=0)
    kriging_nugget: float = Field(default=1.0, ge=0)
    kriging_scaled_argument: bool = False


class PolicySpec(StrictModel):
    kind: Literal['shift', 'cap', 'identity']
    value: float = 0.0


class EstimationConfig(StrictModel):
    model: Literal['dr', 'linear'] = 'dr'
    strategy: Literal['2sls', '2sri', 'doublepred', 'spatialplus'] = '2sls'
    cutoffs: List[float] = [0.5]
    methods: List[str] = list(BENCHMARK_METHODS)
    reference_method: Optional[str] = None
    dimension: Optional[int] = Field(default=None, ge=1)
    folds: int = Field(default=5, ge=2)
    fold_seed: int = Field(default=0, ge=0)
    bandwidths: Optional[List[float]] = None
    use_covariates: bool = True
    # dropped for every method except the oracle
    withheld_covariates: List[str] = []
    density_variance_factor: float = Field(default=1.0, gt=0)
    outcome_learners: List[str] = list(LEARNERS)
    density_learners: List[str] = list(LEARNERS)
    policies: List[PolicySpec] = []
    positivity_margin: Optional[float] = Field(default=None, gt=0)

    @field_validator('methods')
    @classmethod
    def _known_methods(cls, methods):
        unknown = [m for m in methods if m not in METHODS]
        if unknown:
            raise ValueError(f"unknown methods {unknown}; "
                             f"choose from {sorted(METHODS)}")
        if not methods:
            raise ValueError("at least one method is required")
        return methods

    @field_validator('outcome_learners', 'density_learners')
    @classmethod
    def _known_learners(cls, learners):
        unknown = [name for name in learners if name not in LEARNERS]
        if unknown or not learners:
            raise ValueError(f"learners must be a non-empty subset of "
                             f"{LEARNERS}, got {learners}")
        return [name for name in LEARNERS if name in learners]

    @field_validator('bandwidths')
    @classmethod
    def _positive_bandwidths(cls, bandwidths):
        if bandwidths is not None:
            if not bandwidths or any(not h > 0 for h in bandwidths):
                raise ValueError("bandwidths must be a non-empty list of "
                                 "positive values")
            return sorted(bandwidths)
        return bandwidths

    @model_validator(mode='after')
    def _reference_listed(self):
        if self.reference_method is not None \
                and self.reference_method not in self.methods:
            raise ValueError(f"reference method {self.reference_method} is "
                             f"not among the estimated methods")
        return self


class ReplicationsConfig(StrictModel):
    m: int = Field(default=100, ge=1)
    truth_reps: int = Field(default=100000, ge=1000)


class BenchmarkConfig(StrictModel):
    cutoff: float = 0.5
    truth: Optional[float] = None
    # monte_carlo draws replications.truth_reps latent fields
    truth_source: Literal['analytic', 'monte_carlo'] = 'analytic'
    check_bands: bool = True


class SensitivityConfig(StrictModel):
    family: BasisFamily = BasisFamily.TPS
    dimensions: List[int] = [4, 5, 6, 7, 8]
    cutoff: float = 0.5
    method: Literal['a_c', 'a_c+coords'] = 'a_c'

    @field_validator('dimensions')
    @classmethod
    def _non_empty(cls, dimensions):
        if not dimensions or any(d < 1 for d in dimensions):
            raise ValueError("dimensions must be a non-empty list of "
                             "positive integers")
        return dimensions


class ErcConfig(StrictModel):
    method: str = IV_TPS
    grid_points: int = Field(default=100, ge=1)
    lower_percentile: float = Field(default=2.5, ge=0, le=100)
    upper_percentile: float = Field(default=97.5, ge=0, le=100)
    grid: Optional[List[float]] = None
    risk_ratio: Optional[Tuple[float, float]] = None
    plot: bool = True

    @field_validator('method')
    @classmethod
    def _known_method(cls, method):
        if method not in METHODS:
            raise ValueError(f"unknown method {method}; "
                             f"choose from {sorted(METHODS)}")
        return method

    @model_validator(mode='after')
    def _ordered_percentiles(self):
        if self.lower_percentile > self.upper_percentile:
            raise ValueError("lower_percentile exceeds upper_percentile")
        return self


class RunConfig(StrictModel):
    schema_version: Literal[1] = SCHEMA_VERSION
    threads: int = Field(default=1, ge=1)
    format: OutputFormat = OutputFormat.CSV
    scenario: SimScenario = Field(default_factory=SimScenario)
    dataset: DatasetConfig = Field(default_factory=DatasetConfig)
    decomposition: DecompositionConfig = Field(
        default_factory=DecompositionConfig
    )
    estimation: EstimationConfig = Field(default_factory=EstimationConfig)
    replications: ReplicationsConfig = Field(
        default_factory=ReplicationsConfig
    )
    benchmark: BenchmarkConfig = Field(default_factory=BenchmarkConfig)
    sensitivity: SensitivityConfig = Field(default_factory=SensitivityConfig)
    erc: ErcConfig = Field(default_factory=ErcConfig)

    def with_overrides(
        self,
        seed: Optional[int] = None,
        threads: Optional[int] = None,
        output_format: Optional[OutputFormat] = None,
        data_path: Optional[str] = None,
        model: Optional[str] = None,
        strategy: Optional[str] = None,
    ) -> 'RunConfig':
        update = {}
        estimation = {}
        if seed is not None:
            update['scenario'] = self.scenario.with_seed(seed)
            estimation['fold_seed'] = seed
        if model is not None:
            estimation['model'] = model
        if strategy is not None:
            estimation['strategy'] = strategy
        if estimation:
            update['estimation'] = EstimationConfig.model_validate({
                **self.estimation.model_dump(), **estimation
            })
        if data_path is not None:
            update['dataset'] = self.dataset.model_copy(
                update={'path': data_path}
            )
        if threads is not None:
            update['threads'] = threads
        if output_format is not None:
            update['format'] = output_format
        return self.model_copy(update=update)

    def resolved_json(self) -> str:
        return self.model_dump_json(indent=2) + '\n'
