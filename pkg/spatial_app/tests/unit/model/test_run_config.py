import pytest
from pydantic import ValidationError

from spatial_iv.model.method import BENCHMARK_METHODS
from spatial_iv.model.run_config import ErcConfig, EstimationConfig, \
    OutputFormat, RunConfig
from spatial_iv.model.sim_scenario import Layout, Mechanism, SimScenario


def test_defaults():
    config = RunConfig()

    assert config.schema_version == 1
    assert config.threads == 1
    assert config.format == OutputFormat.CSV
    assert config.estimation.methods == BENCHMARK_METHODS
    assert config.estimation.model == 'dr'
    assert config.scenario.n == 503
    assert config.replications.m == 100


def test_unknown_keys_are_rejected():
    with pytest.raises(ValidationError):
        RunConfig.model_validate({'estimation': {'method': ['baseline']}})


def test_unknown_method_is_rejected():
    with pytest.raises(ValidationError):
        EstimationConfig(methods=['baseline', 'kriging_iv'])


def test_learners_are_put_in_canonical_order():
    config = EstimationConfig(outcome_learners=['quadratic', 'mean'])

    assert config.outcome_learners == ['mean', 'quadratic']


def test_bandwidths_are_sorted_and_positive():
    assert EstimationConfig(bandwidths=[0.4, 0.1]).bandwidths == [0.1, 0.4]
    with pytest.raises(ValidationError):
        EstimationConfig(bandwidths=[0.4, 0.0])


def test_reference_method_must_be_estimated():
    with pytest.raises(ValidationError):
        EstimationConfig(methods=['baseline'], reference_method='oracle')


def test_schema_version_is_pinned():
    with pytest.raises(ValidationError):
        RunConfig.model_validate({'schema_version': 2})


def test_with_overrides():
    # Given
    config = RunConfig()

    # When
    overridden = config.with_overrides(
        seed=42, threads=3, output_format=OutputFormat.JSON,
        data_path='data.csv', model='linear', strategy='2sri',
    )

    # Then
    assert overridden.scenario.seed == 42
    assert overridden.estimation.fold_seed == 42
    assert overridden.estimation.model == 'linear'
    assert overridden.estimation.strategy == '2sri'
    assert overridden.dataset.path == 'data.csv'
    assert overridden.threads == 3
    assert overridden.format == OutputFormat.JSON
    assert config.scenario.seed == 0


def test_with_overrides_validates_the_estimation_block():
    with pytest.raises(ValidationError):
        RunConfig().with_overrides(strategy='3sls')


def test_resolved_json_round_trips():
    config = RunConfig().with_overrides(seed=7)

    assert RunConfig.model_validate_json(config.resolved_json()) == config


def test_scenario_range_defaults_per_mechanism():
    assert SimScenario().theta_uc == 0.01
    assert SimScenario(mechanism=Mechanism.M2).theta_uc == 0.05
    assert SimScenario(mechanism='M3', theta_uc=0.2).theta_uc == 0.2


def test_file_layout_needs_a_coordinates_file():
    with pytest.raises(ValidationError):
        SimScenario(layout=Layout.FILE)


def test_scenario_metadata():
    metadata = SimScenario(seed=9, matern_scaled_argument=True).metadata()

    assert metadata['seed'] == '9'
    assert metadata['rng'] == 'numpy.random.Philox'
    assert metadata['matern_parameterization'] == 'sqrt(2nu)*d/theta'


def test_erc_percentiles_must_be_ordered():
    with pytest.raises(ValidationError):
        ErcConfig(lower_percentile=90, upper_percentile=10)


def test_erc_method_must_exist():
    with pytest.raises(ValidationError):
        ErcConfig(method='nope')
