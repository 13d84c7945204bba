import numpy as np
import pandas as pd
import pytest

from spatial_iv.exceptions import InvalidDataset, MissingColumn
from spatial_iv.model.data.replication import PointEstimate
from spatial_iv.model.data.spatial_dataset import SpatialDataset
from spatial_iv.model.data.spatial_graph import SpatialGraph
from spatial_iv.model.method import METHODS
from spatial_iv.model.run_config import EstimationConfig, RunConfig
from spatial_iv.numerics.dr.truncated_effect import truncated_effect
from spatial_iv.services import estimation_service
from spatial_iv.services.decomposition_service import DecompositionService
from spatial_iv.services.estimation_service import EFFECT_COLUMNS, \
    EstimationService, HAUSDORFF_COLUMNS, LINEAR_COLUMNS, POLICY_COLUMNS, \
    hausdorff_table, method_config, method_dataset
from spatial_iv.services.simulation_service import SimulationService
from tests.fakes import FakeDatasetRepository, FakeResultsRepository, \
    confounded_dataset


def _service(dataset_repository=None):
    dataset_repository = dataset_repository or FakeDatasetRepository()
    return EstimationService(
        dataset_repository=dataset_repository,
        decomposition_service=DecompositionService(),
        simulation_service=SimulationService(
            dataset_repository, FakeResultsRepository()
        ),
    )


def _config(**estimation):
    return RunConfig.model_validate({
        'threads': 2,
        'scenario': {'n': 40, 'seed': 2},
        'estimation': {'bandwidths': [0.3, 0.6, 1.2], **estimation},
    })


def test_method_config_overrides_covariate_use():
    config = EstimationConfig(use_covariates=True)
    off = EstimationConfig(use_covariates=False)

    assert method_config(config, METHODS['baseline']) is config
    assert method_config(config, METHODS['oracle']) is config
    assert method_config(config, METHODS['iv_tps']) is config
    assert method_config(off, METHODS['oracle']).use_covariates is True
    assert method_config(off, METHODS['baseline']) is off


def test_dataset_falls_back_to_the_scenario_draw():
    d, graph = _service().dataset(_config())

    assert d.n == 40
    assert d.metadata['seed'] == '2'
    assert graph is None


def test_dataset_from_file_with_edge_list():
    # Given
    d = confounded_dataset(n=10)
    graph = SpatialGraph.from_edges(10, [(i, i + 1) for i in range(9)])
    repository = FakeDatasetRepository(datasets={'d.csv': d},
                                       graphs={'edges.csv': graph})
    config = RunConfig.model_validate({
        'dataset': {'path': 'd.csv', 'edge_list': 'edges.csv'},
    })

    # When
    loaded, loaded_graph = _service(repository).dataset(config)

    # Then
    assert loaded is d
    assert loaded_graph is graph


def test_truncated_effects_table():
    # Given
    d = confounded_dataset(n=120)
    config = _config(methods=['baseline', 'iv_tps'], cutoffs=[0.5, 1.0])

    # When
    effects = _service().truncated_effects(d, config)

    # Then
    assert list(effects.columns) == EFFECT_COLUMNS
    assert effects['method'].tolist() == ['baseline', 'baseline',
                                          'iv_tps', 'iv_tps']
    assert effects['cutoff'].tolist() == [0.5, 1.0, 0.5, 1.0]
    assert np.all(effects['ci_lo'] <= effects['psi'])
    assert np.all(effects['psi'] <= effects['ci_hi'])


def test_linear_fits_reduce_confounding_bias():
    # Given
    d = confounded_dataset(n=150, effect=1.0)
    config = _config(model='linear', strategy='2sls',
                     methods=['baseline', 'iv_tps'])

    # When
    fits = _service().linear_fits(d, config).set_index('method')

    # Then
    assert list(fits.reset_index().columns) == LINEAR_COLUMNS
    assert fits.index.tolist() == ['baseline', 'iv_tps']
    assert fits.at['baseline', 'strategy'] == 'ols'
    assert np.isnan(fits.at['baseline', 'instrument_variance_share'])
    assert abs(fits.at['iv_tps', 'beta'] - 1.0) \
        < abs(fits.at['baseline', 'beta'] - 1.0)


def test_linear_fits_need_an_outcome():
    d = confounded_dataset(n=30)

    with pytest.raises(InvalidDataset):
        _service().linear_fits(
            SpatialDataset(coords=d.coords, exposure=d.exposure),
            _config(model='linear'),
        )


def test_identity_policy_is_zero_for_every_method():
    # Given
    d = confounded_dataset(n=80)
    config = _config(methods=['baseline', 'spatialcoord', 'iv_tps'],
                     policies=[{'kind': 'identity'}])

    # When
    policies = _service().policy_effects(d, config)

    # Then
    assert list(policies.columns) == POLICY_COLUMNS
    assert policies['estimate'].tolist() == [0.0, 0.0, 0.0]
    assert set(policies['policy']) == {'identity'}


def test_hausdorff_table():
    # Given
    effects = pd.DataFrame({
        'method': ['oracle', 'oracle', 'iv_tps', 'iv_tps'],
        'cutoff': [0.5, 1.0, 0.5, 1.0],
        'ci_lo': [0.1, 0.2, 0.0, 0.5],
        'ci_hi': [0.3, 0.4, 0.4, 0.6],
    })

    # When
    table = hausdorff_table(effects, 'oracle').set_index('method')

    # Then
    assert list(table.reset_index().columns) == HAUSDORFF_COLUMNS
    assert table.at['oracle', 'avg_hausdorff'] == 0.0
    assert table.at['iv_tps', 'avg_hausdorff'] == pytest.approx(0.2)
    assert table.at['iv_tps', 'cutoffs'] == 2


def test_erc_uses_the_configured_method():
    # Given
    d = confounded_dataset(n=100)
    config = RunConfig.model_validate({
        'erc': {'method': 'iv_tps', 'grid_points': 7},
        'estimation': {'bandwidths': [0.5, 1.0]},
    })

    # When
    curve = _service().erc(d, config)

    # Then
    assert len(curve.table) == 7


def test_estimator_suite_on_a_draw():
    # Given
    config = _config(methods=['baseline', 'iv_tps'])
    service = _service()
    draw = service.simulation_service.draw(config.scenario)

    # When
    suite = service.estimator_suite(config, 0.0)

    # Then
    assert list(suite) == ['baseline', 'iv_tps']
    estimate = suite['iv_tps'](draw)
    assert isinstance(estimate, PointEstimate)
    assert estimate.ci_lo <= estimate.estimate <= estimate.ci_hi


def test_withheld_covariates_are_dropped_for_all_but_the_oracle():
    # Given
    d = confounded_dataset(n=40, covariates=2)
    config = EstimationConfig(withheld_covariates=['x2'])

    # When
    seen = {name: method_dataset(d, config, METHODS[name])
            for name in ('baseline', 'oracle', 'iv_tps')}

    # Then
    assert seen['oracle'] is d
    assert seen['baseline'].covariate_names == ('x1',)
    assert np.array_equal(seen['iv_tps'].covariates, d.covariates[:, :1])
    assert method_dataset(d, EstimationConfig(), METHODS['iv_tps']) is d


def test_unknown_withheld_covariate_is_rejected():
    d = confounded_dataset(n=40, covariates=1)
    config = EstimationConfig(withheld_covariates=['income'])

    with pytest.raises(MissingColumn):
        method_dataset(d, config, METHODS['baseline'])


def test_truncated_effects_hide_withheld_covariates(mocker):
    # Given
    d = confounded_dataset(n=80, covariates=2)
    config = _config(methods=['baseline', 'oracle'],
                     withheld_covariates=['x2'])
    spy = mocker.patch.object(estimation_service, 'truncated_effect',
                              wraps=truncated_effect)

    # When
    _service().truncated_effects(d, config)

    # Then
    seen = sorted(call.args[0].covariate_names for call in spy.call_args_list)
    assert seen == [('x1',), ('x1', 'x2')]


def test_linear_fits_hide_withheld_covariates():
    # Given
    d = confounded_dataset(n=120, covariates=2)
    methods = ['baseline', 'oracle', 'iv_tps']
    withheld = _config(model='linear', methods=methods,
                       withheld_covariates=['x2'])

    # When
    fits = _service().linear_fits(d, withheld).set_index('method')
    full = _service().linear_fits(
        d, _config(model='linear', methods=methods)
    ).set_index('method')
    reduced = _service().linear_fits(
        d.without_covariates(['x2']), _config(model='linear', methods=methods)
    ).set_index('method')

    # Then
    assert fits.at['oracle', 'beta'] == \
        pytest.approx(full.at['oracle', 'beta'])
    for name in ('baseline', 'iv_tps'):
        assert fits.at[name, 'beta'] == pytest.approx(
            reduced.at[name, 'beta']
        )
        assert fits.at[name, 'beta'] != full.at[name, 'beta']


def test_every_basis_uses_the_configured_knn_k(mocker):
    # Given
    d = confounded_dataset(n=60)
    config = RunConfig.model_validate({
        'decomposition': {'knn_k': 3},
        'estimation': {'model': 'linear', 'dimension': 5,
                       'methods': ['iv_graph_laplacian'],
                       'bandwidths': [0.5, 1.0]},
    })
    service = _service()
    spy = mocker.spy(service.decomposition_service, 'laplacian_eigen')

    # When
    fits = service.linear_fits(d, config)
    service.truncated_effects(d, config.model_copy(update={
        'estimation': config.estimation.model_copy(update={'model': 'dr'})
    }))

    # Then
    assert len(fits) == 1
    assert spy.call_count == 2
    assert all(call.args[2] == 3 for call in spy.call_args_list)
