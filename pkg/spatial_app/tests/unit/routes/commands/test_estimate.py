from spatial_iv.routes.commands.estimate import EstimateRoute
from tests.fakes import confounded_dataset
from tests.unit.routes.commands.helpers import Services, command


def _route(services):
    return EstimateRoute(
        estimation_service=services.estimation_service,
        results_repository=services.results_repository,
        report_provider=services.report_provider,
    )


def test_dr_estimates_with_reference_and_policies():
    # Given
    services = Services(confounded_dataset(n=90))

    # When
    result = _route(services).call(command('estimate', {
        'estimation': {
            'methods': ['baseline', 'iv_tps'],
            'cutoffs': [1.0],
            'reference_method': 'baseline',
            'policies': [{'kind': 'shift', 'value': 0.1}],
            'bandwidths': [0.5, 1.0],
        },
    }))

    # Then
    assert result.exit_code == 0
    assert sorted(services.results_repository.tables) == [
        'estimates', 'hausdorff', 'policies',
    ]
    hausdorff = services.results_repository.tables['hausdorff']
    assert hausdorff.set_index('method').at['baseline', 'avg_hausdorff'] \
        == 0.0
    assert services.results_repository.metadata['estimates']['model'] == 'dr'
    assert 'Truncated exposure effects' in result.report
    assert 'Policy effects' in result.report


def test_linear_model():
    # Given
    services = Services(confounded_dataset(n=90))

    # When
    result = _route(services).call(command('estimate', {
        'estimation': {'model': 'linear', 'strategy': '2sri',
                       'methods': ['baseline', 'iv_tps']},
    }))

    # Then
    fits = services.results_repository.tables['linear_fits']
    assert fits['method'].tolist() == ['baseline', 'iv_tps']
    assert fits['strategy'].tolist() == ['ols', '2sri']
    assert result.report.startswith('Linear IV fits')
    assert result.outputs[-1].name == 'resolved_config.json'
