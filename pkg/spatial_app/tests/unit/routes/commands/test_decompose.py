from spatial_iv.routes.commands.decompose import DecomposeRoute
from tests.fakes import confounded_dataset
from tests.unit.routes.commands.helpers import Services, command


def _route(services):
    return DecomposeRoute(
        estimation_service=services.estimation_service,
        decomposition_service=services.decomposition_service,
        results_repository=services.results_repository,
        report_provider=services.report_provider,
    )


def test_decompose_writes_components_and_summary():
    # Given
    d = confounded_dataset(n=50)
    services = Services(d)

    # When
    result = _route(services).call(command('decompose', {
        'decomposition': {'kind': 'tps', 'dimension': 6},
        'scenario': {'seed': 3},
    }))

    # Then
    tables = services.results_repository.tables
    components = tables['decomposition']
    assert list(components.columns) == ['id', 'a', 'a_c', 'a_uc']
    assert components['id'].tolist() == list(d.ids)
    summary = tables['decomposition_summary'].iloc[0]
    assert summary['dimension'] == 6
    assert summary['kind'] == 'tps'
    metadata = services.results_repository.metadata['decomposition']
    assert metadata['command'] == 'decompose'
    assert metadata['seed'] == '3'
    assert metadata['schema_version'] == '1'
    assert metadata['rng'] == 'numpy.random.Philox'
    assert [p.name for p in result.outputs] == [
        'decomposition.csv', 'decomposition_summary.csv',
        'resolved_config.json',
    ]


def test_json_format():
    services = Services(confounded_dataset(n=40))

    result = _route(services).call(command('decompose', {'format': 'json'}))

    assert result.outputs[0].name == 'decomposition.json'
