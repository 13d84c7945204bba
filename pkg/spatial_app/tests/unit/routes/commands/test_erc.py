import numpy as np

from spatial_iv.routes.commands.erc import ErcRoute
from tests.fakes import confounded_dataset
from tests.unit.routes.commands.helpers import Services, command


def _route(services):
    return ErcRoute(
        estimation_service=services.estimation_service,
        results_repository=services.results_repository,
        report_provider=services.report_provider,
    )


def test_erc_with_plot_and_risk_ratio():
    # Given
    services = Services(confounded_dataset(n=80))

    # When
    result = _route(services).call(command('erc', {
        'erc': {'grid_points': 9, 'risk_ratio': [1.5, 0.5]},
    }))

    # Then
    table = services.results_repository.tables['erc']
    assert len(table) == 9
    metadata = services.results_repository.metadata['erc']
    assert metadata['method'] == 'iv_tps'
    assert np.isfinite(float(metadata['risk_ratio']))
    assert 'erc.svg' in services.results_repository.texts
    assert 'causal risk ratio' in result.report


def test_erc_without_plot():
    services = Services(confounded_dataset(n=60))

    result = _route(services).call(command('erc', {
        'erc': {'grid_points': 5, 'plot': False},
    }))

    assert [p.name for p in result.outputs] == ['erc.csv',
                                                 'resolved_config.json']
    assert services.results_repository.texts == {}
