from unittest.mock import MagicMock

import pandas as pd

from spatial_iv.model.benchmark_report import build_report
from spatial_iv.model.data.replication import ReplicationResult, \
    TABLE_COLUMNS
from spatial_iv.model.method import BENCHMARK_METHODS
from spatial_iv.model.sim_scenario import Mechanism, OutcomeModel
from spatial_iv.routes.commands.benchmark import BenchmarkRoute
from spatial_iv.services.benchmark_service import BenchmarkService
from tests.unit.routes.commands.helpers import Services, command


def _run(biases):
    summary = pd.DataFrame({
        'method': BENCHMARK_METHODS,
        'bias': biases,
        'rmse': [0.2, 0.1, 0.1, 0.1, 0.1, 0.1],
        'n_ok': [2] * 6,
        'n_failed': [0] * 6,
    })
    report = build_report(summary, Mechanism.M1, OutcomeModel.LINEAR,
                          truth=0.9, cutoff=0.5)
    replications = ReplicationResult(
        table=pd.DataFrame(columns=TABLE_COLUMNS), summary=summary,
        truth=0.9,
    )
    return report, replications


def _route(services, benchmark_service):
    return BenchmarkRoute(
        benchmark_service=benchmark_service,
        results_repository=services.results_repository,
        report_provider=services.report_provider,
    )


def test_passing_benchmark():
    # Given
    services = Services()
    benchmark_service = MagicMock(BenchmarkService)
    benchmark_service.run.return_value = _run(
        [-0.13, -0.04, 0.01, 0.01, 0.01, 0.0]
    )

    # When
    result = _route(services, benchmark_service).call(command('benchmark'))

    # Then
    assert result.exit_code == 0
    metadata = services.results_repository.metadata['benchmark']
    assert metadata['truth'] == '0.9'
    assert metadata['cutoff'] == '0.5'
    assert metadata['mechanism'] == 'M1'
    assert sorted(services.results_repository.tables) == [
        'benchmark', 'replicates',
    ]
    assert result.report.endswith('bands: PASS')


def test_failing_bands_exit_with_four():
    services = Services()
    benchmark_service = MagicMock(BenchmarkService)
    benchmark_service.run.return_value = _run(
        [0.13, -0.04, 0.01, 0.01, 0.01, 0.0]
    )

    result = _route(services, benchmark_service).call(command('benchmark'))

    assert result.exit_code == 4
    assert len(result.outputs) == 3
