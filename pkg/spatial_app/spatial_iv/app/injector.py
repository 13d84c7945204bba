from spatial_iv.app.command_handler import CommandHandler
from spatial_iv.app.report_provider import ReportProviderImpl
from spatial_iv.app.router import Router, RouterImpl
from spatial_iv.repositories.config_repository import ConfigRepositoryImpl
from spatial_iv.repositories.dataset_repository import DatasetRepositoryImpl
from spatial_iv.repositories.results_repository import ResultsRepositoryImpl
from spatial_iv.routes.commands.benchmark import BenchmarkRoute
from spatial_iv.routes.commands.decompose import DecomposeRoute
from spatial_iv.routes.commands.erc import ErcRoute
from spatial_iv.routes.commands.estimate import EstimateRoute
from spatial_iv.routes.commands.sensitivity import SensitivityRoute
from spatial_iv.routes.commands.simulate import SimulateRoute
from spatial_iv.services.benchmark_service import BenchmarkService
from spatial_iv.services.decomposition_service import DecompositionService
from spatial_iv.services.estimation_service import EstimationService
from spatial_iv.services.sensitivity_service import SensitivityService
from spatial_iv.services.simulation_service import SimulationService


def command_handler() -> CommandHandler:
    return CommandHandler(
        router=_router(),
        config_repository=ConfigRepositoryImpl(),
    )


def _router() -> Router:
    dataset_repository = DatasetRepositoryImpl()
    results_repository = ResultsRepositoryImpl()
    report_provider = ReportProviderImpl()

    decomposition_service = DecompositionService()
    simulation_service = SimulationService(
        dataset_repository=dataset_repository,
        results_repository=results_repository,
    )
    estimation_service = EstimationService(
        dataset_repository=dataset_repository,
        decomposition_service=decomposition_service,
        simulation_service=simulation_service,
    )
    benchmark_service = BenchmarkService(
        simulation_service=simulation_service,
        estimation_service=estimation_service,
    )
    sensitivity_service = SensitivityService(
        decomposition_service=decomposition_service,
    )

    return RouterImpl(
        routes=[
            SimulateRoute(
                simulation_service=simulation_service,
                results_repository=results_repository,
                report_provider=report_provider,
            ),
            DecomposeRoute(
                estimation_service=estimation_service,
                decomposition_service=decomposition_service,
                results_repository=results_repository,
                report_provider=report_provider,
            ),
            EstimateRoute(
                estimation_service=estimation_service,
                results_repository=results_repository,
                report_provider=report_provider,
            ),
            BenchmarkRoute(
                benchmark_service=benchmark_service,
                results_repository=results_repository,
                report_provider=report_provider,
            ),
            SensitivityRoute(
                estimation_service=estimation_service,
                sensitivity_service=sensitivity_service,
                results_repository=results_repository,
                report_provider=report_provider,
            ),
            ErcRoute(
                estimation_service=estimation_service,
                results_repository=results_repository,
                report_provider=report_provider,
            ),
        ]
    )
