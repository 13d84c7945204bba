from pathlib import Path

from spatial_iv.app.report_provider import ReportProviderImpl
from spatial_iv.model.command import Command
from spatial_iv.model.run_config import RunConfig
from spatial_iv.services.decomposition_service import DecompositionService
from spatial_iv.services.estimation_service import EstimationService
from spatial_iv.services.simulation_service import SimulationService
from tests.fakes import FakeDatasetRepository, FakeResultsRepository

DATA_PATH = 'd.csv'
OUT_DIR = Path('out')


class Services:
    def __init__(self, dataset=None):
        datasets = {DATA_PATH: dataset} if dataset is not None else {}
        self.dataset_repository = FakeDatasetRepository(datasets)
        self.results_repository = FakeResultsRepository()
        self.report_provider = ReportProviderImpl()
        self.decomposition_service = DecompositionService()
        self.simulation_service = SimulationService(
            self.dataset_repository, self.results_repository
        )
        self.estimation_service = EstimationService(
            self.dataset_repository,
            self.decomposition_service,
            self.simulation_service,
        )


def command(command_name: str, config: dict = None) -> Command:
    config = RunConfig.model_validate({
        'dataset': {'path': DATA_PATH},
        'estimation': {'bandwidths': [0.3, 0.6, 1.2]},
        **(config or {}),
    })
    return Command(command_name=command_name, config=config, out_dir=OUT_DIR)
