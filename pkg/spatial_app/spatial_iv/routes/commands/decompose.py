import pandas as pd

from spatial_iv.app.report_provider import ReportProvider
from spatial_iv.model.command import Command
from spatial_iv.model.command_result import CommandResult
from spatial_iv.repositories.results_repository import ResultsRepository
from spatial_iv.routes.route import Route, output_metadata
from spatial_iv.services.decomposition_service import DecompositionService
from spatial_iv.services.estimation_service import EstimationService


class DecomposeRoute(Route):
    def __init__(
        self,
        estimation_service: EstimationService,
        decomposition_service: DecompositionService,
        results_repository: ResultsRepository,
        report_provider: ReportProvider,
    ):
        self.estimation_service = estimation_service
        self.decomposition_service = decomposition_service
        self.results_repository = results_repository
        self.report_provider = report_provider

    @staticmethod
    def matches(command: Command) -> bool:
        return command.command_name == 'decompose'

    def call(self, command: Command) -> CommandResult:
        config = command.config
        d, graph = self.estimation_service.dataset(config)
        dec, dimension = self.decomposition_service.decompose(
            d, config.decomposition, graph
        )

        metadata = {**output_metadata(command),
                    'kind': config.decomposition.kind.value}
        components = pd.DataFrame({
            'id': list(d.ids),
            'a': dec.a,
            'a_c': dec.a_c,
            'a_uc': dec.a_uc,
        })
        summary = pd.DataFrame([{
            'kind': config.decomposition.kind.value,
            'dimension': dimension,
            'projection_rank': dec.projection_rank,
            'confounded_variance_share': dec.confounded_variance_share,
            'instrument_variance_share': dec.instrument_variance_share,
        }])

        outputs = [
            self.results_repository.save_table(
                command.out_dir, 'decomposition', components, metadata,
                config.format,
            ),
            self.results_repository.save_table(
                command.out_dir, 'decomposition_summary', summary, metadata,
                config.format,
            ),
            self.results_repository.save_resolved_config(
                command.out_dir, config
            ),
        ]
        return CommandResult.success(
            outputs, self.report_provider.decomposition_summary(dec, dimension)
        )
