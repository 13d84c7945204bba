from spatial_iv.app.report_provider import ReportProvider
from spatial_iv.model.command import Command
from spatial_iv.model.command_result import CommandResult
from spatial_iv.repositories.results_repository import ResultsRepository
from spatial_iv.routes.route import Route, output_metadata
from spatial_iv.services.estimation_service import EstimationService


class ErcRoute(Route):
    def __init__(
        self,
        estimation_service: EstimationService,
        results_repository: ResultsRepository,
        report_provider: ReportProvider,
    ):
        self.estimation_service = estimation_service
        self.results_repository = results_repository
        self.report_provider = report_provider

    @staticmethod
    def matches(command: Command) -> bool:
        return command.command_name == 'erc'

    def call(self, command: Command) -> CommandResult:
        config = command.config
        d, graph = self.estimation_service.dataset(config)
        curve = self.estimation_service.erc(d, config, graph)

        metadata = {**output_metadata(command),
                    'method': config.erc.method,
                    'bandwidth': f"{curve.bandwidth!r}"}
        if curve.risk_ratio is not None:
            metadata['risk_ratio'] = f"{curve.risk_ratio!r}"

        outputs = [self.results_repository.save_table(
            command.out_dir, 'erc', curve.table, metadata, config.format
        )]
        if config.erc.plot:
            outputs.append(self.results_repository.save_text(
                command.out_dir, 'erc.svg',
                self.report_provider.erc_svg(curve),
            ))
        outputs.append(self.results_repository.save_resolved_config(
            command.out_dir, config
        ))
        return CommandResult.success(
            outputs, self.report_provider.erc_summary(curve)
        )
