from spatial_iv.app.report_provider import ReportProvider
from spatial_iv.model.command import Command
from spatial_iv.model.command_result import CommandResult
from spatial_iv.repositories.results_repository import ResultsRepository
from spatial_iv.routes.route import Route, output_metadata
from spatial_iv.services.estimation_service import EstimationService
from spatial_iv.services.sensitivity_service import SensitivityService


class SensitivityRoute(Route):
    def __init__(
        self,
        estimation_service: EstimationService,
        sensitivity_service: SensitivityService,
        results_repository: ResultsRepository,
        report_provider: ReportProvider,
    ):
        self.estimation_service = estimation_service
        self.sensitivity_service = sensitivity_service
        self.results_repository = results_repository
        self.report_provider = report_provider

    @staticmethod
    def matches(command: Command) -> bool:
        return command.command_name == 'sensitivity'

    def call(self, command: Command) -> CommandResult:
        config = command.config
        d, graph = self.estimation_service.dataset(config)
        frame = self.sensitivity_service.run(d, config, graph)

        metadata = {**output_metadata(command),
                    'cutoff': f"{config.sensitivity.cutoff!r}",
                    'method': config.sensitivity.method}
        outputs = [
            self.results_repository.save_table(
                command.out_dir, 'sensitivity', frame, metadata,
                config.format,
            ),
            self.results_repository.save_text(
                command.out_dir, 'sensitivity.svg',
                self.report_provider.sensitivity_svg(frame),
            ),
            self.results_repository.save_resolved_config(
                command.out_dir, config
            ),
        ]
        return CommandResult.success(
            outputs,
            self.report_provider.results_table(
                f"Sensitivity to {config.sensitivity.family.value} "
                f"dimension", frame
            ),
        )
