from spatial_iv.app.report_provider import ReportProvider
from spatial_iv.model.command import Command
from spatial_iv.model.command_result import CommandResult
from spatial_iv.repositories.results_repository import ResultsRepository
from spatial_iv.routes.route import Route, output_metadata
from spatial_iv.services.benchmark_service import BenchmarkService


class BenchmarkRoute(Route):
    def __init__(
        self,
        benchmark_service: BenchmarkService,
        results_repository: ResultsRepository,
        report_provider: ReportProvider,
    ):
        self.benchmark_service = benchmark_service
        self.results_repository = results_repository
        self.report_provider = report_provider

    @staticmethod
    def matches(command: Command) -> bool:
        return command.command_name == 'benchmark'

    def call(self, command: Command) -> CommandResult:
        config = command.config
        report, replications = self.benchmark_service.run(config)

        metadata = {
            **output_metadata(command),
            **config.scenario.metadata(),
            'cutoff': f"{report.cutoff!r}",
            'truth': f"{report.truth!r}",
            'replicates': str(config.replications.m),
        }
        outputs = [
            self.results_repository.save_table(
                command.out_dir, 'benchmark', report.rows, metadata,
                config.format,
            ),
            self.results_repository.save_table(
                command.out_dir, 'replicates', replications.table, metadata,
                config.format,
            ),
            self.results_repository.save_resolved_config(
                command.out_dir, config
            ),
        ]

        text = self.report_provider.benchmark_table(report)
        if report.passed:
            return CommandResult.success(outputs, text)
        return CommandResult.band_failure(outputs, text)
