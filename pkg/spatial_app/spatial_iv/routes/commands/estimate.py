from spatial_iv.app.report_provider import ReportProvider
from spatial_iv.model.command import Command
from spatial_iv.model.command_result import CommandResult
from spatial_iv.repositories.results_repository import ResultsRepository
from spatial_iv.routes.route import Route, output_metadata
from spatial_iv.services.estimation_service import EstimationService, \
    hausdorff_table


class EstimateRoute(Route):
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
        return command.command_name == 'estimate'

    def call(self, command: Command) -> CommandResult:
        config = command.config
        estimation = config.estimation
        d, graph = self.estimation_service.dataset(config)
        metadata = {**output_metadata(command), 'model': estimation.model}

        tables = []
        if estimation.model == 'linear':
            tables.append(('linear_fits', 'Linear IV fits',
                           self.estimation_service.linear_fits(
                               d, config, graph)))
        else:
            effects = self.estimation_service.truncated_effects(
                d, config, graph
            )
            tables.append(('estimates', 'Truncated exposure effects',
                           effects))
            if estimation.reference_method is not None:
                tables.append((
                    'hausdorff',
                    f"Average Hausdorff distance to "
                    f"{estimation.reference_method}",
                    hausdorff_table(effects, estimation.reference_method),
                ))
            if estimation.policies:
                tables.append(('policies', 'Policy effects',
                               self.estimation_service.policy_effects(
                                   d, config, graph)))

        outputs = [
            self.results_repository.save_table(
                command.out_dir, name, frame, metadata, config.format
            )
            for name, _, frame in tables
        ]
        outputs.append(self.results_repository.save_resolved_config(
            command.out_dir, config
        ))
        report = '\n\n'.join(
            self.report_provider.results_table(title, frame)
            for _, title, frame in tables
        )
        return CommandResult.success(outputs, report)
