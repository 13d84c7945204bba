from spatial_iv.app.report_provider import ReportProvider
from spatial_iv.model.command import Command
from spatial_iv.model.command_result import CommandResult
from spatial_iv.repositories.results_repository import ResultsRepository
from spatial_iv.routes.route import Route
from spatial_iv.services.simulation_service import SimulationService


class SimulateRoute(Route):
    def __init__(
        self,
        simulation_service: SimulationService,
        results_repository: ResultsRepository,
        report_provider: ReportProvider,
    ):
        self.simulation_service = simulation_service
        self.results_repository = results_repository
        self.report_provider = report_provider

    @staticmethod
    def matches(command: Command) -> bool:
        return command.command_name == 'simulate'

    def call(self, command: Command) -> CommandResult:
        config = command.config
        outputs = self.simulation_service.simulate(config, command.out_dir)
        outputs.append(self.results_repository.save_resolved_config(
            command.out_dir, config
        ))

        truth = self.simulation_service.truth_table(config)
        report = self.report_provider.results_table(
            f"Simulated {config.replications.m} datasets "
            f"({config.scenario.mechanism.value}, "
            f"{config.scenario.outcome_model.value}); truncated-effect truth:",
            truth,
        )
        return CommandResult.success(outputs, report)
