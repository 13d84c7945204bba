from typing import Tuple

from loguru import logger

from spatial_iv.exceptions import ConfigError
from spatial_iv.model.benchmark_report import BenchmarkReport, build_report
from spatial_iv.model.data.replication import ReplicationResult
from spatial_iv.model.run_config import RunConfig
from spatial_iv.numerics import gp_sim
from spatial_iv.services.estimation_service import EstimationService
from spatial_iv.services.simulation_service import SimulationService


class BenchmarkService:
    def __init__(
        self,
        simulation_service: SimulationService,
        estimation_service: EstimationService,
    ):
        self.simulation_service = simulation_service
        self.estimation_service = estimation_service

    def truth(self, config: RunConfig) -> float:
        if config.benchmark.truth is not None:
            return config.benchmark.truth
        return self.simulation_service.truth(
            config, config.benchmark.cutoff
        ).value

    def run(self, config: RunConfig) -> Tuple[BenchmarkReport,
                                               ReplicationResult]:
        if config.estimation.model != 'dr':
            raise ConfigError("benchmark compares truncated-effect "
                              "estimates; set estimation.model to 'dr'")

        scenario = config.scenario
        cutoff = config.benchmark.cutoff
        truth = self.truth(config)
        logger.info(f"benchmark {scenario.mechanism.value}/"
                    f"{scenario.outcome_model.value} at c={cutoff}: "
                    f"truth={truth:.6f}")

        result = gp_sim.run_replications(
            scenario,
            config.replications.m,
            self.estimation_service.estimator_suite(config, cutoff),
            truth,
            threads=config.threads,
            sampler=self.simulation_service.sampler(scenario),
        )
        report = build_report(
            result.summary,
            scenario.mechanism,
            scenario.outcome_model,
            truth=truth,
            cutoff=cutoff,
            failed_replicates=result.failed_count(),
            check_bands=config.benchmark.check_bands,
        )
        if not report.passed:
            logger.warning(f"benchmark bands failed for "
                           f"{list(report.failing_methods())}")
        return report, result
