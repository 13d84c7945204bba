from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List

import pandas as pd
from loguru import logger

from spatial_iv.model.data.sim_draw import SimDraw, SpatialLayout, \
    TruthValue
from spatial_iv.model.run_config import RunConfig
from spatial_iv.model.sim_scenario import Layout, Mechanism, SimScenario
from spatial_iv.numerics import gp_sim
from spatial_iv.repositories.dataset_repository import DatasetRepository
from spatial_iv.repositories.results_repository import ResultsRepository

TRUTH_COLUMNS = ['cutoff', 'truth', 'mc_se', 'source']


def replicate_file_name(index: int) -> str:
    return f"replicate_{index:04d}.csv"


class SimulationService:
    def __init__(
        self,
        dataset_repository: DatasetRepository,
        results_repository: ResultsRepository,
    ):
        self.dataset_repository = dataset_repository
        self.results_repository = results_repository

    def layout(self, scenario: SimScenario) -> SpatialLayout:
        if scenario.layout == Layout.FILE:
            region = 'region' if scenario.mechanism == Mechanism.M3 else None
            return self.dataset_repository.load_layout(
                scenario.coords_file, region
            )
        return gp_sim.scenario_layout(scenario)

    def sampler(self, scenario: SimScenario) -> gp_sim.ScenarioSampler:
        return gp_sim.ScenarioSampler(scenario, self.layout(scenario))

    def draw(self, scenario: SimScenario) -> SimDraw:
        return self.sampler(scenario).draw(scenario.seed)

    def monte_carlo_truth(self, config: RunConfig, c: float) -> TruthValue:
        return gp_sim.true_truncated_effect(
            config.scenario, c, config.replications.truth_reps,
            sampler=self.sampler(config.scenario),
        )

    def truth(self, config: RunConfig, c: float) -> TruthValue:
        if config.benchmark.truth_source == 'monte_carlo':
            return self.monte_carlo_truth(config, c)
        return TruthValue(
            value=gp_sim.analytic_truncated_effect(config.scenario, c),
            mc_se=float('nan'),
        )

    def truth_table(self, config: RunConfig) -> pd.DataFrame:
        cutoffs = sorted(
            set(config.estimation.cutoffs) | {config.benchmark.cutoff}
        )
        rows = []
        for c in cutoffs:
            truth = self.truth(config, c)
            rows.append({'cutoff': c, 'truth': truth.value,
                         'mc_se': truth.mc_se,
                         'source': config.benchmark.truth_source})
        return pd.DataFrame(rows, columns=TRUTH_COLUMNS)

    def simulate(self, config: RunConfig, out_dir: Path) -> List[Path]:
        """One CSV per replicate, a truth table and a manifest."""
        scenario = config.scenario
        m = config.replications.m
        sampler = self.sampler(scenario)

        def write(index: int):
            seed = (scenario.seed + index) % 2 ** 64
            draw = sampler.draw(seed)
            path = Path(out_dir) / replicate_file_name(index)
            self.dataset_repository.save_csv(
                draw.dataset,
                path,
                {**scenario.metadata(), 'seed': str(seed),
                 'replicate': str(index),
                 'resolved_config': 'resolved_config.json'},
            )
            return {'replicate': index, 'seed': seed, 'file': path.name,
                    'jitter': draw.jitter}

        logger.info(f"simulating {m} datasets of n={sampler.n} "
                    f"({scenario.mechanism.value}, "
                    f"{scenario.outcome_model.value})")
        with ThreadPoolExecutor(max_workers=config.threads) as executor:
            entries = list(executor.map(write, range(m)))

        truth = self.results_repository.save_table(
            out_dir, 'truth', self.truth_table(config), scenario.metadata(),
            config.format,
        )
        manifest = self.results_repository.save_manifest(
            out_dir, pd.DataFrame(entries), scenario.metadata()
        )
        return [Path(out_dir) / e['file'] for e in entries] + [truth, manifest]
