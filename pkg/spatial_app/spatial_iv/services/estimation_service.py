from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Tuple

import numpy as np
import pandas as pd
from loguru import logger

from spatial_iv.exceptions import InvalidDataset
from spatial_iv.model.data.dr_estimates import ErcCurve, Policy, PolicyKind
from spatial_iv.model.data.iv_fit import IvStrategy
from spatial_iv.model.data.replication import EstimatorSuite, PointEstimate
from spatial_iv.model.data.sim_draw import SimDraw
from spatial_iv.model.data.spatial_dataset import SpatialDataset
from spatial_iv.model.data.spatial_graph import SpatialGraph
from spatial_iv.model.method import METHODS, Method
from spatial_iv.model.run_config import EstimationConfig, RunConfig
from spatial_iv.numerics.dr.erc import erc_grid
from spatial_iv.numerics.dr.hausdorff import avg_hausdorff
from spatial_iv.numerics.dr.policy import policy_effect
from spatial_iv.numerics.dr.truncated_effect import truncated_effect
from spatial_iv.numerics.linear_iv import STRATEGIES
from spatial_iv.numerics.numkernel import least_squares
from spatial_iv.repositories.dataset_repository import DatasetRepository
from spatial_iv.services.decomposition_service import \
    DecompositionService, default_dimension
from spatial_iv.services.simulation_service import SimulationService

EFFECT_COLUMNS = ['method', 'cutoff', 'psi', 'ci_lo', 'ci_hi', 'se',
                  'bandwidth', 'clamped_count', 'min_density']
LINEAR_COLUMNS = ['method', 'strategy', 'beta', 'intercept',
                  'instrument_variance_share']
HAUSDORFF_COLUMNS = ['method', 'reference', 'avg_hausdorff', 'cutoffs']
POLICY_COLUMNS = ['method', 'policy', 'estimate', 'extrapolating_units']


def method_config(
    config: EstimationConfig,
    method: Method,
) -> EstimationConfig:
    if method.use_covariates is None \
            or method.use_covariates == config.use_covariates:
        return config
    return config.model_copy(update={'use_covariates': method.use_covariates})


def method_dataset(
    d: SpatialDataset,
    config: EstimationConfig,
    method: Method,
) -> SpatialDataset:
    """The dataset as `method` sees it: withheld covariates are dropped for
    every method except the oracle."""
    if method.sees_withheld or not config.withheld_covariates:
        return d
    return d.without_covariates(config.withheld_covariates)


def hausdorff_table(effects: pd.DataFrame, reference: str) -> pd.DataFrame:
    """Average Hausdorff distance of each method's intervals to the
    reference method's intervals, matched by cutoff."""
    reference_rows = effects[effects['method'] == reference] \
        .set_index('cutoff')
    rows = []
    for method, group in effects.groupby('method', sort=False):
        pairs = [
            ((row.ci_lo, row.ci_hi),
             (reference_rows.at[row.cutoff, 'ci_lo'],
              reference_rows.at[row.cutoff, 'ci_hi']))
            for row in group.itertuples()
            if row.cutoff in reference_rows.index
        ]
        rows.append({
            'method': method,
            'reference': reference,
            'avg_hausdorff': avg_hausdorff(pairs),
            'cutoffs': len(pairs),
        })
    return pd.DataFrame(rows, columns=HAUSDORFF_COLUMNS)


class EstimationService:
    def __init__(
        self,
        dataset_repository: DatasetRepository,
        decomposition_service: DecompositionService,
        simulation_service: SimulationService,
    ):
        self.dataset_repository = dataset_repository
        self.decomposition_service = decomposition_service
        self.simulation_service = simulation_service

    def dataset(
        self,
        config: RunConfig,
    ) -> Tuple[SpatialDataset, Optional[SpatialGraph]]:
        """The configured dataset file, or the scenario's draw at its seed
        when no file is configured."""
        if config.dataset.path is None:
            logger.info(f"no dataset configured, drawing scenario "
                        f"{config.scenario.mechanism.value} at seed "
                        f"{config.scenario.seed}")
            return self.simulation_service.draw(config.scenario).dataset, None

        d = self.dataset_repository.load_csv(
            config.dataset.path, config.dataset.columns
        ).dataset
        graph = None
        if config.dataset.edge_list is not None:
            graph = self.dataset_repository.load_edge_list(
                config.dataset.edge_list, d
            )
        return d, graph

    def truncated_effects(
        self,
        d: SpatialDataset,
        config: RunConfig,
        graph: Optional[SpatialGraph] = None,
    ) -> pd.DataFrame:
        estimation = config.estimation
        tasks = [(name, c) for name in estimation.methods
                 for c in estimation.cutoffs]
        decompositions = {
            name: self.decomposition_service.for_method(
                d, METHODS[name], estimation.dimension, graph,
                config.decomposition.knn_k,
            )
            for name in estimation.methods
        }

        def estimate(task):
            name, c = task
            method = METHODS[name]
            result = truncated_effect(
                method_dataset(d, estimation, method), method.adjust,
                decompositions[name], c,
                method_config(estimation, method),
            )
            return {'method': name, **result.as_row()}

        logger.info(f"estimating {len(tasks)} truncated effects "
                    f"({len(estimation.methods)} methods)")
        with ThreadPoolExecutor(max_workers=config.threads) as executor:
            rows = list(executor.map(estimate, tasks))
        return pd.DataFrame(rows, columns=EFFECT_COLUMNS)

    def linear_fits(
        self,
        d: SpatialDataset,
        config: RunConfig,
        graph: Optional[SpatialGraph] = None,
    ) -> pd.DataFrame:
        estimation = config.estimation
        strategy = IvStrategy(estimation.strategy)
        if d.outcome is None:
            raise InvalidDataset("linear fits need an outcome")
        rows = []
        for name in estimation.methods:
            method = METHODS[name]
            seen = method_dataset(d, estimation, method)
            controls = []
            if method.adjust.uses_coords:
                controls.append(d.coords)
            if method_config(estimation, method).use_covariates and seen.p:
                controls.append(seen.covariates)

            if method.family is None:
                design = np.column_stack([np.ones(d.n), d.exposure] + controls)
                fit = least_squares(design, d.outcome)
                rows.append({
                    'method': name,
                    'strategy': 'ols',
                    'beta': float(fit.coefficients[1]),
                    'intercept': float(fit.coefficients[0]),
                    'instrument_variance_share': np.nan,
                })
                continue

            m = estimation.dimension
            b = self.decomposition_service.family_basis(
                d, method.family,
                m or default_dimension(d.n, method.family), graph,
                config.decomposition.knn_k,
            )
            if controls:
                b = b.with_columns(np.column_stack(controls))
            fit = STRATEGIES[strategy](d.outcome, d.exposure, b)
            rows.append({'method': name, **fit.as_row()})
        return pd.DataFrame(rows, columns=LINEAR_COLUMNS)

    def policy_effects(
        self,
        d: SpatialDataset,
        config: RunConfig,
        graph: Optional[SpatialGraph] = None,
    ) -> pd.DataFrame:
        estimation = config.estimation
        rows = []
        for name in estimation.methods:
            method = METHODS[name]
            dec = self.decomposition_service.for_method(
                d, method, estimation.dimension, graph,
                config.decomposition.knn_k,
            )
            seen = method_dataset(d, estimation, method)
            for spec in estimation.policies:
                policy = Policy(PolicyKind(spec.kind), spec.value)
                result = policy_effect(seen, method.adjust, dec, policy,
                                       method_config(estimation, method))
                rows.append({
                    'method': name,
                    'policy': str(policy),
                    'estimate': result.estimate,
                    'extrapolating_units': result.extrapolating_units,
                })
        return pd.DataFrame(rows, columns=POLICY_COLUMNS)

    def erc(
        self,
        d: SpatialDataset,
        config: RunConfig,
        graph: Optional[SpatialGraph] = None,
    ) -> ErcCurve:
        method = METHODS[config.erc.method]
        dec = self.decomposition_service.for_method(
            d, method, config.estimation.dimension, graph,
            config.decomposition.knn_k,
        )
        return erc_grid(
            method_dataset(d, config.estimation, method), method.adjust,
            dec, config.erc, method_config(config.estimation, method),
        )

    def estimator_suite(self, config: RunConfig, c: float) -> EstimatorSuite:
        """Per-method estimators of the truncated effect at `c` on one
        simulated draw."""
        estimation = config.estimation

        def estimator(name: str):
            method = METHODS[name]
            method_estimation = method_config(estimation, method)

            def estimate(draw: SimDraw) -> PointEstimate:
                dec = self.decomposition_service.for_method(
                    draw.dataset, method, estimation.dimension,
                    k=config.decomposition.knn_k,
                )
                result = truncated_effect(
                    method_dataset(draw.dataset, estimation, method),
                    method.adjust, dec, c, method_estimation,
                )
                return PointEstimate(result.psi, result.ci[0], result.ci[1])

            return estimate

        return {name: estimator(name) for name in estimation.methods}
