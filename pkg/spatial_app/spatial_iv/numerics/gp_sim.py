"""Matérn Gaussian-process simulation of (a_uc, a_c, u) and outcomes.

Every draw is a pure function of (scenario, seed): the generator is a
counter-based Philox stream keyed by the seed, so replicates can run on any
number of threads without changing results.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import Callable, Optional

import numpy as np
import pandas as pd
from loguru import logger
from scipy import integrate, stats
from scipy.spatial.distance import pdist, squareform
from scipy.stats import qmc

from spatial_iv.exceptions import ConfigError, DomainError, \
    NoRegionLabels, ZeroDenominator
from spatial_iv.model.data.replication import EstimatorSuite, \
    ReplicationResult, SUMMARY_COLUMNS, TABLE_COLUMNS
from spatial_iv.model.data.sim_draw import SimDraw, SpatialLayout, \
    TruthValue
from spatial_iv.model.data.spatial_dataset import SpatialDataset
from spatial_iv.model.data.sym_matrix import SymMatrix
from spatial_iv.model.sim_scenario import Layout, Mechanism, \
    OutcomeModel, SimScenario
from spatial_iv.numerics.matern import matern_corr
from spatial_iv.numerics.numkernel import cholesky_jittered

LAYOUT_EXTENT = (1.2, 0.9)
MIN_TRUTH_REPS = 1000
NONLINEAR_SQUARE = 0.1


def region_names(count: int):
    return [f"R{i + 1}" for i in range(count)]


def voronoi_regions(coords: np.ndarray, count: int, seed: int) -> np.ndarray:
    """Label each point by its nearest of `count` seeded centres."""
    rng = np.random.Generator(np.random.Philox(seed))
    centres = rng.uniform(size=(count, 2)) * np.array(LAYOUT_EXTENT)
    nearest = np.argmin(
        np.linalg.norm(coords[:, np.newaxis, :] - centres, axis=2), axis=1
    )
    return np.array(region_names(count), dtype=object)[nearest]


def synthetic_layout(
    n: int,
    layout_seed: int = 0,
    region_count: int = 5,
) -> SpatialLayout:
    """Scrambled Halton points on the [0, 1.2] x [0, 0.9] box."""
    sampler = qmc.Halton(d=2, scramble=True, seed=layout_seed)
    coords = sampler.random(n) * np.array(LAYOUT_EXTENT)
    region = voronoi_regions(coords, region_count, layout_seed)
    return SpatialLayout(coords=coords, region=region)


def scenario_layout(scenario: SimScenario) -> SpatialLayout:
    if scenario.layout == Layout.FILE:
        raise ConfigError(
            "scenario reads coordinates from a file; load the layout first"
        )
    return synthetic_layout(
        scenario.n, scenario.layout_seed, scenario.region_count
    )


def _same_region_mask(region: Optional[np.ndarray], n: int) -> np.ndarray:
    if region is None:
        raise NoRegionLabels("mechanism M3 needs region labels")
    region = np.asarray(region)
    if len(set(region)) < 2:
        raise NoRegionLabels("mechanism M3 needs at least two regions")
    return (region[:, np.newaxis] == region[np.newaxis, :]).astype(float)


def joint_covariance(
    coords: np.ndarray,
    scenario: SimScenario,
    region: Optional[np.ndarray] = None,
) -> SymMatrix:
    """Covariance of (a_uc, a_c, u) stacked component by component."""
    coords = np.asarray(coords, dtype=float).reshape(-1, 2)
    n = coords.shape[0]
    distances = squareform(pdist(coords))

    r_uc = matern_corr(
        distances, scenario.theta_uc, scenario.matern_scaled_argument
    )
    r_c = matern_corr(
        distances, scenario.theta_c, scenario.matern_scaled_argument
    )
    if scenario.mechanism == Mechanism.M3:
        mask = _same_region_mask(region, n)
        r_uc = r_uc * mask
        r_c = r_c * mask

    zero = np.zeros((n, n))
    cross = scenario.cross_corr * r_c
    return SymMatrix(np.block([
        [r_uc, zero, zero],
        [zero, r_c, cross],
        [zero, cross, r_c],
    ]))


def outcome_mean(a, u, scenario: SimScenario) -> np.ndarray:
    mu = -0.5 + a - u + scenario.interaction * a * u
    if scenario.outcome_model == OutcomeModel.NONLINEAR:
        mu = mu - NONLINEAR_SQUARE * a ** 2 + NONLINEAR_SQUARE * a ** 2 * u
    return mu


def _generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed % 2 ** 64))


class ScenarioSampler:
    """Draws datasets for one scenario on one layout.

    The joint Cholesky factor is computed once and shared by every draw.
    """

    def __init__(
        self,
        scenario: SimScenario,
        layout: Optional[SpatialLayout] = None,
    ):
        self.scenario = scenario
        self.layout = layout or scenario_layout(scenario)
        self.n = self.layout.n

        covariance = joint_covariance(
            self.layout.coords, scenario, self.layout.region
        )
        self.factor = cholesky_jittered(covariance, scenario.jitter_ladder)
        self.mean = np.repeat(np.array(scenario.means, dtype=float), self.n)
        logger.debug(
            f"sampler ready: mechanism={scenario.mechanism.value} "
            f"n={self.n} jitter={self.factor.jitter:g}"
        )

    def latent(self, rng: np.random.Generator):
        z = rng.standard_normal(3 * self.n)
        field = self.mean + self.factor.lower @ z
        n = self.n
        return field[:n], field[n:2 * n], field[2 * n:]

    def draw(self, seed: int) -> SimDraw:
        rng = _generator(seed)
        a_uc, a_c, u = self.latent(rng)
        a = a_uc + a_c
        noise = rng.standard_normal(self.n) * self.scenario.noise_sd
        y = outcome_mean(a, u, self.scenario) + noise

        dataset = SpatialDataset(
            coords=self.layout.coords,
            exposure=a,
            outcome=y,
            region=self.layout.region,
            metadata={**self.scenario.metadata(), 'seed': str(seed),
                      'jitter': f"{self.factor.jitter:g}"},
        )
        return SimDraw(
            dataset=dataset,
            a_uc=a_uc,
            a_c=a_c,
            u=u,
            jitter=self.factor.jitter,
            seed=seed,
        )


def sample_draw(
    scenario: SimScenario,
    layout: Optional[SpatialLayout] = None,
    truth_cutoff: Optional[float] = None,
    truth_reps: int = MIN_TRUTH_REPS,
) -> SimDraw:
    """One draw at the scenario seed, carrying the Monte Carlo truth at
    `truth_cutoff` when one is given."""
    sampler = ScenarioSampler(scenario, layout)
    draw = sampler.draw(scenario.seed)
    if truth_cutoff is None:
        return draw
    truth = true_truncated_effect(scenario, truth_cutoff, truth_reps,
                                  sampler=sampler)
    return replace(draw, true_truncated_effect=truth)


def true_truncated_effect(
    scenario: SimScenario,
    c: float,
    reps: int,
    layout: Optional[SpatialLayout] = None,
    sampler: Optional[ScenarioSampler] = None,
) -> TruthValue:
    """Monte Carlo E(Y(min(A, c))) / E(Y) with U held at its drawn value.

    Outcomes are replaced by their conditional means given (A, U), which
    leaves the estimand unchanged and removes the outcome-noise variance.
    """
    if reps < MIN_TRUTH_REPS:
        raise DomainError(
            f"truth needs at least {MIN_TRUTH_REPS} replicates, got {reps}"
        )
    if np.isposinf(c):
        return TruthValue(value=1.0, mc_se=0.0)

    sampler = sampler or ScenarioSampler(scenario, layout)
    truncated = np.empty(reps)
    observed = np.empty(reps)
    for r in range(reps):
        a_uc, a_c, u = sampler.latent(_generator(scenario.seed + r))
        a = a_uc + a_c
        truncated[r] = np.mean(outcome_mean(np.minimum(a, c), u, scenario))
        observed[r] = np.mean(outcome_mean(a, u, scenario))

    denominator = observed.mean()
    if denominator == 0:
        raise ZeroDenominator("E(Y) is zero for this scenario")

    ratio = float(truncated.mean() / denominator)
    linearized = (truncated - ratio * observed) / denominator
    se = float(np.std(linearized, ddof=1) / np.sqrt(reps))
    logger.info(f"monte carlo truth c={c}: {ratio:.6f} (se {se:.2g}, "
                f"reps={reps})")
    return TruthValue(value=ratio, mc_se=se)


def analytic_truncated_effect(scenario: SimScenario, c: float) -> float:
    """E(Y(min(A, c))) / E(Y) by one-dimensional integration.

    Each unit's (A, U) is bivariate normal with the same moments under every
    mechanism, and the outcome mean is affine in U given A.
    """
    if np.isposinf(c):
        return 1.0

    mu_uc, mu_c, mu_u = scenario.means
    mean_a = mu_uc + mu_c
    var_a = 2.0
    slope = scenario.cross_corr / var_a
    density = stats.norm(loc=mean_a, scale=np.sqrt(var_a)).pdf

    def expected_outcome(level: Callable[[float], float]) -> float:
        def integrand(a):
            return float(outcome_mean(
                level(a), mu_u + slope * (a - mean_a), scenario
            )) * density(a)

        lower, _ = integrate.quad(integrand, -np.inf, c, limit=200)
        upper, _ = integrate.quad(integrand, c, np.inf, limit=200)
        return lower + upper

    # outcome_mean is affine in u, so plugging in E(U | A) is exact
    truncated = expected_outcome(lambda a: min(a, c))
    observed = expected_outcome(lambda a: a)
    if observed == 0:
        raise ZeroDenominator("E(Y) is zero for this scenario")
    return truncated / observed


def _replicate_rows(
    sampler: ScenarioSampler,
    suite: EstimatorSuite,
    base_seed: int,
    index: int,
):
    seed = (base_seed + index) % 2 ** 64
    try:
        draw = sampler.draw(seed)
    except Exception as e:
        logger.error(f"replicate {index} failed to draw: {e}")
        return [_failed_row(index, seed, method, e) for method in suite]

    rows = []
    for method, estimator in suite.items():
        try:
            estimate = estimator(draw)
        except Exception as e:
            logger.error(f"replicate {index} method {method} failed: {e}")
            rows.append(_failed_row(index, seed, method, e))
            continue
        rows.append({
            'replicate': index,
            'seed': seed,
            'method': method,
            'estimate': estimate.estimate,
            'ci_lo': estimate.ci_lo,
            'ci_hi': estimate.ci_hi,
            'failed': False,
            'error': '',
        })
    return rows


def _failed_row(index: int, seed: int, method: str, error: Exception):
    return {
        'replicate': index,
        'seed': seed,
        'method': method,
        'estimate': np.nan,
        'ci_lo': np.nan,
        'ci_hi': np.nan,
        'failed': True,
        'error': f"{type(error).__name__}: {error}",
    }


def summarize(table: pd.DataFrame, truth: float, methods) -> pd.DataFrame:
    rows = []
    for method in methods:
        method_rows = table[table['method'] == method]
        ok = method_rows[~method_rows['failed']]
        errors = ok['estimate'].to_numpy(dtype=float) - truth
        if len(errors):
            bias = float(errors.mean())
            rmse = max(float(np.sqrt(np.mean(errors ** 2))), abs(bias))
        else:
            bias = rmse = np.nan
        rows.append({
            'method': method,
            'bias': bias,
            'rmse': rmse,
            'n_ok': len(ok),
            'n_failed': int(method_rows['failed'].sum()),
        })
    return pd.DataFrame(rows, columns=SUMMARY_COLUMNS)


def run_replications(
    scenario: SimScenario,
    m: int,
    estimator_suite: EstimatorSuite,
    truth: float,
    threads: int = 1,
    layout: Optional[SpatialLayout] = None,
    sampler: Optional[ScenarioSampler] = None,
) -> ReplicationResult:
    if m < 1:
        raise DomainError(f"need at least one replicate, got {m}")

    sampler = sampler or ScenarioSampler(scenario, layout)
    logger.info(f"running {m} replicates x {len(estimator_suite)} methods "
                f"on {max(1, threads)} threads")

    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        per_replicate = list(executor.map(
            lambda index: _replicate_rows(
                sampler, estimator_suite, scenario.seed, index
            ),
            range(m),
        ))

    table = pd.DataFrame(
        [row for rows in per_replicate for row in rows],
        columns=TABLE_COLUMNS,
    )
    failed = int(table['failed'].sum())
    if failed:
        logger.warning(f"{failed} replicate rows failed and are flagged")

    return ReplicationResult(
        table=table,
        summary=summarize(table, truth, list(estimator_suite)),
        truth=truth,
    )
