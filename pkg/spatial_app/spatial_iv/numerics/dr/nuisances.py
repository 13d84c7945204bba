"""Outcome regression and conditional exposure density, each a convex stack
of linear-in-parameters learners fitted on out-of-fold predictions."""
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Tuple

import numpy as np
from loguru import logger
from scipy import stats

from spatial_iv.exceptions import DomainError, InvalidDataset, KTooLarge, \
    SingularDesign
from spatial_iv.model.data.spatial_basis import ExposureDecomposition
from spatial_iv.model.data.spatial_dataset import SpatialDataset
from spatial_iv.model.method import AdjustmentSet
from spatial_iv.model.run_config import EstimationConfig
from spatial_iv.numerics.numkernel import least_squares

STACKING_TIE_TOLERANCE = 1e-12
DENSITY_CHUNK = 512
DEGENERATE_VARIANCE_SHARE = 1e-12


def adjustment_features(
    d: SpatialDataset,
    adjust: AdjustmentSet,
    dec: Optional[ExposureDecomposition] = None,
    use_covariates: bool = True,
) -> np.ndarray:
    columns = []
    if use_covariates and d.p:
        columns.append(d.covariates)
    if adjust.uses_coords:
        columns.append(d.coords)
    if adjust.uses_a_c:
        if dec is None:
            raise DomainError(f"adjustment '{adjust.value}' needs an "
                              f"exposure decomposition")
        if dec.n != d.n:
            raise DomainError(f"decomposition has {dec.n} units, dataset "
                              f"has {d.n}")
        columns.append(dec.a_c[:, np.newaxis])

    if not columns:
        return np.empty((d.n, 0))
    return np.hstack(columns)


def _pairwise(columns: np.ndarray) -> np.ndarray:
    q = columns.shape[1]
    products = [columns[:, i] * columns[:, j]
                for i in range(q) for j in range(i + 1, q)]
    if not products:
        return np.empty((columns.shape[0], 0))
    return np.column_stack(products)


def outcome_design(name: str, w: np.ndarray, a: np.ndarray) -> np.ndarray:
    ones = np.ones((a.shape[0], 1))
    a = a[:, np.newaxis]
    if name == 'mean':
        return ones
    if name == 'linear':
        return np.hstack([ones, w, a])
    if name == 'interactions':
        z = np.hstack([w, a])
        return np.hstack([ones, z, _pairwise(z)])
    if name == 'quadratic':
        return np.hstack([ones, w, a, a ** 2])
    raise DomainError(f"unknown learner '{name}'")


def density_design(name: str, w: np.ndarray) -> np.ndarray:
    ones = np.ones((w.shape[0], 1))
    if name == 'mean':
        return ones
    if name == 'linear':
        return np.hstack([ones, w])
    if name == 'interactions':
        return np.hstack([ones, w, _pairwise(w)])
    if name == 'quadratic':
        return np.hstack([ones, w, w ** 2])
    raise DomainError(f"unknown learner '{name}'")


def fold_assignment(n: int, k: int, seed: int) -> np.ndarray:
    if k > n:
        raise KTooLarge(k, n)
    if k < 2:
        raise DomainError(f"cross-fitting needs at least 2 folds, got {k}")
    permutation = np.random.Generator(np.random.Philox(seed)).permutation(n)
    folds = np.empty(n, dtype=int)
    folds[permutation] = np.arange(n) % k
    return folds


def out_of_fold(design: np.ndarray, target: np.ndarray, folds: np.ndarray):
    predictions = np.empty(target.shape[0])
    for fold in np.unique(folds):
        held_out = folds == fold
        fit = least_squares(design[~held_out], target[~held_out])
        predictions[held_out] = design[held_out] @ fit.coefficients
    return predictions


def _sum_to_one_fit(predictions: np.ndarray, target: np.ndarray):
    s = predictions.shape[1]
    if s == 1:
        return np.ones(1)
    last = predictions[:, -1]
    fit = least_squares(predictions[:, :-1] - last[:, np.newaxis],
                        target - last)
    return np.append(fit.coefficients, 1.0 - fit.coefficients.sum())


def stack_weights(predictions: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Least-squares weights on the simplex.

    Every learner subset is solved under the sum-to-one constraint; the
    feasible solution with the smallest loss wins. Near-ties go to the
    smaller subset, then to learner order.
    """
    n, count = predictions.shape
    # fp-noise floor keeps exact fits of a constant target tied
    scale = max(float(np.sum((target - target.mean()) ** 2)),
                1e-12 * (float(target @ target) + n))

    best_weights, best_loss = None, np.inf
    for size in range(1, count + 1):
        for subset in combinations(range(count), size):
            subset = list(subset)
            weights = _sum_to_one_fit(predictions[:, subset], target)
            if np.any(weights < -1e-10):
                continue
            weights = np.clip(weights, 0.0, None)
            weights = weights / weights.sum()
            residual = target - predictions[:, subset] @ weights
            loss = float(residual @ residual)
            if loss < best_loss - STACKING_TIE_TOLERANCE * scale:
                best_loss = loss
                best_weights = np.zeros(count)
                best_weights[subset] = weights
    return best_weights


@dataclass(frozen=True)
class FeatureScaling:
    center: np.ndarray
    scale: np.ndarray
    a_center: float
    a_scale: float

    @staticmethod
    def fit(w: np.ndarray, a: np.ndarray) -> 'FeatureScaling':
        scale = w.std(axis=0) if w.shape[1] else np.ones(0)
        a_scale = float(a.std())
        return FeatureScaling(
            center=w.mean(axis=0) if w.shape[1] else np.zeros(0),
            scale=np.where(scale > 0, scale, 1.0),
            a_center=float(a.mean()),
            a_scale=a_scale if a_scale > 0 else 1.0,
        )

    def features(self, w: np.ndarray) -> np.ndarray:
        return (w - self.center) / self.scale

    def exposure(self, a: np.ndarray) -> np.ndarray:
        return (a - self.a_center) / self.a_scale


@dataclass(frozen=True)
class NuisanceFit:
    scaling: FeatureScaling
    outcome_learners: Tuple[str, ...]
    outcome_coefficients: Tuple[np.ndarray, ...]
    learner_weights: np.ndarray
    density_learners: Tuple[str, ...]
    density_coefficients: Tuple[np.ndarray, ...]
    density_weights: np.ndarray
    density_variance: float
    folds: np.ndarray

    def outcome_at(self, w: np.ndarray, a: np.ndarray) -> np.ndarray:
        ws = self.scaling.features(w)
        a_s = self.scaling.exposure(np.asarray(a, dtype=float))
        prediction = np.zeros(a_s.shape[0])
        for name, coefficients, weight in zip(
            self.outcome_learners, self.outcome_coefficients,
            self.learner_weights,
        ):
            if weight > 0:
                prediction += weight * (
                    outcome_design(name, ws, a_s) @ coefficients
                )
        return prediction

    def outcome_polynomial(self, w: np.ndarray):
        """Per-unit coefficients (h0, h1, h2) with
        mu(w, a) = h0 + h1 a + h2 a^2; every learner is at most quadratic
        in exposure."""
        n = w.shape[0]
        at_zero = self.outcome_at(w, np.zeros(n))
        at_one = self.outcome_at(w, np.ones(n))
        at_minus_one = self.outcome_at(w, -np.ones(n))
        return (
            at_zero,
            (at_one - at_minus_one) / 2.0,
            (at_one + at_minus_one) / 2.0 - at_zero,
        )

    def mean_outcome_over(self, w: np.ndarray, a_values) -> np.ndarray:
        """For each a, the average over rows of w of mu(w_j, a)."""
        h0, h1, h2 = self.outcome_polynomial(w)
        a_values = np.asarray(a_values, dtype=float)
        return h0.mean() + h1.mean() * a_values + h2.mean() * a_values ** 2

    def density_mean(self, w: np.ndarray) -> np.ndarray:
        ws = self.scaling.features(w)
        mean = np.zeros(w.shape[0])
        for name, coefficients, weight in zip(
            self.density_learners, self.density_coefficients,
            self.density_weights,
        ):
            if weight > 0:
                mean += weight * (density_design(name, ws) @ coefficients)
        return mean

    def density(self, a: np.ndarray, w: np.ndarray) -> np.ndarray:
        return stats.norm.pdf(
            a, loc=self.density_mean(w), scale=np.sqrt(self.density_variance)
        )

    def mean_density_over(self, w: np.ndarray, a_values) -> np.ndarray:
        """For each a, the average over rows of w of pi(a | w_j)."""
        means = self.density_mean(w)
        sd = np.sqrt(self.density_variance)
        a_values = np.asarray(a_values, dtype=float)
        result = np.empty(a_values.shape[0])
        for start in range(0, a_values.shape[0], DENSITY_CHUNK):
            chunk = a_values[start:start + DENSITY_CHUNK]
            result[start:start + DENSITY_CHUNK] = stats.norm.pdf(
                chunk[:, np.newaxis], loc=means[np.newaxis, :], scale=sd
            ).mean(axis=1)
        return result


def _fit_stack(designs, target, folds):
    predictions = np.column_stack(
        [out_of_fold(design, target, folds) for design in designs]
    )
    weights = stack_weights(predictions, target)
    coefficients = tuple(
        least_squares(design, target).coefficients for design in designs
    )
    return coefficients, weights


def fit_nuisance_models(
    w: np.ndarray,
    a: np.ndarray,
    y: np.ndarray,
    config: EstimationConfig,
) -> NuisanceFit:
    n = a.shape[0]
    folds = fold_assignment(n, config.folds, config.fold_seed)
    scaling = FeatureScaling.fit(w, a)
    ws = scaling.features(w)
    a_s = scaling.exposure(a)

    outcome_names = tuple(config.outcome_learners)
    outcome_coefficients, outcome_weights = _fit_stack(
        [outcome_design(name, ws, a_s) for name in outcome_names], y, folds
    )

    density_names = tuple(config.density_learners)
    density_designs = [density_design(name, ws) for name in density_names]
    density_coefficients, density_weights = _fit_stack(
        density_designs, a, folds
    )
    fitted_mean = sum(
        weight * (design @ coefficients)
        for design, coefficients, weight in zip(
            density_designs, density_coefficients, density_weights
        )
    )
    variance = float(np.mean((a - fitted_mean) ** 2))
    if not np.isfinite(variance) \
            or variance <= DEGENERATE_VARIANCE_SHARE * float(np.var(a)):
        raise SingularDesign(
            "exposure is perfectly predicted by the adjustment set; the "
            "conditional density is degenerate"
        )
    variance *= config.density_variance_factor

    logger.debug(
        f"nuisances n={n} q={w.shape[1]} "
        f"outcome_weights={np.round(outcome_weights, 4).tolist()} "
        f"density_weights={np.round(density_weights, 4).tolist()} "
        f"sigma2={variance:.4g}"
    )
    return NuisanceFit(
        scaling=scaling,
        outcome_learners=outcome_names,
        outcome_coefficients=outcome_coefficients,
        learner_weights=outcome_weights,
        density_learners=density_names,
        density_coefficients=density_coefficients,
        density_weights=density_weights,
        density_variance=variance,
        folds=folds,
    )


def fit_nuisances(
    d: SpatialDataset,
    adjust: AdjustmentSet,
    dec: Optional[ExposureDecomposition] = None,
    folds: Optional[int] = None,
    config: Optional[EstimationConfig] = None,
) -> NuisanceFit:
    if d.outcome is None:
        raise InvalidDataset("nuisance fitting needs an outcome")
    config = config or EstimationConfig()
    if folds is not None:
        config = config.model_copy(update={'folds': folds})

    w = adjustment_features(d, adjust, dec, config.use_covariates)
    return fit_nuisance_models(w, d.exposure, d.outcome, config)
