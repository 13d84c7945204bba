import numpy as np
import pytest
from scipy import integrate

from spatial_iv.exceptions import DomainError, KTooLarge, SingularDesign
from spatial_iv.model.method import AdjustmentSet
from spatial_iv.model.run_config import EstimationConfig
from spatial_iv.numerics.basis import decompose, tps_basis
from spatial_iv.numerics.dr.nuisances import adjustment_features, \
    fit_nuisance_models, fold_assignment, stack_weights
from tests.fakes import confounded_dataset


def _linear_data(n=120, seed=5):
    rng = np.random.Generator(np.random.Philox(seed))
    w = rng.standard_normal((n, 2))
    a = w @ np.array([0.5, -0.3]) + rng.standard_normal(n)
    return w, a


def test_fold_assignment_is_balanced_and_reproducible():
    # When
    folds = fold_assignment(23, 5, seed=9)

    # Then
    counts = np.bincount(folds)
    assert counts.tolist() == [5, 5, 5, 4, 4]
    assert np.array_equal(folds, fold_assignment(23, 5, seed=9))
    assert not np.array_equal(folds, fold_assignment(23, 5, seed=10))


def test_fold_assignment_bounds():
    with pytest.raises(KTooLarge):
        fold_assignment(4, 5, 0)
    with pytest.raises(DomainError):
        fold_assignment(10, 1, 0)


def test_stack_weights_select_the_exact_learner():
    # Given
    rng = np.random.Generator(np.random.Philox(1))
    target = rng.standard_normal(50)
    predictions = np.column_stack([
        np.zeros(50),
        target,
        target + rng.standard_normal(50),
    ])

    # When
    weights = stack_weights(predictions, target)

    # Then
    assert weights == pytest.approx([0.0, 1.0, 0.0])


def test_stack_weights_lie_on_the_simplex():
    rng = np.random.Generator(np.random.Philox(2))
    target = rng.standard_normal(80)
    predictions = target[:, np.newaxis] \
        + rng.standard_normal((80, 4)) * np.array([0.5, 1.0, 2.0, 0.7])

    weights = stack_weights(predictions, target)

    assert weights.sum() == pytest.approx(1.0)
    assert np.all(weights >= 0)


def test_outcome_regression_recovers_a_quadratic_surface():
    # Given a noise-free outcome quadratic in exposure
    w, a = _linear_data()
    y = 1.0 + 2.0 * a + 0.5 * a ** 2 + w[:, 0]

    # When
    nf = fit_nuisance_models(w, a, y, EstimationConfig())

    # Then
    assert np.allclose(nf.outcome_at(w, a), y, atol=1e-6)
    h0, h1, h2 = nf.outcome_polynomial(w)
    assert np.allclose(h0, 1.0 + w[:, 0], atol=1e-6)
    assert np.allclose(h1, 2.0, atol=1e-6)
    assert np.allclose(h2, 0.5, atol=1e-6)
    assert nf.mean_outcome_over(w, [0.0])[0] == \
        pytest.approx(1.0 + w[:, 0].mean(), abs=1e-6)


def test_learner_weights_sum_to_one():
    d = confounded_dataset(n=100)
    w = d.coords

    nf = fit_nuisance_models(w, d.exposure, d.outcome, EstimationConfig())

    assert nf.learner_weights.sum() == pytest.approx(1.0)
    assert nf.density_weights.sum() == pytest.approx(1.0)
    assert nf.folds.shape == (100,)


def test_density_variance_factor_scales_the_variance():
    # Given
    w, a = _linear_data()
    y = a + w[:, 1]

    # When
    plain = fit_nuisance_models(w, a, y, EstimationConfig())
    wide = fit_nuisance_models(
        w, a, y, EstimationConfig(density_variance_factor=2.0)
    )

    # Then
    assert wide.density_variance == pytest.approx(
        2.0 * plain.density_variance, rel=1e-12
    )


def test_density_integrates_to_one_over_exposure():
    w, a = _linear_data()
    nf = fit_nuisance_models(w, a, a + w[:, 0], EstimationConfig())
    grid = np.linspace(-15, 15, 6001)

    marginal = nf.mean_density_over(w, grid)

    assert integrate.trapezoid(marginal, grid) == \
        pytest.approx(1.0, abs=1e-6)


def test_perfectly_predicted_exposure_is_singular():
    # Given exposure that is a linear function of the adjustment set
    w, _ = _linear_data()
    a = 2.0 * w[:, 0] - w[:, 1]

    # When / Then
    with pytest.raises(SingularDesign):
        fit_nuisance_models(w, a, a, EstimationConfig())


def test_adjustment_features_column_order():
    # Given
    d = confounded_dataset(n=40, covariates=2)
    dec = decompose(d.exposure, tps_basis(d, 5))

    # When
    w = adjustment_features(d, AdjustmentSet.A_C_SPATIAL_COORDS, dec)

    # Then
    assert w.shape == (40, 5)
    assert np.array_equal(w[:, :2], d.covariates)
    assert np.array_equal(w[:, 2:4], d.coords)
    assert np.array_equal(w[:, 4], dec.a_c)


def test_adjustment_features_without_covariates():
    d = confounded_dataset(n=40, covariates=2)

    w = adjustment_features(d, AdjustmentSet.NONE, use_covariates=False)

    assert w.shape == (40, 0)


def test_a_c_adjustment_needs_a_decomposition():
    with pytest.raises(DomainError):
        adjustment_features(confounded_dataset(n=20), AdjustmentSet.A_C)
