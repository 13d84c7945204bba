import numpy as np
import pytest

from spatial_iv.exceptions import DimensionMismatch, DomainError, \
    NotPositiveDefinite
from spatial_iv.model.data.sym_matrix import SymMatrix
from spatial_iv.numerics.numkernel import bessel_k, cholesky_jittered, \
    least_squares, sym_eigen


def test_cholesky_of_positive_definite_needs_no_jitter():
    # Given
    m = SymMatrix(np.array([[4.0, 2.0], [2.0, 3.0]]))

    # When
    factor = cholesky_jittered(m)

    # Then
    assert factor.jitter == 0.0
    assert np.allclose(factor.lower @ factor.lower.T, m.entries)
    assert np.allclose(np.triu(factor.lower, 1), 0.0)


def test_cholesky_climbs_the_jitter_ladder_for_singular_matrix():
    # Given a rank-one matrix
    m = SymMatrix(np.ones((3, 3)))

    # When
    factor = cholesky_jittered(m)

    # Then
    assert factor.jitter == 1e-10


def test_cholesky_gives_up_on_negative_definite():
    # Given
    m = SymMatrix(-np.eye(3))

    # When / Then
    with pytest.raises(NotPositiveDefinite) as error:
        cholesky_jittered(m)

    assert error.value.jitter_ladder == [0.0, 1e-10, 1e-8, 1e-6]


def test_cholesky_rejects_ladder_not_starting_at_zero():
    with pytest.raises(DomainError):
        cholesky_jittered(SymMatrix(np.eye(2)), jitter_ladder=[1e-8, 0.0])


def test_sym_matrix_is_symmetrized_and_read_only():
    # Given
    m = SymMatrix(np.array([[1.0, 2.0], [0.0, 1.0]]))

    # Then
    assert m.entries[0, 1] == 1.0
    assert m.entries[1, 0] == 1.0
    with pytest.raises(ValueError):
        m.entries[0, 0] = 5.0


def test_sym_matrix_must_be_square():
    with pytest.raises(DimensionMismatch):
        SymMatrix(np.ones((2, 3)))


def test_sym_eigen_ascending_with_canonical_signs():
    # Given
    rng = np.random.Generator(np.random.Philox(3))
    raw = rng.standard_normal((6, 6))
    m = SymMatrix(raw + raw.T)

    # When
    eigen = sym_eigen(m)

    # Then
    assert np.all(np.diff(eigen.eigenvalues) >= 0)
    reconstructed = eigen.eigenvectors @ np.diag(eigen.eigenvalues) \
        @ eigen.eigenvectors.T
    assert np.allclose(reconstructed, m.entries)
    for j in range(6):
        column = eigen.eigenvectors[:, j]
        assert column[np.argmax(np.abs(column))] > 0


def test_sym_eigen_of_diagonal():
    eigen = sym_eigen(SymMatrix(np.diag([3.0, 1.0, 2.0])))

    assert eigen.eigenvalues.tolist() == [1.0, 2.0, 3.0]
    assert np.allclose(np.abs(eigen.eigenvectors[:, 0]), [0, 1, 0])


def test_near_zero_count_of_path_laplacian():
    laplacian = SymMatrix(np.array([
        [1.0, -1.0, 0.0],
        [-1.0, 2.0, -1.0],
        [0.0, -1.0, 1.0],
    ]))

    assert sym_eigen(laplacian).near_zero_count() == 1


def test_least_squares_exact_fit():
    # Given
    x = np.linspace(0, 1, 10)
    design = np.column_stack([np.ones(10), x])

    # When
    fit = least_squares(design, 1.0 + 2.0 * x)

    # Then
    assert np.allclose(fit.coefficients, [1.0, 2.0])
    assert np.allclose(fit.residuals, 0.0)
    assert fit.rank == 2


def test_least_squares_reports_rank_deficiency():
    x = np.linspace(0, 1, 10)

    fit = least_squares(np.column_stack([x, x]), x)

    assert fit.rank == 1
    assert np.allclose(fit.fitted, x)


def test_least_squares_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        least_squares(np.ones((5, 2)), np.ones(4))


@pytest.mark.parametrize('nu, expected', [
    (0, 0.42102443824070834),
    (1, 0.6019072301972346),
    (2, 1.6248388986351774),
])
def test_bessel_k_at_one(nu, expected):
    value = bessel_k(nu, 1.0)

    assert isinstance(value, float)
    assert value == pytest.approx(expected, rel=1e-12)


def test_bessel_k_rejects_unsupported_order_and_domain():
    with pytest.raises(DomainError):
        bessel_k(3, 1.0)
    with pytest.raises(DomainError):
        bessel_k(1, np.array([1.0, 0.0]))


def test_bessel_k_satisfies_the_order_recurrence():
    # Given
    x = np.linspace(0.05, 20.0, 200)

    # When
    k0, k1, k2 = (bessel_k(nu, x) for nu in (0, 1, 2))

    # Then
    assert np.allclose(k2, k0 + 2.0 / x * k1, rtol=1e-10, atol=0.0)


@pytest.mark.parametrize('nu', [0, 1, 2])
def test_bessel_k_decreases_in_x(nu):
    values = bessel_k(nu, np.linspace(0.05, 20.0, 200))

    assert np.all(values > 0)
    assert np.all(np.diff(values) < 0)
