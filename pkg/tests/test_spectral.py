import numpy as np
import pytest

from hyperharmonic import (
    CapacityError,
    StructuralSimplex,
    ValidationError,
    WeightedInnerProduct,
    adjoint_matrix,
    boundary_matrix,
    fourier_basis,
    kernel_dimension,
    laplacian,
    simplex_count,
    weighted_inner_product,
)
from hyperharmonic.spectral import self_adjointness_residual


def random_structural_simplex(N, rng, low=0.05, high=20.0):
    weights = tuple(
        rng.uniform(low, high, size=simplex_count(N, n)) for n in range(N + 1)
    )
    return StructuralSimplex(N=N, weights=weights)


def unit_simplex(N):
    return StructuralSimplex(
        N=N, weights=tuple(np.ones(simplex_count(N, n)) for n in range(N + 1))
    )


class TestAdjoint:
    def test_unit_weights_reduce_to_transpose(self):
        S = unit_simplex(3)
        for n in range(3):
            expected = boundary_matrix(3, n + 1).toarray().T
            assert np.allclose(adjoint_matrix(S, n), expected)

    def test_adjointness_identity_on_random_vectors(self):
        rng = np.random.default_rng(17)
        S = random_structural_simplex(4, rng)
        for n in range(4):
            P = boundary_matrix(4, n + 1).toarray()
            delta = adjoint_matrix(S, n)
            w_n = S.weight_vector(n)
            w_up = S.weight_vector(n + 1)
            for _ in range(100):
                a = rng.standard_normal(P.shape[1])
                b = rng.standard_normal(P.shape[0])
                lhs = np.dot((P @ a) * w_n, b)
                rhs = np.dot(a * w_up, delta @ b)
                assert abs(lhs - rhs) < 1e-12 * max(1.0, abs(lhs))

    def test_top_dimension_rejected(self):
        S = unit_simplex(3)
        with pytest.raises(ValidationError):
            adjoint_matrix(S, 3)


class TestLaplacian:
    def test_vertex_laplacian_of_complete_graph(self):
        N = 4
        L = laplacian(unit_simplex(N), 0)
        expected = N * np.eye(N + 1) - (np.ones((N + 1, N + 1)) - np.eye(N + 1))
        assert np.allclose(L.matrix, expected)
        assert np.max(np.abs(L.down)) == 0.0

    def test_top_dimension_has_no_up_component(self):
        rng = np.random.default_rng(3)
        S = random_structural_simplex(3, rng)
        L = laplacian(S, 3)
        assert np.max(np.abs(L.up)) == 0.0
        assert np.max(np.abs(L.down)) > 0.0

    def test_unit_weight_reduction_is_exact(self):
        S = unit_simplex(4)
        for n in range(5):
            L = laplacian(S, n)
            expected = np.zeros_like(L.matrix)
            if n < 4:
                P = boundary_matrix(4, n + 1).toarray()
                expected += P @ P.T
            if n > 0:
                P = boundary_matrix(4, n).toarray()
                expected += P.T @ P
            assert np.array_equal(L.matrix, expected)

    def test_self_adjointness_for_random_weights(self):
        rng = np.random.default_rng(5)
        for N in range(1, 6):
            S = random_structural_simplex(N, rng)
            for n in range(N + 1):
                L = laplacian(S, n)
                inner = weighted_inner_product(S, n)
                assert self_adjointness_residual(L, inner) <= 1e-10

    def test_alternate_formula_is_also_self_adjoint(self):
        rng = np.random.default_rng(6)
        S = random_structural_simplex(4, rng)
        for n in range(5):
            L = laplacian(S, n, formula="alternate")
            inner = weighted_inner_product(S, n)
            assert self_adjointness_residual(L, inner) <= 1e-10

    def test_formulas_differ_in_general(self):
        rng = np.random.default_rng(7)
        S = random_structural_simplex(3, rng)
        default = laplacian(S, 1).matrix
        alternate = laplacian(S, 1, formula="alternate").matrix
        assert not np.allclose(default, alternate)

    def test_kernel_dimensions_are_betti_numbers(self):
        rng = np.random.default_rng(11)
        for N in range(1, 7):
            S = random_structural_simplex(N, rng)
            for n in range(N + 1):
                basis = fourier_basis(laplacian(S, n), weighted_inner_product(S, n))
                expected = 1 if n == 0 else 0
                assert kernel_dimension(basis.eigenvalues) == expected, (N, n)

    def test_capacity_error_on_huge_dimension(self):
        mi = np.ones((17, 17)) - np.eye(17)
        from hyperharmonic import structural_weights

        S = structural_weights(mi)
        with pytest.raises(CapacityError):
            laplacian(S, 8)


class TestFourierBasis:
    def test_single_edge_graph(self):
        S = unit_simplex(1)
        basis = fourier_basis(laplacian(S, 0), weighted_inner_product(S, 0))
        assert np.allclose(basis.eigenvalues, [0.0, 2.0])
        kernel = basis.inverse[:, 0]
        assert np.allclose(kernel / kernel[0], [1.0, 1.0])

    def test_residuals_under_random_weights(self):
        rng = np.random.default_rng(13)
        N = 5
        S = random_structural_simplex(N, rng)
        for n in range(N + 1):
            L = laplacian(S, n)
            basis = fourier_basis(L, weighted_inner_product(S, n))
            assert basis.diagnostics.diagonalization < 1e-8
            assert basis.diagnostics.orthonormality < 1e-8
            assert basis.diagnostics.inversion < 1e-10
            assert np.all(basis.eigenvalues >= 0.0)
            assert np.all(np.diff(basis.eigenvalues) >= 0.0)

    def test_eigenvalues_match_numpy_on_whitened_matrix(self):
        rng = np.random.default_rng(19)
        S = random_structural_simplex(4, rng)
        L = laplacian(S, 2)
        w = S.weight_vector(2)
        sym = np.diag(np.sqrt(w)) @ L.matrix @ np.diag(1 / np.sqrt(w))
        reference = np.linalg.eigvalsh((sym + sym.T) / 2)
        basis = fourier_basis(L, weighted_inner_product(S, 2))
        assert np.allclose(basis.eigenvalues, np.clip(reference, 0, None), atol=1e-12)

    def test_sign_convention_and_determinism(self):
        rng = np.random.default_rng(23)
        S = random_structural_simplex(4, rng)
        L = laplacian(S, 1)
        inner = weighted_inner_product(S, 1)
        first = fourier_basis(L, inner)
        second = fourier_basis(L, inner)
        assert np.array_equal(first.forward, second.forward)
        assert np.array_equal(first.inverse, second.inverse)
        for j in range(first.inverse.shape[1]):
            col = first.inverse[:, j]
            lead = col[np.abs(col) > 1e-12 * np.max(np.abs(col))][0]
            assert lead > 0

    def test_dimension_mismatch_rejected(self):
        S = unit_simplex(2)
        L = laplacian(S, 1)
        with pytest.raises(ValidationError):
            fourier_basis(L, weighted_inner_product(S, 2))

    def test_inner_product_validation(self):
        with pytest.raises(ValidationError):
            WeightedInnerProduct(dimension=1, weights=np.array([1.0, 0.0]))

    def test_kernel_dimension_of_zero_matrix(self):
        assert kernel_dimension(np.zeros(4)) == 4
        assert kernel_dimension(np.array([0.0, 1e-12, 1.0])) == 2
