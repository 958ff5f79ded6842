import numpy as np
import pytest

from anosym import numerics
from anosym.errors import ContractError, DimensionError
from anosym.numerics import (Tolerance, hermitian_eigen, jacobi_svd, linear_fit,
                             null_space, orthonormalize, principal_angles,
                             rank_with_tol, singular_values, subspace_distance,
                             subspace_intersection)


def charpoly_eigenvalues(H):
    """Independent oracle: eigenvalues via Faddeev-LeVerrier coefficients and
    polynomial root finding (no SVD/eigensolver on H itself)."""
    m = H.shape[0]
    coeffs = [1.0]
    Mk = np.zeros_like(H)
    for k in range(1, m + 1):
        Mk = H @ Mk + coeffs[-1] * np.eye(m)
        coeffs.append(float(-np.trace(H @ Mk).real / k))
    roots = np.roots(coeffs)
    return np.sort(roots.real)[::-1]


class TestSVD:
    def test_identity(self):
        _, s, _ = jacobi_svd(np.eye(3))
        assert np.allclose(s, [1, 1, 1])

    def test_diagonal(self):
        _, s, _ = jacobi_svd(np.diag([3.0, 1 / 3.0]))
        assert np.allclose(s, [3.0, 1 / 3.0])

    def test_matches_gram_charpoly_oracle(self, rng):
        M = rng.normal(size=(4, 4))
        _, s, _ = jacobi_svd(M)
        gram_eigs = charpoly_eigenvalues(M.T @ M)
        assert np.abs(np.sqrt(np.maximum(gram_eigs, 0)) - s).max() < 1e-8

    @pytest.mark.parametrize("field", ["R", "C"])
    def test_reconstruction_many_sizes(self, rng, field):
        for _ in range(500):
            m = int(rng.integers(1, 17))
            k = int(rng.integers(1, m + 1))
            M = rng.normal(size=(m, k))
            if field == "C":
                M = M + 1j * rng.normal(size=(m, k))
            U, s, Vh = jacobi_svd(M)
            rec = U @ np.diag(s) @ Vh
            assert np.abs(rec - M).max() <= 1e-10 * (1 + np.abs(M).max())
            assert np.abs(U.conj().T @ U - np.eye(k)).max() < 1e-12
            assert np.abs(Vh @ Vh.conj().T - np.eye(k)).max() < 1e-12
            assert np.all(np.diff(s) <= 1e-15)

    def test_permutation_invariance(self, rng):
        M = rng.normal(size=(5, 5))
        s = singular_values(M)
        perm = rng.permutation(5)
        s2 = singular_values(M[perm][:, rng.permutation(5)])
        assert np.abs(s - s2).max() < 1e-12

    def test_zero_matrix(self):
        U, s, Vh = jacobi_svd(np.zeros((3, 3)))
        assert np.all(s == 0)
        assert np.abs(U.conj().T @ U - np.eye(3)).max() < 1e-12

    def test_batched_agrees_with_single(self, rng):
        A = rng.normal(size=(50, 4, 4))
        _, s_b, _ = jacobi_svd(A)
        for j in range(50):
            _, s1, _ = jacobi_svd(A[j])
            assert np.abs(s_b[j] - s1).max() < 1e-13

    def test_fast_2x2_matches(self, rng):
        A = rng.normal(size=(200, 2, 2))
        fast = numerics.singular_values_fast(A)
        slow = singular_values(A)
        assert np.abs(fast - slow).max() < 1e-11

    def test_small_singular_value_relative_accuracy(self):
        # singular values spread over ~10 orders; smallest still accurate
        D = np.diag([1.0, 1e-5, 1e-10])
        rng = np.random.default_rng(5)
        Q1, _ = np.linalg.qr(rng.normal(size=(3, 3)))
        Q2, _ = np.linalg.qr(rng.normal(size=(3, 3)))
        _, s, _ = jacobi_svd(Q1 @ D @ Q2)
        assert abs(s[2] - 1e-10) / 1e-10 < 1e-6


class TestHermitianEigen:
    def test_diagonal(self):
        w, _ = hermitian_eigen(np.diag([2.0, -1.0]))
        assert np.allclose(w, [2.0, -1.0])

    def test_zero(self):
        w, _ = hermitian_eigen(np.zeros((4, 4)))
        assert np.all(w == 0)

    def test_trace_identity_oracle(self, rng):
        H = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        H = (H + H.conj().T) / 2
        w, v = hermitian_eigen(H)
        assert abs(w.sum() - np.trace(H).real) < 1e-9
        for j in range(4):
            assert np.linalg.norm(H @ v[:, j] - w[j] * v[:, j]) <= 1e-9 * (1 + np.abs(H).max())

    def test_signature_recovery(self):
        w, _ = hermitian_eigen(np.diag([1.0, 1.0, -1.0]))
        assert (np.sum(w > 0), np.sum(w < 0)) == (2, 1)

    def test_non_hermitian_rejected(self, rng):
        H = rng.normal(size=(3, 3))
        H[0, 1] += 1.0
        with pytest.raises(ContractError):
            hermitian_eigen(H - H.T + np.eye(3) + np.triu(np.ones((3, 3)), 1))

    def test_non_square_rejected(self):
        with pytest.raises(DimensionError):
            hermitian_eigen(np.zeros((2, 3)))


class TestRank:
    def test_zero(self):
        assert rank_with_tol(np.zeros((4, 4))) == 0

    def test_identity(self):
        assert rank_with_tol(np.eye(4)) == 4

    def test_outer_product_rank_one(self, rng):
        u = rng.normal(size=4)
        v = rng.normal(size=4)
        assert rank_with_tol(np.outer(u, v)) == 1


class TestSubspaces:
    def test_null_space_wide(self):
        A = np.array([[1.0, 0.0, 0.0, 0.0]])
        N = null_space(A)
        assert N.shape == (4, 3)
        assert np.abs(A @ N).max() < 1e-12

    def test_principal_angles_same_span(self, rng):
        B = orthonormalize(rng.normal(size=(6, 2)))
        Q = orthonormalize(B @ rng.normal(size=(2, 2)))
        assert principal_angles(B, Q).max() < 1e-7
        assert subspace_distance(B, Q) < 1e-7

    def test_subspace_distance_orthogonal(self):
        assert abs(subspace_distance(np.eye(4)[:, :1], np.eye(4)[:, 1:2]) - 1.0) < 1e-12

    def test_intersection(self):
        A = np.eye(4)[:, :2]
        B = np.eye(4)[:, 1:3]
        C = subspace_intersection(A, B)
        assert C.shape[1] == 1
        assert subspace_distance(C, np.eye(4)[:, 1:2]) < 1e-10

    def test_intersection_dim_formula(self, rng):
        A = orthonormalize(rng.normal(size=(6, 3)))
        assert numerics.intersection_dim(A, A) == 3


class TestFitAndTolerance:
    def test_linear_fit_exact(self):
        slope, intercept, se, rms = linear_fit([1, 2, 3, 4], [2, 4, 6, 8])
        assert abs(slope - 2) < 1e-12 and abs(intercept) < 1e-12
        assert se < 1e-12 and rms < 1e-12

    def test_tolerance_validation(self):
        with pytest.raises(ValueError):
            Tolerance(rank_tol=1.5)
        with pytest.raises(ValueError):
            Tolerance(form_tol=0.0)

    def test_nonfinite_rejected(self):
        with pytest.raises(ContractError):
            numerics.ensure_finite(np.array([[1.0, np.nan]]))
