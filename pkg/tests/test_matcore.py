"""Hermitian core: spectral decomposition, functional calculus, means,
Löwner order, and seeded PD sampling."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tracelab import matcore
from tracelab.errors import DimensionMismatchError, EigenvalueFloorError
from tracelab.matcore import HermitianMatrix, PDMatrix


def rand_hermitian(n, seed):
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return HermitianMatrix((G + G.conj().T) / 2)


class TestEigh:
    def test_identity(self):
        dec = matcore.eigh(HermitianMatrix(np.eye(3)))
        np.testing.assert_allclose(dec.eigenvalues, np.ones(3), atol=1e-14)

    def test_diagonal_sorted_ascending(self):
        dec = matcore.eigh(HermitianMatrix(np.diag([3.0, 1.0])))
        np.testing.assert_allclose(dec.eigenvalues, [1.0, 3.0], atol=1e-14)

    def test_reconstruction_random(self):
        H = rand_hermitian(5, 0)
        dec = matcore.eigh(H)
        assert np.linalg.norm(dec.reconstruct() - H.entries) < 1e-10

    def test_unitary(self):
        dec = matcore.eigh(rand_hermitian(6, 1))
        U = dec.unitary
        assert np.linalg.norm(U @ U.conj().T - np.eye(6)) < 1e-10

    def test_deterministic(self):
        H = rand_hermitian(4, 2)
        d1, d2 = matcore.eigh(H), matcore.eigh(H)
        assert np.array_equal(d1.eigenvalues, d2.eigenvalues)
        assert np.array_equal(d1.unitary, d2.unitary)

    @pytest.mark.parametrize("n", [2, 5, 8, 16])
    def test_reconstruction_up_to_16(self, n):
        H = rand_hermitian(n, n)
        assert np.linalg.norm(matcore.eigh(H).reconstruct() - H.entries) < 1e-10


class TestFuncCalc:
    def test_inverse_of_identity(self):
        A = matcore.identity_pd(3)
        out = matcore.func_calc(A, lambda w: 1.0 / w)
        np.testing.assert_allclose(out.entries, np.eye(3), atol=1e-14)

    def test_sqrt_diagonal(self):
        A = PDMatrix.from_array(np.diag([1.0, 4.0]))
        out = matcore.func_calc(A, np.sqrt)
        np.testing.assert_allclose(out.entries, np.diag([1.0, 2.0]), atol=1e-14)

    def test_log_trace_matches_eigenvalue_sum(self):
        A = matcore.random_pd(4, 10)
        out = matcore.func_calc(A, np.log)
        expected = np.sum(np.log(A.spectrum().eigenvalues))
        assert abs(matcore.trace(out) - expected) < 1e-10

    def test_identity_function_returns_input(self):
        A = matcore.random_pd(4, 11)
        out = matcore.func_calc(A, lambda w: w)
        assert np.linalg.norm(out.entries - A.entries) < 1e-12

    def test_commutes_with_input(self):
        A = matcore.random_pd(4, 12)
        out = matcore.func_calc(A, np.log).entries
        assert np.linalg.norm(out @ A.entries - A.entries @ out) < 1e-10

    def test_homomorphism_composition(self):
        A = matcore.random_pd(5, 13)
        via_compose = matcore.func_calc(A, lambda w: np.log(np.sqrt(w)))
        half = PDMatrix.from_hermitian(matcore.func_calc(A, np.sqrt))
        via_steps = matcore.func_calc(half, np.log)
        assert np.linalg.norm(via_compose.entries - via_steps.entries) < 1e-9

    def test_floor_rejected_not_clamped(self):
        H = HermitianMatrix(np.diag([1.0, -0.5]))
        bad = PDMatrix(H, -0.5)  # deliberately bogus certificate
        with pytest.raises(EigenvalueFloorError) as err:
            matcore.func_calc(bad, np.log)
        assert "-5" in str(err.value)  # names the offending eigenvalue


class TestTrace:
    def test_identity(self):
        assert matcore.trace(np.eye(3)) == 3.0
        assert matcore.trace(np.eye(3), normalized=True) == 1.0

    def test_diagonal(self):
        assert matcore.trace(np.diag([1.0, 2.0, 3.0])) == 6.0

    def test_unitary_invariance(self):
        rng = np.random.default_rng(3)
        D = np.diag(rng.uniform(0.5, 2.0, 5)).astype(complex)
        U = matcore.random_unitary(5, rng)
        assert abs(matcore.trace(U @ D @ U.conj().T) - matcore.trace(D)) < 1e-12


class TestMeans:
    def test_equal_arguments(self):
        A = matcore.random_pd(3, 20)
        for mean in (matcore.mean_arith, matcore.mean_harm):
            M = mean(A, A)
            assert np.linalg.norm(M.entries - A.entries) < 1e-12

    def test_scalar_values(self):
        a = PDMatrix.from_array(np.array([[1.0]]))
        b = PDMatrix.from_array(np.array([[4.0]]))
        assert abs(matcore.mean_arith(a, b).entries[0, 0] - 2.5) < 1e-14
        assert abs(matcore.mean_harm(a, b).entries[0, 0] - 1.6) < 1e-14

    def test_am_hm_inequality(self):
        for seed in range(20):
            A = matcore.random_pd(3, 100 + seed)
            B = matcore.random_pd(3, 200 + seed)
            assert matcore.loewner_leq(matcore.mean_harm(A, B),
                                       matcore.mean_arith(A, B), 1e-10)

    def test_dim_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            matcore.mean_arith(matcore.random_pd(2, 0), matcore.random_pd(3, 0))


class TestLoewnerOrder:
    def test_identity_cases(self):
        I = np.eye(3)
        assert matcore.loewner_leq(I, 2 * I, 0.0)
        assert not matcore.loewner_leq(2 * I, I, 0.0)

    def test_constructed_pairs(self):
        rng = np.random.default_rng(5)
        A = matcore.random_pd(4, 6)
        G = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        B = A.entries + G.conj().T @ G
        assert matcore.loewner_leq(A.entries, B, 0.0)

    def test_minimax_eigenvalue_ordering(self):
        # A <= B forces lambda_i(A) <= lambda_i(B) for every i
        for seed in range(10):
            rng = np.random.default_rng(seed)
            A = matcore.random_pd(4, rng)
            G = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            B = HermitianMatrix(A.entries + G.conj().T @ G)
            wA = A.spectrum().eigenvalues
            wB = B.spectrum().eigenvalues
            assert np.all(wA <= wB + 1e-10)


class TestRandomPD:
    def test_same_seed_identical(self):
        A = matcore.random_pd(4, 42)
        B = matcore.random_pd(4, 42)
        assert np.array_equal(A.entries, B.entries)

    def test_spectrum_in_range(self):
        A = matcore.random_pd(4, 7, (0.1, 10.0))
        w = A.spectrum().eigenvalues
        assert w[0] >= 0.1 - 1e-12 and w[-1] <= 10.0 + 1e-12

    def test_distinct_seeds_differ(self):
        A = matcore.random_pd(4, 1)
        B = matcore.random_pd(4, 2)
        assert np.linalg.norm(A.entries - B.entries) > 0

    def test_invalid_range(self):
        with pytest.raises(ValueError):
            matcore.random_pd(3, 0, (0.0, 1.0))
        with pytest.raises(ValueError):
            matcore.random_pd(3, 0, (2.0, 1.0))
        with pytest.raises(ValueError):
            matcore.random_pd(3, 0, (1e-7, 10.0))  # condition cap


class TestHermitianMatrix:
    def test_resymmetrization(self):
        M = np.array([[1.0, 1.0 + 1e-10j], [1.0 - 0.5e-10j, 2.0]])
        H = HermitianMatrix(M)
        assert np.linalg.norm(H.entries - H.entries.conj().T) == 0.0

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError):
            HermitianMatrix(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_rejects_non_square(self):
        with pytest.raises(DimensionMismatchError):
            HermitianMatrix(np.zeros((2, 3)))

    def test_entries_frozen(self):
        H = rand_hermitian(3, 9)
        with pytest.raises(ValueError):
            H.entries[0, 0] = 5.0


@settings(max_examples=50, deadline=None)
@given(a=st.floats(0.01, 100.0), b=st.floats(0.01, 100.0))
def test_scalar_am_hm(a, b):
    A = PDMatrix.from_array(np.array([[a]]))
    B = PDMatrix.from_array(np.array([[b]]))
    am = matcore.mean_arith(A, B).entries[0, 0].real
    hm = matcore.mean_harm(A, B).entries[0, 0].real
    assert hm <= am + 1e-9 * max(1.0, am)
