"""Kraus-form strictly positive maps: application, sampling, unitalization,
and the positivity certificate."""

import numpy as np
import pytest

from tracelab import matcore, posmap
from tracelab.errors import DimensionMismatchError, PositivityCertificateError
from tracelab.matcore import PDMatrix


class TestApply:
    def test_identity_map(self):
        pm = posmap.identity_map(3)
        X = matcore.random_pd(3, 0)
        out = posmap.apply(pm, X)
        assert np.linalg.norm(out.entries - X.entries) < 1e-14

    def test_pinching_to_diagonal(self):
        K = np.stack([np.diag([1.0, 0.0]).astype(complex),
                      np.diag([0.0, 1.0]).astype(complex)])
        pm = posmap.PositiveMap(K)
        X = np.array([[1.0, 0.7j], [-0.7j, 2.0]])
        out = posmap.apply(pm, X)
        np.testing.assert_allclose(out.entries, np.diag([1.0, 2.0]), atol=1e-14)

    def test_compression_sums_diagonal(self):
        e1 = np.array([[1.0], [0.0]], dtype=complex)
        e2 = np.array([[0.0], [1.0]], dtype=complex)
        pm = posmap.PositiveMap(np.stack([e1, e2]))
        out = posmap.apply(pm, np.diag([3.0, 5.0]).astype(complex))
        np.testing.assert_allclose(out.entries, [[8.0]], atol=1e-14)

    def test_maps_pd_to_pd(self):
        for seed in range(10):
            pm = posmap.random_map(3, 2, 2, seed)
            X = matcore.random_pd(3, seed + 100)
            out = posmap.apply(pm, X)
            assert np.linalg.eigvalsh(out.entries)[0] > 0

    def test_preserves_hermiticity(self):
        pm = posmap.random_map(4, 3, 2, 5)
        H = matcore.random_pd(4, 6).entries
        out = posmap.apply(pm, H).entries
        assert np.linalg.norm(out - out.conj().T) < 1e-12

    def test_linearity(self):
        rng = np.random.default_rng(7)
        pm = posmap.random_map(3, 3, 2, rng)
        X = matcore.random_pd(3, 1).entries
        Y = matcore.random_pd(3, 2).entries
        a, b = 0.7, -1.3
        lhs = posmap.apply(pm, a * X + b * Y).entries
        rhs = a * posmap.apply(pm, X).entries + b * posmap.apply(pm, Y).entries
        assert np.linalg.norm(lhs - rhs) < 1e-10

    def test_dim_mismatch(self):
        pm = posmap.random_map(3, 2, 2, 0)
        with pytest.raises(DimensionMismatchError):
            posmap.apply(pm, np.eye(4))


class TestRandomMap:
    def test_deterministic(self):
        a = posmap.random_map(3, 2, 2, 7)
        b = posmap.random_map(3, 2, 2, 7)
        assert np.array_equal(a.kraus, b.kraus)

    def test_certificate(self):
        pm = posmap.random_map(3, 2, 2, 1)
        assert pm.certificate() > 1e-8

    def test_normalized_operator_norm(self):
        pm = posmap.random_map(3, 3, 2, 2)
        assert abs(np.linalg.eigvalsh(pm.on_identity())[-1] - 1.0) < 1e-12

    def test_rank_obstruction_rejected(self):
        with pytest.raises(ValueError):
            posmap.random_map(2, 4, 1, 0)

    def test_positivity_preservation_grid(self):
        count = 0
        for m in (2, 3, 4):
            for k in (2, 3, 4):
                for seed in range(8):
                    pm = posmap.random_map(m, k, 2, 1000 + 17 * seed + m + 5 * k)
                    X = matcore.random_pd(m, seed)
                    out = posmap.apply(pm, X)
                    assert np.linalg.eigvalsh(out.entries)[0] > 0
                    count += 1
        assert count >= 72


class TestNormalizeUnital:
    def test_scaled_identity(self):
        pm = posmap.PositiveMap((2.0 * np.eye(3, dtype=complex))[None])
        out = posmap.normalize_unital(pm)
        np.testing.assert_allclose(out.kraus[0], np.eye(3), atol=1e-12)

    def test_idempotent(self):
        pm = posmap.normalize_unital(posmap.random_map(3, 3, 2, 3))
        again = posmap.normalize_unital(pm)
        assert np.linalg.norm(again.kraus - pm.kraus) < 1e-12

    def test_random_map_becomes_unital(self):
        for seed in range(10):
            pm = posmap.normalize_unital(posmap.random_map(3, 3, 3, seed))
            assert np.linalg.norm(pm.on_identity() - np.eye(3)) <= 1e-10


class TestCertificateEnforcement:
    def test_rank_deficient_rejected_at_construction(self):
        K = np.zeros((1, 2, 2), dtype=complex)
        K[0, 0, 0] = 1.0  # Phi(I) = diag(1, 0)
        with pytest.raises(PositivityCertificateError):
            posmap.PositiveMap(K)

    def test_kraus_frozen(self):
        pm = posmap.random_map(2, 2, 2, 0)
        with pytest.raises(ValueError):
            pm.kraus[0, 0, 0] = 1.0
