"""
Tests for mean curvatures and Newton tensors.
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bonnet.curvature import (curvature_pack, gen_kronecker, kr_via_delta, mean_curvatures, newton_residuals,
                              newton_tensors, newton_tensors_alternating, tr_via_delta)
from bonnet.errors import ContractViolation

BATCH = 1000


def _random_symmetric(n: int, count: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((count, n, n))
    return 0.5 * (A + np.swapaxes(A, -1, -2))


def _scales(B: np.ndarray) -> np.ndarray:
    return np.maximum(np.linalg.norm(B, ord=2, axis=(-2, -1)), 1.0)


@st.composite
def symmetric_matrices(draw):
    n = draw(st.integers(min_value=2, max_value=5))
    entries = draw(st.lists(st.floats(min_value=-5.0, max_value=5.0, allow_nan=False, allow_infinity=False),
                            min_size=n * n, max_size=n * n))
    A = np.asarray(entries).reshape(n, n)
    return 0.5 * (A + A.T)


class TestMeanCurvatures:
    """Test cases for mean_curvatures."""

    def test_elementary_symmetric(self):
        """K_r of (1, 2, 3) are 1, 6, 11, 6."""
        np.testing.assert_allclose(mean_curvatures([1.0, 2.0, 3.0]), [1.0, 6.0, 11.0, 6.0])

    def test_umbilic(self):
        """All principal curvatures equal to c give K_r = C(n, r) c^r."""
        np.testing.assert_allclose(mean_curvatures([-1.0] * 4), [1.0, -4.0, 6.0, -4.0, 1.0])

    def test_batch(self):
        K = mean_curvatures([[1.0, 1.0], [2.0, -3.0]])
        np.testing.assert_allclose(K, [[1.0, 2.0, 1.0], [1.0, -1.0, -6.0]])


class TestNewtonTensors:
    """Test cases for newton_tensors."""

    def test_diagonal(self):
        """Newton tensors of diag(1, 2, 3)."""
        T = newton_tensors(np.diag([1.0, 2.0, 3.0]))
        np.testing.assert_allclose(T[0], np.eye(3))
        np.testing.assert_allclose(T[1], np.diag([5.0, 4.0, 3.0]))
        np.testing.assert_allclose(T[2], np.diag([6.0, 3.0, 2.0]))
        np.testing.assert_allclose(T[3], np.zeros((3, 3)), atol=1e-12)

    def test_asymmetric_rejected(self):
        with pytest.raises(ContractViolation, match="not symmetric"):
            newton_tensors(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_non_square_rejected(self):
        with pytest.raises(ContractViolation):
            newton_tensors(np.zeros((2, 3)))

    def test_pack(self):
        pack = curvature_pack(np.diag([2.0, 3.0]))
        assert pack.n == 2
        assert pack.gauss_kronecker == pytest.approx(6.0)
        np.testing.assert_allclose(pack.T[1], np.diag([3.0, 2.0]))

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_recursion_matches_alternating_sum(self, n):
        """T_r = K_r I - B T_{r-1} agrees with sum_j (-1)^j K_{r-j} B^j."""
        B = _random_symmetric(n, BATCH, seed=n)
        scale = _scales(B)
        T = newton_tensors(B)
        T_alt = newton_tensors_alternating(B)
        for r in range(n + 1):
            err = np.max(np.abs(T[:, r] - T_alt[:, r]), axis=(-2, -1)) / scale ** r
            assert np.max(err) < 1e-10

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_trace_identities(self, n):
        """trace(T_r) = (n - r) K_r, trace(B T_r) = (r + 1) K_{r+1} and T_n = 0."""
        residuals = newton_residuals(_random_symmetric(n, BATCH, seed=10 + n))
        assert residuals.trace < 1e-10
        assert residuals.trace_bt < 1e-10
        assert residuals.top_vanishes < 1e-10
        assert residuals.cayley_hamilton < 1e-10
        assert residuals.worst() < 1e-10


class TestDeltaOracles:
    """Test cases for the generalized Kronecker delta cross-checks."""

    @pytest.mark.parametrize("I, J, expected", [
        ((1, 2), (1, 2), 1),
        ((1, 2), (2, 1), -1),
        ((1, 2, 3), (2, 3, 1), 1),
        ((1, 2, 3), (3, 2, 1), -1),
        ((1, 1), (1, 1), 0),
        ((1, 2), (1, 3), 0),
        ((), (), 1),
    ])
    def test_gen_kronecker(self, I, J, expected):
        assert gen_kronecker(I, J) == expected

    def test_gen_kronecker_length_mismatch(self):
        with pytest.raises(ContractViolation):
            gen_kronecker((1, 2), (1,))

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_mean_curvatures_match_oracle(self, n):
        B = _random_symmetric(n, BATCH, seed=20 + n)
        scale = _scales(B)
        K = curvature_pack(B).K
        for r in range(n + 1):
            err = np.abs(K[:, r] - kr_via_delta(B, r)) / scale ** r
            assert np.max(err) < 1e-10

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_newton_tensors_match_oracle(self, n):
        B = _random_symmetric(n, BATCH, seed=30 + n)
        scale = _scales(B)
        T = newton_tensors(B)
        for r in range(n + 1):
            err = np.max(np.abs(T[:, r] - tr_via_delta(B, r)), axis=(-2, -1)) / scale ** r
            assert np.max(err) < 1e-10

    def test_oracle_refuses_large_dimension(self):
        with pytest.raises(ContractViolation):
            kr_via_delta(np.eye(6), 2)

    def test_oracle_range(self):
        with pytest.raises(ContractViolation):
            tr_via_delta(np.eye(3), 4)

    def test_oracle_single_matrix(self):
        """The oracles also accept one unbatched matrix."""
        B = np.array([[1.0, 2.0], [2.0, -1.0]])
        assert float(kr_via_delta(B, 2)) == pytest.approx(-5.0)
        np.testing.assert_allclose(tr_via_delta(B, 1), [[-1.0, -2.0], [-2.0, 1.0]])


class TestNewtonProperties:
    """Property-based checks of the Newton-tensor identities."""

    @given(symmetric_matrices())
    @settings(max_examples=200, deadline=None)
    def test_identities_hold(self, B):
        assert newton_residuals(B).worst() < 1e-9

    @given(symmetric_matrices())
    @settings(max_examples=200, deadline=None)
    def test_newton_tensors_symmetric(self, B):
        T = newton_tensors(B)
        np.testing.assert_allclose(T, np.swapaxes(T, -1, -2), atol=1e-9 * max(1.0, np.abs(B).max()) ** B.shape[0])

    @given(symmetric_matrices())
    @settings(max_examples=100, deadline=None)
    def test_gauss_kronecker_is_determinant(self, B):
        G = curvature_pack(B).gauss_kronecker
        scale = max(1.0, np.linalg.norm(B, ord=2)) ** B.shape[0]
        assert abs(G - np.linalg.det(B)) <= 1e-10 * scale
