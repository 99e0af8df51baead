"""
Tests for space forms and the ambient inner product.
"""

import math

import numpy as np
import pytest

from bonnet.ambient import (Signature, SpaceForm, inner_product, normalize_direction, orthonormal_frame,
                            parse_direction, random_direction, validate_point, volume_unit_sphere)
from bonnet.errors import ContractViolation


class TestSpaceForm:
    """Test cases for SpaceForm and Signature."""

    def test_flat_space_form(self):
        """Flat space forms live in R^{n+1} with a Euclidean signature."""
        form = SpaceForm(k=0.0, n=2)
        assert form.dim == 3
        assert form.is_flat
        assert form.signature.negatives == 0
        assert form.describe() == "R^3"

    def test_spherical_space_form(self):
        """Spheres live one dimension higher."""
        form = SpaceForm(k=4.0, n=2)
        assert form.dim == 4
        assert form.signature.negatives == 0
        assert form.describe() == "S^3(4)"

    def test_hyperbolic_space_form(self):
        """Hyperbolic space uses a Minkowski ambient with the minus sign on coordinate 0."""
        form = SpaceForm(k=-1.0, n=4)
        assert form.dim == 6
        np.testing.assert_array_equal(form.signature.metric, [-1, 1, 1, 1, 1, 1])

    def test_invalid_signature(self):
        """Only 0 or 1 negative signs are supported."""
        with pytest.raises(ContractViolation):
            Signature(dim=4, negatives=2)

    def test_invalid_dimension(self):
        """Hypersurfaces need n >= 1."""
        with pytest.raises(ContractViolation):
            SpaceForm(k=0.0, n=0)


class TestInnerProduct:
    """Test cases for the signed inner product."""

    def test_euclidean(self):
        """Euclidean signature gives the dot product."""
        sig = Signature(dim=3)
        assert inner_product([1, 2, 3], [4, 5, 6], sig) == 32.0

    def test_minkowski(self):
        """Coordinate 0 enters with a minus sign."""
        sig = Signature(dim=3, negatives=1)
        assert inner_product([2, 1, 1], [2, 1, 1], sig) == -2.0

    def test_broadcasts_over_stacks(self):
        """Stacks of vectors give stacks of products."""
        sig = Signature(dim=2)
        u = np.array([[1.0, 0.0], [0.0, 2.0]])
        np.testing.assert_allclose(inner_product(u, u, sig), [1.0, 4.0])

    def test_dimension_mismatch(self):
        """Vectors must conform to the signature."""
        with pytest.raises(ContractViolation):
            inner_product([1, 2], [1, 2], Signature(dim=3))


class TestPoints:
    """Test cases for validate_point."""

    def test_sphere_point(self):
        """Points of S^3(1) satisfy <x, x> = 1."""
        form = SpaceForm(k=1.0, n=2)
        assert validate_point([0.0, 0.6, 0.8, 0.0], form, tol=1e-12)
        assert not validate_point([0.0, 0.6, 0.9, 0.0], form, tol=1e-12)

    def test_hyperboloid_sheet(self):
        """Only the upper sheet of <x, x> = 1/k is hyperbolic space."""
        form = SpaceForm(k=-1.0, n=2)
        x = [math.cosh(0.5), math.sinh(0.5), 0.0, 0.0]
        assert validate_point(x, form, tol=1e-12)
        assert not validate_point([-x[0], x[1], 0.0, 0.0], form, tol=1e-12)

    def test_flat_accepts_everything(self):
        """Every point of R^{n+1} is on the flat space form."""
        assert validate_point([3.0, -1.0, 7.0], SpaceForm(k=0.0, n=2), tol=1e-12)

    def test_tolerance_must_be_positive(self):
        with pytest.raises(ContractViolation):
            validate_point([1.0, 0.0, 0.0], SpaceForm(k=0.0, n=2), tol=0.0)


class TestDirections:
    """Test cases for direction handling."""

    def test_normalize(self):
        """Directions are rescaled to |<a, a>| = 1."""
        a, aa = normalize_direction([0.0, 0.0, 2.0], Signature(dim=3))
        np.testing.assert_allclose(a, [0.0, 0.0, 1.0])
        assert aa == pytest.approx(1.0)

    def test_null_direction_rejected(self):
        """Null vectors cannot be normalized."""
        with pytest.raises(ContractViolation, match="null"):
            normalize_direction([1.0, 1.0, 0.0], Signature(dim=3, negatives=1))

    def test_timelike_needs_flag(self):
        """Timelike directions are only accepted on request."""
        sig = Signature(dim=3, negatives=1)
        with pytest.raises(ContractViolation, match="timelike"):
            normalize_direction([2.0, 0.0, 0.0], sig)
        a, aa = normalize_direction([2.0, 0.0, 0.0], sig, allow_timelike=True)
        assert aa == pytest.approx(-1.0)
        np.testing.assert_allclose(a, [1.0, 0.0, 0.0])

    def test_random_direction_reproducible(self):
        """The same seed draws the same direction."""
        sig = Signature(dim=4, negatives=1)
        a1, _ = random_direction(sig, np.random.default_rng(7))
        a2, _ = random_direction(sig, np.random.default_rng(7))
        np.testing.assert_array_equal(a1, a2)

    def test_random_direction_causal_type(self):
        """Default draws are spacelike, timelike draws have <a, a> = -1."""
        sig = Signature(dim=4, negatives=1)
        rng = np.random.default_rng(3)
        for _ in range(10):
            _, aa = random_direction(sig, rng)
            assert aa == pytest.approx(1.0)
            _, aa = random_direction(sig, rng, timelike=True)
            assert aa == pytest.approx(-1.0)

    def test_timelike_needs_minkowski(self):
        with pytest.raises(ContractViolation):
            random_direction(Signature(dim=3), np.random.default_rng(0), timelike=True)

    def test_parse_direction(self):
        """Coordinate lists must match the ambient dimension."""
        sig = Signature(dim=3)
        np.testing.assert_array_equal(parse_direction([1, 2, 3], sig), [1.0, 2.0, 3.0])
        with pytest.raises(ContractViolation):
            parse_direction([1, 2], sig)

    def test_orthonormal_frame(self):
        """The standard frame carries the signature as weights."""
        frame, weights = orthonormal_frame(Signature(dim=3, negatives=1))
        np.testing.assert_array_equal(frame, np.eye(3))
        np.testing.assert_array_equal(weights, [-1.0, 1.0, 1.0])


class TestVolumeUnitSphere:
    """Test cases for volume_unit_sphere."""

    @pytest.mark.parametrize("n, expected", [
        (1, 2.0 * math.pi),
        (2, 4.0 * math.pi),
        (3, 2.0 * math.pi ** 2),
        (4, 8.0 * math.pi ** 2 / 3.0),
    ])
    def test_known_volumes(self, n, expected):
        assert volume_unit_sphere(n) == pytest.approx(expected, rel=1e-14)
