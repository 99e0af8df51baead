"""
Tests for the PointwiseScanner functionality.
"""

import math

import numpy as np
import pytest

from bonnet.errors import ContractViolation
from bonnet.scanner import DEFAULT_SAMPLES, FALLBACK_THRESHOLD, PointwiseScanner, ScanResult
from bonnet.shapes import (clifford_torus_s3, ellipsoid_h, ellipsoid_rn, ellipsoid_s, geodesic_sphere_h,
                           geodesic_sphere_s, sphere_rn, torus_rev_r3, tube_r5)

SURFACES = [
    sphere_rn(),
    ellipsoid_rn(),
    torus_rev_r3(),
    geodesic_sphere_s(k=1.0, rho=math.pi / 3),
    geodesic_sphere_h(k=-1.0, rho=1.0),
    clifford_torus_s3(),
    ellipsoid_s(),
    ellipsoid_h(),
]


class TestPointwiseScanner:
    """Test cases for PointwiseScanner."""

    def test_scanner_initialization(self):
        """Test scanner initialization with defaults."""
        scanner = PointwiseScanner()
        assert scanner.samples == DEFAULT_SAMPLES
        assert scanner.seed == 0
        assert scanner.margin == PointwiseScanner.DEFAULT_MARGIN
        assert scanner.threshold is None

    @pytest.mark.parametrize("kwargs", [{"samples": 0}, {"margin": 0.5}, {"margin": -0.1}])
    def test_invalid_arguments(self, kwargs):
        with pytest.raises(ContractViolation):
            PointwiseScanner(**kwargs)

    def test_sample_points_respect_margin(self):
        chart = sphere_rn().charts[0]
        scanner = PointwiseScanner(samples=500, margin=0.1)
        u = scanner.sample_points(chart, np.random.default_rng(3))
        assert u.shape == (500, 2)
        assert np.all(u[:, 0] >= 0.1 * math.pi)
        assert np.all(u[:, 0] <= 0.9 * math.pi)
        assert np.all((u[:, 1] >= 0.0) & (u[:, 1] <= 2.0 * math.pi))

    @pytest.mark.parametrize("shape", SURFACES, ids=lambda shape: shape.describe())
    def test_surfaces_pass(self, shape):
        """Every residual stays below 1e-8 on surfaces."""
        result = PointwiseScanner(samples=50, seed=1).scan(shape)
        assert isinstance(result, ScanResult)
        assert result.threshold == 1e-8
        assert result.worst <= 1e-8
        assert result.passed

    def test_residual_names(self):
        flat = PointwiseScanner(samples=10).scan(sphere_rn())
        curved = PointwiseScanner(samples=10).scan(geodesic_sphere_s())
        assert "embedding" not in flat.residuals
        assert "embedding" in curved.residuals
        for name in ("gauss_formula", "weingarten", "reilly_position", "newton_trace", "newton_cayley_hamilton",
                     "normal_unit"):
            assert name in flat.residuals

    def test_same_seed_same_result(self):
        first = PointwiseScanner(samples=20, seed=7).scan(torus_rev_r3())
        second = PointwiseScanner(samples=20, seed=7).scan(torus_rev_r3())
        assert first.residuals == second.residuals

    def test_threshold_override(self):
        result = PointwiseScanner(samples=5, threshold=0.0).scan(torus_rev_r3())
        assert result.threshold == 0.0
        assert result.passed == (result.worst == 0.0)

    def test_fallback_threshold(self):
        result = PointwiseScanner(samples=5).scan(tube_r5())
        assert result.threshold == FALLBACK_THRESHOLD
        assert result.passed

    def test_to_dict(self):
        record = PointwiseScanner(samples=5, seed=2).scan(sphere_rn(orientation=-1)).to_dict()
        assert record["kind"] == "scan"
        assert record["shape"] == "sphere_rn"
        assert record["shape_params"]["orientation"] == -1
        assert record["samples"] == 5
        assert record["seed"] == 2
        assert record["worst"] == max(record["residuals"].values())
        assert record["pass"] is True

    def test_empty_result(self):
        result = ScanResult(shape="sphere_rn", shape_params={}, samples=1, seed=0, threshold=1e-8)
        assert result.worst == 0.0
        assert result.passed
