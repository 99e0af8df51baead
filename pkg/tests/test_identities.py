"""
Tests for the integral identity checks and the Gauss-Bonnet calibration.
"""

import math

import numpy as np
import pytest

from bonnet.ambient import random_direction
from bonnet.errors import ConfigurationError, ContractViolation
from bonnet.identities import (GaussBonnetConstants, IdentityChecker, IdentityId, calibrate_gb_constants,
                               closed_form_coefficients, default_radii, geodesic_sphere, validation_shape)
from bonnet.shapes import (clifford_torus_s3, ellipsoid_h, ellipsoid_rn, ellipsoid_s, geodesic_sphere_h,
                           geodesic_sphere_s, sphere_rn, torus_rev_r3, tube_r5, tube_s5)

SURFACES_R3 = [sphere_rn(), ellipsoid_rn(semi_axes=(1.0, 1.0, 2.0)), torus_rev_r3()]
SURFACES_CURVED = [
    geodesic_sphere_s(k=1.0, rho=math.pi / 6),
    geodesic_sphere_s(k=1.0, rho=math.pi / 4),
    geodesic_sphere_s(k=1.0, rho=math.pi / 3),
    geodesic_sphere_s(k=4.0, rho=math.pi / 6),
    geodesic_sphere_h(k=-1.0, rho=0.5),
    geodesic_sphere_h(k=-1.0, rho=1.0),
    clifford_torus_s3(),
    ellipsoid_s(),
    ellipsoid_h(),
]
SURFACES = SURFACES_R3 + SURFACES_CURVED


def _describe(shape):
    return shape.describe()


def _random_a(shape, seed=5):
    a, _ = random_direction(shape.form.signature, np.random.default_rng(seed))
    return a


def _residual_over_scale(report):
    return report.abs_err / report.scale


@pytest.fixture(scope="module")
def checkers():
    """One checker per test surface, shared so the integrals are sampled once."""
    return {shape.describe(): IdentityChecker(shape, threads=1) for shape in SURFACES}


class TestGrotemeyer:
    """int q^2 G = (2 pi / 3) chi for surfaces in R^3."""

    @pytest.mark.parametrize("a", [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    def test_unit_sphere_axes(self, a):
        report = IdentityChecker(sphere_rn(), tol_rel=1e-8, threads=1).check_grotemeyer(a)
        assert report.passed
        assert report.lhs == pytest.approx(4.0 * math.pi / 3.0, rel=1e-8)
        assert report.rhs == pytest.approx(4.18879020478639, rel=1e-12)

    @pytest.mark.parametrize("seed", range(5))
    def test_unit_sphere_random_directions(self, seed):
        shape = sphere_rn()
        report = IdentityChecker(shape, tol_rel=1e-8, threads=1).check_grotemeyer(_random_a(shape, seed))
        assert report.passed
        assert report.lhs == pytest.approx(4.0 * math.pi / 3.0, rel=1e-8)

    def test_torus(self):
        """The integral vanishes on a torus."""
        report = IdentityChecker(torus_rev_r3(), tol_rel=1e-8, threads=1).check_grotemeyer(_random_a(torus_rev_r3()))
        assert report.passed
        assert report.rhs == 0.0
        assert abs(report.lhs) < 1e-8 * 8.0 * math.pi ** 2

    def test_ellipsoid(self):
        report = IdentityChecker(ellipsoid_rn(), tol_rel=1e-8, threads=1).check_grotemeyer([0.3, -0.5, 0.8])
        assert report.passed
        assert report.lhs == pytest.approx(4.0 * math.pi / 3.0, rel=1e-8)

    def test_direction_is_normalized(self):
        report = IdentityChecker(sphere_rn(), threads=1).check_grotemeyer([0.0, 0.0, 3.0])
        assert report.a == [0.0, 0.0, 1.0]
        assert report.a_norm == pytest.approx(1.0)

    def test_needs_euclidean_surface(self):
        with pytest.raises(ContractViolation):
            IdentityChecker(geodesic_sphere_s(), threads=1).check_grotemeyer()


class TestCorollary2:
    """int q^2 G for surfaces in any space form."""

    @pytest.mark.parametrize("shape", SURFACES, ids=_describe)
    def test_holds(self, checkers, shape):
        report = checkers[shape.describe()].check_corollary2(_random_a(shape))
        assert report.passed
        assert _residual_over_scale(report) < 1e-6

    def test_needs_surface(self):
        with pytest.raises(ContractViolation):
            IdentityChecker(sphere_rn(n=4), threads=1).check_corollary2()


class TestMomentIdentity:
    """(n+m) I_{m+1} = m s I_{m-1} + k Q_m - m k P_{m-1}."""

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    @pytest.mark.parametrize("shape", SURFACES, ids=_describe)
    def test_holds(self, checkers, shape, m):
        report = checkers[shape.describe()].check_moment_identity(_random_a(shape), m)
        assert report.passed
        assert report.m == m
        assert _residual_over_scale(report) < 1e-6

    def test_unit_sphere_values(self):
        """3 I_2 = I_0 = 4 pi on the unit sphere."""
        report = IdentityChecker(sphere_rn(), threads=1).check_moment_identity([0.0, 0.0, 1.0], 1)
        assert report.lhs == pytest.approx(4.0 * math.pi, rel=1e-10)
        assert report.rhs == pytest.approx(4.0 * math.pi, rel=1e-10)

    def test_m_zero_rejected(self):
        with pytest.raises(ContractViolation):
            IdentityChecker(sphere_rn(), threads=1).check_moment_identity(m=0)

    @pytest.mark.parametrize("shape", SURFACES, ids=_describe)
    def test_m_one_is_theorem2_free(self, checkers, shape):
        """At m = 1 the residual is n + 1 times the theorem2_free residual."""
        checker = checkers[shape.describe()]
        a = _random_a(shape)
        moment = checker.check_moment_identity(a, 1)
        free = checker.check_theorem2_free(a)
        assert moment.lhs - moment.rhs == pytest.approx((shape.n + 1) * (free.lhs - free.rhs),
                                                        abs=1e-12 * moment.scale)

    def test_timelike_direction(self):
        """With <a, a> = -1 the identity still holds and the report says so."""
        checker = IdentityChecker(geodesic_sphere_h(rho=0.8), threads=1, allow_timelike=True)
        report = checker.check_moment_identity([1.0, 0.2, 0.0, 0.1], 2)
        assert report.passed
        assert report.a_norm == pytest.approx(-1.0)
        assert any("timelike" in note for note in report.notes)

    def test_timelike_needs_permission(self):
        with pytest.raises(ContractViolation):
            IdentityChecker(geodesic_sphere_h(), threads=1).check_moment_identity([1.0, 0.0, 0.0, 0.0], 1)


class TestVectorIdentity:
    """Componentwise (n+m) int q^m G n = m a I_{m-1} + k int q^m K_{n-1} x - m k int q^{m-1} p G x."""

    @pytest.mark.parametrize("m", [0, 1, 2])
    @pytest.mark.parametrize("shape", SURFACES, ids=_describe)
    def test_holds(self, checkers, shape, m):
        report = checkers[shape.describe()].check_vector_identity(_random_a(shape), m)
        assert report.passed
        assert max(report.details["abs_err_components"]) / report.scale < 1e-6
        assert len(report.details["lhs_components"]) == shape.form.dim

    def test_contraction_matches_moment_identity(self, checkers):
        """Contracting with a gives the scalar moment identity."""
        shape = SURFACES_CURVED[0]
        a = _random_a(shape)
        vector = checkers[shape.describe()].check_vector_identity(a, 2)
        assert abs(vector.details["contracted_residual"]) < 1e-6 * vector.scale

    def test_negative_m_rejected(self):
        with pytest.raises(ContractViolation):
            IdentityChecker(sphere_rn(), threads=1).check_vector_identity(m=-1)

    @pytest.mark.parametrize("shape", SURFACES, ids=_describe)
    def test_m_zero_contracts_to_bivens(self, checkers, shape):
        """Contracting the m = 0 identity with a leaves n int q G - k int p K_{n-1}."""
        checker = checkers[shape.describe()]
        a = _random_a(shape)
        vector = checker.check_vector_identity(a, 0)
        bivens = checker.check_bivens(a)
        tolerance = 1e-12 * max(bivens.scale, vector.scale) * max(1.0, float(np.max(np.abs(a))))
        assert vector.details["contracted_residual"] == pytest.approx(bivens.lhs - bivens.rhs, abs=tolerance)


class TestBivens:
    """n int q G = k int p K_{n-1}."""

    @pytest.mark.parametrize("shape", SURFACES, ids=_describe)
    def test_holds(self, checkers, shape):
        report = checkers[shape.describe()].check_bivens(_random_a(shape))
        assert report.passed
        assert _residual_over_scale(report) < 1e-6

    def test_unit_sphere_odd_moments_vanish(self):
        """With one normal sign over the whole sphere the odd moments cancel."""
        shape = sphere_rn()
        a = _random_a(shape)
        checker = IdentityChecker(shape, nodes_per_axis=48, threads=1)
        bivens = checker.check_bivens(a)
        vector = checker.check_vector_identity(a, 0)
        assert bivens.passed
        assert vector.passed
        assert abs(bivens.lhs) < 1e-10 * bivens.scale
        assert max(abs(value) for value in vector.details["lhs_components"]) < 1e-10 * vector.scale


class TestTopologicalIdentities:
    """Identities that bring in the Gauss-Bonnet bracket."""

    @pytest.mark.parametrize("shape", SURFACES, ids=_describe)
    def test_theorem2(self, checkers, shape, surface_constants):
        checker = checkers[shape.describe()]
        checker.constants = surface_constants
        try:
            report = checker.check_theorem2(_random_a(shape))
        finally:
            checker.constants = None
        assert report.passed
        assert _residual_over_scale(report) < 1e-6

    @pytest.mark.parametrize("shape", SURFACES, ids=_describe)
    def test_theorem2_free(self, checkers, shape):
        report = checkers[shape.describe()].check_theorem2_free(_random_a(shape))
        assert report.passed
        assert _residual_over_scale(report) < 1e-6

    def test_theorem2_needs_constants_when_curved(self):
        with pytest.raises(ConfigurationError, match="constants"):
            IdentityChecker(geodesic_sphere_s(), threads=1).check_theorem2()

    def test_theorem2_needs_even_dimension(self):
        with pytest.raises(ContractViolation):
            IdentityChecker(sphere_rn(n=3), threads=1).check_theorem2()

    def test_theorem2_flat_needs_no_constants(self):
        report = IdentityChecker(sphere_rn(), threads=1).check_theorem2()
        assert report.rhs == pytest.approx(4.0 * math.pi / 3.0, rel=1e-14)

    @pytest.mark.parametrize("shape, expected", [
        (sphere_rn(), 4.0 * math.pi),
        (ellipsoid_rn(), 4.0 * math.pi),
        (torus_rev_r3(), 0.0),
    ], ids=["sphere", "ellipsoid", "torus"])
    def test_gauss_bonnet_flat(self, shape, expected):
        report = IdentityChecker(shape, threads=1).check_gauss_bonnet()
        assert report.passed
        assert report.rhs == pytest.approx(expected, abs=1e-14)
        assert report.lhs == pytest.approx(expected, abs=1e-9)

    @pytest.mark.parametrize("shape", SURFACES_CURVED, ids=_describe)
    def test_gauss_bonnet_curved(self, shape, surface_constants):
        report = IdentityChecker(shape, threads=1, constants=surface_constants).check_gauss_bonnet()
        assert report.passed
        assert _residual_over_scale(report) < 1e-6

    def test_constants_dimension_mismatch(self):
        with pytest.raises(ConfigurationError):
            IdentityChecker(sphere_rn(), constants=GaussBonnetConstants(n=4, c=[1 / 3, 1.0]))

    @pytest.mark.parametrize("shape", [sphere_rn(), ellipsoid_rn()], ids=["sphere", "ellipsoid"])
    def test_frame_sum_flat(self, shape):
        """Summing over the three axes reproduces 2 pi chi."""
        report = IdentityChecker(shape, tol_rel=1e-8, threads=1).check_frame_sum()
        assert report.passed
        assert report.lhs == pytest.approx(4.0 * math.pi, rel=1e-8)
        assert report.details["weights"] == [1.0, 1.0, 1.0]

    @pytest.mark.parametrize("shape", [geodesic_sphere_s(rho=0.9), geodesic_sphere_h(rho=0.7), clifford_torus_s3()],
                             ids=_describe)
    def test_frame_sum_curved(self, shape, surface_constants):
        report = IdentityChecker(shape, threads=1, constants=surface_constants).check_frame_sum()
        assert report.passed
        assert _residual_over_scale(report) < 1e-6

    def test_frame_sum_minkowski_weights(self, surface_constants):
        report = IdentityChecker(geodesic_sphere_h(), threads=1, constants=surface_constants).check_frame_sum()
        assert report.details["weights"] == [-1.0, 1.0, 1.0, 1.0]
        assert any("Minkowski" in note for note in report.notes)


class TestRecursion:
    """I_m from I_{m-2}, P_{m-2} and Q_{m-1}."""

    @pytest.mark.parametrize("m", [2, 3, 4])
    @pytest.mark.parametrize("shape", SURFACES, ids=_describe)
    def test_holds(self, checkers, shape, m):
        report = checkers[shape.describe()].check_recursion(_random_a(shape), m)
        assert report.passed
        assert _residual_over_scale(report) < 1e-6

    def test_agrees_with_moment_identity(self, checkers):
        """The recursion residual is the moment residual divided by n + m - 1."""
        shape = SURFACES_CURVED[4]
        report = checkers[shape.describe()].check_recursion(_random_a(shape), 3)
        assert report.details["moment_residual_scaled"] == pytest.approx(
            report.details["recursion_residual"], abs=1e-12 * report.scale)

    def test_m_below_two_rejected(self):
        with pytest.raises(ContractViolation):
            IdentityChecker(sphere_rn(), threads=1).check_recursion(m=1)


class TestClosedForm:
    """int q^m G in closed form."""

    def test_coefficients_m2(self):
        coeffs = closed_form_coefficients(2, 2)
        assert coeffs.topological == pytest.approx(1.0 / 3.0)
        assert coeffs.q_series == pytest.approx({1: 1.0 / 3.0})
        assert coeffs.p_series == pytest.approx({0: -1.0 / 3.0})

    def test_coefficients_double_factorial(self):
        """For k = 0 the topological coefficient is (m-1)!! (n-1)!! / (n+m-1)!!."""
        assert closed_form_coefficients(2, 4).topological == pytest.approx(1.0 / 5.0)
        assert closed_form_coefficients(4, 2).topological == pytest.approx(1.0 / 5.0)
        assert closed_form_coefficients(4, 4).topological == pytest.approx(3.0 / 35.0)

    def test_coefficients_odd_m(self):
        coeffs = closed_form_coefficients(2, 3)
        assert coeffs.topological == 0.0
        assert set(coeffs.q_series) == {2, 0}
        assert set(coeffs.p_series) == {1}

    def test_coefficients_timelike(self):
        """s = -1 alternates the sign of the topological coefficient."""
        assert closed_form_coefficients(2, 2, aa=-1.0).topological == pytest.approx(-1.0 / 3.0)
        assert closed_form_coefficients(2, 4, aa=-1.0).topological == pytest.approx(1.0 / 5.0)

    @pytest.mark.parametrize("n, m", [(3, 2), (2, 0)])
    def test_coefficients_contract(self, n, m):
        with pytest.raises(ContractViolation):
            closed_form_coefficients(n, m)

    def test_unit_sphere_fourth_moment(self):
        """int q^4 G = 4 pi / 5 on the unit sphere."""
        report = IdentityChecker(sphere_rn(), tol_rel=1e-8, threads=1).check_closed_form([0.0, 0.0, 1.0], 4)
        assert report.passed
        assert report.lhs == pytest.approx(4.0 * math.pi / 5.0, rel=1e-8)
        assert report.rhs == pytest.approx(4.0 * math.pi / 5.0, rel=1e-12)

    @pytest.mark.parametrize("m", [1, 3])
    @pytest.mark.parametrize("shape", SURFACES_R3, ids=_describe)
    def test_odd_moments_vanish(self, shape, m):
        report = IdentityChecker(shape, tol_rel=1e-8, threads=1).check_closed_form(_random_a(shape), m)
        assert report.passed
        assert report.rhs == 0.0

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    @pytest.mark.parametrize("shape", SURFACES_CURVED, ids=_describe)
    def test_curved(self, checkers, shape, m, surface_constants):
        checker = checkers[shape.describe()]
        checker.constants = surface_constants
        try:
            report = checker.check_closed_form(_random_a(shape), m)
        finally:
            checker.constants = None
        assert report.passed
        assert _residual_over_scale(report) < 1e-6


class TestRun:
    """Dispatch and report records."""

    def test_dispatch_by_name(self):
        checker = IdentityChecker(sphere_rn(), threads=1)
        report = checker.run("moment", m=2)
        assert report.identity_id == "moment"
        assert report.m == 2
        assert report.a == [0.0, 0.0, 1.0]

    @pytest.mark.parametrize("identity", [identity for identity in IdentityId])
    def test_every_identity_runs_on_unit_sphere(self, identity):
        report = IdentityChecker(sphere_rn(), threads=1).run(identity)
        assert report.identity_id == identity.value
        assert report.passed

    def test_unknown_identity(self):
        with pytest.raises(ValueError):
            IdentityChecker(sphere_rn(), threads=1).run("theorem9")

    def test_report_record(self):
        record = IdentityChecker(sphere_rn(), threads=1).check_grotemeyer().to_dict()
        assert list(record) == [
            "identity_id", "shape", "shape_params", "a", "a_norm", "m", "lhs", "rhs", "abs_err", "rel_err",
            "scale", "quadrature_error_proxy", "nodes", "pass", "terms", "notes", "details",
        ]
        assert record["pass"] is True
        assert record["nodes"] == [96, 96]
        assert record["shape_params"] == {"n": 2, "rho": 1.0, "orientation": 1}
        assert [term["side"] for term in record["terms"]] == ["lhs", "rhs"]

    def test_orientation_reversal(self):
        """Reversing the orientation keeps the even-moment identities."""
        report = IdentityChecker(sphere_rn(orientation=-1), threads=1).check_grotemeyer()
        assert report.passed
        assert report.shape_params["orientation"] == -1

    def test_invalid_tolerance(self):
        with pytest.raises(ContractViolation):
            IdentityChecker(sphere_rn(), tol_rel=0.0)


REVERSIBLE_JOBS = (
    [(IdentityId.MOMENT, m) for m in (1, 2, 3, 4)]
    + [(IdentityId.VECTOR, m) for m in (0, 1, 2)]
    + [(IdentityId.RECURSION, m) for m in (2, 3, 4)]
    + [(IdentityId.CLOSED_FORM, m) for m in (1, 2, 3, 4)]
    + [(identity, None) for identity in (IdentityId.COROLLARY2, IdentityId.BIVENS, IdentityId.THEOREM2,
                                         IdentityId.THEOREM2_FREE, IdentityId.GAUSS_BONNET, IdentityId.FRAME_SUM)]
)


def _job_id(job):
    identity, m = job
    return identity.value if m is None else f"{identity.value}-m{m}"


@pytest.fixture(scope="module")
def orientation_pairs():
    """Checkers for both orientations of a curved and a flat surface."""
    constants = GaussBonnetConstants(n=2, c=[1.0])
    return {
        build.__name__: tuple(IdentityChecker(build(orientation=orientation), threads=1, constants=constants)
                              for orientation in (1, -1))
        for build in (ellipsoid_s, torus_rev_r3)
    }


class TestOrientationReversal:
    """Every identity survives n -> -n."""

    @pytest.mark.parametrize("job", REVERSIBLE_JOBS, ids=_job_id)
    @pytest.mark.parametrize("name", ["ellipsoid_s", "torus_rev_r3"])
    def test_reversed_shape(self, orientation_pairs, name, job):
        identity, m = job
        outward, inward = orientation_pairs[name]
        a = _random_a(outward.shape)
        reference = outward.run(identity, a, m)
        report = inward.run(identity, a, m)
        assert report.passed
        assert report.shape_params["orientation"] == -1
        if identity is not IdentityId.VECTOR:
            assert abs(report.lhs) == pytest.approx(abs(reference.lhs), abs=1e-10 * reference.scale)

    def test_odd_moment_changes_sign(self, orientation_pairs):
        outward, inward = orientation_pairs["ellipsoid_s"]
        a = _random_a(outward.shape)
        reference = outward.check_bivens(a)
        report = inward.check_bivens(a)
        assert report.lhs == pytest.approx(-reference.lhs, abs=1e-10 * reference.scale)

    def test_grotemeyer(self, orientation_pairs):
        _, inward = orientation_pairs["torus_rev_r3"]
        assert inward.check_grotemeyer(_random_a(inward.shape)).passed


class TestScalingCovariance:
    """Moments of G dv in R^{n+1} do not change when the shape is scaled."""

    AXES = (1.0, 1.0, 2.0)
    JOBS = [
        (IdentityId.GROTEMEYER, None),
        (IdentityId.MOMENT, 2),
        (IdentityId.MOMENT, 3),
        (IdentityId.BIVENS, None),
        (IdentityId.THEOREM2, None),
        (IdentityId.GAUSS_BONNET, None),
        (IdentityId.CLOSED_FORM, 4),
    ]

    @pytest.fixture(scope="class")
    def scaled_checkers(self):
        return {
            factor: IdentityChecker(ellipsoid_rn(semi_axes=tuple(factor * axis for axis in self.AXES)), threads=1)
            for factor in (1.0, 0.5, 2.0)
        }

    @pytest.mark.parametrize("job", JOBS, ids=_job_id)
    @pytest.mark.parametrize("factor", [0.5, 2.0])
    def test_scaled_ellipsoid(self, scaled_checkers, factor, job):
        identity, m = job
        a = [0.3, -0.5, 0.8]
        reference = scaled_checkers[1.0].run(identity, a, m)
        report = scaled_checkers[factor].run(identity, a, m)
        assert report.passed
        assert report.lhs == pytest.approx(reference.lhs, abs=1e-10 * reference.scale)
        assert report.rhs == pytest.approx(reference.rhs, abs=1e-10 * reference.scale)

    @pytest.mark.parametrize("factor", [0.5, 2.0])
    def test_area_scales_with_square(self, scaled_checkers, factor):
        """The area is not scale invariant: it picks up factor^n."""
        base = scaled_checkers[1.0].integrator.integrate(lambda pt: 1.0)
        scaled = scaled_checkers[factor].integrator.integrate(lambda pt: 1.0)
        assert scaled == pytest.approx(factor ** 2 * base, rel=1e-12)


class TestGaussBonnetConstants:
    """Test cases for the constants record."""

    def test_round_trip(self):
        constants = GaussBonnetConstants(n=4, c=[1 / 3, 1])
        assert GaussBonnetConstants.from_dict(constants.to_dict()) == constants
        assert constants.to_dict() == {"n": 4, "k-independent": True, "c": [1 / 3, 1.0]}

    @pytest.mark.parametrize("n, c", [(3, [1.0]), (4, [1.0]), (0, [])])
    def test_invalid(self, n, c):
        with pytest.raises(ConfigurationError):
            GaussBonnetConstants(n=n, c=c)

    def test_malformed(self):
        with pytest.raises(ConfigurationError, match="Malformed"):
            GaussBonnetConstants.from_dict({"c": [1.0]})


class TestCalibration:
    """Fitting c_i on geodesic spheres."""

    @pytest.mark.parametrize("k", [1.0, -1.0])
    def test_surfaces_recover_one(self, k):
        result = calibrate_gb_constants(2, k, radii=[0.5, 1.0], threads=1)
        assert result.c[0] == pytest.approx(1.0, abs=1e-6)
        assert result.passed
        assert result.fit_radii == [0.5]
        assert len(result.validation) == 3
        assert result.to_constants() == GaussBonnetConstants(n=2, c=result.c, k_independent=True)

    def test_default_radii(self):
        radii = default_radii(2, 1.0)
        assert len(radii) == 2
        assert all(0 < rho < math.pi for rho in radii)
        assert default_radii(4, -1.0) == [0.5, 1.0, 1.5]

    def test_record(self):
        record = calibrate_gb_constants(2, 1.0, radii=[0.6, 1.1], nodes_per_axis=48, threads=1).to_dict()
        assert record["kind"] == "calibration"
        assert record["pass"] is True
        assert len(record["validation"]) == 3

    @pytest.mark.parametrize("n, k, radii", [
        (3, 1.0, None),
        (2, 0.0, None),
        (4, 1.0, [0.5, 0.5, 1.0]),
        (4, 1.0, [0.5]),
    ])
    def test_contract(self, n, k, radii):
        with pytest.raises(ContractViolation):
            calibrate_gb_constants(n, k, radii=radii, threads=1)

    def test_geodesic_sphere_sign(self):
        assert geodesic_sphere(2, 1.0, 0.5).name == "geodesic_sphere_s"
        assert geodesic_sphere(2, -1.0, 0.5).name == "geodesic_sphere_h"

    def test_validation_shapes(self):
        assert validation_shape(2, 1.0).name == "clifford_torus_s3"
        assert validation_shape(4, 1.0).name == "tube_s5"
        assert validation_shape(2, -1.0).name == "ellipsoid_h"


@pytest.mark.slow
class TestFourDimensional:
    """n = 4 shapes at 24 nodes per axis."""

    SHAPES = [sphere_rn(n=4), tube_r5(), geodesic_sphere_s(n=4, rho=0.8)]

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    @pytest.mark.parametrize("shape", SHAPES, ids=_describe)
    def test_moment_identity(self, shape, m):
        report = IdentityChecker(shape, tol_rel=1e-4).check_moment_identity(_random_a(shape), m)
        assert report.passed
        assert _residual_over_scale(report) < 1e-4

    @pytest.mark.parametrize("shape", SHAPES, ids=_describe)
    def test_vector_and_bivens(self, shape):
        checker = IdentityChecker(shape, tol_rel=1e-4)
        for m in (0, 1):
            assert checker.check_vector_identity(_random_a(shape), m).passed
        assert checker.check_bivens(_random_a(shape)).passed

    def test_calibration_transfers(self):
        """Constants fitted in S^5 hold on a hyperbolic geodesic sphere and the S^5 tube."""
        result = calibrate_gb_constants(4, 1.0)
        assert result.c[0] == pytest.approx(1.0 / 3.0, abs=1e-4)
        assert result.c[1] == pytest.approx(1.0, abs=1e-4)
        names = [report.shape for report in result.validation]
        assert "geodesic_sphere_h" in names
        assert "tube_s5" in names
        for report in result.validation:
            assert _residual_over_scale(report) < 1e-3

    def test_tube_gauss_bonnet(self):
        constants = GaussBonnetConstants(n=4, c=[1.0 / 3.0, 1.0])
        report = IdentityChecker(tube_s5(), tol_rel=1e-4, constants=constants).check_gauss_bonnet()
        assert report.passed
