"""
Integral identities of closed hypersurfaces in space forms, checked by quadrature.

Notation used throughout, for a fixed direction a with s = <a, a> = +-1:
    q = <a, n>,  p = <a, x>,  G = K_n,
    I_j = int q^j G dv,  Q_j = int q^j p K_{n-1} dv,  P_j = int q^j p^2 G dv.

The basic moment family, valid for every n and m >= 1, is
    0 = (n+m) I_{m+1} - m s I_{m-1} - k Q_m + m k P_{m-1},
and for m = 0 the vector form gives n int q G n dv = k int p K_{n-1} x dv.
The topological identities bring in the Gauss-Bonnet bracket
    (vol S^n / 2) chi - sum_{i=1}^{n/2} c_i k^i int K_{n-2i} dv  (= int G dv)
whose constants c_i are calibrated numerically on geodesic spheres.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
import numpy.typing as npt
from scipy import linalg

from .ambient import normalize_direction, orthonormal_frame, volume_unit_sphere
from .errors import CalibrationError, ConfigurationError, ContractViolation
from .quadrature import IntegralEstimate, SurfaceIntegrator, SurfaceSample
from .shapes import (Shape, clifford_torus_s3, ellipsoid_h, ellipsoid_s, geodesic_sphere_h,
                     geodesic_sphere_s, tube_s5)

logger = logging.getLogger(__name__)

DEFAULT_TOL_REL = 1e-6
CALIBRATION_CONDITION_LIMIT = 1e8
DEFAULT_VALIDATION_TOL = 1e-3


class IdentityId(str, Enum):
    GROTEMEYER = "grotemeyer"
    COROLLARY2 = "corollary2"
    MOMENT = "moment"
    VECTOR = "vector"
    BIVENS = "bivens"
    THEOREM2 = "theorem2"
    THEOREM2_FREE = "theorem2_free"
    GAUSS_BONNET = "gauss_bonnet"
    FRAME_SUM = "frame_sum"
    RECURSION = "recursion"
    CLOSED_FORM = "closed_form"


IDENTITY_DESCRIPTIONS = {
    IdentityId.GROTEMEYER: "int q^2 G = (2 pi / 3) chi for surfaces in R^3",
    IdentityId.COROLLARY2: "int q^2 G for surfaces in any space form (n = 2)",
    IdentityId.MOMENT: "moment family (n+m) I_{m+1} = m s I_{m-1} + k Q_m - m k P_{m-1}",
    IdentityId.VECTOR: "vector form of the moment family, per ambient component",
    IdentityId.BIVENS: "n int q G = k int p K_{n-1}",
    IdentityId.THEOREM2: "int q^2 G with the Gauss-Bonnet bracket (n even, needs c_i if k != 0)",
    IdentityId.THEOREM2_FREE: "(n+1) int q^2 G = s int G + k Q_1 - k P_0 (no constants)",
    IdentityId.GAUSS_BONNET: "int G = (vol S^n / 2) chi - sum c_i k^i int K_{n-2i}",
    IdentityId.FRAME_SUM: "signature-weighted sum of the theorem over an orthonormal frame",
    IdentityId.RECURSION: "I_m from I_{m-2}, P_{m-2} and Q_{m-1} (m >= 2)",
    IdentityId.CLOSED_FORM: "I_m in closed form by unrolling the recursion (n even)",
}

# identities that need a direction a
DIRECTIONAL = {
    IdentityId.GROTEMEYER, IdentityId.COROLLARY2, IdentityId.MOMENT, IdentityId.VECTOR,
    IdentityId.BIVENS, IdentityId.THEOREM2, IdentityId.THEOREM2_FREE, IdentityId.RECURSION,
    IdentityId.CLOSED_FORM,
}


@dataclass
class GaussBonnetConstants:
    """
    Gauss-Bonnet constants c_1..c_{n/2} of one even dimension.

    Serialized as {"n": 4, "k-independent": true, "c": [c1, c2]}.
    """
    n: int
    c: List[float]
    k_independent: bool = True

    def __post_init__(self):
        if self.n < 2 or self.n % 2:
            raise ConfigurationError(f"Gauss-Bonnet constants exist for even n >= 2, got n = {self.n}")
        if len(self.c) != self.n // 2:
            raise ConfigurationError(f"Expected {self.n // 2} constants for n = {self.n}, got {len(self.c)}")
        self.c = [float(value) for value in self.c]

    def to_dict(self) -> dict:
        return {"n": self.n, "k-independent": self.k_independent, "c": list(self.c)}

    @classmethod
    def from_dict(cls, data: dict) -> "GaussBonnetConstants":
        try:
            return cls(n=int(data["n"]), c=list(data["c"]), k_independent=bool(data.get("k-independent", True)))
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigurationError(f"Malformed constants: {e}") from e


@dataclass
class IdentityReport:
    """
    Both sides of one checked identity with its error budget.

    passed holds iff abs_err <= max(tol_rel * scale, 3 * quadrature_error_proxy).
    """
    identity_id: str
    shape: str
    shape_params: Dict[str, object]
    a: Optional[List[float]]
    a_norm: Optional[float]
    m: Optional[int]
    lhs: float
    rhs: float
    abs_err: float
    rel_err: float
    scale: float
    quadrature_error_proxy: float
    nodes: List[int]
    passed: bool
    terms: List[dict] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    details: Dict[str, object] = field(default_factory=dict)

    def to_dict(self) -> dict:
        """Record for report files ("pass" spelled as such)."""
        record = asdict(self)
        record["pass"] = record.pop("passed")
        return {key: record[key] for key in (
            "identity_id", "shape", "shape_params", "a", "a_norm", "m", "lhs", "rhs", "abs_err",
            "rel_err", "scale", "quadrature_error_proxy", "nodes", "pass", "terms", "notes", "details",
        )}


@dataclass
class _Term:
    """coefficient * integral, or a constant when there is no integral."""
    name: str
    coefficient: float
    estimate: Optional[IntegralEstimate] = None
    constant: float = 0.0

    @property
    def value(self) -> float:
        if self.estimate is None:
            return self.constant
        return self.coefficient * self.estimate.value

    @property
    def magnitude(self) -> float:
        if self.estimate is None:
            return abs(self.constant)
        return abs(self.coefficient) * self.estimate.magnitude

    @property
    def proxy(self) -> float:
        if self.estimate is None:
            return 0.0
        return abs(self.coefficient) * self.estimate.error_proxy

    def to_dict(self, side: str) -> dict:
        return {
            "side": side,
            "name": self.name,
            "coefficient": self.coefficient,
            "integral": None if self.estimate is None else self.estimate.value,
            "value": self.value,
            "error_proxy": self.proxy,
        }


@dataclass
class ClosedFormCoefficients:
    """
    int q^m G = topological * bracket + k * sum_j p_series[j] P_j + k * sum_j q_series[j] Q_j.
    """
    n: int
    m: int
    topological: float
    p_series: Dict[int, float]
    q_series: Dict[int, float]


def closed_form_coefficients(n: int, m: int, aa: float = 1.0) -> ClosedFormCoefficients:
    """
    Coefficients of the closed form of int q^m G, obtained by unrolling

        I_j = a_j (s I_{j-2} - k P_{j-2}) + k Q_{j-1} / (n+j-1),  a_j = (j-1)/(n+j-1),

    down to I_0 = int G (even m) or to the vanishing a_1 (odd m).

    Args:
        n: Even hypersurface dimension
        m: Moment order >= 1
        aa: s = <a, a>

    Returns:
        ClosedFormCoefficients
    """
    if n < 2 or n % 2:
        raise ContractViolation(f"Closed forms need even n >= 2, got n = {n}")
    if m < 1:
        raise ContractViolation(f"Closed forms need m >= 1, got m = {m}")
    carry = 1.0
    p_series: Dict[int, float] = {}
    q_series: Dict[int, float] = {}
    j = m
    while j >= 1:
        ratio = (j - 1) / (n + j - 1)
        q_series[j - 1] = carry / (n + j - 1)
        if j >= 2:
            p_series[j - 2] = -carry * ratio
        carry *= ratio * aa
        j -= 2
    # odd orders end on a_1 = 0, even ones on the bracket
    if j == -1 and carry != 0.0:
        raise ContractViolation(f"Coefficient series of odd m = {m} did not terminate")
    topological = carry if m % 2 == 0 else 0.0
    return ClosedFormCoefficients(n=n, m=m, topological=topological, p_series=p_series, q_series=q_series)


def _fmt_power(base: str, j: int) -> str:
    if j == 0:
        return ""
    if j == 1:
        return f"{base} "
    return f"{base}^{j} "


@dataclass
class _VectorTerm:
    """coefficient * vector integral, or coefficient * direction * scalar integral."""
    name: str
    coefficient: float
    estimate: IntegralEstimate
    direction: Optional[np.ndarray] = None

    @property
    def value(self) -> np.ndarray:
        if self.direction is None:
            return self.coefficient * np.asarray(self.estimate.value)
        return self.coefficient * self.direction * self.estimate.value

    @property
    def magnitude(self) -> np.ndarray:
        if self.direction is None:
            return abs(self.coefficient) * np.asarray(self.estimate.magnitude)
        return abs(self.coefficient) * np.abs(self.direction) * self.estimate.magnitude

    @property
    def proxy(self) -> np.ndarray:
        if self.direction is None:
            return abs(self.coefficient) * np.asarray(self.estimate.error_proxy)
        return abs(self.coefficient) * np.abs(self.direction) * self.estimate.error_proxy

    def to_dict(self, side: str) -> dict:
        integral = self.estimate.value
        return {
            "side": side,
            "name": self.name,
            "coefficient": self.coefficient,
            "integral": integral.tolist() if isinstance(integral, np.ndarray) else integral,
            "value": self.value.tolist(),
            "error_proxy": self.proxy.tolist(),
        }


class IdentityChecker:
    """
    Checks the integral identities on one shape at a fixed quadrature resolution.
    """

    def __init__(self, shape: Shape, nodes_per_axis=None, tol_rel: float = DEFAULT_TOL_REL,
                 constants: Optional[GaussBonnetConstants] = None, threads: Optional[int] = None,
                 allow_timelike: bool = False):
        """
        Initialize the checker.

        Args:
            shape: Shape to integrate over
            nodes_per_axis: Quadrature nodes per axis (default by dimension)
            tol_rel: Relative tolerance against the term scale
            constants: Gauss-Bonnet constants for the topological identities
            threads: Worker threads for quadrature
            allow_timelike: Accept directions with <a, a> < 0
        """
        if not tol_rel > 0:
            raise ContractViolation(f"Tolerance must be positive, got {tol_rel}")
        if constants is not None and constants.n != shape.n:
            raise ConfigurationError(f"Constants are for n = {constants.n}, shape has n = {shape.n}")
        self.shape = shape
        self.tol_rel = tol_rel
        self.constants = constants
        self.allow_timelike = allow_timelike
        self.integrator = SurfaceIntegrator(shape, nodes_per_axis, threads=threads)
        self._cache: Dict[tuple, IntegralEstimate] = {}

        logger.info(f"Initialized checker for {shape.describe()}: nodes={self.integrator.nodes}, tol_rel={tol_rel}")

    # integrals

    def _estimate(self, key: tuple, values_of: Callable[[SurfaceSample], npt.ArrayLike]) -> IntegralEstimate:
        if key not in self._cache:
            self._cache[key] = self.integrator.estimate(values_of)
        return self._cache[key]

    def _direction(self, a: Optional[npt.ArrayLike]):
        sig = self.shape.form.signature
        if a is None:
            a = np.zeros(sig.dim)
            a[-1] = 1.0
        return normalize_direction(a, sig, allow_timelike=self.allow_timelike)

    def _qp(self, sample: SurfaceSample, a: np.ndarray):
        eta_a = self.shape.form.signature.metric * a
        return sample.normal @ eta_a, sample.x @ eta_a

    def _I(self, a: np.ndarray, j: int) -> IntegralEstimate:
        n = self.shape.n

        def values(sample):
            q, _ = self._qp(sample, a)
            return q ** j * sample.K[:, n]
        return self._estimate(("I", j, a.tobytes()), values)

    def _Q(self, a: np.ndarray, j: int) -> IntegralEstimate:
        n = self.shape.n

        def values(sample):
            q, p = self._qp(sample, a)
            return q ** j * p * sample.K[:, n - 1]
        return self._estimate(("Q", j, a.tobytes()), values)

    def _P(self, a: np.ndarray, j: int) -> IntegralEstimate:
        n = self.shape.n

        def values(sample):
            q, p = self._qp(sample, a)
            return q ** j * p * p * sample.K[:, n]
        return self._estimate(("P", j, a.tobytes()), values)

    def _K(self, r: int) -> IntegralEstimate:
        return self._estimate(("K", r), lambda sample: sample.K[:, r])

    def _volume(self) -> IntegralEstimate:
        return self._K(0)

    # term builders

    def _term_I(self, a, j, coefficient) -> _Term:
        return _Term(f"int {_fmt_power('q', j)}G", coefficient, self._I(a, j))

    def _term_Q(self, a, j, coefficient) -> _Term:
        return _Term(f"int {_fmt_power('q', j)}p K_{self.shape.n - 1}", coefficient, self._Q(a, j))

    def _term_P(self, a, j, coefficient) -> _Term:
        return _Term(f"int {_fmt_power('q', j)}p^2 G", coefficient, self._P(a, j))

    def _bracket_terms(self, coefficient: float, identity: str) -> List[_Term]:
        """coefficient * [(vol S^n / 2) chi - sum_i c_i k^i int K_{n-2i}]."""
        n, k = self.shape.n, self.shape.k
        if n % 2:
            raise ContractViolation(f"{identity} needs even n, got n = {n}")
        chi = self.shape.euler_characteristic
        terms = [_Term("(vol S^n / 2) chi", coefficient, constant=coefficient * volume_unit_sphere(n) / 2.0 * chi)]
        if k == 0:
            return terms
        if self.constants is None:
            raise ConfigurationError(f"{identity} on a k != 0 shape needs Gauss-Bonnet constants (run calibrate)")
        for i, c_i in enumerate(self.constants.c, start=1):
            terms.append(_Term(f"int K_{n - 2 * i}", -coefficient * c_i * k ** i, self._K(n - 2 * i)))
        return terms

    def _report(self, identity_id: IdentityId, lhs_terms: List[_Term], rhs_terms: List[_Term],
                a=None, aa=None, m=None, notes=None, details=None) -> IdentityReport:
        lhs = math.fsum(t.value for t in lhs_terms)
        rhs = math.fsum(t.value for t in rhs_terms)
        terms = lhs_terms + rhs_terms
        abs_err = abs(lhs - rhs)
        scale = max(t.magnitude for t in terms)
        proxy = math.fsum(t.proxy for t in terms)
        denominator = max(abs(lhs), abs(rhs), scale)
        rel_err = abs_err / denominator if denominator > 0 else 0.0
        passed = abs_err <= max(self.tol_rel * scale, 3.0 * proxy)
        notes = list(notes or [])
        if aa is not None and aa < 0:
            notes.append("direction a is timelike (<a,a> = -1)")
        report = IdentityReport(
            identity_id=identity_id.value,
            shape=self.shape.name,
            shape_params=dict(self.shape.params, orientation=self.shape.orientation),
            a=None if a is None else [float(v) for v in a],
            a_norm=aa,
            m=m,
            lhs=lhs,
            rhs=rhs,
            abs_err=abs_err,
            rel_err=rel_err,
            scale=scale,
            quadrature_error_proxy=proxy,
            nodes=list(self.integrator.nodes),
            passed=passed,
            terms=[t.to_dict("lhs") for t in lhs_terms] + [t.to_dict("rhs") for t in rhs_terms],
            notes=notes,
            details=details or {},
        )
        status = "pass" if passed else "FAIL"
        logger.info(f"{identity_id.value}{'' if m is None else f' m={m}'} on {self.shape.name}: "
                    f"lhs={lhs:.12g} rhs={rhs:.12g} rel_err={rel_err:.3e} [{status}]")
        return report

    # checkers

    def check_grotemeyer(self, a=None) -> IdentityReport:
        """int q^2 G = (2 pi / 3) chi for closed surfaces in R^3."""
        if self.shape.k != 0 or self.shape.n != 2:
            raise ContractViolation(f"grotemeyer needs a surface in R^3, got {self.shape.form.describe()}")
        a, aa = self._direction(a)
        chi = self.shape.euler_characteristic
        return self._report(
            IdentityId.GROTEMEYER,
            [self._term_I(a, 2, 1.0)],
            [_Term("(2 pi / 3) chi", 1.0, constant=2.0 * math.pi / 3.0 * chi)],
            a=a, aa=aa,
        )

    def check_corollary2(self, a=None) -> IdentityReport:
        """int q^2 G = (s/3)(2 pi chi - k vol) + (k/3) Q_1 - (k/3) P_0 for surfaces (n = 2)."""
        if self.shape.n != 2:
            raise ContractViolation(f"corollary2 needs n = 2, got n = {self.shape.n}")
        a, aa = self._direction(a)
        k = self.shape.k
        chi = self.shape.euler_characteristic
        rhs = [_Term("(s/3) 2 pi chi", aa / 3.0, constant=aa / 3.0 * 2.0 * math.pi * chi)]
        if k != 0:
            rhs += [
                _Term("int 1", -aa * k / 3.0, self._volume()),
                self._term_Q(a, 1, k / 3.0),
                self._term_P(a, 0, -k / 3.0),
            ]
        return self._report(IdentityId.COROLLARY2, [self._term_I(a, 2, 1.0)], rhs, a=a, aa=aa)

    def check_moment_identity(self, a=None, m: int = 1) -> IdentityReport:
        """(n+m) I_{m+1} = m s I_{m-1} + k Q_m - m k P_{m-1}, any n, m >= 1."""
        if m < 1:
            raise ContractViolation(f"moment needs m >= 1 (m = 0 is bivens), got m = {m}")
        a, aa = self._direction(a)
        n, k = self.shape.n, self.shape.k
        rhs = [self._term_I(a, m - 1, m * aa)]
        if k != 0:
            rhs += [self._term_Q(a, m, k), self._term_P(a, m - 1, -m * k)]
        return self._report(IdentityId.MOMENT, [self._term_I(a, m + 1, float(n + m))], rhs, a=a, aa=aa, m=m)

    def check_vector_identity(self, a=None, m: int = 0) -> IdentityReport:
        """
        (n+m) int q^m G n = m a I_{m-1} + k int q^m K_{n-1} x - m k int q^{m-1} p G x, componentwise.

        The report's lhs/rhs are those of the worst component (largest residual
        relative to its scale); details carry every component and the
        contraction with a.
        """
        if m < 0:
            raise ContractViolation(f"vector needs m >= 0, got m = {m}")
        a, aa = self._direction(a)
        n, k = self.shape.n, self.shape.k
        key = a.tobytes()

        def qm(sample, j):
            q, _ = self._qp(sample, a)
            return q ** j

        normal_part = self._estimate(
            ("Gn", m, key), lambda s: (qm(s, m) * s.K[:, n])[:, None] * s.normal)
        lhs_terms = [_VectorTerm(f"int {_fmt_power('q', m)}G n", float(n + m), normal_part)]
        rhs_terms = []
        if m > 0:
            rhs_terms.append(_VectorTerm(f"a int {_fmt_power('q', m - 1)}G", float(m), self._I(a, m - 1), direction=a))
        if k != 0:
            rhs_terms.append(_VectorTerm(
                f"int {_fmt_power('q', m)}K_{n - 1} x", k,
                self._estimate(("Kx", m, key), lambda s: (qm(s, m) * s.K[:, n - 1])[:, None] * s.x)))
            if m > 0:
                rhs_terms.append(_VectorTerm(
                    f"int {_fmt_power('q', m - 1)}p G x", -m * k,
                    self._estimate(("pGx", m, key), lambda s: (qm(s, m - 1) * self._qp(s, a)[1] * s.K[:, n])[:, None] * s.x)))

        lhs = sum(t.value for t in lhs_terms)
        rhs = sum((t.value for t in rhs_terms), np.zeros_like(lhs))
        terms = lhs_terms + rhs_terms
        abs_err = np.abs(lhs - rhs)
        scale = np.max(np.stack([t.magnitude for t in terms]), axis=0)
        proxy = np.sum(np.stack([t.proxy for t in terms]), axis=0)
        # components whose terms all vanish are judged against the whole vector
        vector_scale = float(np.max(scale))
        passed = abs_err <= np.maximum(self.tol_rel * vector_scale, 3.0 * proxy)
        worst = int(np.argmax(abs_err))
        contracted = float(np.dot(self.shape.form.signature.metric * a, lhs - rhs))

        denominator = max(abs(lhs[worst]), abs(rhs[worst]), vector_scale)
        report = IdentityReport(
            identity_id=IdentityId.VECTOR.value,
            shape=self.shape.name,
            shape_params=dict(self.shape.params, orientation=self.shape.orientation),
            a=[float(v) for v in a],
            a_norm=aa,
            m=m,
            lhs=float(lhs[worst]),
            rhs=float(rhs[worst]),
            abs_err=float(abs_err[worst]),
            rel_err=float(abs_err[worst] / denominator) if denominator > 0 else 0.0,
            scale=vector_scale,
            quadrature_error_proxy=float(proxy[worst]),
            nodes=list(self.integrator.nodes),
            passed=bool(np.all(passed)),
            terms=[t.to_dict("lhs") for t in lhs_terms] + [t.to_dict("rhs") for t in rhs_terms],
            notes=["direction a is timelike (<a,a> = -1)"] if aa < 0 else [],
            details={
                "component": worst,
                "lhs_components": lhs.tolist(),
                "rhs_components": rhs.tolist(),
                "abs_err_components": abs_err.tolist(),
                "scale_components": scale.tolist(),
                "contracted_residual": contracted,
            },
        )
        logger.info(f"vector m={m} on {self.shape.name}: worst component {worst}, "
                    f"abs_err={report.abs_err:.3e} [{'pass' if report.passed else 'FAIL'}]")
        return report

    def check_bivens(self, a=None) -> IdentityReport:
        """n int q G = k int p K_{n-1}."""
        a, aa = self._direction(a)
        n, k = self.shape.n, self.shape.k
        rhs = [self._term_Q(a, 0, k)] if k != 0 else [_Term("0", 1.0, constant=0.0)]
        return self._report(IdentityId.BIVENS, [self._term_I(a, 1, float(n))], rhs, a=a, aa=aa)

    def check_theorem2(self, a=None) -> IdentityReport:
        """int q^2 G = (s/(n+1)) bracket + (k/(n+1)) Q_1 - (k/(n+1)) P_0 (n even)."""
        a, aa = self._direction(a)
        n, k = self.shape.n, self.shape.k
        rhs = self._bracket_terms(aa / (n + 1), "theorem2")
        if k != 0:
            rhs += [self._term_Q(a, 1, k / (n + 1)), self._term_P(a, 0, -k / (n + 1))]
        return self._report(IdentityId.THEOREM2, [self._term_I(a, 2, 1.0)], rhs, a=a, aa=aa)

    def check_theorem2_free(self, a=None) -> IdentityReport:
        """int q^2 G = (s int G + k Q_1 - k P_0) / (n+1), any n, no constants."""
        a, aa = self._direction(a)
        n, k = self.shape.n, self.shape.k
        rhs = [self._term_I(a, 0, aa / (n + 1))]
        if k != 0:
            rhs += [self._term_Q(a, 1, k / (n + 1)), self._term_P(a, 0, -k / (n + 1))]
        return self._report(IdentityId.THEOREM2_FREE, [self._term_I(a, 2, 1.0)], rhs, a=a, aa=aa)

    def check_gauss_bonnet(self) -> IdentityReport:
        """int G = (vol S^n / 2) chi - sum_i c_i k^i int K_{n-2i} (n even)."""
        lhs = [_Term("int G", 1.0, self._K(self.shape.n))]
        return self._report(IdentityId.GAUSS_BONNET, lhs, self._bracket_terms(1.0, "gauss_bonnet"))

    def check_frame_sum(self) -> IdentityReport:
        """
        Sum of the theorem over the standard frame E_i with weights eps_i = <E_i, E_i>.

        With sum eps_i^2 = dim the weighted sum reads
        [(n+1) S_qq - k S_qp + k S_pp] / dim = bracket, where
        S_qq = sum eps_i int <E_i,n>^2 G, S_qp = sum eps_i int <E_i,n><E_i,x> K_{n-1}
        and S_pp = sum eps_i int <E_i,x>^2 G.
        """
        n, k = self.shape.n, self.shape.k
        frame, eps = orthonormal_frame(self.shape.form.signature)
        dim = frame.shape[0]
        lhs_terms = []
        for E, e in zip(frame, eps):
            lhs_terms.append(_Term(f"eps int <E,n>^2 G [E={E.tolist()}]", e * (n + 1) / dim, self._I(E, 2)))
            if k != 0:
                lhs_terms.append(_Term(f"eps int <E,n><E,x> K_{n - 1} [E={E.tolist()}]", -e * k / dim, self._Q(E, 1)))
                lhs_terms.append(_Term(f"eps int <E,x>^2 G [E={E.tolist()}]", e * k / dim, self._P(E, 0)))
        notes = []
        if self.shape.form.signature.negatives:
            notes.append("Minkowski frame: terms weighted by eps_i = <E_i, E_i>")
        report = self._report(IdentityId.FRAME_SUM, lhs_terms, self._bracket_terms(1.0, "frame_sum"), notes=notes)
        report.details["weights"] = eps.tolist()
        return report

    def check_recursion(self, a=None, m: int = 2) -> IdentityReport:
        """
        I_m = ((m-1)/(n+m-1)) [s I_{m-2} - k P_{m-2} + (k/(m-1)) Q_{m-1}], m >= 2.

        The moment identity at order m-1 is evaluated on the same integrals and
        its residual is attached to details for cross-validation.
        """
        if m < 2:
            raise ContractViolation(f"recursion needs m >= 2, got m = {m}")
        a, aa = self._direction(a)
        n, k = self.shape.n, self.shape.k
        ratio = (m - 1) / (n + m - 1)
        rhs = [self._term_I(a, m - 2, ratio * aa)]
        if k != 0:
            rhs += [self._term_P(a, m - 2, -ratio * k), self._term_Q(a, m - 1, ratio * k / (m - 1))]
        report = self._report(IdentityId.RECURSION, [self._term_I(a, m, 1.0)], rhs, a=a, aa=aa, m=m)
        moment = self.check_moment_identity(a, m - 1)
        report.details["moment_residual"] = moment.lhs - moment.rhs
        report.details["moment_residual_scaled"] = (moment.lhs - moment.rhs) / (n + m - 1)
        report.details["recursion_residual"] = report.lhs - report.rhs
        return report

    def check_closed_form(self, a=None, m: int = 2) -> IdentityReport:
        """int q^m G against its closed form (n even); even m needs the bracket."""
        a, aa = self._direction(a)
        n, k = self.shape.n, self.shape.k
        coeffs = closed_form_coefficients(n, m, aa)
        rhs: List[_Term] = []
        if m % 2 == 0:
            rhs += self._bracket_terms(coeffs.topological, "closed_form")
        else:
            rhs.append(_Term("0", 1.0, constant=0.0))
        if k != 0:
            rhs += [self._term_P(a, j, k * c) for j, c in sorted(coeffs.p_series.items())]
            rhs += [self._term_Q(a, j, k * c) for j, c in sorted(coeffs.q_series.items())]
        details = {
            "topological": coeffs.topological,
            "p_series": {str(j): c for j, c in sorted(coeffs.p_series.items())},
            "q_series": {str(j): c for j, c in sorted(coeffs.q_series.items())},
        }
        return self._report(IdentityId.CLOSED_FORM, [self._term_I(a, m, 1.0)], rhs, a=a, aa=aa, m=m,
                            details=details)

    def run(self, identity: IdentityId, a=None, m: Optional[int] = None) -> IdentityReport:
        """Dispatch one identity check by id."""
        identity = IdentityId(identity)
        if identity is IdentityId.GROTEMEYER:
            return self.check_grotemeyer(a)
        if identity is IdentityId.COROLLARY2:
            return self.check_corollary2(a)
        if identity is IdentityId.MOMENT:
            return self.check_moment_identity(a, 1 if m is None else m)
        if identity is IdentityId.VECTOR:
            return self.check_vector_identity(a, 0 if m is None else m)
        if identity is IdentityId.BIVENS:
            return self.check_bivens(a)
        if identity is IdentityId.THEOREM2:
            return self.check_theorem2(a)
        if identity is IdentityId.THEOREM2_FREE:
            return self.check_theorem2_free(a)
        if identity is IdentityId.GAUSS_BONNET:
            return self.check_gauss_bonnet()
        if identity is IdentityId.FRAME_SUM:
            return self.check_frame_sum()
        if identity is IdentityId.RECURSION:
            return self.check_recursion(a, 2 if m is None else m)
        return self.check_closed_form(a, 2 if m is None else m)


@dataclass
class CalibrationResult:
    """
    Fitted Gauss-Bonnet constants with their diagnostics.

    Attributes:
        n: Dimension
        k: Curvature of the fitting space form
        fit_radii: Radii of the geodesic spheres the constants were fitted on
        c: Fitted constants c_1..c_{n/2}
        condition: Condition number of the fitting system
        fit_residuals: Row residuals of the fitting system
        validation: Gauss-Bonnet reports on held-out shapes
    """
    n: int
    k: float
    fit_radii: List[float]
    c: List[float]
    condition: float
    fit_residuals: List[float]
    validation: List[IdentityReport]

    @property
    def passed(self) -> bool:
        return all(report.passed for report in self.validation)

    def to_constants(self) -> GaussBonnetConstants:
        return GaussBonnetConstants(n=self.n, c=list(self.c), k_independent=self.passed)

    def to_dict(self) -> dict:
        return {
            "kind": "calibration",
            "n": self.n,
            "k": self.k,
            "fit_radii": list(self.fit_radii),
            "c": list(self.c),
            "condition": self.condition,
            "fit_residuals": list(self.fit_residuals),
            "validation": [report.to_dict() for report in self.validation],
            "pass": self.passed,
        }


def geodesic_sphere(n: int, k: float, rho: float) -> Shape:
    """Geodesic sphere of radius rho in the space form of curvature k != 0."""
    if k > 0:
        return geodesic_sphere_s(n=n, k=k, rho=rho)
    if k < 0:
        return geodesic_sphere_h(n=n, k=k, rho=rho)
    raise ContractViolation("Geodesic spheres for calibration need k != 0")


def default_radii(n: int, k: float) -> List[float]:
    """n/2 + 1 radii spread over the valid range of the space form."""
    scale = 1.0 / math.sqrt(abs(k))
    count = n // 2 + 1
    if k > 0:
        return [math.pi * scale * (j + 1) / (count + 3) + 0.1 * scale for j in range(count)]
    return [scale * (0.5 + 0.5 * j) for j in range(count)]


def validation_shape(n: int, k: float) -> Shape:
    """A non-umbilic shape of the same space form for transfer validation."""
    if k > 0:
        if n == 2:
            return clifford_torus_s3(alpha=math.pi / 5, k=k)
        if n == 4:
            return tube_s5(alpha=math.pi / 5, k=k)
        axes = [(0.2 + 0.5 * j / n) / math.sqrt(k) for j in range(n + 1)]
        return ellipsoid_s(semi_axes=axes, k=k)
    axes = [(0.4 + 0.6 * j / n) / math.sqrt(-k) for j in range(n + 1)]
    return ellipsoid_h(semi_axes=axes, k=k)


def _opposite_sphere(n: int, k: float) -> Shape:
    scale = 1.0 / math.sqrt(abs(k))
    if k > 0:
        return geodesic_sphere_h(n=n, k=-k, rho=0.75 * scale)
    return geodesic_sphere_s(n=n, k=-k, rho=math.pi * scale / 3.0)


def calibrate_gb_constants(n: int, k: float, radii: Optional[Sequence[float]] = None, nodes_per_axis=None,
                           threads: Optional[int] = None,
                           validation_tol: float = DEFAULT_VALIDATION_TOL) -> CalibrationResult:
    """
    Fit the Gauss-Bonnet constants c_1..c_{n/2} on geodesic spheres.

    On a geodesic sphere (chi = 2) the relation
        sum_i c_i k^i int K_{n-2i} = vol S^n - int G
    is linear in c. The first n/2 radii form the fitting system (solved in
    the least-squares sense); the remaining radii, one non-umbilic shape of
    the same space form and one geodesic sphere of the opposite curvature
    sign are checked with the fitted constants.

    Args:
        n: Even dimension
        k: Nonzero curvature
        radii: At least n/2 distinct radii (default: default_radii)
        nodes_per_axis: Quadrature nodes per axis
        threads: Worker threads
        validation_tol: Relative tolerance of the validation checks

    Returns:
        CalibrationResult
    """
    if n < 2 or n % 2:
        raise ContractViolation(f"Calibration needs even n >= 2, got n = {n}")
    if k == 0:
        raise ContractViolation("Calibration needs k != 0")
    radii = list(default_radii(n, k) if radii is None else radii)
    half = n // 2
    if len(set(radii)) < half or len(radii) < half:
        raise ContractViolation(f"Need at least {half} distinct radii, got {radii}")
    fit_radii, held_out = radii[:half], radii[half:]
    if len(set(fit_radii)) < half:
        raise ContractViolation(f"Fitting radii must be distinct, got {fit_radii}")

    logger.info(f"Calibrating n={n} constants in k={k:g} on radii {fit_radii}, holding out {held_out}")
    rows = []
    rhs = []
    for rho in fit_radii:
        shape = geodesic_sphere(n, k, rho)
        integrator = SurfaceIntegrator(shape, nodes_per_axis, threads=threads)
        sample = integrator.sample()
        rows.append([k ** i * sample.integrate(sample.K[:, n - 2 * i]) for i in range(1, half + 1)])
        rhs.append(volume_unit_sphere(n) / 2.0 * shape.euler_characteristic - sample.integrate(sample.K[:, n]))
    A = np.asarray(rows)
    b = np.asarray(rhs)
    condition = float(np.linalg.cond(A))
    if not np.isfinite(condition) or condition > CALIBRATION_CONDITION_LIMIT:
        raise CalibrationError(f"Calibration system is ill-conditioned (condition {condition:.3e}); "
                               f"choose radii further apart")
    c, *_ = linalg.lstsq(A, b)
    residuals = (A @ c - b).tolist()
    constants = GaussBonnetConstants(n=n, c=c.tolist())
    logger.info(f"Fitted c = {constants.c} (condition {condition:.3e})")

    validation_shapes = [geodesic_sphere(n, k, rho) for rho in held_out]
    validation_shapes += [validation_shape(n, k), _opposite_sphere(n, k)]
    validation = []
    for shape in validation_shapes:
        checker = IdentityChecker(shape, nodes_per_axis, tol_rel=validation_tol, constants=constants, threads=threads)
        validation.append(checker.check_gauss_bonnet())

    return CalibrationResult(
        n=n, k=k, fit_radii=fit_radii, c=constants.c, condition=condition,
        fit_residuals=residuals, validation=validation,
    )
