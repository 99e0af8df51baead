"""
Catalog of closed oriented test hypersurfaces in the three space forms.

Every shape is covered by one chart: polar coordinates on spheres (singular
only on a measure-zero set that quadrature never touches) or periodic
coordinates on tori and tubes. Each chart carries an orientation hint that
points to the "outward" side; with orientation +1 round spheres therefore
have negative principal curvatures.
"""

import inspect
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

from . import jets
from .ambient import SpaceForm, volume_unit_sphere
from .errors import ContractViolation, ParameterError
from .jets import Chart

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Shape:
    """
    A closed oriented hypersurface given by a chart atlas.

    Attributes:
        name: Catalog name
        form: Space form the hypersurface lives in
        charts: Charts covering the hypersurface up to measure zero
        euler_characteristic: Topological Euler characteristic
        orientation: +1 (outward) or -1
        params: Construction parameters, echoed into reports
        reference_data: Analytic values (area, constant principal curvature, ...)
    """
    name: str
    form: SpaceForm
    charts: List[Chart]
    euler_characteristic: int
    orientation: int = 1
    params: Dict[str, object] = field(default_factory=dict)
    reference_data: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        # A hintless chart picks its normal sign point by point.
        for index, chart in enumerate(self.charts):
            if chart.normal_hint is None:
                raise ContractViolation(f"{self.name}: chart {index} has no normal_hint; "
                                        f"the normal sign would not be consistent across the shape")

    @property
    def n(self) -> int:
        return self.form.n

    @property
    def k(self) -> float:
        return self.form.k

    def describe(self) -> str:
        args = ", ".join(f"{key}={value}" for key, value in self.params.items())
        return f"{self.name}({args}) in {self.form.describe()}"


def euler_characteristic(shape: Shape) -> int:
    """The stored topological invariant of a catalog shape."""
    return shape.euler_characteristic


def _unit_sphere(angles: Sequence) -> list:
    """
    Polar parametrization of S^d from angles (theta_1..theta_{d-1}, phi).

    d = 2 gives (sin t cos p, sin t sin p, cos t).
    """
    *thetas, phi = angles
    components = [jets.cos(phi), jets.sin(phi)]
    for theta in reversed(thetas):
        s = jets.sin(theta)
        components = [s * c for c in components] + [jets.cos(theta)]
    return components


def _polar_box(d: int, extra_periodic: int = 0):
    """Domain of the polar chart of S^d, optionally followed by periodic circle axes."""
    lower = (0.0,) * (d - 1) + (0.0,) * (1 + extra_periodic)
    upper = (math.pi,) * (d - 1) + (TWO_PI,) * (1 + extra_periodic)
    periodic = (False,) * (d - 1) + (True,) * (1 + extra_periodic)
    return lower, upper, periodic


def _check_orientation(orientation: int):
    if orientation not in (1, -1):
        raise ParameterError(f"Orientation must be +1 or -1, got {orientation}")


def _check_dimension(n: int):
    if n < 2:
        raise ParameterError(f"Hypersurface dimension must be at least 2, got {n}")


def sphere_rn(n: int = 2, rho: float = 1.0, orientation: int = 1) -> Shape:
    """Round sphere of radius rho in R^{n+1}."""
    _check_dimension(n)
    _check_orientation(orientation)
    if not rho > 0:
        raise ParameterError(f"Radius must be positive, got {rho}")

    def chart_map(*u):
        return [rho * c for c in _unit_sphere(u)]

    lower, upper, periodic = _polar_box(n)
    chart = Chart(lower, upper, periodic, chart_map, normal_hint=lambda *u: _unit_sphere(u))
    return Shape(
        name="sphere_rn",
        form=SpaceForm(k=0.0, n=n),
        charts=[chart],
        euler_characteristic=2 if n % 2 == 0 else 0,
        orientation=orientation,
        params={"n": n, "rho": rho},
        reference_data={
            "area": volume_unit_sphere(n) * rho ** n,
            "principal_curvature": -orientation / rho,
        },
    )


def ellipsoid_rn(semi_axes: Sequence[float] = (1.0, 1.0, 2.0), orientation: int = 1) -> Shape:
    """Axis-aligned ellipsoid in R^{n+1} with the given n+1 semi-axes."""
    semi_axes = tuple(float(a) for a in semi_axes)
    n = len(semi_axes) - 1
    _check_dimension(n)
    _check_orientation(orientation)
    if any(a <= 0 for a in semi_axes):
        raise ParameterError(f"Semi-axes must be positive, got {semi_axes}")

    def chart_map(*u):
        return [a * c for a, c in zip(semi_axes, _unit_sphere(u))]

    def hint(*u):
        return [c / a for a, c in zip(semi_axes, _unit_sphere(u))]

    lower, upper, periodic = _polar_box(n)
    reference = {}
    if len(set(semi_axes)) == 1:
        reference["area"] = volume_unit_sphere(n) * semi_axes[0] ** n
    return Shape(
        name="ellipsoid_rn",
        form=SpaceForm(k=0.0, n=n),
        charts=[Chart(lower, upper, periodic, chart_map, normal_hint=hint)],
        euler_characteristic=2 if n % 2 == 0 else 0,
        orientation=orientation,
        params={"semi_axes": list(semi_axes)},
        reference_data=reference,
    )


def torus_rev_r3(R: float = 2.0, r: float = 1.0, orientation: int = 1) -> Shape:
    """Torus of revolution in R^3 with major radius R and minor radius r."""
    _check_orientation(orientation)
    if not R > r > 0:
        raise ParameterError(f"Torus needs R > r > 0, got R={R}, r={r}")

    def chart_map(v, t):
        ring = R + r * jets.cos(v)
        return [ring * jets.cos(t), ring * jets.sin(t), r * jets.sin(v)]

    def hint(v, t):
        return [jets.cos(v) * jets.cos(t), jets.cos(v) * jets.sin(t), jets.sin(v)]

    chart = Chart((0.0, 0.0), (TWO_PI, TWO_PI), (True, True), chart_map, normal_hint=hint)
    return Shape(
        name="torus_rev_r3",
        form=SpaceForm(k=0.0, n=2),
        charts=[chart],
        euler_characteristic=0,
        orientation=orientation,
        params={"R": R, "r": r},
        reference_data={"area": 4.0 * math.pi ** 2 * R * r},
    )


def tube_r5(r: float = 0.5, orientation: int = 1) -> Shape:
    """Tube of radius r < 1 around the unit circle of the (x1, x2)-plane in R^5 (an S^1 x S^3)."""
    _check_orientation(orientation)
    if not 0 < r < 1:
        raise ParameterError(f"Tube radius must lie in (0, 1), got {r}")

    def chart_map(t1, t2, p, t):
        w = _unit_sphere((t1, t2, p))
        ring = 1.0 + r * w[0]
        return [ring * jets.cos(t), ring * jets.sin(t), r * w[1], r * w[2], r * w[3]]

    def hint(t1, t2, p, t):
        w = _unit_sphere((t1, t2, p))
        return [w[0] * jets.cos(t), w[0] * jets.sin(t), w[1], w[2], w[3]]

    lower, upper, periodic = _polar_box(3, extra_periodic=1)
    return Shape(
        name="tube_r5",
        form=SpaceForm(k=0.0, n=4),
        charts=[Chart(lower, upper, periodic, chart_map, normal_hint=hint)],
        euler_characteristic=0,
        orientation=orientation,
        params={"r": r},
        reference_data={"area": 4.0 * math.pi ** 3 * r ** 3},
    )


def geodesic_sphere_s(n: int = 2, k: float = 1.0, rho: float = math.pi / 4, orientation: int = 1) -> Shape:
    """Geodesic sphere of intrinsic radius rho in S^{n+1}(k), centred at the pole e_0."""
    _check_dimension(n)
    _check_orientation(orientation)
    if not k > 0:
        raise ParameterError(f"Spherical space form needs k > 0, got {k}")
    s = math.sqrt(k)
    if not 0 < rho < math.pi / s:
        raise ParameterError(f"Radius must lie in (0, pi/sqrt(k)) = (0, {math.pi / s:.6g}), got {rho}")
    c, sn = math.cos(s * rho), math.sin(s * rho)

    def chart_map(*u):
        return [c / s] + [(sn / s) * w for w in _unit_sphere(u)]

    def hint(*u):
        return [-sn] + [c * w for w in _unit_sphere(u)]

    lower, upper, periodic = _polar_box(n)
    return Shape(
        name="geodesic_sphere_s",
        form=SpaceForm(k=k, n=n),
        charts=[Chart(lower, upper, periodic, chart_map, normal_hint=hint)],
        euler_characteristic=2 if n % 2 == 0 else 0,
        orientation=orientation,
        params={"n": n, "k": k, "rho": rho},
        reference_data={
            "area": volume_unit_sphere(n) * (sn / s) ** n,
            "principal_curvature": -orientation * s * c / sn,
        },
    )


def geodesic_sphere_h(n: int = 2, k: float = -1.0, rho: float = 1.0, orientation: int = 1) -> Shape:
    """Geodesic sphere of radius rho in H^{n+1}(k), centred at the hyperboloid vertex."""
    _check_dimension(n)
    _check_orientation(orientation)
    if not k < 0:
        raise ParameterError(f"Hyperbolic space form needs k < 0, got {k}")
    if not rho > 0:
        raise ParameterError(f"Radius must be positive, got {rho}")
    s = math.sqrt(-k)
    ch, sh = math.cosh(s * rho), math.sinh(s * rho)

    def chart_map(*u):
        return [ch / s] + [(sh / s) * w for w in _unit_sphere(u)]

    def hint(*u):
        return [sh] + [ch * w for w in _unit_sphere(u)]

    lower, upper, periodic = _polar_box(n)
    return Shape(
        name="geodesic_sphere_h",
        form=SpaceForm(k=k, n=n),
        charts=[Chart(lower, upper, periodic, chart_map, normal_hint=hint)],
        euler_characteristic=2 if n % 2 == 0 else 0,
        orientation=orientation,
        params={"n": n, "k": k, "rho": rho},
        reference_data={
            "area": volume_unit_sphere(n) * (sh / s) ** n,
            "principal_curvature": -orientation * s * ch / sh,
        },
    )


def clifford_torus_s3(alpha: float = math.pi / 4, k: float = 1.0, orientation: int = 1) -> Shape:
    """Flat torus S^1(cos a) x S^1(sin a) in S^3(k) (radii scaled by 1/sqrt(k))."""
    _check_orientation(orientation)
    if not k > 0:
        raise ParameterError(f"Spherical space form needs k > 0, got {k}")
    if not 0 < alpha < math.pi / 2:
        raise ParameterError(f"Angle must lie in (0, pi/2), got {alpha}")
    s = math.sqrt(k)
    ca, sa = math.cos(alpha), math.sin(alpha)

    def chart_map(t1, t2):
        return [ca / s * jets.cos(t1), ca / s * jets.sin(t1), sa / s * jets.cos(t2), sa / s * jets.sin(t2)]

    def hint(t1, t2):
        return [sa * jets.cos(t1), sa * jets.sin(t1), -ca * jets.cos(t2), -ca * jets.sin(t2)]

    chart = Chart((0.0, 0.0), (TWO_PI, TWO_PI), (True, True), chart_map, normal_hint=hint)
    return Shape(
        name="clifford_torus_s3",
        form=SpaceForm(k=k, n=2),
        charts=[chart],
        euler_characteristic=0,
        orientation=orientation,
        params={"alpha": alpha, "k": k},
        reference_data={"area": 4.0 * math.pi ** 2 * ca * sa / k},
    )


def tube_s5(alpha: float = math.pi / 4, k: float = 1.0, orientation: int = 1) -> Shape:
    """S^1(cos a) x S^3(sin a) in S^5(k): the tube of radius a about a great circle."""
    _check_orientation(orientation)
    if not k > 0:
        raise ParameterError(f"Spherical space form needs k > 0, got {k}")
    if not 0 < alpha < math.pi / 2:
        raise ParameterError(f"Angle must lie in (0, pi/2), got {alpha}")
    s = math.sqrt(k)
    ca, sa = math.cos(alpha), math.sin(alpha)

    def chart_map(t1, t2, p, t):
        w = _unit_sphere((t1, t2, p))
        return [ca / s * jets.cos(t), ca / s * jets.sin(t)] + [sa / s * c for c in w]

    def hint(t1, t2, p, t):
        w = _unit_sphere((t1, t2, p))
        return [sa * jets.cos(t), sa * jets.sin(t)] + [-ca * c for c in w]

    lower, upper, periodic = _polar_box(3, extra_periodic=1)
    return Shape(
        name="tube_s5",
        form=SpaceForm(k=k, n=4),
        charts=[Chart(lower, upper, periodic, chart_map, normal_hint=hint)],
        euler_characteristic=0,
        orientation=orientation,
        params={"alpha": alpha, "k": k},
        reference_data={"area": 4.0 * math.pi ** 3 * ca * sa ** 3 / k ** 2},
    )


def _graph_axes(semi_axes: Sequence[float]) -> tuple:
    semi_axes = tuple(float(a) for a in semi_axes)
    _check_dimension(len(semi_axes) - 1)
    if any(a <= 0 for a in semi_axes):
        raise ParameterError(f"Semi-axes must be positive, got {semi_axes}")
    return semi_axes


def ellipsoid_s(semi_axes: Sequence[float] = (0.3, 0.4, 0.5), k: float = 1.0, orientation: int = 1) -> Shape:
    """
    Euclidean ellipsoid in the tangent space at the pole of S^{n+1}(k), lifted as a graph.

    x = (sqrt(1/k - |y|^2), y) with y on the ellipsoid; needs every semi-axis below 1/sqrt(k).
    """
    semi_axes = _graph_axes(semi_axes)
    _check_orientation(orientation)
    if not k > 0:
        raise ParameterError(f"Spherical space form needs k > 0, got {k}")
    if max(semi_axes) >= 1.0 / math.sqrt(k):
        raise ParameterError(f"Semi-axes must stay below 1/sqrt(k) = {1.0 / math.sqrt(k):.6g}")
    n = len(semi_axes) - 1

    def lift(u):
        y = [a * c for a, c in zip(semi_axes, _unit_sphere(u))]
        ysq = sum(c * c for c in y)
        return y, ysq, jets.sqrt(1.0 / k - ysq)

    def chart_map(*u):
        y, _, height = lift(u)
        return [height] + y

    def hint(*u):
        y, ysq, height = lift(u)
        return [-ysq / height] + y

    lower, upper, periodic = _polar_box(n)
    return Shape(
        name="ellipsoid_s",
        form=SpaceForm(k=k, n=n),
        charts=[Chart(lower, upper, periodic, chart_map, normal_hint=hint)],
        euler_characteristic=2 if n % 2 == 0 else 0,
        orientation=orientation,
        params={"semi_axes": list(semi_axes), "k": k},
    )


def ellipsoid_h(semi_axes: Sequence[float] = (0.5, 0.7, 1.0), k: float = -1.0, orientation: int = 1) -> Shape:
    """
    Euclidean ellipsoid in the tangent space at the vertex of H^{n+1}(k), lifted as a graph.

    x = (sqrt(-1/k + |y|^2), y) with y on the ellipsoid.
    """
    semi_axes = _graph_axes(semi_axes)
    _check_orientation(orientation)
    if not k < 0:
        raise ParameterError(f"Hyperbolic space form needs k < 0, got {k}")
    n = len(semi_axes) - 1

    def lift(u):
        y = [a * c for a, c in zip(semi_axes, _unit_sphere(u))]
        ysq = sum(c * c for c in y)
        return y, ysq, jets.sqrt(ysq - 1.0 / k)

    def chart_map(*u):
        y, _, height = lift(u)
        return [height] + y

    def hint(*u):
        y, ysq, height = lift(u)
        return [ysq / height] + y

    lower, upper, periodic = _polar_box(n)
    return Shape(
        name="ellipsoid_h",
        form=SpaceForm(k=k, n=n),
        charts=[Chart(lower, upper, periodic, chart_map, normal_hint=hint)],
        euler_characteristic=2 if n % 2 == 0 else 0,
        orientation=orientation,
        params={"semi_axes": list(semi_axes), "k": k},
    )


@dataclass(frozen=True)
class CatalogEntry:
    """A named shape builder with its description."""
    name: str
    builder: Callable[..., Shape]
    description: str

    @property
    def defaults(self) -> Dict[str, object]:
        signature = inspect.signature(self.builder)
        return {name: p.default for name, p in signature.parameters.items() if name != "orientation"}


CATALOG: Dict[str, CatalogEntry] = {
    entry.name: entry for entry in (
        CatalogEntry("sphere_rn", sphere_rn, "Round sphere of radius rho in R^{n+1}, chi = 2"),
        CatalogEntry("ellipsoid_rn", ellipsoid_rn, "Axis-aligned ellipsoid in R^{n+1}, chi = 2"),
        CatalogEntry("torus_rev_r3", torus_rev_r3, "Torus of revolution (R, r) in R^3, chi = 0"),
        CatalogEntry("tube_r5", tube_r5, "Tube of radius r about a unit circle in R^5, chi = 0"),
        CatalogEntry("geodesic_sphere_s", geodesic_sphere_s, "Geodesic sphere of radius rho in S^{n+1}(k), chi = 2"),
        CatalogEntry("geodesic_sphere_h", geodesic_sphere_h, "Geodesic sphere of radius rho in H^{n+1}(k), chi = 2"),
        CatalogEntry("clifford_torus_s3", clifford_torus_s3, "Flat torus with radii (cos a, sin a) in S^3(k), chi = 0"),
        CatalogEntry("tube_s5", tube_s5, "S^1(cos a) x S^3(sin a) in S^5(k), chi = 0"),
        CatalogEntry("ellipsoid_s", ellipsoid_s, "Ellipsoidal graph over the pole of S^{n+1}(k), chi = 2"),
        CatalogEntry("ellipsoid_h", ellipsoid_h, "Ellipsoidal graph over the vertex of H^{n+1}(k), chi = 2"),
    )
}

# short names accepted wherever a catalog name is
SHAPE_ALIASES = {"torus_rev": "torus_rev_r3", "clifford_torus": "clifford_torus_s3"}


def make_shape(name: str, params: Optional[Dict[str, object]] = None) -> Shape:
    """
    Build a catalog shape by name.

    Args:
        name: Catalog name or alias
        params: Builder keyword arguments; None values fall back to defaults

    Returns:
        Shape
    """
    name = SHAPE_ALIASES.get(name, name)
    if name not in CATALOG:
        raise ParameterError(f"Unknown shape '{name}'; available: {', '.join(CATALOG)}")
    entry = CATALOG[name]
    accepted = set(entry.defaults) | {"orientation"}
    given = {key: value for key, value in (params or {}).items() if value is not None}
    unknown = set(given) - accepted
    if unknown:
        raise ParameterError(f"Shape '{name}' does not take {', '.join(sorted(unknown))}")
    shape = entry.builder(**given)
    logger.debug(f"Built {shape.describe()}")
    return shape
