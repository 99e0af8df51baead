"""
Second-order jets of chart maps.

A chart map is evaluated on hyper-dual numbers a + b e1 + c e2 + d e1e2
(e1^2 = e2^2 = 0): seeding e1 along axis i and e2 along axis j returns the
value, both first partials and the mixed partial d_i d_j exactly, without
truncation error. Components may be NumPy arrays, so one evaluation
processes a whole batch of parameter points.

Chart maps must be written with the elementary functions of this module
(`sin`, `cos`, `sqrt`, ...), which dispatch to NumPy for plain numbers and
arrays and propagate jets for HyperDual inputs.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from .errors import DomainError, EvaluationError, ContractViolation

logger = logging.getLogger(__name__)


class HyperDual:
    """
    Hyper-dual scalar (or array of scalars) for exact second derivatives.

    Attributes:
        real: Value
        eps1: Derivative along the first seeded direction
        eps2: Derivative along the second seeded direction
        eps12: Mixed second derivative
    """

    __slots__ = ("real", "eps1", "eps2", "eps12")
    # let NumPy defer to our reflected operators
    __array_ufunc__ = None

    def __init__(self, real, eps1=0.0, eps2=0.0, eps12=0.0):
        self.real = real
        self.eps1 = eps1
        self.eps2 = eps2
        self.eps12 = eps12

    def __repr__(self) -> str:
        return f"HyperDual({self.real!r}, {self.eps1!r}, {self.eps2!r}, {self.eps12!r})"

    @staticmethod
    def _lift(other) -> "HyperDual":
        if isinstance(other, HyperDual):
            return other
        return HyperDual(other)

    def chain(self, f, df, d2f) -> "HyperDual":
        """Apply a scalar function given its value, first and second derivative at self.real."""
        return HyperDual(
            f,
            df * self.eps1,
            df * self.eps2,
            df * self.eps12 + d2f * self.eps1 * self.eps2,
        )

    def __neg__(self) -> "HyperDual":
        return HyperDual(-self.real, -self.eps1, -self.eps2, -self.eps12)

    def __pos__(self) -> "HyperDual":
        return self

    def __add__(self, other) -> "HyperDual":
        o = self._lift(other)
        return HyperDual(self.real + o.real, self.eps1 + o.eps1, self.eps2 + o.eps2, self.eps12 + o.eps12)

    __radd__ = __add__

    def __sub__(self, other) -> "HyperDual":
        o = self._lift(other)
        return HyperDual(self.real - o.real, self.eps1 - o.eps1, self.eps2 - o.eps2, self.eps12 - o.eps12)

    def __rsub__(self, other) -> "HyperDual":
        return self._lift(other) - self

    def __mul__(self, other) -> "HyperDual":
        if not isinstance(other, HyperDual):
            return HyperDual(self.real * other, self.eps1 * other, self.eps2 * other, self.eps12 * other)
        return HyperDual(
            self.real * other.real,
            self.real * other.eps1 + self.eps1 * other.real,
            self.real * other.eps2 + self.eps2 * other.real,
            self.real * other.eps12 + self.eps1 * other.eps2 + self.eps2 * other.eps1 + self.eps12 * other.real,
        )

    __rmul__ = __mul__

    def reciprocal(self) -> "HyperDual":
        inv = 1.0 / self.real
        return self.chain(inv, -inv * inv, 2.0 * inv * inv * inv)

    def __truediv__(self, other) -> "HyperDual":
        if not isinstance(other, HyperDual):
            return self * (1.0 / other)
        return self * other.reciprocal()

    def __rtruediv__(self, other) -> "HyperDual":
        return self.reciprocal() * other

    def __pow__(self, p) -> "HyperDual":
        if isinstance(p, HyperDual):
            return exp(p * log(self))
        if isinstance(p, int) and p >= 0:
            result = HyperDual(np.ones_like(self.real, dtype=float))
            for _ in range(p):
                result = result * self
            return result
        r = self.real
        return self.chain(r ** p, p * r ** (p - 1), p * (p - 1) * r ** (p - 2))

    def __getitem__(self, index) -> "HyperDual":
        return HyperDual(*(np.asarray(part)[index] if np.ndim(part) else part for part in self._parts()))

    def sum(self, axis=None) -> "HyperDual":
        return HyperDual(*(np.sum(part, axis=axis) for part in self._broadcast_parts()))

    def _parts(self):
        return (self.real, self.eps1, self.eps2, self.eps12)

    def _broadcast_parts(self):
        shape = np.broadcast_shapes(*(np.shape(part) for part in self._parts()))
        return tuple(np.broadcast_to(part, shape) for part in self._parts())


def _unary(x, f, df, d2f):
    if isinstance(x, HyperDual):
        r = x.real
        return x.chain(f(r), df(r), d2f(r))
    return f(x)


def sin(x):
    return _unary(x, np.sin, np.cos, lambda r: -np.sin(r))


def cos(x):
    return _unary(x, np.cos, lambda r: -np.sin(r), lambda r: -np.cos(r))


def tan(x):
    return _unary(x, np.tan, lambda r: 1.0 / np.cos(r) ** 2, lambda r: 2.0 * np.tan(r) / np.cos(r) ** 2)


def sinh(x):
    return _unary(x, np.sinh, np.cosh, np.sinh)


def cosh(x):
    return _unary(x, np.cosh, np.sinh, np.cosh)


def exp(x):
    return _unary(x, np.exp, np.exp, np.exp)


def log(x):
    return _unary(x, np.log, lambda r: 1.0 / r, lambda r: -1.0 / r ** 2)


def sqrt(x):
    return _unary(x, np.sqrt, lambda r: 0.5 / np.sqrt(r), lambda r: -0.25 / r ** 1.5)


@dataclass(frozen=True)
class Chart:
    """
    A coordinate chart u in D (axis-aligned box) -> L_{n+1}(k).

    Attributes:
        lower: Lower bound per axis
        upper: Upper bound per axis
        periodic: Per-axis periodicity flags (periodic axes wrap, any value is accepted)
        map: Pure function of n parameters returning the m ambient components
        weight: Partition-of-unity weight, None meaning 1 everywhere
        normal_hint: Vector field transverse to the hypersurface pointing to the
            side the "+1" orientation normal should point to
    """
    lower: Tuple[float, ...]
    upper: Tuple[float, ...]
    periodic: Tuple[bool, ...]
    map: Callable[..., Sequence]
    weight: Optional[Callable[..., npt.ArrayLike]] = None
    normal_hint: Optional[Callable[..., Sequence]] = None

    def __post_init__(self):
        if not (len(self.lower) == len(self.upper) == len(self.periodic)):
            raise ContractViolation("Chart bounds and periodicity flags must have the same length")
        for lo, hi in zip(self.lower, self.upper):
            if not lo < hi:
                raise ContractViolation(f"Empty chart interval ({lo}, {hi})")

    @property
    def n(self) -> int:
        return len(self.lower)

    @property
    def widths(self) -> npt.NDArray[np.float64]:
        return np.asarray(self.upper) - np.asarray(self.lower)

    def contains(self, u: npt.ArrayLike) -> npt.NDArray[np.bool_]:
        """Which parameter points lie strictly inside the (non-periodic) domain."""
        u = np.atleast_2d(np.asarray(u, dtype=float))
        inside = np.isfinite(u).all(axis=-1)
        for axis in range(self.n):
            if self.periodic[axis]:
                continue
            inside &= (u[:, axis] > self.lower[axis]) & (u[:, axis] < self.upper[axis])
        return inside

    def weights_at(self, u: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        """Partition-of-unity weight at a batch of parameter points."""
        if self.weight is None:
            return np.ones(u.shape[0])
        return np.broadcast_to(np.asarray(self.weight(*u.T), dtype=float), (u.shape[0],))

    def hint_at(self, u: npt.NDArray[np.float64]) -> Optional[npt.NDArray[np.float64]]:
        """Orientation hint vectors at a batch of parameter points."""
        if self.normal_hint is None:
            return None
        return _stack_components(self.normal_hint(*u.T), u.shape[0])


@dataclass
class Jet2:
    """
    Position and exact first/second partials of a chart map.

    Shapes carry an optional leading batch axis: x (..., m),
    dx (..., n, m), d2x (..., n, n, m).
    """
    x: npt.NDArray[np.float64]
    dx: npt.NDArray[np.float64]
    d2x: npt.NDArray[np.float64]

    @property
    def n(self) -> int:
        return self.dx.shape[-2]

    @property
    def m(self) -> int:
        return self.x.shape[-1]


def _stack_components(components: Sequence, count: int) -> npt.NDArray[np.float64]:
    return np.stack([np.broadcast_to(np.asarray(c, dtype=float), (count,)) for c in components], axis=-1)


def _part(component, name: str, count: int) -> npt.NDArray[np.float64]:
    value = getattr(component, name) if isinstance(component, HyperDual) else (component if name == "real" else 0.0)
    return np.broadcast_to(np.asarray(value, dtype=float), (count,))


def _prepare(chart: Chart, u: npt.ArrayLike) -> Tuple[npt.NDArray[np.float64], bool]:
    u = np.asarray(u, dtype=float)
    single = u.ndim == 1
    u = np.atleast_2d(u)
    if u.shape[-1] != chart.n:
        raise ContractViolation(f"Chart has {chart.n} parameters, got points with {u.shape[-1]}")
    inside = chart.contains(u)
    if not inside.all():
        bad = u[~inside][0]
        raise DomainError(f"Parameter point {bad.tolist()} is outside the chart domain")
    return u, single


def _check_finite(array: np.ndarray, u: np.ndarray):
    finite = np.isfinite(array).reshape(array.shape[0], -1).all(axis=1)
    if not finite.all():
        bad = u[~finite][0]
        raise EvaluationError(f"Chart map returned non-finite values at {bad.tolist()}")


def eval_jet2(chart: Chart, u: npt.ArrayLike) -> Jet2:
    """
    Evaluate a chart map with exact first and second partials.

    One hyper-dual evaluation per unordered axis pair (i <= j); the mirror
    entry d2x[j][i] is a copy, so mixed partials are bit-exactly symmetric.

    Args:
        chart: Chart whose map is written with this module's functions
        u: Parameter point (n,) or batch of points (N, n)

    Returns:
        Jet2 with a leading batch axis iff u was a batch
    """
    u, single = _prepare(chart, u)
    count, n = u.shape
    x = None
    dx = None
    d2x = None
    for i in range(n):
        for j in range(i, n):
            args = [
                HyperDual(u[:, axis], 1.0 if axis == i else 0.0, 1.0 if axis == j else 0.0, 0.0)
                for axis in range(n)
            ]
            components = list(chart.map(*args))
            if x is None:
                m = len(components)
                x = np.stack([_part(c, "real", count) for c in components], axis=-1)
                dx = np.zeros((count, n, m))
                d2x = np.zeros((count, n, n, m))
            if i == j:
                dx[:, i, :] = np.stack([_part(c, "eps1", count) for c in components], axis=-1)
            mixed = np.stack([_part(c, "eps12", count) for c in components], axis=-1)
            d2x[:, i, j, :] = mixed
            d2x[:, j, i, :] = mixed

    _check_finite(x, u)
    _check_finite(dx, u)
    _check_finite(d2x, u)

    if single:
        return Jet2(x=x[0], dx=dx[0], d2x=d2x[0])
    return Jet2(x=x, dx=dx, d2x=d2x)


def eval_jet2_fd(chart: Chart, u: npt.ArrayLike, scale: float = 1.0) -> Jet2:
    """
    Finite-difference jet for cross-checking eval_jet2.

    Central differences with step cbrt(eps)*scale for first partials and
    eps**(1/4)*scale for second partials.

    Args:
        chart: Chart to differentiate
        u: Parameter point (n,) or batch (N, n), not closer than the step to the boundary
        scale: Typical parameter scale

    Returns:
        Approximate Jet2
    """
    u, single = _prepare(chart, u)
    count, n = u.shape
    eps = np.finfo(float).eps
    h1 = np.cbrt(eps) * scale
    h2 = eps ** 0.25 * scale

    def f(points):
        return _stack_components(chart.map(*points.T), count)

    x = f(u)
    m = x.shape[-1]
    dx = np.zeros((count, n, m))
    d2x = np.zeros((count, n, n, m))
    basis = np.eye(n)
    for i in range(n):
        ei = basis[i]
        dx[:, i, :] = (f(u + h1 * ei) - f(u - h1 * ei)) / (2.0 * h1)
        d2x[:, i, i, :] = (f(u + h2 * ei) - 2.0 * x + f(u - h2 * ei)) / (h2 * h2)
        for j in range(i + 1, n):
            ej = basis[j]
            mixed = (
                f(u + h2 * (ei + ej)) - f(u + h2 * (ei - ej)) - f(u - h2 * (ei - ej)) + f(u - h2 * (ei + ej))
            ) / (4.0 * h2 * h2)
            d2x[:, i, j, :] = mixed
            d2x[:, j, i, :] = mixed

    _check_finite(x, u)
    if single:
        return Jet2(x=x[0], dx=dx[0], d2x=d2x[0])
    return Jet2(x=x, dx=dx, d2x=d2x)


def relative_jet_difference(a: Jet2, b: Jet2) -> float:
    """Largest entry-wise difference of two jets relative to the jets' magnitude."""
    worst = 0.0
    for left, right in ((a.x, b.x), (a.dx, b.dx), (a.d2x, b.d2x)):
        magnitude = max(1.0, float(np.max(np.abs(left))))
        worst = max(worst, float(np.max(np.abs(left - right))) / magnitude)
    return worst


def is_affine(jet: Jet2) -> bool:
    """True if every second partial is exactly zero."""
    return bool(np.all(jet.d2x == 0.0))
