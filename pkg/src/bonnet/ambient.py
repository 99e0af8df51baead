"""
Signed inner-product spaces L_{n+1}(k) and the standard embeddings of the
three space forms into them.

Flat space forms live in R^{n+1}, spheres S^{n+1}(k) in R^{n+2} and
hyperbolic spaces H^{n+1}(k) on the upper sheet of the hyperboloid
<x, x> = 1/k in Minkowski space R^{n+1,1}. The single minus sign of the
Minkowski form always sits on coordinate 0.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
import numpy.typing as npt
from scipy.special import gamma

from .errors import ContractViolation

logger = logging.getLogger(__name__)

AmbientVector = npt.NDArray[np.float64]

# |<a, a>| below this is treated as a null direction
NULL_TOLERANCE = 1e-12


@dataclass(frozen=True)
class Signature:
    """Signature of the ambient linear space: dimension and number of minus signs."""
    dim: int
    negatives: int = 0

    def __post_init__(self):
        if self.dim < 1:
            raise ContractViolation(f"Ambient dimension must be positive, got {self.dim}")
        if self.negatives not in (0, 1):
            raise ContractViolation(f"Only signatures with 0 or 1 negative sign are supported, got {self.negatives}")

    @property
    def metric(self) -> npt.NDArray[np.float64]:
        """Diagonal of the Gram matrix of the standard basis (eta)."""
        eta = np.ones(self.dim)
        if self.negatives:
            eta[0] = -1.0
        return eta


@dataclass(frozen=True)
class SpaceForm:
    """
    Simply connected space form N^{n+1}(k) standardly embedded in L_{n+1}(k).

    Attributes:
        k: Sectional curvature (1/length^2)
        n: Dimension of the hypersurfaces living in it
    """
    k: float
    n: int
    signature: Signature = field(init=False)

    def __post_init__(self):
        if self.n < 1:
            raise ContractViolation(f"Hypersurface dimension must be positive, got {self.n}")
        if not math.isfinite(self.k):
            raise ContractViolation(f"Sectional curvature must be finite, got {self.k}")
        dim = self.n + 1 if self.k == 0 else self.n + 2
        object.__setattr__(self, "signature", Signature(dim=dim, negatives=1 if self.k < 0 else 0))

    @property
    def dim(self) -> int:
        return self.signature.dim

    @property
    def is_flat(self) -> bool:
        return self.k == 0

    def describe(self) -> str:
        if self.k == 0:
            return f"R^{self.n + 1}"
        if self.k > 0:
            return f"S^{self.n + 1}({self.k:g})"
        return f"H^{self.n + 1}({self.k:g})"


def _check_conforms(u: np.ndarray, sig: Signature, name: str):
    if u.shape[-1] != sig.dim:
        raise ContractViolation(f"{name} has {u.shape[-1]} coordinates, signature expects {sig.dim}")


def inner_product(u: npt.ArrayLike, v: npt.ArrayLike, sig: Signature):
    """
    Signed inner product <u, v> of L_{n+1}(k).

    Broadcasts over leading axes, so stacks of vectors give stacks of
    products.

    Args:
        u: Ambient vector(s), last axis of length sig.dim
        v: Ambient vector(s), last axis of length sig.dim
        sig: Ambient signature

    Returns:
        Float for single vectors, array otherwise
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    _check_conforms(u, sig, "u")
    _check_conforms(v, sig, "v")
    result = np.einsum("...m,...m,m->...", u, v, sig.metric)
    return float(result) if np.ndim(result) == 0 else result


def validate_point(x: npt.ArrayLike, form: SpaceForm, tol: float) -> bool:
    """
    Check that x lies on the standard embedding of the space form.

    For k != 0 this is |<x, x> - 1/k| <= tol; for k < 0 the point must also
    be on the upper sheet (x_0 > 0). Flat space forms accept every point.

    Args:
        x: Ambient vector or stack of vectors
        form: Space form
        tol: Absolute tolerance on <x, x>

    Returns:
        True if every given point is on the space form
    """
    if tol <= 0:
        raise ContractViolation(f"Tolerance must be positive, got {tol}")
    x = np.asarray(x, dtype=float)
    _check_conforms(x, form.signature, "x")
    if form.k == 0:
        return True
    deviation = np.abs(inner_product(x, x, form.signature) - 1.0 / form.k)
    if np.any(deviation > tol):
        return False
    if form.k < 0 and np.any(x[..., 0] <= 0):
        return False
    return True


def normalize_direction(a: npt.ArrayLike, sig: Signature, allow_timelike: bool = False) -> Tuple[AmbientVector, float]:
    """
    Rescale a fixed direction so that |<a, a>| = 1.

    Args:
        a: Ambient vector with <a, a> != 0
        sig: Ambient signature
        allow_timelike: Accept <a, a> < 0 (only possible for Minkowski signatures)

    Returns:
        Tuple of (normalized vector, achieved <a, a>)
    """
    a = np.asarray(a, dtype=float)
    _check_conforms(a, sig, "a")
    aa = inner_product(a, a, sig)
    if abs(aa) < NULL_TOLERANCE:
        raise ContractViolation(f"Direction {a.tolist()} is null (<a,a> = {aa:.3e})")
    if aa < 0 and not allow_timelike:
        raise ContractViolation(f"Direction {a.tolist()} is timelike; pass allow_timelike to use it")
    a = a / math.sqrt(abs(aa))
    return a, inner_product(a, a, sig)


def random_direction(sig: Signature, rng: np.random.Generator, timelike: bool = False) -> Tuple[AmbientVector, float]:
    """
    Draw a direction uniformly on the Euclidean unit sphere of the ambient space.

    For Minkowski signatures draws are repeated until the vector has the
    requested causal type (spacelike by default), then the vector is
    normalized to |<a, a>| = 1.

    Args:
        sig: Ambient signature
        rng: Seeded generator
        timelike: Require <a, a> < 0 instead of > 0

    Returns:
        Tuple of (normalized vector, achieved <a, a>)
    """
    if timelike and not sig.negatives:
        raise ContractViolation("Timelike directions need a Minkowski signature")
    while True:
        v = rng.standard_normal(sig.dim)
        v /= np.linalg.norm(v)
        aa = inner_product(v, v, sig)
        if (aa < -0.05) if timelike else (aa > 0.05):
            return normalize_direction(v, sig, allow_timelike=timelike)


def orthonormal_frame(sig: Signature) -> Tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """
    Standard orthonormal frame E_1..E_m with its signature weights.

    Returns:
        Tuple of (frame as rows of an m x m array, weights eps_i = <E_i, E_i>)
    """
    return np.eye(sig.dim), sig.metric.copy()


def volume_unit_sphere(n: int) -> float:
    """Volume of the round unit sphere S^n(1)."""
    return float(2.0 * math.pi ** ((n + 1) / 2.0) / gamma((n + 1) / 2.0))


def parse_direction(coords: Optional[list], sig: Signature) -> AmbientVector:
    """Validate a user-supplied coordinate list against the signature."""
    if coords is None:
        raise ContractViolation("No direction coordinates given")
    a = np.asarray(coords, dtype=float)
    if a.ndim != 1:
        raise ContractViolation("Direction must be a flat list of coordinates")
    _check_conforms(a, sig, "a")
    return a
