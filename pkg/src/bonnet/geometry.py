"""
Pointwise extrinsic geometry of a chart point: fundamental forms, unit
normal, shape operator, Christoffel symbols and the residuals of the
structure equations.

Sign convention: dn = -sum h_ij theta_j e_i, so h_ij = <d_i d_j x, n> and
the outward unit sphere (n = x) has h = -g and principal curvatures -1.

All routines work on a single point or on a batch sharing a leading axis.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import numpy.typing as npt

from .ambient import SpaceForm
from .curvature import CurvaturePack, curvature_pack
from .errors import ContractViolation, DegenerateImmersionError, NumericalDegeneracyError, NumericalError
from .jets import Jet2

logger = logging.getLogger(__name__)

CONDITION_LIMIT = 1e12


@dataclass
class PointGeometry:
    """
    Geometry at one chart point (or a batch of points).

    Attributes:
        jet: Position and partials the geometry was computed from
        form: Ambient space form
        orientation: +1 or -1, multiplies the normal
        g: First fundamental form g_ij
        g_inv: Inverse of g
        chol: Lower Cholesky factor of g
        normal: Unit normal
        h: Second fundamental form h_ij = <d_i d_j x, normal>
        S: Shape operator g^{-1} h (S[j, i] = S^j_i)
        christoffel: Gamma^l_ij stored as christoffel[l, i, j]
        density: Volume density sqrt(det g)
    """
    jet: Jet2
    form: SpaceForm
    orientation: int
    g: npt.NDArray[np.float64]
    g_inv: npt.NDArray[np.float64]
    chol: npt.NDArray[np.float64]
    normal: npt.NDArray[np.float64]
    h: npt.NDArray[np.float64]
    S: npt.NDArray[np.float64]
    christoffel: npt.NDArray[np.float64]
    density: npt.NDArray[np.float64]

    @property
    def n(self) -> int:
        return self.jet.n

    @property
    def eta(self) -> npt.NDArray[np.float64]:
        return self.form.signature.metric


def _ip(u, v, eta):
    return np.einsum("...m,...m,m->...", u, v, eta)


def _constraints(jet: Jet2, form: SpaceForm) -> np.ndarray:
    """Rows the normal must be orthogonal to: d_i x, and x itself when k != 0."""
    if form.k == 0:
        return jet.dx
    return np.concatenate([jet.dx, jet.x[..., None, :]], axis=-2)


def _check_immersion(dx: np.ndarray):
    lengths = np.linalg.norm(dx, axis=-1)
    if np.any(lengths < np.finfo(float).tiny):
        raise DegenerateImmersionError("A tangent vector vanishes; the chart is not an immersion here")
    cond = np.linalg.cond(dx / lengths[..., None])
    worst = float(np.max(cond))
    if not np.isfinite(worst) or worst > CONDITION_LIMIT:
        raise DegenerateImmersionError(f"Tangent vectors are linearly dependent (condition {worst:.3e})")


def _gram(C: np.ndarray, eta: np.ndarray) -> np.ndarray:
    return np.einsum("...am,...bm,m->...ab", C, C, eta)


def _project_out(C: np.ndarray, eta: np.ndarray, seed: np.ndarray):
    """
    Signed projection of seed onto the orthogonal complement of the rows of C.

    The constraint rows are rescaled to unit Euclidean length first so the
    condition number reflects the geometry, not the chart parametrization.

    Returns:
        Tuple of (projected vector, rescaled constraints, Gram matrix, coefficients)
    """
    scale = np.linalg.norm(C, axis=-1, keepdims=True)
    Cs = C / scale
    W = _gram(Cs, eta)
    cond = np.linalg.cond(W)
    worst = float(np.max(cond))
    if not np.isfinite(worst) or worst > CONDITION_LIMIT:
        raise NumericalDegeneracyError(f"Normal solve is ill-conditioned (condition {worst:.3e})")
    b = np.einsum("...am,...m,m->...a", Cs, seed, eta)
    alpha = np.linalg.solve(W, b[..., None])[..., 0]
    p = seed - np.einsum("...a,...am->...m", alpha, Cs)
    return p, Cs, W, alpha


def _default_seed(C: np.ndarray, eta: np.ndarray) -> np.ndarray:
    """Standard basis vector with the largest projection onto the normal line."""
    m = C.shape[-1]
    best = None
    best_norm = None
    for e in np.eye(m):
        seed = np.broadcast_to(e, C.shape[:-2] + (m,))
        p, *_ = _project_out(C, eta, seed)
        norm = np.abs(_ip(p, p, eta))
        if best is None:
            best, best_norm = np.array(seed), norm
        else:
            better = norm > best_norm
            best = np.where(better[..., None], seed, best)
            best_norm = np.where(better, norm, best_norm)
    return best


def unit_normal(jet: Jet2, form: SpaceForm, orientation: int = 1,
                hint: Optional[npt.ArrayLike] = None) -> npt.NDArray[np.float64]:
    """
    Unit normal orthogonal (signed inner product) to every d_i x and to x when k != 0.

    Args:
        jet: Chart jet
        form: Space form
        orientation: Sign applied to the normal
        hint: Transverse vector(s) on the +1 side; without one the sign follows
            the standard basis vector chosen at each point, which is only
            consistent for a single point or a small patch (Shape charts
            always carry a hint)

    Returns:
        Unit normal, shape (..., m)
    """
    eta = form.signature.metric
    _check_immersion(jet.dx)
    C = _constraints(jet, form)
    seed = np.asarray(hint, dtype=float) if hint is not None else _default_seed(C, eta)
    seed = np.broadcast_to(seed, jet.x.shape)
    p, *_ = _project_out(C, eta, seed)
    pp = _ip(p, p, eta)
    if np.any(pp <= 1e-24):
        raise NumericalDegeneracyError("Orientation hint is tangent to the hypersurface")
    return orientation * p / np.sqrt(pp)[..., None]


def point_geometry(jet: Jet2, form: SpaceForm, orientation: int = 1,
                   hint: Optional[npt.ArrayLike] = None) -> PointGeometry:
    """
    Fundamental forms, normal, shape operator and Christoffel symbols at a jet.

    Args:
        jet: Position and exact partials
        form: Space form the chart lands in
        orientation: +1 or -1
        hint: Orientation hint vector(s), see unit_normal

    Returns:
        PointGeometry with the same batch shape as the jet
    """
    if orientation not in (1, -1):
        raise ContractViolation(f"Orientation must be +1 or -1, got {orientation}")
    if jet.m != form.dim:
        raise ContractViolation(f"Jet has {jet.m} ambient coordinates, {form.describe()} needs {form.dim}")
    eta = form.signature.metric
    normal = unit_normal(jet, form, orientation, hint)

    g = np.einsum("...im,...jm,m->...ij", jet.dx, jet.dx, eta)
    try:
        chol = np.linalg.cholesky(g)
    except np.linalg.LinAlgError as e:
        raise DegenerateImmersionError(f"Induced metric is not positive definite: {e}") from e
    g_inv = np.linalg.inv(g)
    density = np.prod(np.diagonal(chol, axis1=-2, axis2=-1), axis=-1)

    h = np.einsum("...ijm,...m,m->...ij", jet.d2x, normal, eta)
    S = g_inv @ h

    # dg[k, i, j] = d_k g_ij
    dg = (np.einsum("...kim,...jm,m->...kij", jet.d2x, jet.dx, eta)
          + np.einsum("...im,...kjm,m->...kij", jet.dx, jet.d2x, eta))
    # first_kind[i, j, l] = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
    first_kind = 0.5 * (dg + np.swapaxes(dg, -3, -2) - np.moveaxis(dg, -3, -1))
    christoffel = np.einsum("...lq,...ijq->...lij", g_inv, first_kind)

    return PointGeometry(
        jet=jet, form=form, orientation=orientation, g=g, g_inv=g_inv, chol=chol,
        normal=normal, h=h, S=S, christoffel=christoffel, density=density,
    )


def orthonormal_second_form(pt: PointGeometry) -> npt.NDArray[np.float64]:
    """Second fundamental form B = L^{-1} h L^{-T} in the frame given by g = L L^T."""
    X = np.linalg.solve(pt.chol, pt.h)
    B = np.swapaxes(np.linalg.solve(pt.chol, np.swapaxes(X, -1, -2)), -1, -2)
    return 0.5 * (B + np.swapaxes(B, -1, -2))


def principal_curvatures(pt: PointGeometry) -> npt.NDArray[np.float64]:
    """
    Principal curvatures in descending order.

    Solves h v = lambda g v through the Cholesky-reduced symmetric problem.
    """
    try:
        values = np.linalg.eigvalsh(orthonormal_second_form(pt))
    except np.linalg.LinAlgError as e:
        raise NumericalError(f"Eigen-solver failed: {e}") from e
    return values[..., ::-1]


def point_curvatures(pt: PointGeometry) -> CurvaturePack:
    """K_0..K_n and frame Newton tensors at the point."""
    return curvature_pack(orthonormal_second_form(pt))


def coordinate_newton(pt: PointGeometry, pack: CurvaturePack) -> npt.NDArray[np.float64]:
    """Raised-index coordinate Newton tensors T_r^{ij} = (L^{-T} T_r L^{-1})_ij, shape (..., n+1, n, n)."""
    Linv = np.linalg.inv(pt.chol)[..., None, :, :]
    return np.swapaxes(Linv, -1, -2) @ pack.T @ Linv


def covariant_hessian(pt: PointGeometry) -> npt.NDArray[np.float64]:
    """x_ij = d_i d_j x - Gamma^l_ij d_l x, shape (..., n, n, m)."""
    return pt.jet.d2x - np.einsum("...lij,...lm->...ijm", pt.christoffel, pt.jet.dx)


def check_gauss_formula(pt: PointGeometry, form: Optional[SpaceForm] = None) -> npt.NDArray[np.float64]:
    """
    max_ij |d_i d_j x - Gamma^l_ij d_l x - h_ij n + k g_ij x| (Euclidean norm of the ambient vector).
    """
    form = form or pt.form
    residual = (covariant_hessian(pt)
                - pt.h[..., None] * pt.normal[..., None, None, :]
                + form.k * pt.g[..., None] * pt.jet.x[..., None, None, :])
    return np.max(np.linalg.norm(residual, axis=-1), axis=(-2, -1))


def normal_derivatives(pt: PointGeometry, form: Optional[SpaceForm] = None) -> npt.NDArray[np.float64]:
    """
    d_i n, shape (..., n, m), by forward (dual-number) propagation through the normal construction.

    Perturbing the point along axis i moves the constraint rows by
    (d_i d_j x, d_i x); the Gram solve, the projection of the (constant)
    seed and the normalization are differentiated to first order.
    """
    form = form or pt.form
    eta = form.signature.metric
    jet = pt.jet
    C = _constraints(jet, form)
    seed = pt.orientation * pt.normal
    p, Cs, W, alpha = _project_out(C, eta, seed)
    scale = np.linalg.norm(C, axis=-1, keepdims=True)
    norm_p = np.sqrt(_ip(p, p, eta))
    unit = p / norm_p[..., None]

    result = np.zeros(jet.dx.shape)
    for i in range(jet.n):
        if form.k == 0:
            dC = jet.d2x[..., i, :, :]
        else:
            dC = np.concatenate([jet.d2x[..., i, :, :], jet.dx[..., i:i + 1, :]], axis=-2)
        # derivative of the unit-length rescaling of each row
        dscale = np.einsum("...am,...am->...a", C, dC)[..., None] / scale
        dCs = dC / scale - C * dscale / scale ** 2
        dW = (np.einsum("...am,...bm,m->...ab", dCs, Cs, eta)
              + np.einsum("...am,...bm,m->...ab", Cs, dCs, eta))
        db = np.einsum("...am,...m,m->...a", dCs, seed, eta)
        rhs = db - np.einsum("...ab,...b->...a", dW, alpha)
        dalpha = np.linalg.solve(W, rhs[..., None])[..., 0]
        dp = -(np.einsum("...a,...am->...m", alpha, dCs) + np.einsum("...a,...am->...m", dalpha, Cs))
        dn = (dp - unit * _ip(unit, dp, eta)[..., None]) / norm_p[..., None]
        result[..., i, :] = pt.orientation * dn
    return result


def check_weingarten(pt: PointGeometry) -> npt.NDArray[np.float64]:
    """max_i |d_i n + sum_j S^j_i d_j x|."""
    dn = normal_derivatives(pt)
    residual = dn + np.einsum("...ji,...jm->...im", pt.S, pt.jet.dx)
    return np.max(np.linalg.norm(residual, axis=-1), axis=-1)


def check_reilly_position(pt: PointGeometry, r: int, form: Optional[SpaceForm] = None,
                          pack: Optional[CurvaturePack] = None) -> npt.NDArray[np.float64]:
    """
    |L_r x - (r+1) K_{r+1} n + (n-r) k K_r x| with L_r x = sum_ij T_r^{ij} x_ij.

    Args:
        pt: Point geometry
        r: Order, 0 <= r <= n-1
        form: Space form (defaults to the point's)
        pack: Precomputed curvature pack

    Returns:
        Residual norm per point
    """
    form = form or pt.form
    n = pt.n
    if not 0 <= r <= n - 1:
        raise ContractViolation(f"Reilly order r = {r} outside 0..{n - 1}")
    pack = pack or point_curvatures(pt)
    T = coordinate_newton(pt, pack)[..., r, :, :]
    Lx = np.einsum("...ij,...ijm->...m", T, covariant_hessian(pt))
    residual = (Lx
                - (r + 1) * pack.K[..., r + 1, None] * pt.normal
                + (n - r) * form.k * pack.K[..., r, None] * pt.jet.x)
    return np.linalg.norm(residual, axis=-1)


def frame_residuals(pt: PointGeometry) -> dict:
    """
    Worst deviations of the normal frame and shape operator from their defining properties.

    Returns:
        Dict with "unit", "tangent", "position" and "self_adjoint" residuals
    """
    eta = pt.eta
    unit = np.abs(_ip(pt.normal, pt.normal, eta) - 1.0)
    tangent = np.max(np.abs(np.einsum("...im,...m,m->...i", pt.jet.dx, pt.normal, eta)), axis=-1)
    if pt.form.k == 0:
        position = np.zeros_like(unit)
    else:
        position = np.abs(_ip(pt.jet.x, pt.normal, eta))
    gS = pt.g @ pt.S
    scale = np.maximum(np.max(np.abs(gS), axis=(-2, -1)), 1.0)
    self_adjoint = np.max(np.abs(gS - np.swapaxes(gS, -1, -2)), axis=(-2, -1)) / scale
    return {
        "unit": float(np.max(unit)),
        "tangent": float(np.max(tangent)),
        "position": float(np.max(position)),
        "self_adjoint": float(np.max(self_adjoint)),
    }
