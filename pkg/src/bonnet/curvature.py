"""
r-th mean curvatures and Newton transformations.

K_r is the (unnormalized) r-th elementary symmetric polynomial of the
principal curvatures, so K_1 is their sum and K_n = G is the Gauss-Kronecker
curvature. The Newton tensors follow the recursion T_0 = I,
T_r = K_r I - B T_{r-1}.

Every routine accepts stacks of matrices (..., n, n); the generalized
Kronecker delta oracles exist only to cross-check the fast paths.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import numpy.typing as npt

from .errors import ContractViolation, NumericalError

logger = logging.getLogger(__name__)

SYMMETRY_TOLERANCE = 1e-10
# brute-force delta sums grow like n! * r!
ORACLE_MAX_DIMENSION = 5


@dataclass
class CurvaturePack:
    """K_0..K_n and Newton tensors T_0..T_n (leading batch axes allowed)."""
    K: npt.NDArray[np.float64]
    T: npt.NDArray[np.float64]

    @property
    def n(self) -> int:
        return self.K.shape[-1] - 1

    @property
    def gauss_kronecker(self) -> npt.NDArray[np.float64]:
        return self.K[..., -1]


@dataclass
class NewtonResiduals:
    """Worst violations of the Newton-tensor identities, relative to |B|^r."""
    trace: float
    trace_bt: float
    top_vanishes: float
    cayley_hamilton: float

    def worst(self) -> float:
        return max(self.trace, self.trace_bt, self.top_vanishes, self.cayley_hamilton)


def mean_curvatures(principal: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """
    Elementary symmetric polynomials K_0..K_n of the principal curvatures.

    Built as the coefficients of prod_i (t + k_i), one factor at a time.

    Args:
        principal: Principal curvatures, shape (..., n)

    Returns:
        Array of shape (..., n + 1) with K[..., 0] = 1
    """
    k = np.asarray(principal, dtype=float)
    n = k.shape[-1]
    K = np.zeros(k.shape[:-1] + (n + 1,))
    K[..., 0] = 1.0
    for i in range(n):
        K[..., 1:i + 2] += k[..., i:i + 1] * K[..., :i + 1]
    return K


def _check_symmetric(B: np.ndarray):
    if B.ndim < 2 or B.shape[-1] != B.shape[-2]:
        raise ContractViolation(f"Expected square matrices, got shape {B.shape}")
    asymmetry = np.max(np.abs(B - np.swapaxes(B, -1, -2)), initial=0.0)
    scale = max(1.0, float(np.max(np.abs(B), initial=0.0)))
    if asymmetry > SYMMETRY_TOLERANCE * scale:
        raise ContractViolation(f"Matrix is not symmetric (asymmetry {asymmetry:.3e})")


def _eigenvalues(B: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.eigvalsh(B)
    except np.linalg.LinAlgError as e:
        raise NumericalError(f"Symmetric eigen-solver failed: {e}") from e


def newton_tensors(B: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """
    Newton tensors T_0..T_n by the recursion T_r = K_r I - B T_{r-1}.

    Args:
        B: Symmetric matrix (..., n, n), the second fundamental form in an
            orthonormal frame

    Returns:
        Array of shape (..., n + 1, n, n)
    """
    B = np.asarray(B, dtype=float)
    _check_symmetric(B)
    n = B.shape[-1]
    K = mean_curvatures(_eigenvalues(B))
    eye = np.broadcast_to(np.eye(n), B.shape)
    T = np.zeros(B.shape[:-2] + (n + 1, n, n))
    T[..., 0, :, :] = eye
    for r in range(1, n + 1):
        T[..., r, :, :] = K[..., r, None, None] * eye - B @ T[..., r - 1, :, :]
    return T


def newton_tensors_alternating(B: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """Newton tensors from the alternating sum T_r = sum_j (-1)^j K_{r-j} B^j."""
    B = np.asarray(B, dtype=float)
    _check_symmetric(B)
    n = B.shape[-1]
    K = mean_curvatures(_eigenvalues(B))
    powers = [np.broadcast_to(np.eye(n), B.shape)]
    for _ in range(n):
        powers.append(powers[-1] @ B)
    T = np.zeros(B.shape[:-2] + (n + 1, n, n))
    for r in range(n + 1):
        for j in range(r + 1):
            T[..., r, :, :] += (-1) ** j * K[..., r - j, None, None] * powers[j]
    return T


def curvature_pack(B: npt.ArrayLike) -> CurvaturePack:
    """K_0..K_n and T_0..T_n of a symmetric shape matrix."""
    B = np.asarray(B, dtype=float)
    return CurvaturePack(K=mean_curvatures(_eigenvalues(B)), T=newton_tensors(B))


def newton_residuals(B: npt.ArrayLike) -> NewtonResiduals:
    """
    Worst relative violation of trace(T_r) = (n - r) K_r,
    trace(B T_r) = (r + 1) K_{r+1}, T_n = 0 and G I - B T_{n-1} = 0.
    """
    B = np.asarray(B, dtype=float)
    n = B.shape[-1]
    pack = curvature_pack(B)
    norm = np.maximum(np.linalg.norm(B, ord=2, axis=(-2, -1)), 1.0)

    trace = 0.0
    trace_bt = 0.0
    for r in range(n + 1):
        scale = norm ** r
        t_err = np.abs(np.trace(pack.T[..., r, :, :], axis1=-2, axis2=-1) - (n - r) * pack.K[..., r]) / scale
        trace = max(trace, float(np.max(t_err)))
        if r < n:
            bt = np.trace(B @ pack.T[..., r, :, :], axis1=-2, axis2=-1)
            bt_err = np.abs(bt - (r + 1) * pack.K[..., r + 1]) / (scale * norm)
            trace_bt = max(trace_bt, float(np.max(bt_err)))

    top = np.max(np.abs(pack.T[..., n, :, :]), axis=(-2, -1)) / norm ** n
    eye = np.eye(n)
    ch = pack.K[..., n, None, None] * eye - B @ pack.T[..., n - 1, :, :]
    cayley = np.max(np.abs(ch), axis=(-2, -1)) / norm ** n
    return NewtonResiduals(
        trace=trace,
        trace_bt=trace_bt,
        top_vanishes=float(np.max(top)),
        cayley_hamilton=float(np.max(cayley)),
    )


def gen_kronecker(I: Sequence[int], J: Sequence[int]) -> int:
    """
    Generalized Kronecker delta.

    +1 (-1) if the entries of I are distinct and J is an even (odd)
    permutation of I, 0 otherwise.

    Args:
        I: Multi-index
        J: Multi-index of the same length

    Returns:
        One of -1, 0, 1
    """
    I = tuple(I)
    J = tuple(J)
    if len(I) != len(J):
        raise ContractViolation(f"Multi-indices differ in length: {len(I)} vs {len(J)}")
    if len(set(I)) != len(I) or sorted(I) != sorted(J):
        return 0
    # parity from the cycle decomposition of the permutation taking I to J
    position = {value: index for index, value in enumerate(I)}
    perm = [position[value] for value in J]
    seen = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        cursor = start
        while not seen[cursor]:
            seen[cursor] = True
            cursor = perm[cursor]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _oracle_guard(B: np.ndarray, r: int):
    n = B.shape[-1]
    if n > ORACLE_MAX_DIMENSION:
        raise ContractViolation(f"Delta oracle refuses n = {n} > {ORACLE_MAX_DIMENSION}")
    if not 0 <= r <= n:
        raise ContractViolation(f"r = {r} outside 0..{n}")


def kr_via_delta(B: npt.ArrayLike, r: int) -> npt.NDArray[np.float64]:
    """
    K_r = (1/r!) sum delta^{j_1..j_r}_{i_1..i_r} h_{i_1 j_1} ... h_{i_r j_r}, by brute force.

    Only tuples with distinct entries contribute, so the sum runs over
    ordered r-tuples I and permutations J of I.
    """
    B = np.asarray(B, dtype=float)
    _oracle_guard(B, r)
    n = B.shape[-1]
    total = np.zeros(B.shape[:-2])
    for I in itertools.permutations(range(n), r):
        for J in itertools.permutations(I):
            sign = gen_kronecker(I, J)
            product = np.ones(B.shape[:-2])
            for i, j in zip(I, J):
                product = product * B[..., i, j]
            total = total + sign * product
    return total / math.factorial(r)


def tr_via_delta(B: npt.ArrayLike, r: int) -> npt.NDArray[np.float64]:
    """
    T^r_ij = (1/r!) sum delta^{j_1..j_r j}_{i_1..i_r i} h_{i_1 j_1} ... h_{i_r j_r}, by brute force.
    """
    B = np.asarray(B, dtype=float)
    _oracle_guard(B, r)
    n = B.shape[-1]
    if r == n:
        return np.zeros(B.shape)
    T = np.zeros(B.shape)
    for i in range(n):
        others = [index for index in range(n) if index != i]
        for head in itertools.permutations(others, r):
            I = head + (i,)
            for J in itertools.permutations(I):
                sign = gen_kronecker(I, J)
                product = np.ones(B.shape[:-2])
                for a, b in zip(head, J[:-1]):
                    product = product * B[..., a, b]
                T[..., i, J[-1]] += sign * product
    return T / math.factorial(r)
