"""
Rigidity of skew virtual immersions.

The hat bundle TM + L^2 TM carries the connection
    D_W (Z, alpha) = (nabla_W Z - R(alpha) W, W ^ Z + nabla_W alpha)
and the map Omega_hat(Z, alpha) = Omega(Z) + II(alpha), which is parallel and
onto V for a full immersion. Two full immersions with the same kernel differ
by the constant linear isometry L = Omega_hat_2 o Omega_hat_1^+.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import expm, null_space

from ..core.errors import DimensionMismatch, KernelMismatch, NotFull
from .bilinear import BilinearForm, is_isometry
from .lie_algebra import GroupElement
from .symmetric_space import SymmetricSpaceModel, curvature_tensor, random_group_element
from .virtual_immersion import VirtualImmersionHandle, fullness

logger = logging.getLogger(__name__)

ANTISYMMETRY_TOL = 1e-12
RIGIDITY_TOL = 1e-8
ISOMETRY_SCALE = 0.3


def wedge_pairs(dim_m: int) -> List[Tuple[int, int]]:
    """Index pairs a < b of the coordinate basis m_a ^ m_b of L^2 m."""
    return [(a, b) for a in range(dim_m) for b in range(a + 1, dim_m)]


@dataclass(frozen=True)
class HatElement:
    """
    (Z, alpha) with Z an m-vector and alpha in L^2 m stored as an
    antisymmetric matrix in m-coordinates: X ^ Y is x y^T - y x^T.
    """

    Z: np.ndarray
    alpha: np.ndarray

    def __post_init__(self):
        Z = np.array(self.Z, dtype=float)
        alpha = np.array(self.alpha, dtype=float)
        if alpha.ndim != 2 or alpha.shape[0] != alpha.shape[1]:
            raise DimensionMismatch(f"alpha must be a square matrix, got {alpha.shape}")
        if alpha.size and np.max(np.abs(alpha + alpha.T)) > ANTISYMMETRY_TOL:
            raise DimensionMismatch("alpha is not antisymmetric")
        object.__setattr__(self, "Z", Z)
        object.__setattr__(self, "alpha", alpha)

    @classmethod
    def from_wedges(cls, space: SymmetricSpaceModel, Z, wedges: Sequence[Tuple[float, np.ndarray, np.ndarray]] = ()) -> "HatElement":
        """alpha = sum c_u X_u ^ Y_u for m-vectors X_u, Y_u."""
        alpha = np.zeros((space.dim_m, space.dim_m))
        for c, X, Y in wedges:
            x = space.cartan.m_coords(space.require_in_m(X))
            y = space.cartan.m_coords(space.require_in_m(Y))
            alpha += c * (np.outer(x, y) - np.outer(y, x))
        return cls(space.require_in_m(Z), alpha)

    @classmethod
    def from_vector(cls, space: SymmetricSpaceModel, vector) -> "HatElement":
        """Inverse of to_vector: m-coordinates of Z, then alpha over wedge_pairs."""
        vector = np.asarray(vector, dtype=float)
        k = space.dim_m
        alpha = np.zeros((k, k))
        for value, (a, b) in zip(vector[k:], wedge_pairs(k)):
            alpha[a, b], alpha[b, a] = value, -value
        return cls(space.cartan.from_m_coords(vector[:k]), alpha)

    def to_vector(self, space: SymmetricSpaceModel) -> np.ndarray:
        pairs = wedge_pairs(space.dim_m)
        return np.concatenate([space.cartan.m_coords(self.Z), [self.alpha[a, b] for a, b in pairs]])


def curvature_of(space: SymmetricSpaceModel, alpha: np.ndarray, W) -> np.ndarray:
    """R(alpha)W = sum_{a<b} alpha_ab R(m_a, m_b)W."""
    frame = space.cartan.m_frame.T
    result = np.zeros(space.dim)
    for a, b in wedge_pairs(space.dim_m):
        if alpha[a, b] != 0.0:
            result += alpha[a, b] * curvature_tensor(space, frame[a], frame[b], W)
    return result


def hat_connection(space: SymmetricSpaceModel, W, el: HatElement) -> HatElement:
    """
    D_W (Z, alpha) for constant coefficients in a parallel frame, where the
    nabla terms drop: (-R(alpha)W, W ^ Z).
    """
    W = space.require_in_m(W)
    w, z = space.cartan.m_coords(W), space.cartan.m_coords(el.Z)
    return HatElement(-curvature_of(space, el.alpha, W), np.outer(w, z) - np.outer(z, w))


def hat_omega(handle: VirtualImmersionHandle, el: HatElement, g: Optional[GroupElement] = None) -> np.ndarray:
    """Omega(Z) + II(alpha) at [g] (the base point when g is omitted)."""
    space = handle.space
    g = g if g is not None else space.identity()
    frame = space.cartan.m_frame.T
    value = handle.omega(g, el.Z)
    for a, b in wedge_pairs(space.dim_m):
        if el.alpha[a, b] != 0.0:
            value = value + el.alpha[a, b] * handle.second_fundamental_form(g, frame[a], frame[b])
    return value


def hat_matrix(handle: VirtualImmersionHandle, g: Optional[GroupElement] = None) -> np.ndarray:
    """Omega_hat at [g] in coordinates: columns Omega(m_a), then II(m_a, m_b) for a < b."""
    space = handle.space
    g = g if g is not None else space.identity()
    frame = space.cartan.m_frame.T
    columns = [handle.omega(g, X) for X in frame]
    columns += [handle.second_fundamental_form(g, frame[a], frame[b]) for a, b in wedge_pairs(space.dim_m)]
    return np.column_stack(columns) if columns else np.zeros((handle.v_form.dim, 0))


def curvature_operator_matrix(space: SymmetricSpaceModel) -> np.ndarray:
    """alpha -> R(alpha) as an endomorphism of m, flattened: one column per wedge pair."""
    frame = space.cartan.m_frame.T
    columns = []
    for a, b in wedge_pairs(space.dim_m):
        operator = np.column_stack([space.cartan.m_coords(curvature_tensor(space, frame[a], frame[b], W))
                                    for W in frame])
        columns.append(operator.reshape(-1))
    return np.column_stack(columns) if columns else np.zeros((space.dim_m ** 2, 0))


def curvature_pairing_matrix(space: SymmetricSpaceModel) -> np.ndarray:
    """Rows (c, d), columns (a, b): <R(m_a, m_b) m_c, m_d>."""
    frame = space.cartan.m_frame.T
    pairs = wedge_pairs(space.dim_m)
    Q = np.zeros((len(pairs), len(pairs)))
    for j, (a, b) in enumerate(pairs):
        for i, (c, d) in enumerate(pairs):
            Q[i, j] = space.metric(curvature_tensor(space, frame[a], frame[b], frame[c]), frame[d])
    return Q


def _span_distance(A: np.ndarray, B: np.ndarray) -> float:
    """Distance between the orthogonal projectors onto the column spans (orthonormal columns)."""
    if A.shape[1] != B.shape[1]:
        return float("inf")
    if A.shape[1] == 0:
        return 0.0
    return float(np.max(np.abs(A @ A.T - B @ B.T)))


def flat_wedges(space: SymmetricSpaceModel) -> np.ndarray:
    """Orthonormal basis (in pair coordinates) of {alpha : R(alpha) = 0}, operator reading."""
    C = curvature_operator_matrix(space)
    return null_space(C) if C.shape[1] else np.zeros((0, 0))


def readings_residual(space: SymmetricSpaceModel) -> float:
    """Operator and pairing readings of R(alpha) = 0 must cut out the same subspace."""
    Q = curvature_pairing_matrix(space)
    if Q.shape[1] == 0:
        return 0.0
    return _span_distance(flat_wedges(space), null_space(Q))


@dataclass(frozen=True)
class HatKernel:
    dim: int
    basis: Tuple[HatElement, ...]
    expected_dim: int
    span_residual: float
    rank: int
    vector_basis: np.ndarray = field(repr=False)


def kernel_of_hat_omega(handle: VirtualImmersionHandle) -> HatKernel:
    """
    Null space of Omega_hat at the base point, compared with
    {(0, alpha) : R(alpha) = 0}.

    Raises:
        NotFull: Omega_hat is not onto V
    """
    space = handle.space
    is_full, spanned = fullness(handle)
    H = hat_matrix(handle)
    rank = int(np.linalg.matrix_rank(H)) if H.size else 0
    if not is_full or rank != handle.v_form.dim:
        raise NotFull(f"Omega spans {spanned} of {handle.v_form.dim} dimensions")
    kernel = null_space(H) if H.shape[1] else np.zeros((0, 0))
    flat = flat_wedges(space)
    expected = np.vstack([np.zeros((space.dim_m, flat.shape[1])), flat]) if flat.size else np.zeros((H.shape[1], 0))
    kernel = kernel.reshape(H.shape[1], -1)
    residual = _span_distance(kernel, expected)
    basis = tuple(HatElement.from_vector(space, column) for column in kernel.T)
    logger.debug("Hat kernel of %s: dim %d (expected %d)", space.descriptor, kernel.shape[1], expected.shape[1])
    return HatKernel(kernel.shape[1], basis, expected.shape[1], residual, rank, kernel)


def same_model(a: SymmetricSpaceModel, b: SymmetricSpaceModel) -> bool:
    """Same factors, brackets, splitting and metric; L is only meaningful between such models."""
    if a is b:
        return True
    pairs = ((a.algebra.structure, b.algebra.structure), (a.cartan.m_frame, b.cartan.m_frame),
             (a.metric_on_m.gram, b.metric_on_m.gram))
    return (a.descriptor == b.descriptor
            and all(x.shape == y.shape and np.allclose(x, y, atol=RIGIDITY_TOL) for x, y in pairs))


@dataclass(frozen=True)
class EquivalenceResult:
    L: np.ndarray
    isometry_residual: float
    constancy_residual: float


def equivalence_map(handle1: VirtualImmersionHandle, handle2: VirtualImmersionHandle,
                    samples: int = 5, seed: Union[int, Sequence[int]] = 0) -> EquivalenceResult:
    """
    The linear isometry L with L o Omega_1 = Omega_2.

    Args:
        handle1, handle2: full skew immersions over the same model
        samples: number of random points where L is re-solved for the constancy residual
        seed: seed for those points

    Returns:
        EquivalenceResult(L, isometry residual, constancy residual)

    Raises:
        KernelMismatch: the hat kernels differ, or the handles sit on different models
        NotFull: either immersion fails to span its V
    """
    if handle1.space.dim_m != handle2.space.dim_m:
        raise KernelMismatch(f"Tangent dimensions differ: {handle1.space.dim_m} vs {handle2.space.dim_m}")
    if not same_model(handle1.space, handle2.space):
        raise KernelMismatch(f"Immersions live on different models: "
                             f"{handle1.space.descriptor} vs {handle2.space.descriptor}")
    k1 = kernel_of_hat_omega(handle1)
    k2 = kernel_of_hat_omega(handle2)
    if _span_distance(k1.vector_basis, k2.vector_basis) > RIGIDITY_TOL:
        raise KernelMismatch(f"Hat kernels differ (dims {k1.dim} and {k2.dim})")

    def solve(g: Optional[GroupElement]) -> np.ndarray:
        return hat_matrix(handle2, g) @ np.linalg.pinv(hat_matrix(handle1, g))

    L = solve(None)
    isometry_residual = is_isometry(handle1.v_form, handle2.v_form, L)
    rng = np.random.default_rng(seed)
    constancy = 0.0
    for _ in range(samples):
        g = random_group_element(handle1.space, rng)
        constancy = max(constancy, float(np.max(np.abs(solve(g) - L))))
    return EquivalenceResult(L, isometry_residual, constancy)


def random_isometry(form: BilinearForm, seed: Union[int, np.random.Generator, Sequence[int]],
                    scale: float = ISOMETRY_SCALE) -> np.ndarray:
    """exp(G^-1 S) for a random antisymmetric S: an isometry of the form's Gram matrix G."""
    rng = np.random.default_rng(seed)
    A = scale * rng.standard_normal((form.dim, form.dim))
    S = A - A.T
    return expm(np.linalg.solve(form.gram, S))
