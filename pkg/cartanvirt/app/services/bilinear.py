"""
Pseudo-Euclidean linear algebra on coordinate spaces.

Every vector is a coordinate vector in a fixed ambient basis; a form is its
Gram matrix in that basis.
"""
import logging
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from ..core.errors import (
    Degenerate,
    DimensionMismatch,
    NotSquare,
    NotSymmetric,
    TangentNotPositiveDefinite,
)

logger = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-12
DEGENERACY_TOL = 1e-10  # relative to the largest |eigenvalue|


@dataclass(frozen=True)
class BilinearForm:
    """A symmetric bilinear form given by its Gram matrix."""

    gram: np.ndarray
    degenerate_allowed: bool = False
    dim: int = field(init=False)

    def __post_init__(self):
        gram = np.array(self.gram, dtype=float)
        gram.setflags(write=False)
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "dim", gram.shape[0])

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.gram)

    def restrict(self, basis: np.ndarray) -> "BilinearForm":
        """Form induced on span(basis columns), in basis coordinates."""
        basis = np.asarray(basis, dtype=float)
        return make_form(basis.T @ self.gram @ basis)


@dataclass(frozen=True)
class Subspace:
    """Span of linearly independent coordinate columns."""

    basis: np.ndarray
    ambient_dim: int = field(init=False)

    def __post_init__(self):
        basis = np.array(self.basis, dtype=float)
        if basis.ndim == 1:
            basis = basis.reshape(-1, 1)
        object.__setattr__(self, "ambient_dim", basis.shape[0])
        if basis.shape[1] > 0 and np.linalg.matrix_rank(basis) != basis.shape[1]:
            raise DimensionMismatch(
                f"Subspace basis of {basis.shape[1]} vectors has rank {np.linalg.matrix_rank(basis)}"
            )
        basis.setflags(write=False)
        object.__setattr__(self, "basis", basis)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


def is_degenerate(eigenvalues: np.ndarray) -> bool:
    scale = np.max(np.abs(eigenvalues)) if eigenvalues.size else 0.0
    return scale == 0.0 or np.min(np.abs(eigenvalues)) <= DEGENERACY_TOL * scale


def make_form(gram, allow_degenerate: bool = False) -> BilinearForm:
    """
    Build a nondegenerate symmetric form from a Gram matrix.

    Args:
        gram: square real matrix, symmetric within 1e-12 (relative to its size)
        allow_degenerate: accept zero eigenvalues (abelian Killing forms)

    Returns:
        BilinearForm with the symmetrized Gram matrix (A + A^T) / 2
    """
    matrix = np.asarray(gram, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise NotSquare(f"Gram matrix must be square, got shape {matrix.shape}")
    asymmetry = float(np.max(np.abs(matrix - matrix.T))) if matrix.size else 0.0
    if asymmetry > SYMMETRY_TOL * max(1.0, float(np.max(np.abs(matrix))) if matrix.size else 1.0):
        raise NotSymmetric(f"Gram matrix asymmetry {asymmetry:.3e} exceeds tolerance")
    symmetric = 0.5 * (matrix + matrix.T)
    if not allow_degenerate and is_degenerate(np.linalg.eigvalsh(symmetric)):
        raise Degenerate("Gram matrix has an eigenvalue below the degeneracy tolerance")
    return BilinearForm(symmetric, degenerate_allowed=allow_degenerate)


def signature(form: BilinearForm) -> Tuple[int, int]:
    """(number of positive, number of negative) eigenvalues."""
    eigenvalues = form.eigenvalues
    scale = np.max(np.abs(eigenvalues)) if eigenvalues.size else 0.0
    cutoff = DEGENERACY_TOL * scale
    return int(np.sum(eigenvalues > cutoff)), int(np.sum(eigenvalues < -cutoff))


def evaluate(form: BilinearForm, u, v) -> float:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != (form.dim,) or v.shape != (form.dim,):
        raise DimensionMismatch(f"Expected vectors of length {form.dim}, got {u.shape} and {v.shape}")
    # Symmetrize the product so evaluate(u, v) == evaluate(v, u) bit for bit
    return float(0.5 * (u @ form.gram @ v + v @ form.gram @ u))


def tangent_projector(form: BilinearForm, tangent: Subspace) -> np.ndarray:
    """
    Matrix of the form-orthogonal projection onto the tangent subspace.

    Solves the normal equations with the restricted Gram matrix, so the tangent
    basis does not need to be orthonormal.
    """
    if tangent.ambient_dim != form.dim:
        raise DimensionMismatch(f"Tangent space lives in dim {tangent.ambient_dim}, form has dim {form.dim}")
    basis = tangent.basis
    if basis.shape[1] == 0:
        return np.zeros((form.dim, form.dim))
    restricted = basis.T @ form.gram @ basis
    restricted = 0.5 * (restricted + restricted.T)
    if np.min(np.linalg.eigvalsh(restricted)) <= 0.0:
        raise TangentNotPositiveDefinite("Form restricted to the tangent space is not positive definite")
    return basis @ np.linalg.solve(restricted, basis.T @ form.gram)


def split_tangent_normal(form: BilinearForm, tangent: Subspace, x) -> Tuple[np.ndarray, np.ndarray]:
    """Unique decomposition x = x_T + x_N with x_T tangent and x_N form-orthogonal to it."""
    x = np.asarray(x, dtype=float)
    if x.shape != (form.dim,):
        raise DimensionMismatch(f"Expected a vector of length {form.dim}, got {x.shape}")
    x_t = tangent_projector(form, tangent) @ x
    return x_t, x - x_t


def is_isometry(form_a: BilinearForm, form_b: BilinearForm, L) -> float:
    """max |L^T gram_b L - gram_a|; zero iff L is a linear isometry a -> b."""
    L = np.asarray(L, dtype=float)
    if L.ndim == 1 and form_a.dim == 1:
        L = L.reshape(-1, 1)
    if L.shape != (form_b.dim, form_a.dim):
        raise DimensionMismatch(f"Map must be {form_b.dim}x{form_a.dim}, got {L.shape}")
    return float(np.max(np.abs(L.T @ form_b.gram @ L - form_a.gram)))
