"""
Matrix Lie algebras and groups.

Elements of the algebra are coefficient vectors over an ordered matrix basis;
structure constants are computed once, when the model is built.
"""
import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import expm

from ..core.errors import ClosureViolation, DimensionMismatch, NotInvertible
from .bilinear import BilinearForm, is_degenerate, make_form

logger = logging.getLogger(__name__)

CLOSURE_TOL = 1e-10
INVERTIBILITY_TOL = 1e-10


@dataclass(frozen=True)
class LieAlgebraModel:
    """
    A real matrix Lie algebra with basis E_1..E_d of n x n matrices and
    structure constants c with [E_i, E_j] = sum_k c[i, j, k] E_k.
    """

    matrix_size: int
    basis: np.ndarray
    structure: np.ndarray
    _pinv: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        basis = np.array(self.basis, dtype=float)
        structure = np.array(self.structure, dtype=float)
        d = basis.shape[0]
        if basis.shape[1:] != (self.matrix_size, self.matrix_size):
            raise DimensionMismatch(f"Basis matrices must be {self.matrix_size}x{self.matrix_size}")
        if structure.shape != (d, d, d):
            raise DimensionMismatch(f"Structure constants must have shape {(d, d, d)}, got {structure.shape}")
        basis.setflags(write=False)
        structure.setflags(write=False)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "structure", structure)
        flat = basis.reshape(d, -1)
        object.__setattr__(self, "_pinv", np.linalg.pinv(flat.T) if d else np.zeros((0, self.matrix_size ** 2)))

    @classmethod
    def from_basis(cls, matrices: Sequence[np.ndarray]) -> "LieAlgebraModel":
        """Compute structure constants by re-expanding every commutator in the basis."""
        basis = np.array(matrices, dtype=float)
        d, n = basis.shape[0], basis.shape[1]
        skeleton = cls(n, basis, np.zeros((d, d, d)))
        structure = np.zeros((d, d, d))
        worst = 0.0
        for i in range(d):
            for j in range(i + 1, d):
                commutator = basis[i] @ basis[j] - basis[j] @ basis[i]
                coeffs, residual = skeleton.expand(commutator)
                worst = max(worst, residual)
                structure[i, j] = coeffs
                structure[j, i] = -coeffs
        if worst > CLOSURE_TOL:
            raise ClosureViolation(f"Basis is not closed under the bracket (residual {worst:.3e})")
        structure[np.abs(structure) < 1e-14] = 0.0
        model = cls(n, basis, structure)
        logger.debug("Built matrix Lie algebra: dim %d, matrix size %d, Jacobi residual %.2e",
                     d, n, verify_jacobi(model))
        return model

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def to_matrix(self, X) -> np.ndarray:
        return np.tensordot(self._check(X), self.basis, axes=1)

    def expand(self, matrix: np.ndarray) -> Tuple[np.ndarray, float]:
        """Least-squares coefficients of a matrix in the basis, and the fit residual."""
        matrix = np.asarray(matrix, dtype=float)
        coeffs = self._pinv @ matrix.reshape(-1)
        residual = float(np.max(np.abs(matrix - np.tensordot(coeffs, self.basis, axes=1)))) if matrix.size else 0.0
        return coeffs, residual

    def _check(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.shape != (self.dim,):
            raise DimensionMismatch(f"Expected a coefficient vector of length {self.dim}, got {X.shape}")
        return X


@dataclass(frozen=True)
class GroupElement:
    """An invertible matrix, tagged with the diagonal blocks of the factors it acts in."""

    matrix: np.ndarray
    factor_tag: Tuple[Tuple[int, int], ...] = ()
    inverse_matrix: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DimensionMismatch(f"Group element must be a square matrix, got shape {matrix.shape}")
        if abs(np.linalg.det(matrix)) <= INVERTIBILITY_TOL:
            raise NotInvertible("Group element matrix is singular")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "inverse_matrix", np.linalg.inv(matrix))

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.matrix @ other.matrix, self.factor_tag or other.factor_tag)

    def inverse(self) -> "GroupElement":
        return GroupElement(self.inverse_matrix, self.factor_tag)

    @classmethod
    def identity(cls, n: int, factor_tag: Tuple[Tuple[int, int], ...] = ()) -> "GroupElement":
        return cls(np.eye(n), factor_tag)


def bracket(alg: LieAlgebraModel, X, Y) -> np.ndarray:
    """Coefficients of [X, Y] from the structure constants."""
    X, Y = alg._check(X), alg._check(Y)
    forward = np.einsum("i,j,ijk->k", X, Y, alg.structure)
    backward = np.einsum("i,j,ijk->k", Y, X, alg.structure)
    # Averaging both orders makes [X, Y] = -[Y, X] hold exactly in floating point
    return 0.5 * (forward - backward)


def ad_operator(alg: LieAlgebraModel, X) -> np.ndarray:
    """Matrix of Y -> [X, Y] in the chosen basis."""
    X = alg._check(X)
    return np.einsum("i,ijk->kj", X, alg.structure)


def killing_form(alg: LieAlgebraModel) -> BilinearForm:
    """
    B(E_i, E_j) = trace(ad_{E_i} ad_{E_j}).

    Algebras with a centre (abelian factors) get a degenerate-allowed form; the
    Euclidean metric replaces it on those factors.
    """
    c = alg.structure
    gram = np.einsum("ilk,jkl->ij", c, c)
    gram = 0.5 * (gram + gram.T)
    return make_form(gram, allow_degenerate=is_degenerate(np.linalg.eigvalsh(gram)))


def adjoint_action(alg: LieAlgebraModel, g: GroupElement, X) -> np.ndarray:
    """Coefficients of g X g^-1."""
    X = alg._check(X)
    if g.matrix.shape != (alg.matrix_size, alg.matrix_size):
        raise DimensionMismatch(f"Group element is {g.matrix.shape}, algebra matrices are {alg.matrix_size}")
    conjugated = g.matrix @ alg.to_matrix(X) @ g.inverse_matrix
    coeffs, residual = alg.expand(conjugated)
    scale = max(1.0, float(np.max(np.abs(conjugated))) if conjugated.size else 1.0)
    if residual > CLOSURE_TOL * scale:
        raise ClosureViolation(f"Ad_g leaves the algebra (fit residual {residual:.3e}); g does not normalize it")
    return coeffs


def adjoint_matrix(alg: LieAlgebraModel, g: GroupElement) -> np.ndarray:
    """Matrix of Ad_g on coefficient space (columns are Ad_g E_i)."""
    return np.column_stack([adjoint_action(alg, g, e) for e in np.eye(alg.dim)]) if alg.dim else np.zeros((0, 0))


def group_exp(alg: LieAlgebraModel, X, t: float = 1.0, factor_tag: Tuple[Tuple[int, int], ...] = ()) -> GroupElement:
    """exp(t * sum x_i E_i) by scaling and squaring (scipy)."""
    return GroupElement(expm(t * alg.to_matrix(X)), factor_tag)


def verify_jacobi(alg: LieAlgebraModel) -> float:
    """Max over basis triples of |[[E_i,E_j],E_k] + [[E_j,E_k],E_i] + [[E_k,E_i],E_j]|."""
    c = alg.structure
    if alg.dim == 0:
        return 0.0
    first = np.einsum("ijl,lkm->ijkm", c, c)
    cyclic = first + np.transpose(first, (2, 0, 1, 3)) + np.transpose(first, (1, 2, 0, 3))
    return float(np.max(np.abs(cyclic)))


def frobenius_pairing_residual(alg: LieAlgebraModel, X, Y) -> float:
    """Distance between the structure-constant bracket and the matrix commutator."""
    A, B = alg.to_matrix(X), alg.to_matrix(Y)
    commutator = A @ B - B @ A
    return float(np.max(np.abs(commutator - alg.to_matrix(bracket(alg, X, Y))))) if commutator.size else 0.0


def random_element(alg: LieAlgebraModel, rng: np.random.Generator, scale: float = 1.0,
                   subspace: Optional[np.ndarray] = None) -> np.ndarray:
    """Gaussian coefficient vector, optionally inside span(subspace columns)."""
    if subspace is None:
        return scale * rng.standard_normal(alg.dim)
    return subspace @ (scale * rng.standard_normal(subspace.shape[1]))
