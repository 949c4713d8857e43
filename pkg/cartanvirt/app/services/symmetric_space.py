"""
Symmetric pairs (G, H) realized as block-diagonal matrix groups.

A model is assembled from catalog factors. Each factor contributes a matrix
block, a run of algebra coefficients, its Cartan pieces and its block of the
ambient form: lambda times the Killing form, or a Euclidean metric for the
flat factor.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.linalg import block_diag

from ..core.errors import BadParams, ClosureViolation, DimensionMismatch, NotInM, WrongLambdaSign
from .bilinear import BilinearForm, Subspace, evaluate, make_form, signature
from .lie_algebra import (
    GroupElement,
    LieAlgebraModel,
    bracket,
    group_exp,
    killing_form,
    random_element,
)

logger = logging.getLogger(__name__)

CARTAN_TOL = 1e-10
MEMBERSHIP_TOL = 1e-10
# Sampled points lie within this geodesic distance of the base point
SAMPLE_RADIUS = 1.0
ISOTROPY_SCALE = 1.0

FACTOR_KINDS = ("sphere", "hyperbolic2", "hyperbolic", "sl_so", "euclidean")
COMPACT_KINDS = ("sphere",)


def _unit(n: int, i: int, j: int) -> np.ndarray:
    E = np.zeros((n, n))
    E[i, j] = 1.0
    return E


def _rotation(n: int, i: int, j: int) -> np.ndarray:
    return _unit(n, i, j) - _unit(n, j, i)


def _boost(n: int, i: int, j: int) -> np.ndarray:
    return _unit(n, i, j) + _unit(n, j, i)


def default_lambda(kind: str, param: Optional[int]) -> float:
    """Catalog normalization: unit |sectional curvature| on the standard planes."""
    if kind == "sphere":
        return -1.0 / (2.0 * (param - 1))
    if kind == "hyperbolic2":
        return 0.5
    if kind == "hyperbolic":
        return 1.0 / (2.0 * (param - 1))
    if kind == "sl_so":
        return 1.0 / (4.0 * param)
    return 1.0


@dataclass(frozen=True)
class _Block:
    """Everything one factor contributes before assembly."""

    kind: str
    param: Optional[int]
    lam: Optional[float]
    matrices: Tuple[np.ndarray, ...]
    m_local: Tuple[int, ...]
    h_local: Tuple[int, ...]
    gram: np.ndarray

    @property
    def size(self) -> int:
        return self.matrices[0].shape[0]


@dataclass(frozen=True)
class FactorInfo:
    kind: str
    param: Optional[int]
    lam: Optional[float]
    matrix_block: Tuple[int, int]
    coeff_block: Tuple[int, int]

    @property
    def compact(self) -> Optional[bool]:
        if self.kind == "euclidean":
            return None
        return self.kind in COMPACT_KINDS

    @property
    def label(self) -> str:
        if self.kind == "hyperbolic2":
            return "hyperbolic2"
        return f"{self.kind}({self.param})"


@dataclass(frozen=True)
class CartanDecomposition:
    """
    g = h + m as two complementary coordinate subspaces of the algebra's
    coefficient space, with the projectors of that splitting.
    """

    h_basis: Subspace
    m_basis: Subspace
    dim_h: int = field(init=False)
    dim_m: int = field(init=False)
    _inverse: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "dim_h", self.h_basis.dim)
        object.__setattr__(self, "dim_m", self.m_basis.dim)
        d = self.h_basis.ambient_dim
        if self.m_basis.ambient_dim != d:
            raise DimensionMismatch("h and m bases live in different coefficient spaces")
        combined = np.hstack([self.h_basis.basis, self.m_basis.basis])
        if combined.shape != (d, d) or np.linalg.matrix_rank(combined) != d:
            raise DimensionMismatch(f"h ({self.dim_h}) and m ({self.dim_m}) do not split a {d}-dim algebra")
        object.__setattr__(self, "_inverse", np.linalg.inv(combined))

    @property
    def m_frame(self) -> np.ndarray:
        return self.m_basis.basis

    @property
    def h_frame(self) -> np.ndarray:
        return self.h_basis.basis

    def m_coords(self, X) -> np.ndarray:
        return self._inverse[self.dim_h:] @ np.asarray(X, dtype=float)

    def h_coords(self, X) -> np.ndarray:
        return self._inverse[:self.dim_h] @ np.asarray(X, dtype=float)

    def project_m(self, X) -> np.ndarray:
        return self.m_frame @ self.m_coords(X)

    def project_h(self, X) -> np.ndarray:
        return self.h_frame @ self.h_coords(X)

    def from_m_coords(self, x) -> np.ndarray:
        return self.m_frame @ np.asarray(x, dtype=float)


def cartan_residual(alg: LieAlgebraModel, cartan: CartanDecomposition) -> float:
    """Largest violation of [h,h] in h, [h,m] in m, [m,m] in h over basis pairs."""
    H, M = cartan.h_frame.T, cartan.m_frame.T
    worst = 0.0
    for i, a in enumerate(H):
        for b in H[i + 1:]:
            worst = max(worst, float(np.max(np.abs(cartan.project_m(bracket(alg, a, b))))))
        for b in M:
            worst = max(worst, float(np.max(np.abs(cartan.project_h(bracket(alg, a, b))))))
    for i, a in enumerate(M):
        for b in M[i + 1:]:
            worst = max(worst, float(np.max(np.abs(cartan.project_m(bracket(alg, a, b))))))
    return worst


@dataclass(frozen=True, eq=False)
class SymmetricSpaceModel:
    factors: Tuple[FactorInfo, ...]
    algebra: LieAlgebraModel
    cartan: CartanDecomposition
    ambient_form: BilinearForm
    metric_on_m: BilinearForm
    _blocks: Tuple[_Block, ...] = field(repr=False, compare=False, default=())

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def dim_m(self) -> int:
        return self.cartan.dim_m

    @property
    def dim_h(self) -> int:
        return self.cartan.dim_h

    @property
    def matrix_size(self) -> int:
        return self.algebra.matrix_size

    @property
    def factor_tag(self) -> Tuple[Tuple[int, int], ...]:
        return tuple(f.matrix_block for f in self.factors)

    @property
    def descriptor(self) -> str:
        return " x ".join(f.label for f in self.factors)

    def require_in_m(self, X, what: str = "vector") -> np.ndarray:
        X = self.algebra._check(X)
        leak = float(np.max(np.abs(self.cartan.project_h(X)))) if self.dim_h else 0.0
        if leak > MEMBERSHIP_TOL * max(1.0, float(np.max(np.abs(X))) if X.size else 1.0):
            raise NotInM(f"{what} has an h-component of size {leak:.3e}")
        return X

    def metric(self, X, Y) -> float:
        """g(X, Y) for X, Y in m: the ambient form restricted to m."""
        return evaluate(self.ambient_form, self.require_in_m(X), self.require_in_m(Y))

    def identity(self) -> GroupElement:
        return GroupElement.identity(self.matrix_size, self.factor_tag)


def _catalog_block(kind: str, param: Optional[int], lam: Optional[float]) -> _Block:
    if kind not in FACTOR_KINDS:
        raise BadParams(f"Unknown factor kind '{kind}'; expected one of {', '.join(FACTOR_KINDS)}")
    if kind == "hyperbolic2":
        if param not in (None, 2):
            raise BadParams("hyperbolic2 takes no parameter")
        param = None
    elif param is None or int(param) != param:
        raise BadParams(f"{kind} needs an integer parameter")
    else:
        param = int(param)
        minimum = 1 if kind == "euclidean" else 2
        if param < minimum:
            raise BadParams(f"{kind}({param}) needs a parameter >= {minimum}")

    if lam is None:
        lam = default_lambda(kind, param)
    lam = float(lam)
    if kind in COMPACT_KINDS and not lam < 0.0:
        raise WrongLambdaSign(f"{kind} is compact: lambda must be negative, got {lam}")
    if kind not in COMPACT_KINDS and not lam > 0.0:
        raise WrongLambdaSign(f"{kind} needs a positive lambda, got {lam}")

    if kind == "sphere":
        N = param + 1
        m = [_rotation(N, 0, j) for j in range(1, N)]
        h = [_rotation(N, i, j) for i in range(1, N) for j in range(i + 1, N)]
    elif kind == "hyperbolic":
        N = param + 1
        m = [_boost(N, 0, j) for j in range(1, N)]
        h = [_rotation(N, i, j) for i in range(1, N) for j in range(i + 1, N)]
    elif kind == "hyperbolic2":
        m = [np.diag([1.0, -1.0]), _boost(2, 0, 1)]
        h = [_rotation(2, 0, 1)]
    elif kind == "sl_so":
        N = param
        m = [_unit(N, k, k) - _unit(N, k + 1, k + 1) for k in range(N - 1)]
        m += [_boost(N, i, j) for i in range(N) for j in range(i + 1, N)]
        h = [_rotation(N, i, j) for i in range(N) for j in range(i + 1, N)]
    else:
        N = param + 1
        m = [_unit(N, i, param) for i in range(param)]
        h = []

    matrices = tuple(m + h)
    m_local = tuple(range(len(m)))
    h_local = tuple(range(len(m), len(matrices)))
    if kind == "euclidean":
        gram = lam * np.eye(len(m))
    else:
        gram = lam * killing_form(LieAlgebraModel.from_basis(matrices)).gram
    return _Block(kind, param, lam, matrices, m_local, h_local, gram)


def _merge_flat(blocks: Sequence[_Block]) -> _Block:
    r = sum(b.param for b in blocks)
    scales = {b.lam for b in blocks}
    matrices = tuple(_unit(r + 1, i, r) for i in range(r))
    gram = block_diag(*[b.gram for b in blocks])
    lam = scales.pop() if len(scales) == 1 else None
    return _Block("euclidean", r, lam, matrices, tuple(range(r)), (), gram)


def _assemble(blocks: Sequence[_Block]) -> SymmetricSpaceModel:
    total = sum(b.size for b in blocks)
    matrices: List[np.ndarray] = []
    m_idx: List[int] = []
    h_idx: List[int] = []
    factors: List[FactorInfo] = []
    row = 0
    for block in blocks:
        start = len(matrices)
        for M in block.matrices:
            embedded = np.zeros((total, total))
            embedded[row:row + block.size, row:row + block.size] = M
            matrices.append(embedded)
        m_idx += [start + i for i in block.m_local]
        h_idx += [start + i for i in block.h_local]
        factors.append(FactorInfo(block.kind, block.param, block.lam,
                                  (row, row + block.size), (start, len(matrices))))
        row += block.size

    algebra = LieAlgebraModel.from_basis(matrices)
    eye = np.eye(algebra.dim)
    cartan = CartanDecomposition(Subspace(eye[:, h_idx]), Subspace(eye[:, m_idx]))
    residual = cartan_residual(algebra, cartan)
    if residual > CARTAN_TOL:
        raise ClosureViolation(f"Cartan inclusions fail with residual {residual:.3e}")

    ambient = make_form(block_diag(*[b.gram for b in blocks]))
    metric_on_m = ambient.restrict(cartan.m_frame)
    if signature(metric_on_m) != (cartan.dim_m, 0):
        raise WrongLambdaSign("Ambient form is not positive definite on m")

    model = SymmetricSpaceModel(tuple(factors), algebra, cartan, ambient, metric_on_m, tuple(blocks))
    logger.debug("Assembled %s: dim g %d, dim m %d, ambient signature %s",
                 model.descriptor, algebra.dim, cartan.dim_m, signature(ambient))
    return model


def make_factor(kind: str, param: Optional[int] = None, lam: Optional[float] = None) -> SymmetricSpaceModel:
    """
    Build a one-factor model from the catalog.

    Args:
        kind: sphere, hyperbolic2, hyperbolic, sl_so or euclidean
        param: n for sphere(n), hyperbolic(n), sl_so(n); r for euclidean(r)
        lam: metric scaling; negative on compact factors, positive otherwise.
            For euclidean(r) it scales the identity metric.

    Returns:
        SymmetricSpaceModel with verified Cartan inclusions
    """
    return _assemble([_catalog_block(kind, param, lam)])


def product(models: Sequence[SymmetricSpaceModel]) -> SymmetricSpaceModel:
    """Block-diagonal product; flat factors are merged into a single euclidean(r)."""
    models = list(models)
    if not models:
        raise BadParams("product needs at least one model")
    if len(models) == 1:
        return models[0]
    blocks = [b for model in models for b in model._blocks]
    flat = [b for b in blocks if b.kind == "euclidean"]
    if len(flat) > 1:
        position = blocks.index(flat[0])
        blocks = [b for b in blocks if b.kind != "euclidean"]
        blocks.insert(position, _merge_flat(flat))
    return _assemble(blocks)


def random_group_element(model: SymmetricSpaceModel,
                         seed: Union[int, np.random.Generator, Sequence[int]]) -> GroupElement:
    """
    g = exp(W) h with W in m of metric length at most SAMPLE_RADIUS and h a
    random isotropy element: [g] lies in the closed geodesic ball of that
    radius around the base point.
    """
    rng = np.random.default_rng(seed)
    alg, tag = model.algebra, model.factor_tag
    W = random_m_vector(model, rng)
    radius = SAMPLE_RADIUS * rng.uniform()
    length = float(np.sqrt(model.metric(W, W)))
    if length > 0.0:
        W = W * (radius / length)
    g = group_exp(alg, W, factor_tag=tag)
    if model.dim_h:
        g = g @ group_exp(alg, random_h_vector(model, rng, ISOTROPY_SCALE), factor_tag=tag)
    return g


def random_m_vector(model: SymmetricSpaceModel, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    return random_element(model.algebra, rng, scale, subspace=model.cartan.m_frame)


def random_h_vector(model: SymmetricSpaceModel, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    return random_element(model.algebra, rng, scale, subspace=model.cartan.h_frame)


def geodesic_point(model: SymmetricSpaceModel, g: GroupElement, X, t: float) -> GroupElement:
    """g exp(tX): the geodesic through [g] with initial velocity [g, X]."""
    X = model.require_in_m(X, "geodesic direction")
    return g @ group_exp(model.algebra, X, t, model.factor_tag)


@dataclass(frozen=True)
class TangentRep:
    """A tangent vector [g, X] of G/H given by an explicit representative."""

    g: GroupElement
    X: np.ndarray

    @classmethod
    def at(cls, model: SymmetricSpaceModel, g: GroupElement, X) -> "TangentRep":
        return cls(g, model.require_in_m(X).copy())


def parallel_field(model: SymmetricSpaceModel, g: GroupElement, X, Y, t: float) -> TangentRep:
    """
    The transvection-parallel field t -> [g exp(tX), Y] along the geodesic in
    direction X; its coefficient vector never changes.
    """
    Y = model.require_in_m(Y, "transported vector")
    return TangentRep(geodesic_point(model, g, X, t), Y.copy())


def curvature_tensor(model: SymmetricSpaceModel, X, Y, Z) -> np.ndarray:
    """R(X, Y)Z = [[X, Y], Z]."""
    alg = model.algebra
    X, Y, Z = (model.require_in_m(v) for v in (X, Y, Z))
    return bracket(alg, bracket(alg, X, Y), Z)


def sectional_curvature(model: SymmetricSpaceModel, X, Y) -> float:
    """K(X, Y) = -<R(X,Y)Y, X> / (|X|^2 |Y|^2 - <X,Y>^2)."""
    area = model.metric(X, X) * model.metric(Y, Y) - model.metric(X, Y) ** 2
    if area <= 0.0:
        raise DimensionMismatch("Sectional curvature needs two independent vectors")
    return -model.metric(curvature_tensor(model, X, Y, Y), X) / area


def orthonormal_m_frame(model: SymmetricSpaceModel) -> np.ndarray:
    """Columns: a g-orthonormal basis of m (Gram-Schmidt of the coordinate basis)."""
    if model.dim_m == 0:
        return np.zeros((model.dim, 0))
    L = np.linalg.cholesky(model.metric_on_m.gram)
    return model.cartan.m_frame @ np.linalg.inv(L).T
