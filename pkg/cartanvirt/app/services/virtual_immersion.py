"""
Virtual immersions Omega: TM -> V on symmetric-space models.

Three handles share one interface:
    CanonicalImmersion  [g, X] -> Ad_g X into (g, ambient form), skew II
    ClassicalImmersion  dphi of the round sphere / hyperboloid, symmetric II
    ComposedImmersion   iota o Omega for a linear map iota
"""
import logging
from abc import ABC, abstractmethod
from typing import Callable, Optional, Tuple

import numpy as np

from ..core.errors import BadParams, DimensionMismatch, NotNormal, SingularMetric
from .bilinear import BilinearForm, Subspace, evaluate, make_form, split_tangent_normal, tangent_projector
from .finite_differences import derivative, mixed_partial
from .lie_algebra import GroupElement, adjoint_action, bracket, group_exp
from .symmetric_space import SymmetricSpaceModel, TangentRep, make_factor, random_group_element, random_m_vector

logger = logging.getLogger(__name__)

NORMALITY_TOL = 1e-9
RANK_TOL = 1e-8
CLASSICAL_KINDS = ("sphere_in_Rn1", "hyperboloid_in_Lorentz")

__all__ = [
    "VirtualImmersionHandle",
    "CanonicalImmersion",
    "ClassicalImmersion",
    "ComposedImmersion",
    "TangentRep",
    "omega0",
    "classical_immersion",
    "fullness",
    "check_invariance",
]


class VirtualImmersionHandle(ABC):
    """
    An evaluable V-valued one-form on a symmetric-space model.

    Points are group elements g standing for [g] in G/H; tangent vectors are
    m-coefficient vectors X standing for [g, X].
    """

    kind = "abstract"
    skew = False

    def __init__(self, space: SymmetricSpaceModel, v_form: BilinearForm):
        self.space = space
        self.v_form = v_form

    @abstractmethod
    def omega(self, g: GroupElement, X) -> np.ndarray:
        ...

    @abstractmethod
    def second_fundamental_form(self, g: GroupElement, X, Y) -> np.ndarray:
        ...

    def evaluate_omega(self, v: TangentRep) -> np.ndarray:
        return self.omega(v.g, v.X)

    def tangent_frame(self, g: GroupElement) -> np.ndarray:
        """Columns Omega([g, m_a]) for the coordinate basis of m."""
        columns = [self.omega(g, X) for X in self.space.cartan.m_frame.T]
        return np.column_stack(columns) if columns else np.zeros((self.v_form.dim, 0))

    def tangent_projector(self, g: GroupElement) -> np.ndarray:
        return tangent_projector(self.v_form, Subspace(self.tangent_frame(g)))

    def normal_projector(self, g: GroupElement) -> np.ndarray:
        return np.eye(self.v_form.dim) - self.tangent_projector(g)

    def split(self, g: GroupElement, x) -> Tuple[np.ndarray, np.ndarray]:
        return split_tangent_normal(self.v_form, Subspace(self.tangent_frame(g)), x)

    def tangent_coords(self, g: GroupElement, v) -> np.ndarray:
        """The m-vector X with Omega([g, X]) equal to the tangent part of v."""
        frame = self.tangent_frame(g)
        pairings = frame.T @ self.v_form.gram @ np.asarray(v, dtype=float)
        return self.space.cartan.from_m_coords(np.linalg.solve(self.space.metric_on_m.gram, pairings))

    def action_field(self, g: GroupElement, Z) -> TangentRep:
        """Z*[g] = [g, (Ad_g^-1 Z)_m] for Z in the full algebra."""
        alg = self.space.algebra
        return TangentRep(g, self.space.cartan.project_m(adjoint_action(alg, g.inverse(), Z)))

    def omega_of_action_field(self, g: GroupElement, Z) -> np.ndarray:
        return self.evaluate_omega(self.action_field(g, Z))

    def action_field_derivative(self, g: GroupElement, X, Y, step: float = 1e-4, richardson: bool = True) -> np.ndarray:
        """D_{X*} Omega(Y*) at [g]: the derivative of Omega(Y*) along t -> exp(tX) g."""
        alg, tag = self.space.algebra, self.space.factor_tag
        return derivative(lambda u: self.omega_of_action_field(group_exp(alg, X, u, tag) @ g, Y), step, richardson)

    def shape_operator(self, g: GroupElement, eta, X) -> np.ndarray:
        """
        S_eta(X), solved from <S_eta X, Y> = <II(X, Y), eta> over the m basis.

        Args:
            g: point [g]
            eta: V-vector normal at [g]
            X: m-vector

        Returns:
            m-vector S_eta(X)
        """
        eta = np.asarray(eta, dtype=float)
        tangential = self.tangent_projector(g) @ eta
        if np.max(np.abs(tangential), initial=0.0) > NORMALITY_TOL * max(1.0, float(np.max(np.abs(eta), initial=0.0))):
            raise NotNormal(f"eta has a tangent component of size {np.max(np.abs(tangential)):.3e}")
        rhs = np.array([evaluate(self.v_form, self.second_fundamental_form(g, X, Y), eta)
                        for Y in self.space.cartan.m_frame.T])
        try:
            coords = np.linalg.solve(self.space.metric_on_m.gram, rhs)
        except np.linalg.LinAlgError as e:
            raise SingularMetric("metric on m is singular") from e
        return self.space.cartan.from_m_coords(coords)

    def compose(self, iota, v_form: Optional[BilinearForm] = None) -> "ComposedImmersion":
        return ComposedImmersion(self, iota, v_form)


class CanonicalImmersion(VirtualImmersionHandle):
    """Omega_0([g, X]) = Ad_g X."""

    kind = "canonical"
    skew = True

    def omega(self, g: GroupElement, X) -> np.ndarray:
        X = self.space.require_in_m(X)
        return adjoint_action(self.space.algebra, g, X)

    def second_fundamental_form(self, g: GroupElement, X, Y) -> np.ndarray:
        # II([g,X],[g,Y]) = Ad_g [X, Y]
        alg = self.space.algebra
        X, Y = self.space.require_in_m(X), self.space.require_in_m(Y)
        return adjoint_action(alg, g, bracket(alg, X, Y))

    def normal_frame(self, g: GroupElement) -> np.ndarray:
        """Columns Ad_g of the h basis; they span the normal space at [g]."""
        columns = [adjoint_action(self.space.algebra, g, H) for H in self.space.cartan.h_frame.T]
        return np.column_stack(columns) if columns else np.zeros((self.v_form.dim, 0))

    def action_field_derivative(self, g: GroupElement, X, Y, step: float = 1e-4, richardson: bool = True) -> np.ndarray:
        """Ad_g([A, B_m] - [A, B]_m) with A = Ad_g^-1 X, B = Ad_g^-1 Y."""
        alg, cartan = self.space.algebra, self.space.cartan
        A = adjoint_action(alg, g.inverse(), X)
        B = adjoint_action(alg, g.inverse(), Y)
        return adjoint_action(alg, g, bracket(alg, A, cartan.project_m(B)) - cartan.project_m(bracket(alg, A, B)))

    def ambient_translation(self, gamma: GroupElement, v) -> np.ndarray:
        """How gamma in G acts on V: Ad_gamma."""
        return adjoint_action(self.space.algebra, gamma, v)


class ClassicalImmersion(VirtualImmersionHandle):
    """
    Omega = dphi for the standard embedding phi([g]) = g e_0 of the unit
    sphere in Euclidean R^{n+1} or of the hyperboloid in Lorentz R^{1,n}.
    """

    kind = "classical"
    skew = False

    def __init__(self, embedding: str, n: int, second_step: float = 1e-3):
        if embedding not in CLASSICAL_KINDS:
            raise BadParams(f"Unknown classical embedding '{embedding}'")
        if n < 2:
            raise BadParams(f"{embedding}({n}) needs n >= 2")
        if embedding == "sphere_in_Rn1":
            space = make_factor("sphere", n)
            form = make_form(np.eye(n + 1))
        else:
            space = make_factor("hyperbolic", n)
            form = make_form(np.diag([-1.0] + [1.0] * n))
        super().__init__(space, form)
        self.embedding = embedding
        self.n = n
        self.second_step = second_step
        self._base_point = np.eye(n + 1)[:, 0]

    def point(self, g: GroupElement) -> np.ndarray:
        return g.matrix @ self._base_point

    def omega(self, g: GroupElement, X) -> np.ndarray:
        X = self.space.require_in_m(X)
        return g.matrix @ self.space.algebra.to_matrix(X) @ self._base_point

    def second_fundamental_form(self, g: GroupElement, X, Y) -> np.ndarray:
        """Normal part of d^2/ds dt phi(g exp(sX) exp(tY)), Richardson-extrapolated."""
        alg, tag = self.space.algebra, self.space.factor_tag
        X, Y = self.space.require_in_m(X), self.space.require_in_m(Y)
        hessian = mixed_partial(
            lambda s, t: self.point(g @ group_exp(alg, X, s, tag) @ group_exp(alg, Y, t, tag)),
            self.second_step,
        )
        return self.normal_projector(g) @ hessian


class ComposedImmersion(VirtualImmersionHandle):
    """iota o Omega, with II and D Omega carried through iota."""

    kind = "composed"

    def __init__(self, base: VirtualImmersionHandle, iota, v_form: Optional[BilinearForm] = None):
        iota = np.asarray(iota, dtype=float)
        v_form = v_form or base.v_form
        if iota.shape != (v_form.dim, base.v_form.dim):
            raise DimensionMismatch(f"iota must be {v_form.dim}x{base.v_form.dim}, got {iota.shape}")
        super().__init__(base.space, v_form)
        self.base = base
        self.iota = iota
        self.skew = base.skew

    def omega(self, g: GroupElement, X) -> np.ndarray:
        return self.iota @ self.base.omega(g, X)

    def second_fundamental_form(self, g: GroupElement, X, Y) -> np.ndarray:
        return self.iota @ self.base.second_fundamental_form(g, X, Y)

    def action_field_derivative(self, g: GroupElement, X, Y, step: float = 1e-4, richardson: bool = True) -> np.ndarray:
        return self.iota @ self.base.action_field_derivative(g, X, Y, step, richardson)

    def ambient_translation(self, gamma: GroupElement, v) -> np.ndarray:
        return self.iota @ self.base.ambient_translation(gamma, np.linalg.solve(self.iota, v))


def omega0(space: SymmetricSpaceModel, v_form: Optional[BilinearForm] = None) -> CanonicalImmersion:
    """
    The canonical virtual immersion [g, X] -> Ad_g X into (g, ambient form).

    Passing v_form replaces the codomain form; only fault-injection tests do.
    """
    return CanonicalImmersion(space, v_form or space.ambient_form)


def classical_immersion(kind: str, n: int, second_step: float = 1e-3) -> ClassicalImmersion:
    return ClassicalImmersion(kind, n, second_step)


def fullness(handle: VirtualImmersionHandle) -> Tuple[bool, int]:
    """
    Rank of {Omega(m_a)} together with {II(m_a, m_b)} at the base point, over
    a < b for skew II and a <= b for symmetric II.

    The image of Omega spans V exactly when these span V, since D Omega is
    Omega(nabla) + II. Singular values below RANK_TOL (relative) count as
    zero, so finite-difference noise in a classical II does not add rank.
    """
    space = handle.space
    e = space.identity()
    frame = space.cartan.m_frame.T
    first = 1 if handle.skew else 0
    columns = [handle.omega(e, X) for X in frame]
    columns += [handle.second_fundamental_form(e, frame[a], frame[b])
                for a in range(len(frame)) for b in range(a + first, len(frame))]
    if not columns:
        return handle.v_form.dim == 0, 0
    singular = np.linalg.svd(np.column_stack(columns), compute_uv=False)
    spanned = int(np.sum(singular > RANK_TOL * max(1.0, float(singular[0]))))
    return spanned == handle.v_form.dim, spanned


def check_invariance(handle: VirtualImmersionHandle, gamma: GroupElement,
                     dgamma: Optional[Callable[[TangentRep], TangentRep]] = None,
                     samples: int = 20, seed: int = 0) -> float:
    """
    max over sampled v of |Omega(dgamma v) - Omega(v)|_inf.

    Without dgamma, gamma acts on representatives by left multiplication:
    dgamma [g, X] = [gamma g, X].
    """
    if dgamma is None:
        def dgamma(v: TangentRep) -> TangentRep:
            return TangentRep(gamma @ v.g, v.X)

    worst = 0.0
    for k in range(samples):
        rng = np.random.default_rng([seed, k])
        v = TangentRep(random_group_element(handle.space, rng), random_m_vector(handle.space, rng))
        difference = handle.evaluate_omega(dgamma(v)) - handle.evaluate_omega(v)
        worst = max(worst, float(np.max(np.abs(difference), initial=0.0)))
    logger.debug("Invariance residual %.3e over %d samples", worst, samples)
    return worst
