"""
Finite-difference oracles.

Central differences, optionally Richardson-extrapolated over (h, h/2), and the
derivative probes the verification suite compares closed forms against. Nested
derivatives take a separate outer step so the inner round-off is not amplified
by 1/h twice.
"""
import logging
from typing import TYPE_CHECKING, Callable

import numpy as np

from .lie_algebra import GroupElement, adjoint_matrix, bracket, group_exp

if TYPE_CHECKING:
    from .symmetric_space import SymmetricSpaceModel
    from .virtual_immersion import VirtualImmersionHandle

logger = logging.getLogger(__name__)

Curve = Callable[[float], np.ndarray]


def central_difference(f: Curve, step: float) -> np.ndarray:
    return (np.asarray(f(step)) - np.asarray(f(-step))) / (2.0 * step)


def derivative(f: Curve, step: float, richardson: bool = True) -> np.ndarray:
    """
    d/du f(u) at u = 0.

    Args:
        f: curve in a vector space
        step: central-difference step h
        richardson: combine h and h/2 as (4 D(h/2) - D(h)) / 3, cancelling the h^2 term

    Returns:
        The derivative estimate, same shape as f(0)
    """
    coarse = central_difference(f, step)
    if not richardson:
        return coarse
    fine = central_difference(f, step / 2.0)
    return (4.0 * fine - coarse) / 3.0


def mixed_partial(f: Callable[[float, float], np.ndarray], step: float, richardson: bool = True) -> np.ndarray:
    """d^2/ds dt f(s, t) at the origin, from the four-point stencil."""

    def stencil(h: float) -> np.ndarray:
        return (np.asarray(f(h, h)) - np.asarray(f(h, -h)) - np.asarray(f(-h, h)) + np.asarray(f(-h, -h))) / (4.0 * h * h)

    coarse = stencil(step)
    if not richardson:
        return coarse
    return (4.0 * stencil(step / 2.0) - coarse) / 3.0


def _family(handle: "VirtualImmersionHandle", g: GroupElement, X, Y) -> Callable[[float, float], GroupElement]:
    space = handle.space
    tag = space.factor_tag

    def point(s: float, t: float) -> GroupElement:
        return g @ group_exp(space.algebra, X, s, tag) @ group_exp(space.algebra, Y, t, tag)

    return point


def flat_derivative_along_geodesic(handle: "VirtualImmersionHandle", g: GroupElement, X, Y,
                                   step: float, richardson: bool = True) -> np.ndarray:
    """d/dt Omega(g exp(tX), Y): the flat derivative of a transvection-parallel field."""
    point = _family(handle, g, X, X)
    return derivative(lambda u: handle.omega(point(u, 0.0), Y), step, richardson)


def second_fundamental_derivative(handle: "VirtualImmersionHandle", g: GroupElement, X, Y, Z,
                                  step: float, richardson: bool = True) -> np.ndarray:
    """(D_X II)(Y, Z) at [g]: d/dt II at g exp(tX) with Y, Z held in the parallel frame."""
    point = _family(handle, g, X, X)
    return derivative(lambda u: handle.second_fundamental_form(point(u, 0.0), Y, Z), step, richardson)


def curvature_oracle(handle: "VirtualImmersionHandle", g: GroupElement, X, Y, Z,
                     step: float, outer_step: float, richardson: bool = True) -> np.ndarray:
    """
    R(X, Y)Z at [g] as a V-vector, without any closed form.

    Over the family c(s, t) = g exp(sX) exp(tY) the field zeta = Omega([c, Z])
    is differentiated in s and t, projected to the tangent space (that is the
    Levi-Civita derivative), and the commutator
    T(d/dt T d/ds zeta - d/ds T d/dt zeta) is returned, matching
    R(X,Y)Z = nabla_Y nabla_X Z - nabla_X nabla_Y Z + nabla_[X,Y] Z.
    """
    point = _family(handle, g, X, Y)

    def zeta(s: float, t: float) -> np.ndarray:
        return handle.omega(point(s, t), Z)

    def along_s(s: float, t: float) -> np.ndarray:
        return handle.tangent_projector(point(s, t)) @ derivative(lambda u: zeta(s + u, t), step, richardson)

    def along_t(s: float, t: float) -> np.ndarray:
        return handle.tangent_projector(point(s, t)) @ derivative(lambda u: zeta(s, t + u), step, richardson)

    d_t = derivative(lambda u: along_s(0.0, u), outer_step, richardson)
    d_s = derivative(lambda u: along_t(u, 0.0), outer_step, richardson)
    return handle.tangent_projector(g) @ (d_t - d_s)


def normal_curvature_oracle(handle: "VirtualImmersionHandle", g: GroupElement, X, Y, eta,
                            step: float, outer_step: float, richardson: bool = True) -> np.ndarray:
    """
    R^perp(X, Y)eta at [g]: the curvature commutator of the normal connection,
    with the normal section c(s, t) -> N_c eta over the same family.
    """
    point = _family(handle, g, X, Y)
    eta = np.asarray(eta, dtype=float)

    def xi(s: float, t: float) -> np.ndarray:
        return handle.normal_projector(point(s, t)) @ eta

    def along_s(s: float, t: float) -> np.ndarray:
        return handle.normal_projector(point(s, t)) @ derivative(lambda u: xi(s + u, t), step, richardson)

    def along_t(s: float, t: float) -> np.ndarray:
        return handle.normal_projector(point(s, t)) @ derivative(lambda u: xi(s, t + u), step, richardson)

    d_t = derivative(lambda u: along_s(0.0, u), outer_step, richardson)
    d_s = derivative(lambda u: along_t(u, 0.0), outer_step, richardson)
    return handle.normal_projector(g) @ (d_t - d_s)


def isotropy_projection(space: "SymmetricSpaceModel", q: GroupElement) -> np.ndarray:
    """Ad_q P_h Ad_q^-1 on coefficient vectors; depends only on the coset [q]."""
    alg = space.algebra
    P_h = space.cartan.h_frame @ space.cartan.h_coords(np.eye(alg.dim))
    Ad = adjoint_matrix(alg, q)
    return Ad @ P_h @ np.linalg.inv(Ad)


def action_bracket_probe(handle: "VirtualImmersionHandle", g: GroupElement, X, Y,
                         step: float, richardson: bool = True):
    """
    Compare [X*, Y*] with [X, Y]* on the H-invariant function
    f([q]) = Ad_q P_h Ad_q^-1, where X* is the field of the left action
    t -> exp(tX) q.

    Returns:
        (lhs, rhs): [X*, Y*]f and [X, Y]*f at [g], flattened
    """
    space = handle.space
    alg, tag = space.algebra, space.factor_tag

    def f(q: GroupElement) -> np.ndarray:
        return isotropy_projection(space, q).reshape(-1)

    def commuted(s: float, t: float) -> np.ndarray:
        forward = group_exp(alg, Y, t, tag) @ group_exp(alg, X, s, tag) @ g
        backward = group_exp(alg, X, t, tag) @ group_exp(alg, Y, s, tag) @ g
        return f(forward) - f(backward)

    W = bracket(alg, X, Y)
    lhs = mixed_partial(commuted, step, richardson)
    rhs = derivative(lambda u: f(group_exp(alg, W, u, tag) @ g), step, richardson)
    return lhs, rhs
