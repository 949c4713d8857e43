"""
Identity suites for virtual immersions.

Every check takes a handle and an FDConfig and returns one CheckRecord with
the worst residual over its probes. Probes draw from a generator seeded by
(seed, check name, sample index), so records do not depend on the order the
checks run in.
"""
import logging
import zlib
from functools import partial
from typing import Callable, List, Optional, Tuple, Union

import numpy as np

from ..core.errors import CartanVirtError
from ..models.fd_config import FDConfig
from ..models.report import CheckRecord, VerificationReport
from .bilinear import evaluate
from .finite_differences import (
    action_bracket_probe,
    curvature_oracle,
    derivative,
    flat_derivative_along_geodesic,
    isotropy_projection,
    normal_curvature_oracle,
    second_fundamental_derivative,
)
from .lie_algebra import (
    GroupElement,
    ad_operator,
    adjoint_action,
    bracket,
    group_exp,
    random_element,
    verify_jacobi,
)
from .rigidity import (
    RIGIDITY_TOL,
    HatElement,
    equivalence_map,
    hat_connection,
    hat_omega,
    kernel_of_hat_omega,
    random_isometry,
    readings_residual,
)
from .symmetric_space import (
    SymmetricSpaceModel,
    cartan_residual,
    curvature_tensor,
    geodesic_point,
    random_group_element,
    random_h_vector,
    random_m_vector,
)
from .virtual_immersion import VirtualImmersionHandle, fullness, omega0

logger = logging.getLogger(__name__)

CURVATURE_CONVENTION = "R(X,Y)Z = nabla_Y nabla_X Z - nabla_X nabla_Y Z + nabla_[X,Y] Z"
SKEW_TOL = 1e-12
SYMMETRY_TOL = 1e-7
NESTED_SAMPLES = 20
RIGIDITY_SAMPLES = 20
CONVERGENCE_PROBES = 5
ROUNDOFF_FLOOR = 1e-9
CONVERGENCE_WINDOW = (2.5, 6.0)
DEFAULT_SIGN = -1
BRACKET_SCALE = 0.5
# Derivatives of finite-difference quantities use a coarser stencil
NESTED_OUTER_FACTOR = 10.0
LOCSYM_STEP = 0.1

Check = Callable[[VirtualImmersionHandle, FDConfig], CheckRecord]


def sample_rng(cfg: FDConfig, name: str, index: int) -> np.random.Generator:
    return np.random.default_rng([cfg.seed, zlib.crc32(name.encode()), index])


def _inf_norm(v) -> float:
    return float(np.max(np.abs(v), initial=0.0))


def _nested(cfg: FDConfig) -> int:
    return min(cfg.samples, NESTED_SAMPLES)


def _point(handle: VirtualImmersionHandle, rng: np.random.Generator) -> GroupElement:
    return random_group_element(handle.space, rng)


def _m(handle: VirtualImmersionHandle, rng: np.random.Generator) -> np.ndarray:
    return random_m_vector(handle.space, rng)


def _g(handle: VirtualImmersionHandle, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    return random_element(handle.space.algebra, rng, scale)


def _normal(handle: VirtualImmersionHandle, g: GroupElement, rng: np.random.Generator) -> np.ndarray:
    """Random normal vector with unit sup norm (zero when N is trivial)."""
    eta = handle.normal_projector(g) @ rng.standard_normal(handle.v_form.dim)
    size = _inf_norm(eta)
    return eta / size if size > 1e-300 else eta


def _ii_tolerance(handle: VirtualImmersionHandle, cfg: FDConfig) -> float:
    # Classical II comes out of a finite-difference Hessian
    return cfg.tol_algebraic if handle.skew else cfg.tol_fd


def _outer_step(handle: VirtualImmersionHandle, cfg: FDConfig) -> float:
    # Classical II is itself a finite-difference Hessian
    return cfg.step if handle.skew else NESTED_OUTER_FACTOR * cfg.second_step


def _worst(cfg: FDConfig, name: str, count: int, probe: Callable[[np.random.Generator], float]) -> float:
    worst = 0.0
    for k in range(count):
        worst = max(worst, probe(sample_rng(cfg, name, k)))
    return worst


def verify_cartan_inclusions(handle: VirtualImmersionHandle, cfg: FDConfig) -> CheckRecord:
    space = handle.space
    return CheckRecord.judge("cartan_inclusions", "[h,h] in h, [h,m] in m, [m,m] in h", 1,
                             cartan_residual(space.algebra, space.cartan), cfg.tol_algebraic)


def verify_jacobi_identity(handle: VirtualImmersionHandle, cfg: FDConfig) -> CheckRecord:
    return CheckRecord.judge("jacobi_identity", "[[X,Y],Z] + [[Y,Z],X] + [[Z,X],Y] = 0", 1,
                             verify_jacobi(handle.space.algebra), cfg.tol_algebraic)


def verify_condition_a(handle: VirtualImmersionHandle, cfg: FDConfig) -> CheckRecord:
    """|<Omega(X), Omega(Y)> - g(X, Y)| at random points."""
    space = handle.space

    def probe(rng):
        g, X, Y = _point(handle, rng), _m(handle, rng), _m(handle, rng)
        return abs(evaluate(handle.v_form, handle.omega(g, X), handle.omega(g, Y)) - space.metric(X, Y))

    return CheckRecord.judge("condition_a", "<Omega(X), Omega(Y)> = g(X, Y)", cfg.samples,
                             _worst(cfg, "condition_a", cfg.samples, probe), cfg.tol_algebraic)


def measure_bracket_sign(handle: VirtualImmersionHandle, cfg: FDConfig) -> Tuple[int, CheckRecord]:
    """
    Detect sigma in [X*, Y*] = sigma [X, Y]* from the flows of the left action.

    Returns:
        (sigma, record). Spaces where no probe sees a nonzero bracket (flat
        ones) fall back to sigma = -1, and the anchor says so.
    """
    name = "action_field_bracket_sign"
    count = _nested(cfg)
    probes = []
    for k in range(count):
        rng = sample_rng(cfg, name, k)
        g = _point(handle, rng)
        X, Y = _g(handle, rng, BRACKET_SCALE), _g(handle, rng, BRACKET_SCALE)
        probes.append(action_bracket_probe(handle, g, X, Y, cfg.second_step, cfg.richardson))
    alignment = sum(float(lhs @ rhs) for lhs, rhs in probes)
    strength = sum(float(rhs @ rhs) for _, rhs in probes)
    if strength > 1e-12:
        sigma = 1 if alignment > 0 else -1
        anchor = f"[X*, Y*] = {sigma:+d} [X, Y]* (measured)"
    else:
        sigma = DEFAULT_SIGN
        anchor = f"[X*, Y*] = {sigma:+d} [X, Y]* (no bracket observed, default)"
    residual = max((_inf_norm(lhs - sigma * rhs) for lhs, rhs in probes), default=0.0)
    logger.debug("Action-field bracket sign %+d (alignment %.3e)", sigma, alignment)
    return sigma, CheckRecord.judge(name, anchor, count, residual, cfg.tol_fd)


def verify_action_field_bracket_sign(handle: VirtualImmersionHandle, cfg: FDConfig) -> CheckRecord:
    return measure_bracket_sign(handle, cfg)[1]


def verify_action_field_derivative(handle: VirtualImmersionHandle, cfg: FDConfig) -> CheckRecord:
    """Closed-form D_{X*} Omega(Y*) against central differences of Omega(Y*) along exp(tX) g."""

    def probe(rng):
        g, X, Y = _point(handle, rng), _g(handle, rng), _g(handle, rng)
        closed = handle.action_field_derivative(g, X, Y)
        numeric = VirtualImmersionHandle.action_field_derivative(handle, g, X, Y, cfg.step, cfg.richardson)
        return _inf_norm(closed - numeric)

    return CheckRecord.judge("action_field_derivative",
                             "D_X* Omega(Y*) = Ad_g([A, B_m] - [A, B]_m), A = Ad_g^-1 X, B = Ad_g^-1 Y",
                             cfg.samples, _worst(cfg, "action_field_derivative", cfg.samples, probe), cfg.tol_fd)


def exterior_derivative(handle: VirtualImmersionHandle, g: GroupElement, X, Y, sigma: int, cfg: FDConfig) -> np.ndarray:
    """dOmega(X*, Y*) = D_X* Omega(Y*) - D_Y* Omega(X*) - Omega([X*, Y*]) with [X*, Y*] = sigma [X, Y]*."""
    bracket_field = handle.omega_of_action_field(g, bracket(handle.space.algebra, X, Y))
    return (handle.action_field_derivative(g, X, Y, cfg.step, cfg.richardson)
            - handle.action_field_derivative(g, Y, X, cfg.step, cfg.richardson)
            - sigma * bracket_field)


def verify_condition_b(handle: VirtualImmersionHandle, cfg: FDConfig, sigma: Optional[int] = None) -> CheckRecord:
    """
    |<dOmega(X*, Y*), Omega(Z*)>| over action fields. For classical handles
    the whole of dOmega must vanish, so its norm is included.
    """
    if sigma is None:
        sigma = measure_bracket_sign(handle, cfg)[0]
    exact = handle.kind == "classical"

    def probe(rng):
        g, X, Y, Z = _point(handle, rng), _g(handle, rng), _g(handle, rng), _g(handle, rng)
        d_omega = exterior_derivative(handle, g, X, Y, sigma, cfg)
        residual = abs(evaluate(handle.v_form, d_omega, handle.omega_of_action_field(g, Z)))
        return max(residual, _inf_norm(d_omega)) if exact else residual

    anchor = "dOmega = 0" if exact else "<dOmega(X, Y), Omega(Z)> = 0"
    return CheckRecord.judge("condition_b", anchor, cfg.samples,
                             _worst(cfg, "condition_b", cfg.samples, probe), cfg.tol_fd)


def verify_levi_civita(handle: VirtualImmersionHandle, cfg: FDConfig) -> CheckRecord:
    """The tangent part of d/dt Omega(Y(t)) vanishes for transvection-parallel Y(t)."""

    def probe(rng):
        g, X, Y = _point(handle, rng), _m(handle, rng), _m(handle, rng)
        flat = flat_derivative_along_geodesic(handle, g, X, Y, cfg.step, cfg.richardson)
        return _inf_norm(handle.tangent_projector(g) @ flat)

    return CheckRecord.judge("levi_civita", "D^T = nabla on parallel fields", cfg.samples,
                             _worst(cfg, "levi_civita", cfg.samples, probe), cfg.tol_fd)


def verify_ii_skewness(handle: VirtualImmersionHandle, cfg: FDConfig) -> CheckRecord:
    def probe(rng):
        g, X, Y = _point(handle, rng), _m(handle, rng), _m(handle, rng)
        return _inf_norm(handle.second_fundamental_form(g, X, Y) + handle.second_fundamental_form(g, Y, X))

    return CheckRecord.judge("ii_skewness", "II(X, Y) + II(Y, X) = 0", cfg.samples,
                             _worst(cfg, "ii_skewness", cfg.samples, probe), SKEW_TOL)


def verify_ii_symmetry(handle: VirtualImmersionHandle, cfg: FDConfig) -> CheckRecord:
    count = _nested(cfg)

    def probe(rng):
        g, X, Y = _point(handle, rng), _m(handle, rng), _m(handle, rng)
        return _inf_norm(handle.second_fundamental_form(g, X, Y) - handle.second_fundamental_form(g, Y, X))

    return CheckRecord.judge("ii_symmetry", "II(X, Y) - II(Y, X) = 0", count,
                             _worst(cfg, "ii_symmetry", count, probe), SYMMETRY_TOL)


def verify_equivariance(handle: VirtualImmersionHandle, cfg: FDConfig) -> CheckRecord:
    """H-equivariance of Omega on representatives and G-equivariance of II."""
    space = handle.space
    alg, tag = space.algebra, space.factor_tag

    def probe(rng):
        g, gamma = _point(handle, rng), _point(handle, rng)
        X, Y = _m(handle, rng), _m(handle, rng)
        h = group_exp(alg, random_h_vector(space, rng), factor_tag=tag)
        moved = space.cartan.project_m(adjoint_action(alg, h.inverse(), X))
        isotropy = _inf_norm(handle.omega(g @ h, moved) - handle.omega(g, X))
        translated = handle.second_fundamental_form(gamma @ g, X, Y)
        expected = handle.ambient_translation(gamma, handle.second_fundamental_form(g, X, Y))
        return max(isotropy, _inf_norm(translated - expected))

    return CheckRecord.judge("equivariance", "Omega(gh, Ad_h^-1 X) = Omega(g, X); II at [gamma g] = gamma II",
                             cfg.samples, _worst(cfg, "equivariance", cfg.samples, probe), cfg.tol_algebraic)


def verify_weingarten(handle: VirtualImmersionHandle, cfg: FDConfig) -> CheckRecord:
    space = handle.space

    def probe(rng):
        g, X = _point(handle, rng), _m(handle, rng)
        eta = _normal(handle, g, rng)
        S = handle.shape_operator(g, eta, X)
        return max((abs(space.metric(S, Y) - evaluate(handle.v_form, handle.second_fundamental_form(g, X, Y), eta))
                    for Y in space.cartan.m_frame.T), default=0.0)

    return CheckRecord.judge("weingarten", "<S_eta X, Y> = <II(X, Y), eta>", cfg.samples,
                             _worst(cfg, "weingarten", cfg.samples, probe), _ii_tolerance(handle, cfg))


def gauss_route(handle: VirtualImmersionHandle, g: GroupElement, X, Y, Z, W) -> float:
    """<II(Y, W), II(X, Z)> - <II(X, W), II(Y, Z)>."""
    II, form = handle.second_fundamental_form, handle.v_form
    return evaluate(form, II(g, Y, W), II(g, X, Z)) - evaluate(form, II(g, X, W), II(g, Y, Z))


def verify_gauss(handle: VirtualImmersionHandle, cfg: FDConfig) -> CheckRecord:
    space = handle.space

    def probe(rng):
        g = _point(handle, rng)
        X, Y, Z, W = (_m(handle, rng) for _ in range(4))
        intrinsic = space.metric(curvature_tensor(space, X, Y, Z), W)
        return abs(intrinsic - gauss_route(handle, g, X, Y, Z, W))

    return CheckRecord.judge("gauss", "<R(X,Y)Z, W> = <II(Y,W), II(X,Z)> - <II(X,W), II(Y,Z)>",
                             cfg.samples, _worst(cfg, "gauss", cfg.samples, probe), _ii_tolerance(handle, cfg))


def ricci_route(handle: VirtualImmersionHandle, g: GroupElement, X, Y, eta, zeta) -> float:
    """-<(S_eta^t S_zeta - S_zeta^t S_eta)X, Y>, transpose taken in g."""
    S, metric = handle.shape_operator, handle.space.metric
    return -(metric(S(g, zeta, X), S(g, eta, Y)) - metric(S(g, eta, X), S(g, zeta, Y)))


def verify_ricci(handle: VirtualImmersionHandle, cfg: FDConfig) -> CheckRecord:
    """Finite-difference normal curvature against the shape-operator commutator."""
    space = handle.space
    count = _nested(cfg)

    def probe(rng):
        g, X, Y = _point(handle, rng), _m(handle, rng), _m(handle, rng)
        eta, zeta = _normal(handle, g, rng), _normal(handle, g, rng)
        if handle.v_form.dim == space.dim_m:
            return 0.0
        r_perp = normal_curvature_oracle(handle, g, X, Y, eta, cfg.second_step, cfg.second_step, cfg.richardson)
        return abs(evaluate(handle.v_form, r_perp, zeta) - ricci_route(handle, g, X, Y, eta, zeta))

    return CheckRecord.judge("ricci", "<R^perp(X,Y)eta, zeta> = -<(S_eta^t S_zeta - S_zeta^t S_eta)X, Y>; "
                             + CURVATURE_CONVENTION, count, _worst(cfg, "ricci", count, probe), cfg.tol_fd)


def verify_codazzi(handle: VirtualImmersionHandle, cfg: FDConfig) -> CheckRecord:
    step = _outer_step(handle, cfg)
    count = _nested(cfg)

    def probe(rng):
        g, X, Y, Z = _point(handle, rng), _m(handle, rng), _m(handle, rng), _m(handle, rng)
        eta = _normal(handle, g, rng)
        dx = second_fundamental_derivative(handle, g, X, Y, Z, step, cfg.richardson)
        dy = second_fundamental_derivative(handle, g, Y, X, Z, step, cfg.richardson)
        return abs(evaluate(handle.v_form, dx - dy, eta))

    return CheckRecord.judge("codazzi", "<(D_X II)(Y,Z), eta> = <(D_Y II)(X,Z), eta>", count,
                             _worst(cfg, "codazzi", count, probe), cfg.tol_fd)


def verify_locsym_a(handle: VirtualImmersionHandle, cfg: FDConfig) -> CheckRecord:
    space = handle.space

    def probe(rng):
        g = _point(handle, rng)
        X, Y, Z, W = (_m(handle, rng) for _ in range(4))
        II = handle.second_fundamental_form
        return abs(evaluate(handle.v_form, II(g, X, Y), II(g, Z, W))
                   - space.metric(curvature_tensor(space, X, Y, Z), W))

    return CheckRecord.judge("locsym_a", "<II(X,Y), II(Z,W)> = <R(X,Y)Z, W>", cfg.samples,
                             _worst(cfg, "locsym_a", cfg.samples, probe), cfg.tol_algebraic)


def verify_locsym_b(handle: VirtualImmersionHandle, cfg: FDConfig) -> CheckRecord:
    space = handle.space

    def probe(rng):
        g, X, Y, Z = _point(handle, rng), _m(handle, rng), _m(handle, rng), _m(handle, rng)
        numeric = second_fundamental_derivative(handle, g, X, Y, Z, cfg.step, cfg.richardson)
        return _inf_norm(numeric - handle.omega(g, -curvature_tensor(space, Y, Z, X)))

    return CheckRecord.judge("locsym_b", "(D_X II)(Y,Z) = -R(Y,Z)X", cfg.samples,
                             _worst(cfg, "locsym_b", cfg.samples, probe), cfg.tol_fd)


def verify_locsym_c(handle: VirtualImmersionHandle, cfg: FDConfig) -> CheckRecord:
    """
    nabla R = 0. Constant m-coefficients along c(u) = g exp(uU) are parallel,
    so the finite-difference curvature of Omega, read back in m-coordinates,
    must not change along c.
    """
    space = handle.space
    count = _nested(cfg)

    def probe(rng):
        g, U = _point(handle, rng), _m(handle, rng)
        X, Y, Z = _m(handle, rng), _m(handle, rng), _m(handle, rng)

        def pulled_back(u: float) -> np.ndarray:
            c = geodesic_point(space, g, U, u)
            oracle = curvature_oracle(handle, c, X, Y, Z, cfg.second_step, cfg.second_step, cfg.richardson)
            return handle.tangent_coords(c, oracle)

        # the oracle is nested already, so its derivative takes a coarse step
        return _inf_norm(derivative(pulled_back, LOCSYM_STEP, cfg.richardson))

    return CheckRecord.judge("locsym_c", "nabla R = 0 along geodesics", count,
                             _worst(cfg, "locsym_c", count, probe), cfg.tol_fd)


def verify_curvature_oracle(handle: VirtualImmersionHandle, cfg: FDConfig) -> CheckRecord:
    space = handle.space
    count = _nested(cfg)

    def probe(rng):
        g, X, Y, Z = _point(handle, rng), _m(handle, rng), _m(handle, rng), _m(handle, rng)
        numeric = curvature_oracle(handle, g, X, Y, Z, cfg.second_step, cfg.second_step, cfg.richardson)
        return _inf_norm(handle.tangent_coords(g, numeric) - curvature_tensor(space, X, Y, Z))

    return CheckRecord.judge("curvature_oracle", "[[X,Y],Z] = finite-difference R; " + CURVATURE_CONVENTION,
                             count, _worst(cfg, "curvature_oracle", count, probe), cfg.tol_fd)


def verify_fullness(handle: VirtualImmersionHandle, cfg: FDConfig) -> CheckRecord:
    _, spanned = fullness(handle)
    return CheckRecord.judge("fullness", f"Omega spans V: {spanned} of {handle.v_form.dim}", 1,
                             float(handle.v_form.dim - spanned), 0.0)


def verify_kernel_characterization(handle: VirtualImmersionHandle, cfg: FDConfig) -> CheckRecord:
    kernel = kernel_of_hat_omega(handle)
    residual = (abs(kernel.dim - kernel.expected_dim) + kernel.span_residual
                + (handle.v_form.dim - kernel.rank))
    return CheckRecord.judge(
        "kernel_characterization",
        f"ker Omega_hat = {{(0, alpha) : R(alpha) = 0}}: dim {kernel.dim}, expected {kernel.expected_dim}",
        1, residual, cfg.tol_algebraic)


def verify_curvature_operator_readings(handle: VirtualImmersionHandle, cfg: FDConfig) -> CheckRecord:
    return CheckRecord.judge("curvature_operator_readings",
                             "R(alpha) = 0 as an operator iff <R(alpha), beta> = 0 for all beta", 1,
                             readings_residual(handle.space), cfg.tol_algebraic)


def _random_alpha(dim_m: int, rng: np.random.Generator) -> np.ndarray:
    A = rng.standard_normal((dim_m, dim_m))
    return A - A.T


def verify_hat_connection_compatibility(handle: VirtualImmersionHandle, cfg: FDConfig) -> CheckRecord:
    """d/dt Omega_hat(Z, alpha) along g exp(tW) equals Omega_hat(D_W (Z, alpha)) at [g]."""
    space = handle.space

    def probe(rng):
        g, W, Z = _point(handle, rng), _m(handle, rng), _m(handle, rng)
        el = HatElement(Z, _random_alpha(space.dim_m, rng))
        moving = derivative(lambda u: hat_omega(handle, el, geodesic_point(space, g, W, u)), cfg.step, cfg.richardson)
        return _inf_norm(moving - hat_omega(handle, hat_connection(space, W, el), g))

    return CheckRecord.judge("hat_connection_compatibility", "D Omega_hat = Omega_hat D_hat", cfg.samples,
                             _worst(cfg, "hat_connection_compatibility", cfg.samples, probe), cfg.tol_fd)


def verify_equivalence_map(handle: VirtualImmersionHandle, cfg: FDConfig) -> CheckRecord:
    """Recover a random isometry iota from Omega and iota o Omega."""
    name = "equivalence_map"
    count = min(cfg.samples, RIGIDITY_SAMPLES)
    worst = 0.0
    for k in range(count):
        iota = random_isometry(handle.v_form, sample_rng(cfg, name, k))
        result = equivalence_map(handle, handle.compose(iota), samples=3,
                                 seed=[cfg.seed, zlib.crc32(name.encode()), k, 1])
        worst = max(worst, _inf_norm(result.L - iota), result.isometry_residual, result.constancy_residual)
    return CheckRecord.judge(name, "L o Omega_1 = Omega_2 with L a constant isometry", count, worst, RIGIDITY_TOL)


def _convergence_errors(handle: VirtualImmersionHandle, rng: np.random.Generator, h: float) -> List[Tuple[float, float]]:
    space = handle.space
    alg = space.algebra
    g, X, Y, Z = _point(handle, rng), _m(handle, rng), _m(handle, rng), _m(handle, rng)
    A, B = _g(handle, rng), _g(handle, rng)
    C, D = _g(handle, rng, BRACKET_SCALE), _g(handle, rng, BRACKET_SCALE)
    el = HatElement(Z, _random_alpha(space.dim_m, rng))

    def raw_afd(step):
        return VirtualImmersionHandle.action_field_derivative(handle, g, A, B, step, False)

    def raw_flat(step):
        return flat_derivative_along_geodesic(handle, g, X, Y, step, False)

    def raw_curvature(step):
        return curvature_oracle(handle, g, X, Y, Z, step, step, False)

    def raw_ii_derivative(step):
        return second_fundamental_derivative(handle, g, X, Y, Z, step, False)

    def raw_hat(step):
        return derivative(lambda u: hat_omega(handle, el, geodesic_point(space, g, X, u)), step, False)

    def raw_bracket_lhs(step):
        return action_bracket_probe(handle, g, C, D, step, False)[0]

    def raw_bracket_rhs(step):
        return action_bracket_probe(handle, g, C, D, step, False)[1]

    # d/du f(exp(uW) g) = ad_W F - F ad_W
    ad, F = ad_operator(alg, bracket(alg, C, D)), isotropy_projection(space, g)
    bracket_exact = (ad @ F - F @ ad).reshape(-1)
    sign = 1.0 if float(raw_bracket_lhs(h) @ bracket_exact) > 0.0 else -1.0

    probes = [
        (raw_afd, handle.action_field_derivative(g, A, B)),
        (raw_flat, handle.second_fundamental_form(g, X, Y)),
        (raw_curvature, handle.omega(g, curvature_tensor(space, X, Y, Z))),
        (raw_ii_derivative, handle.omega(g, -curvature_tensor(space, Y, Z, X))),
        (raw_hat, hat_omega(handle, hat_connection(space, X, el), g)),
        (raw_bracket_lhs, sign * bracket_exact),
        (raw_bracket_rhs, bracket_exact),
    ]
    # a line bundle has no normal curvature to converge to
    if handle.v_form.dim - space.dim_m >= 2:
        eta, zeta = _normal(handle, g, rng), _normal(handle, g, rng)

        def raw_normal_curvature(step):
            return np.array([evaluate(handle.v_form, normal_curvature_oracle(handle, g, X, Y, eta, step, step, False),
                                      zeta)])

        probes.append((raw_normal_curvature, np.array([ricci_route(handle, g, X, Y, eta, zeta)])))
    return [(_inf_norm(raw(h) - exact), _inf_norm(raw(h / 2.0) - exact)) for raw, exact in probes]


def verify_fd_convergence_order(handle: VirtualImmersionHandle, cfg: FDConfig) -> CheckRecord:
    """
    Halving h must shrink raw central-difference errors by a factor in
    [2.5, 6]. Probes already at round-off level carry no information and are
    skipped.
    """
    name = "fd_convergence_order"
    low, high = CONVERGENCE_WINDOW
    informative = 0
    worst = 0.0
    for k in range(min(cfg.samples, CONVERGENCE_PROBES)):
        for coarse, fine in _convergence_errors(handle, sample_rng(cfg, name, k), cfg.convergence_step):
            if coarse < ROUNDOFF_FLOOR:
                logger.debug("Convergence probe at round-off level (%.2e), skipped", coarse)
                continue
            informative += 1
            ratio = coarse / fine if fine > 0.0 else float("inf")
            worst = max(worst, low - ratio, ratio - high)
    return CheckRecord.judge(name, "raw error ratio e(h)/e(h/2) in [2.5, 6]", informative, worst, 0.0)


SKEW_CHECKS: Tuple[Tuple[str, Check], ...] = (
    ("cartan_inclusions", verify_cartan_inclusions),
    ("jacobi_identity", verify_jacobi_identity),
    ("condition_a", verify_condition_a),
    ("action_field_bracket_sign", verify_action_field_bracket_sign),
    ("action_field_derivative", verify_action_field_derivative),
    ("condition_b", verify_condition_b),
    ("levi_civita", verify_levi_civita),
    ("ii_skewness", verify_ii_skewness),
    ("equivariance", verify_equivariance),
    ("weingarten", verify_weingarten),
    ("gauss", verify_gauss),
    ("ricci", verify_ricci),
    ("codazzi", verify_codazzi),
    ("locsym_a", verify_locsym_a),
    ("locsym_b", verify_locsym_b),
    ("locsym_c", verify_locsym_c),
    ("curvature_oracle", verify_curvature_oracle),
    ("fullness", verify_fullness),
    ("kernel_characterization", verify_kernel_characterization),
    ("curvature_operator_readings", verify_curvature_operator_readings),
    ("hat_connection_compatibility", verify_hat_connection_compatibility),
    ("equivalence_map", verify_equivalence_map),
    ("fd_convergence_order", verify_fd_convergence_order),
)

CLASSICAL_CHECKS: Tuple[Tuple[str, Check], ...] = (
    ("condition_a", verify_condition_a),
    ("action_field_bracket_sign", verify_action_field_bracket_sign),
    ("condition_b", verify_condition_b),
    ("levi_civita", verify_levi_civita),
    ("ii_symmetry", verify_ii_symmetry),
    ("weingarten", verify_weingarten),
    ("gauss", verify_gauss),
    ("ricci", verify_ricci),
    ("codazzi", verify_codazzi),
    ("fullness", verify_fullness),
)


def describe(handle: VirtualImmersionHandle) -> str:
    if handle.kind == "canonical":
        return handle.space.descriptor
    return f"{handle.space.descriptor} ({handle.kind})"


def run_suite(subject: Union[SymmetricSpaceModel, VirtualImmersionHandle], cfg: FDConfig) -> VerificationReport:
    """
    Run every check that applies to the handle (Omega_0 when given a model).

    A check that raises a domain error becomes a failing record with an
    infinite residual; the suite itself does not raise.
    """
    handle = omega0(subject) if isinstance(subject, SymmetricSpaceModel) else subject
    checks = SKEW_CHECKS if handle.skew else CLASSICAL_CHECKS
    sigma, sign_record = measure_bracket_sign(handle, cfg)

    records = []
    for name, check in checks:
        if name == "action_field_bracket_sign":
            records.append(sign_record)
            continue
        if name == "condition_b":
            check = partial(verify_condition_b, sigma=sigma)
        try:
            record = check(handle, cfg)
        except (CartanVirtError, np.linalg.LinAlgError) as e:
            logger.error("Check %s raised on %s: %s", name, describe(handle), e)
            record = CheckRecord.judge(name, f"error: {e}", 0, float("inf"), 0.0)
        logger.info("%s %s: residual %.3e (tolerance %.1e) %s", describe(handle), record.name,
                    record.max_residual, record.tolerance, "pass" if record.passed else "FAIL")
        records.append(record)

    records.sort(key=CheckRecord.sort_key)
    return VerificationReport(space=describe(handle), config=cfg.model_dump(), checks=records)
