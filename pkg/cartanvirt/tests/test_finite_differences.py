import numpy as np
import pytest

from app.services.finite_differences import (
    curvature_oracle,
    derivative,
    flat_derivative_along_geodesic,
    isotropy_projection,
    mixed_partial,
)
from app.services.lie_algebra import ad_operator, adjoint_action, bracket, group_exp
from app.services.symmetric_space import curvature_tensor, random_group_element, random_h_vector, random_m_vector
from app.services.virtual_immersion import omega0


class TestDerivative:
    def test_richardson_is_fourth_order(self):
        f = lambda u: np.array([np.sin(u), np.exp(u)])
        np.testing.assert_allclose(derivative(f, 1e-2), [1.0, 1.0], atol=1e-9)

    def test_plain_central_difference_is_second_order(self):
        f = lambda u: np.array([np.exp(u)])
        errors = [abs(derivative(f, h, richardson=False)[0] - 1.0) for h in (1e-2, 5e-3)]
        assert errors[0] / errors[1] == pytest.approx(4.0, rel=0.05)

    def test_mixed_partial(self):
        f = lambda s, t: np.array([s * t * np.exp(s), np.sin(s + t)])
        np.testing.assert_allclose(mixed_partial(f, 1e-3), [1.0, 0.0], atol=1e-8)


class TestGeometricOracles:
    def test_flat_derivative_of_canonical_immersion(self, sl_so3, rng):
        """d/dt Ad_{g exp(tX)} Y = Ad_g [X, Y]"""
        handle = omega0(sl_so3)
        g = random_group_element(sl_so3, rng)
        X, Y = random_m_vector(sl_so3, rng), random_m_vector(sl_so3, rng)
        expected = adjoint_action(sl_so3.algebra, g, bracket(sl_so3.algebra, X, Y))
        np.testing.assert_allclose(flat_derivative_along_geodesic(handle, g, X, Y, 1e-4), expected, atol=1e-7)

    @pytest.mark.parametrize("space_fixture", ["sphere2", "hyperbolic_plane"])
    def test_curvature_oracle_at_base_point(self, request, space_fixture, rng):
        space = request.getfixturevalue(space_fixture)
        handle = omega0(space)
        e = space.identity()
        X, Y, Z = (random_m_vector(space, rng) for _ in range(3))
        numeric = handle.tangent_coords(e, curvature_oracle(handle, e, X, Y, Z, 1e-4, 1e-3))
        np.testing.assert_allclose(numeric, curvature_tensor(space, X, Y, Z), atol=1e-5)


class TestIsotropyProjection:
    def test_constant_on_cosets(self, sl_so3, rng):
        g = random_group_element(sl_so3, rng)
        h = group_exp(sl_so3.algebra, random_h_vector(sl_so3, rng), factor_tag=sl_so3.factor_tag)
        np.testing.assert_allclose(isotropy_projection(sl_so3, g @ h), isotropy_projection(sl_so3, g), atol=1e-12)

    def test_idempotent_with_rank_dim_h(self, sl_so3, rng):
        P = isotropy_projection(sl_so3, random_group_element(sl_so3, rng))
        np.testing.assert_allclose(P @ P, P, atol=1e-10)
        assert np.linalg.matrix_rank(P) == sl_so3.dim_h

    def test_derivative_along_left_action(self, hyperbolic_plane, rng):
        """d/du of Ad_q P_h Ad_q^-1 along exp(uW) g is the commutator with ad_W"""
        space = hyperbolic_plane
        alg, tag = space.algebra, space.factor_tag
        g = random_group_element(space, rng)
        W = rng.standard_normal(alg.dim)
        numeric = derivative(lambda u: isotropy_projection(space, group_exp(alg, W, u, tag) @ g), 1e-3)
        ad, F = ad_operator(alg, W), isotropy_projection(space, g)
        np.testing.assert_allclose(numeric, ad @ F - F @ ad, atol=1e-8)
