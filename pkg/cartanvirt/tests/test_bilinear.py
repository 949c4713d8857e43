import numpy as np
import pytest

from app.core.errors import (
    Degenerate,
    DimensionMismatch,
    NotSquare,
    NotSymmetric,
    TangentNotPositiveDefinite,
)
from app.services.bilinear import (
    Subspace,
    evaluate,
    is_isometry,
    make_form,
    signature,
    split_tangent_normal,
)
from app.services.lie_algebra import LieAlgebraModel, killing_form


def rotations3():
    L1 = np.array([[0.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]])
    L2 = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [-1.0, 0.0, 0.0]])
    L3 = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    return [L1, L2, L3]


@pytest.fixture
def lorentz():
    return make_form(np.diag([1.0, 1.0, -1.0]))


class TestMakeForm:
    def test_euclidean_plane(self):
        """Identity Gram matrix gives signature (2, 0)"""
        assert signature(make_form(np.eye(2))) == (2, 0)

    def test_lorentz_space(self, lorentz):
        assert signature(lorentz) == (2, 1)

    def test_zero_eigenvalue_is_degenerate(self):
        with pytest.raises(Degenerate):
            make_form(np.diag([1.0, 0.0]))

    def test_not_square(self):
        with pytest.raises(NotSquare):
            make_form(np.ones((2, 3)))

    def test_not_symmetric(self):
        with pytest.raises(NotSymmetric):
            make_form(np.array([[1.0, 0.5], [0.0, 1.0]]))

    def test_gram_is_symmetrized(self):
        """Asymmetry below tolerance is averaged away exactly"""
        gram = np.array([[2.0, 1.0 + 1e-14], [1.0, 3.0]])
        form = make_form(gram)
        assert np.array_equal(form.gram, form.gram.T)

    def test_signature_invariant_under_congruence(self, lorentz, rng):
        S = rng.standard_normal((3, 3)) + 3.0 * np.eye(3)
        assert signature(make_form(S.T @ lorentz.gram @ S)) == (2, 1)


class TestEvaluate:
    def test_orthonormal_basis(self):
        form = make_form(np.eye(2))
        assert evaluate(form, [1.0, 0.0], [0.0, 1.0]) == 0.0

    def test_reads_off_diagonal(self):
        form = make_form(np.diag([1.0, -1.0]))
        assert evaluate(form, [0.0, 1.0], [0.0, 1.0]) == -1.0

    def test_killing_form_of_so3(self):
        """B(L1, L1) = tr(ad_L1 ad_L1) = -2, and B is negative definite"""
        B = killing_form(LieAlgebraModel.from_basis(rotations3()))
        assert evaluate(B, [1.0, 0.0, 0.0], [1.0, 0.0, 0.0]) == pytest.approx(-2.0)
        assert signature(B) == (0, 3)

    def test_symmetric_bit_for_bit(self, lorentz, rng):
        u, v = rng.standard_normal(3), rng.standard_normal(3)
        assert evaluate(lorentz, u, v) == evaluate(lorentz, v, u)

    def test_dimension_mismatch(self, lorentz):
        with pytest.raises(DimensionMismatch):
            evaluate(lorentz, [1.0, 0.0], [1.0, 0.0, 0.0])


class TestSplitTangentNormal:
    def test_orthogonal_axes(self):
        form = make_form(np.eye(2))
        x_t, x_n = split_tangent_normal(form, Subspace(np.array([[1.0], [0.0]])), [1.0, 1.0])
        np.testing.assert_allclose(x_t, [1.0, 0.0], atol=1e-12)
        np.testing.assert_allclose(x_n, [0.0, 1.0], atol=1e-12)

    def test_timelike_vector_is_normal(self, lorentz):
        tangent = Subspace(np.eye(3)[:, :2])
        x_t, x_n = split_tangent_normal(lorentz, tangent, [0.0, 0.0, 1.0])
        np.testing.assert_allclose(x_t, 0.0, atol=1e-12)
        np.testing.assert_allclose(x_n, [0.0, 0.0, 1.0], atol=1e-12)

    def test_reassembly_and_idempotence(self, lorentz, rng):
        """Non-orthonormal tangent basis inside an indefinite space"""
        tangent = Subspace(np.array([[1.0, 1.0], [0.0, 2.0], [0.5, 0.0]]))
        x = rng.standard_normal(3)
        x_t, x_n = split_tangent_normal(lorentz, tangent, x)
        np.testing.assert_allclose(x_t + x_n, x, atol=1e-12)
        for t in tangent.basis.T:
            assert abs(evaluate(lorentz, x_n, t)) < 1e-12
        again_t, again_n = split_tangent_normal(lorentz, tangent, x_t)
        np.testing.assert_allclose(again_t, x_t, atol=1e-12)
        np.testing.assert_allclose(again_n, 0.0, atol=1e-12)

    def test_timelike_tangent_rejected(self, lorentz):
        with pytest.raises(TangentNotPositiveDefinite):
            split_tangent_normal(lorentz, Subspace(np.eye(3)[:, 2:]), [1.0, 0.0, 0.0])

    def test_dependent_basis_rejected(self):
        with pytest.raises(DimensionMismatch):
            Subspace(np.array([[1.0, 2.0], [1.0, 2.0]]))


class TestIsIsometry:
    def test_identity(self, lorentz):
        assert is_isometry(lorentz, lorentz, np.eye(3)) == 0.0

    def test_rotation(self):
        c, s = np.cos(0.3), np.sin(0.3)
        form = make_form(np.eye(2))
        assert is_isometry(form, form, [[c, -s], [s, c]]) < 1e-14

    def test_doubling(self):
        """|2 * 1 * 2 - 1| = 3 on the one-dimensional form"""
        form = make_form([[1.0]])
        assert is_isometry(form, form, [[2.0]]) == 3.0

    def test_invariant_under_target_isometry(self, lorentz):
        boost = np.array([[1.0, 0.0, 0.0], [0.0, np.cosh(0.4), np.sinh(0.4)], [0.0, np.sinh(0.4), np.cosh(0.4)]])
        L = np.diag([2.0, 1.0, 1.0])
        assert is_isometry(lorentz, lorentz, boost @ L) == pytest.approx(is_isometry(lorentz, lorentz, L), abs=1e-12)

    def test_shape_mismatch(self, lorentz):
        with pytest.raises(DimensionMismatch):
            is_isometry(lorentz, lorentz, np.eye(2))
