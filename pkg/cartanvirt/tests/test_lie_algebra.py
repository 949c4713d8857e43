import numpy as np
import pytest

from app.core.errors import ClosureViolation, DimensionMismatch, NotInvertible
from app.services.lie_algebra import (
    GroupElement,
    LieAlgebraModel,
    ad_operator,
    adjoint_action,
    bracket,
    frobenius_pairing_residual,
    group_exp,
    killing_form,
    random_element,
    verify_jacobi,
)
from app.services.bilinear import evaluate

from test_bilinear import rotations3


@pytest.fixture(scope="module")
def so3():
    return LieAlgebraModel.from_basis(rotations3())


@pytest.fixture(scope="module")
def sl2():
    """Basis H, E, F"""
    H = np.diag([1.0, -1.0])
    E = np.array([[0.0, 1.0], [0.0, 0.0]])
    F = np.array([[0.0, 0.0], [1.0, 0.0]])
    return LieAlgebraModel.from_basis([H, E, F])


@pytest.fixture(scope="module")
def sl3():
    basis = [np.diag([1.0, -1.0, 0.0]), np.diag([0.0, 1.0, -1.0])]
    for i in range(3):
        for j in range(3):
            if i != j:
                E = np.zeros((3, 3))
                E[i, j] = 1.0
                basis.append(E)
    return LieAlgebraModel.from_basis(basis)


@pytest.fixture(scope="module")
def abelian2():
    return LieAlgebraModel.from_basis([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])


class TestBracket:
    def test_self_bracket_vanishes(self, so3, rng):
        X = random_element(so3, rng)
        assert np.array_equal(bracket(so3, X, X), np.zeros(3))

    def test_so3_generators(self, so3):
        """[L1, L2] = L3"""
        np.testing.assert_allclose(bracket(so3, [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]), [0.0, 0.0, 1.0], atol=1e-12)

    def test_abelian(self, abelian2, rng):
        X, Y = random_element(abelian2, rng), random_element(abelian2, rng)
        np.testing.assert_allclose(bracket(abelian2, X, Y), 0.0, atol=1e-15)

    def test_agrees_with_matrix_commutator(self, sl3, rng):
        X, Y = random_element(sl3, rng), random_element(sl3, rng)
        assert frobenius_pairing_residual(sl3, X, Y) < 1e-10

    def test_wrong_length(self, so3):
        with pytest.raises(DimensionMismatch):
            bracket(so3, [1.0, 0.0], [0.0, 1.0, 0.0])

    def test_open_basis_rejected(self):
        """E and its transpose alone do not close under the bracket"""
        E = np.array([[0.0, 1.0], [0.0, 0.0]])
        with pytest.raises(ClosureViolation):
            LieAlgebraModel.from_basis([E, E.T])


class TestAdOperator:
    def test_zero(self, so3):
        assert np.array_equal(ad_operator(so3, np.zeros(3)), np.zeros((3, 3)))

    def test_so3_rotation_pattern(self, so3):
        """[L3, L1] = L2 and [L3, L2] = -L1"""
        ad = ad_operator(so3, [0.0, 0.0, 1.0])
        assert ad[1, 0] == pytest.approx(1.0)
        assert ad[0, 1] == pytest.approx(-1.0)

    def test_traceless(self, so3, sl2, rng):
        for alg in (so3, sl2):
            assert abs(np.trace(ad_operator(alg, random_element(alg, rng)))) < 1e-12


class TestKillingForm:
    def test_so3(self, so3):
        np.testing.assert_allclose(killing_form(so3).gram, -2.0 * np.eye(3), atol=1e-12)

    def test_sl2(self, sl2):
        gram = killing_form(sl2).gram
        assert gram[0, 0] == pytest.approx(8.0)
        assert gram[1, 2] == pytest.approx(4.0)
        assert gram[1, 1] == pytest.approx(0.0, abs=1e-12)
        assert gram[2, 2] == pytest.approx(0.0, abs=1e-12)

    def test_abelian_is_zero_and_flagged(self, abelian2):
        form = killing_form(abelian2)
        assert np.array_equal(form.gram, np.zeros((2, 2)))
        assert form.degenerate_allowed

    def test_ad_invariance(self, sl3, rng):
        B = killing_form(sl3)
        X, Y, Z = (random_element(sl3, rng) for _ in range(3))
        assert abs(evaluate(B, bracket(sl3, Z, X), Y) + evaluate(B, X, bracket(sl3, Z, Y))) < 1e-9


class TestAdjointAction:
    def test_identity(self, so3, rng):
        X = random_element(so3, rng)
        np.testing.assert_allclose(adjoint_action(so3, GroupElement.identity(3), X), X, atol=1e-14)

    def test_minus_identity(self, sl2, rng):
        X = random_element(sl2, rng)
        np.testing.assert_allclose(adjoint_action(sl2, GroupElement(-np.eye(2)), X), X, atol=1e-14)

    def test_rotation_about_third_axis(self, so3):
        t = 0.3
        g = group_exp(so3, [0.0, 0.0, 1.0], t)
        np.testing.assert_allclose(adjoint_action(so3, g, [1.0, 0.0, 0.0]), [np.cos(t), np.sin(t), 0.0], atol=1e-12)

    def test_homomorphism(self, sl3, rng):
        g = group_exp(sl3, random_element(sl3, rng, 0.5))
        h = group_exp(sl3, random_element(sl3, rng, 0.5))
        X = random_element(sl3, rng)
        np.testing.assert_allclose(adjoint_action(sl3, g @ h, X),
                                   adjoint_action(sl3, g, adjoint_action(sl3, h, X)), atol=1e-9)

    def test_killing_form_invariant(self, sl3, rng):
        B = killing_form(sl3)
        g = group_exp(sl3, random_element(sl3, rng, 0.5))
        X, Y = random_element(sl3, rng), random_element(sl3, rng)
        assert evaluate(B, adjoint_action(sl3, g, X), adjoint_action(sl3, g, Y)) == pytest.approx(evaluate(B, X, Y), abs=1e-9)

    def test_derivative_is_ad(self, so3, rng):
        """d/dt Ad_exp(tZ) X at 0 equals [Z, X]"""
        Z, X = random_element(so3, rng), random_element(so3, rng)
        h = 1e-4
        numeric = (adjoint_action(so3, group_exp(so3, Z, h), X) - adjoint_action(so3, group_exp(so3, Z, -h), X)) / (2 * h)
        np.testing.assert_allclose(numeric, bracket(so3, Z, X), atol=1e-6)

    def test_non_normalizing_element(self, so3):
        """A shear does not normalize so(3)"""
        shear = np.eye(3)
        shear[0, 1] = 1.0
        with pytest.raises(ClosureViolation):
            adjoint_action(so3, GroupElement(shear), [0.0, 0.0, 1.0])

    def test_singular_element(self):
        with pytest.raises(NotInvertible):
            GroupElement(np.zeros((2, 2)))


class TestGroupExp:
    def test_zero_time(self, sl2, rng):
        np.testing.assert_allclose(group_exp(sl2, random_element(sl2, rng), 0.0).matrix, np.eye(2), atol=1e-15)

    def test_half_turn(self):
        so2 = LieAlgebraModel.from_basis([np.array([[0.0, -1.0], [1.0, 0.0]])])
        np.testing.assert_allclose(group_exp(so2, [1.0], np.pi).matrix, -np.eye(2), atol=1e-12)

    def test_one_parameter_property(self, sl3, rng):
        X = random_element(sl3, rng, 0.5)
        product = group_exp(sl3, X, 0.3) @ group_exp(sl3, X, 0.4)
        np.testing.assert_allclose(product.matrix, group_exp(sl3, X, 0.7).matrix, atol=1e-10)

    def test_liouville(self, rng):
        gl2 = LieAlgebraModel.from_basis([np.diag([1.0, 0.0]), np.diag([0.0, 1.0]),
                                          np.array([[0.0, 1.0], [0.0, 0.0]]), np.array([[0.0, 0.0], [1.0, 0.0]])])
        X = random_element(gl2, rng, 0.5)
        det = np.linalg.det(group_exp(gl2, X, 0.8).matrix)
        assert det == pytest.approx(np.exp(0.8 * np.trace(gl2.to_matrix(X))), abs=1e-10)


class TestJacobi:
    def test_so3(self, so3):
        assert verify_jacobi(so3) < 1e-12

    def test_sl3(self, sl3):
        assert verify_jacobi(sl3) < 1e-10

    def test_corrupted_structure_constants(self, so3):
        structure = np.array(so3.structure)
        # [L1, L2] = L1 + L3 keeps antisymmetry but breaks Jacobi
        structure[0, 1, 0] = 1.0
        structure[1, 0, 0] = -1.0
        corrupted = LieAlgebraModel(3, so3.basis, structure)
        assert verify_jacobi(corrupted) > 0.1
