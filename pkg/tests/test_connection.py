from fractions import Fraction

import pytest

from conftest import PARAMS, member
from nordgeom import _tensor
from nordgeom.connection import (
    check_f_symmetries,
    check_metric_compatible,
    check_torsion_free,
    classify,
    f_from_brackets,
    f_from_connection,
    f_tensor,
    levi_civita,
    lie_forms,
    lie_forms_standard_components,
    nabla_j_square_norm,
    nijenhuis,
    nijenhuis_standard_components,
    w2_condition_check,
)
from nordgeom.curvature import curvature_tensor, ricci_and_scalars
from nordgeom.errors import DimensionError
from nordgeom.families import paper_frame, random_valid_algebra
from nordgeom.frame import GeometrySetup, LieAlgebra, standard_norden_frame
from nordgeom.scalars import Scalar


def s(text):
    return Scalar.parse(text, PARAMS)


def on_paper_frame(brackets):
    return GeometrySetup(LieAlgebra.from_brackets(4, brackets), paper_frame())


def random_setups(count=40):
    out = []
    for seed in range(count):
        alg = random_valid_algebra(seed, w2_ansatz=seed % 3 == 0)
        if alg is not None:
            out.append(pytest.param(GeometrySetup(alg, standard_norden_frame(4)), id=f"seed{seed}"))
    return out


def is_w2(setup):
    F = f_tensor(setup)
    return classify(setup, F, lie_forms(setup, F)).w2


RANDOM = random_setups()
RANDOM_W2 = [p for p in RANDOM if is_w2(p.values[0])]


class TestLeviCivita:
    def test_family_entry(self, family):
        conn = levi_civita(family)
        assert conn.covariant(1, 2) == (s("lambda"), s("0"), s("mu"), s("mu"))

    def test_abelian(self, abelian):
        assert _tensor.is_zero(levi_civita(abelian).gamma)

    def test_substituted_entry(self):
        assert levi_civita(member(1, 2)).covariant(3, 3) == tuple(Scalar.const(v, PARAMS) for v in (0, 0, 0, 2))

    @pytest.mark.parametrize("setup", RANDOM)
    def test_torsion_free_and_metric(self, setup):
        conn = levi_civita(setup)
        assert check_torsion_free(setup, conn)
        assert check_metric_compatible(setup, conn)


class TestF:
    def test_family_entries(self, family):
        F = f_tensor(family).F
        lam, mu = s("lambda"), s("mu")
        assert F[0, 0, 3] == -lam
        assert F[2, 1, 1] == -2 * lam
        assert F[0, 0, 1] == mu
        assert F[1, 0, 0] == 2 * mu

    def test_abelian_is_kaehler(self, abelian):
        assert _tensor.is_zero(f_tensor(abelian).F)

    def test_mu_only_member(self):
        F = f_tensor(member(0, 1)).F
        assert F[0, 0, 1] == 1
        assert F[0, 1, 1] == 2

    @pytest.mark.parametrize("setup", RANDOM)
    def test_two_routes_and_symmetries(self, setup):
        conn = levi_civita(setup)
        a, b = f_from_brackets(setup), f_from_connection(setup, conn)
        assert all(a[idx] == b[idx] for idx in _tensor.indices(4, 3))
        assert check_f_symmetries(setup, a)


class TestNijenhuis:
    def test_family_integrable(self, family):
        assert _tensor.is_zero(nijenhuis(family))

    def test_abelian(self, abelian):
        assert _tensor.is_zero(nijenhuis(abelian))

    def test_single_bracket(self):
        N = nijenhuis(on_paper_frame({(1, 2): {1: 1}}))
        assert N[0, 1, 0] == -1

    @pytest.mark.parametrize("setup", RANDOM)
    def test_component_formula_and_antisymmetry(self, setup):
        N = nijenhuis(setup)
        assert tuple(N[0, 1]) == nijenhuis_standard_components(setup.algebra)
        assert all(N[i, j, k] == -N[j, i, k] for i, j, k in _tensor.indices(4, 3))


class TestLieForms:
    def test_family(self, family):
        forms = lie_forms(family, f_tensor(family))
        assert all(v.is_zero() for v in forms.theta + forms.theta_star)

    def test_abelian(self, abelian):
        assert all(v.is_zero() for v in lie_forms(abelian, f_tensor(abelian)).theta)

    def test_single_bracket(self):
        setup = on_paper_frame({(1, 3): {1: 1}})
        forms = lie_forms(setup, f_tensor(setup))
        assert forms.theta == (2, 0, 0, 0)

    @pytest.mark.parametrize("setup", RANDOM)
    def test_closed_form_and_theta_star(self, setup):
        forms = lie_forms(setup, f_tensor(setup))
        assert forms.theta == lie_forms_standard_components(setup.algebra)
        J = setup.frame.J
        for i in range(4):
            assert forms.theta_star[i] == sum((forms.theta[k] * J[i][k] for k in range(4)), Scalar.zero())


class TestClassify:
    def flags(self, setup):
        F = f_tensor(setup)
        return classify(setup, F, lie_forms(setup, F)).flags()

    def test_family_is_w2_only(self, family):
        assert self.flags(family) == {"W0": False, "W1": False, "W2": True, "W3": False}

    def test_abelian_all(self, abelian):
        assert all(self.flags(abelian).values())

    def test_flat_member_all(self):
        assert all(self.flags(member(0, 0)).values())

    @pytest.mark.parametrize("setup", RANDOM)
    def test_w0_contained_in_every_class(self, setup):
        f = self.flags(setup)
        if f["W0"]:
            assert f["W1"] and f["W2"] and f["W3"]

    @pytest.mark.parametrize("setup", RANDOM)
    def test_w2_implies_integrable(self, setup):
        if self.flags(setup)["W2"]:
            assert _tensor.is_zero(nijenhuis(setup))

    @pytest.mark.parametrize("setup", RANDOM)
    def test_w2_iff_structure_conditions(self, setup):
        assert self.flags(setup)["W2"] == w2_condition_check(setup.algebra).ok

    def test_failure_has_witness(self):
        setup = on_paper_frame({(1, 3): {1: 1}})
        F = f_tensor(setup)
        v = classify(setup, F, lie_forms(setup, F))
        assert not v.w0 and v.checks["W0"].witness is not None


class TestNorm:
    def test_family(self, family):
        assert nabla_j_square_norm(family, f_tensor(family)) == s("-32*lambda^2 + 32*mu^2")

    def test_abelian(self, abelian):
        assert nabla_j_square_norm(abelian, f_tensor(abelian)) == 0

    def test_member(self):
        setup = member(1, 2)
        assert nabla_j_square_norm(setup, f_tensor(setup)) == 96

    @pytest.mark.parametrize("setup", RANDOM_W2)
    def test_w2_norm_relation(self, setup):
        ricci = ricci_and_scalars(setup, curvature_tensor(setup))
        assert nabla_j_square_norm(setup, f_tensor(setup)) == 2 * (ricci.tau + ricci.tau_star_star)


class TestW2Conditions:
    def test_family(self, family):
        assert w2_condition_check(family.algebra)

    def test_abelian(self):
        assert w2_condition_check(LieAlgebra.abelian(4))

    def test_first_chain_broken(self):
        v = w2_condition_check(LieAlgebra.from_brackets(4, {(1, 3): {1: 1}}, check=False))
        assert not v
        assert v.witness == (1,)
        assert v.residual == 1

    def test_member(self):
        assert w2_condition_check(member(1, 2).algebra)

    def test_wrong_dimension(self):
        with pytest.raises(DimensionError):
            w2_condition_check(LieAlgebra.abelian(6))
