from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import PARAMS, scalars
from nordgeom.errors import DimensionError, InvalidStructureError, SingularMetricError
from nordgeom.families import paper_family_algebra, paper_frame, random_valid_algebra
from nordgeom.frame import (
    FrameStructure,
    GeometrySetup,
    LieAlgebra,
    associated_metric,
    bracket,
    check_antisymmetry,
    check_jacobi,
    check_norden,
    lower_index,
    metric_signature,
    raise_index,
    standard_norden_frame,
)
from nordgeom.scalars import Scalar

G = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]]
J = [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]]


def s(text):
    return Scalar.parse(text, PARAMS)


class TestBracket:
    def test_family_x1_x2(self, family):
        assert bracket(family, family.basis(1), family.basis(2)) == (s("lambda"), s("-lambda"), s("0"), s("0"))

    def test_family_x3_x4(self, family):
        assert bracket(family, family.basis(3), family.basis(4)) == (s("0"), s("0"), s("-mu"), s("mu"))

    def test_self_bracket_vanishes(self, family):
        for i in range(1, 5):
            assert all(c.is_zero() for c in bracket(family, family.basis(i), family.basis(i)))

    def test_dimension_mismatch(self, family):
        with pytest.raises(DimensionError):
            bracket(family, [1, 0, 0], [0, 1, 0, 0])

    @given(st.lists(scalars, min_size=4, max_size=4), st.lists(scalars, min_size=4, max_size=4),
           st.lists(scalars, min_size=4, max_size=4), st.fractions(-3, 3, max_denominator=3))
    def test_bilinear_and_antisymmetric(self, x, y, z, c):
        alg = paper_family_algebra(2, -1, PARAMS)
        xy = alg.bracket(x, y)
        assert alg.bracket(y, x) == tuple(-v for v in xy)
        lhs = alg.bracket([a + b * c for a, b in zip(x, z)], y)
        rhs = tuple(a + b * c for a, b in zip(xy, alg.bracket(z, y)))
        assert lhs == rhs


class TestJacobi:
    def test_abelian(self):
        assert check_jacobi(LieAlgebra.abelian(4))

    def test_family_symbolic(self):
        assert check_jacobi(paper_family_algebra())

    def test_failure_carries_witness(self):
        alg = LieAlgebra.from_brackets(4, {(1, 2): {3: 1}, (1, 3): {1: 1}}, check=False)
        v = check_jacobi(alg)
        assert not v
        assert v.witness == (1, 2, 3, 3)
        assert v.residual == -1

    def test_construction_rejects(self):
        with pytest.raises(InvalidStructureError):
            LieAlgebra.from_brackets(4, {(1, 2): {3: 1}, (1, 3): {1: 1}})

    def test_antisymmetry_enforced(self):
        C = LieAlgebra.abelian(4).C.copy()
        C[0, 1, 2] = Scalar.one()
        with pytest.raises(InvalidStructureError):
            LieAlgebra(C)

    def test_antisymmetry_check(self, family):
        assert check_antisymmetry(family.algebra)

    @pytest.mark.parametrize("seed", range(20))
    def test_random_algebras_satisfy_jacobi(self, seed):
        alg = random_valid_algebra(seed)
        assert alg is None or check_jacobi(alg)


class TestNorden:
    def test_paper_frame(self):
        assert check_norden(paper_frame())

    def test_identity_J(self):
        v = check_norden(FrameStructure(G, [[int(i == j) for j in range(4)] for i in range(4)], check=False))
        assert not v
        assert "J^2" in v.detail

    def test_positive_definite_metric(self):
        eye = [[int(i == j) for j in range(4)] for i in range(4)]
        v = check_norden(FrameStructure(eye, J, check=False))
        assert not v
        assert v.witness == (1, 1)

    def test_singular_metric(self):
        with pytest.raises(SingularMetricError):
            FrameStructure([[1, 1, 0, 0], [1, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]], J, check=False)

    def test_asymmetric_metric(self):
        with pytest.raises(InvalidStructureError):
            FrameStructure([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]], J, check=False)

    def test_odd_dimension(self):
        with pytest.raises(DimensionError):
            FrameStructure([[1]], [[0]], check=False)

    def test_inverse_metric_equals_metric(self):
        f = paper_frame()
        assert f.g_inv == f.g

    def test_standard_frame_matches_explicit_matrices(self):
        assert standard_norden_frame(4) == FrameStructure(G, J)

    @pytest.mark.parametrize("dim", [2, 6, 8])
    def test_standard_frames_in_other_dimensions(self, dim):
        assert check_norden(standard_norden_frame(dim))


class TestAssociatedMetric:
    def test_values(self):
        gt = associated_metric(paper_frame())
        assert gt[0][2] == -1 and gt[1][3] == -1
        assert all(gt[i][i] == 0 for i in range(4))
        assert all(gt[i][j] == gt[j][i] for i in range(4) for j in range(4))

    def test_is_norden(self):
        f = paper_frame()
        gt = associated_metric(f)
        assert check_norden(FrameStructure(gt, f.J))

    def test_twice_recovers_minus_g(self):
        f = paper_frame()
        gtt = associated_metric(FrameStructure(associated_metric(f), f.J))
        assert gtt == tuple(tuple(-v for v in row) for row in f.g)

    def test_both_metrics_are_neutral(self):
        f = paper_frame()
        assert metric_signature(f.g) == (2, 2, 0)
        assert metric_signature(associated_metric(f)) == (2, 2, 0)


class TestIndices:
    def test_raise(self):
        f = paper_frame()
        assert raise_index(f, [1, 0, 0, 0]) == (1, 0, 0, 0)
        assert raise_index(f, [0, 0, 1, 0]) == (0, 0, -1, 0)

    @given(st.lists(st.fractions(-5, 5, max_denominator=4), min_size=4, max_size=4))
    def test_round_trip(self, w):
        f = FrameStructure([[2, 1, 0, 0], [1, 1, 0, 0], [0, 0, -2, -1], [0, 0, -1, -1]], J, check=False)
        assert lower_index(f, raise_index(f, w)) == tuple(Fraction(x) for x in w)


class TestSetup:
    def test_rejects_bad_jacobi(self):
        alg = LieAlgebra.from_brackets(4, {(1, 2): {3: 1}, (1, 3): {1: 1}}, check=False)
        with pytest.raises(InvalidStructureError) as err:
            GeometrySetup(alg, paper_frame())
        assert err.value.verdict.witness == (1, 2, 3, 3)

    def test_rejects_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            GeometrySetup(LieAlgebra.abelian(2), paper_frame())

    def test_family_is_on_standard_frame(self, family):
        assert family.uses_standard_frame
        assert family.params == PARAMS
