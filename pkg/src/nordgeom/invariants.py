"""One-shot computation of every invariant for a setup."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .connection import (
    ClassVerdict,
    ConnectionTable,
    FTensor,
    LieForms,
    classify,
    f_tensor,
    levi_civita,
    lie_forms,
    nabla_j_square_norm,
    nijenhuis,
    w2_condition_check,
)
from .curvature import (
    CurvatureTensor,
    HolomorphicConstancy,
    NormCurvatureRelation,
    RicciData,
    SectionalCurvature,
    curvature_tensor,
    holomorphic_constancy_check,
    norm_curvature_relation_check,
    plane_type,
    ricci_and_scalars,
    sectional_curvature,
    weyl_tensor,
)
from .errors import DegeneratePlaneError
from .frame import GeometrySetup, Verdict
from .scalars import Scalar


@dataclass(frozen=True)
class PlaneCurvature:
    plane: tuple[int, int]  # 1-based
    kind: str | None
    curvature: SectionalCurvature | None  # None for a degenerate plane


@dataclass(frozen=True)
class GeometryInvariants:
    setup: GeometrySetup
    connection: ConnectionTable
    F: FTensor
    N: np.ndarray
    forms: LieForms
    classes: ClassVerdict
    norm: Scalar
    R: CurvatureTensor
    ricci: RicciData
    weyl: np.ndarray | None
    planes: tuple[PlaneCurvature, ...]
    constancy: HolomorphicConstancy
    norm_relation: NormCurvatureRelation
    w2_conditions: Verdict | None

    @property
    def H(self) -> Scalar:
        return self.constancy.H


def compute_invariants(setup: GeometrySetup) -> GeometryInvariants:
    conn = levi_civita(setup)
    F = f_tensor(setup, conn)
    N = nijenhuis(setup)
    forms = lie_forms(setup, F)
    classes = classify(setup, F, forms)
    norm = nabla_j_square_norm(setup, F)
    R = curvature_tensor(setup, conn)
    ricci = ricci_and_scalars(setup, R)
    weyl = weyl_tensor(setup, R, ricci) if setup.dim >= 4 else None
    planes = []
    for i, j in itertools.combinations(range(1, setup.dim + 1), 2):
        x, y = setup.basis(i), setup.basis(j)
        try:
            k = sectional_curvature(setup, R, x, y)
            kind = plane_type(setup, x, y)
        except DegeneratePlaneError:
            k, kind = None, None
        planes.append(PlaneCurvature((i, j), kind, k))
    constancy = holomorphic_constancy_check(setup, R, ricci)
    relation = norm_curvature_relation_check(setup, norm, ricci, classes.flags(), constancy)
    w2 = w2_condition_check(setup.algebra) if setup.uses_standard_frame else None
    return GeometryInvariants(
        setup=setup,
        connection=conn,
        F=F,
        N=N,
        forms=forms,
        classes=classes,
        norm=norm,
        R=R,
        ricci=ricci,
        weyl=weyl,
        planes=tuple(planes),
        constancy=constancy,
        norm_relation=relation,
        w2_conditions=w2,
    )
