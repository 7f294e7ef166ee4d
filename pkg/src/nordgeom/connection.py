"""Levi-Civita connection, the fundamental tensor F, Nijenhuis tensor, Lie
forms and the basic Norden classes.

Class membership is decided over all frame index triples. Every defining
identity is multilinear, so holding on a basis is the same as holding for
all vector fields.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _tensor
from .errors import DimensionError, InternalConsistencyError
from .frame import GeometrySetup, LieAlgebra, Verdict
from .scalars import Scalar

__all__ = [
    "ConnectionTable",
    "FTensor",
    "LieForms",
    "ClassVerdict",
    "levi_civita",
    "check_torsion_free",
    "check_metric_compatible",
    "f_tensor",
    "f_from_brackets",
    "f_from_connection",
    "check_f_symmetries",
    "nijenhuis",
    "nijenhuis_standard_components",
    "lie_forms",
    "lie_forms_standard_components",
    "classify",
    "nabla_j_square_norm",
    "w2_condition_check",
]


@dataclass(frozen=True)
class ConnectionTable:
    """``gamma[i, j, k]`` is the coefficient of ``X_k`` in ``nabla_{X_i} X_j``."""

    gamma: np.ndarray

    def covariant(self, i: int, j: int) -> tuple[Scalar, ...]:
        """1-based ``nabla_{X_i} X_j`` as a coefficient vector."""
        return tuple(self.gamma[i - 1, j - 1])


@dataclass(frozen=True)
class FTensor:
    """``F[i, j, k] = g((nabla_{X_i} J) X_j, X_k)``."""

    F: np.ndarray


@dataclass(frozen=True)
class LieForms:
    theta: tuple[Scalar, ...]
    theta_star: tuple[Scalar, ...]


@dataclass(frozen=True)
class ClassVerdict:
    w0: bool
    w1: bool
    w2: bool
    w3: bool
    checks: dict[str, Verdict] = field(default_factory=dict)

    def flags(self) -> dict[str, bool]:
        return {"W0": self.w0, "W1": self.w1, "W2": self.w2, "W3": self.w3}


# -- helpers -------------------------------------------------------------


def _bracket_lowered(setup: GeometrySetup) -> np.ndarray:
    """``B[a, b, c] = g([X_a, X_b], X_c)``."""
    n, g, C = setup.dim, setup.frame.g, setup.algebra.C
    B = _tensor.zeros(n, 3, setup.params)
    for a, b, c in _tensor.indices(n, 3):
        acc = B[a, b, c]
        for m in range(n):
            if g[m][c] and C[a, b, m].terms:
                acc = acc + C[a, b, m] * g[m][c]
        B[a, b, c] = acc
    return B


def _lower_vec(setup: GeometrySetup, v) -> list[Scalar]:
    n, g = setup.dim, setup.frame.g
    out = []
    for k in range(n):
        acc = Scalar.zero(setup.params)
        for m in range(n):
            if g[m][k] and v[m].terms:
                acc = acc + v[m] * g[m][k]
        out.append(acc)
    return out


def _J_vec(setup: GeometrySetup, v) -> list[Scalar]:
    n, J = setup.dim, setup.frame.J
    out = []
    for k in range(n):
        acc = Scalar.zero(setup.params)
        for a in range(n):
            if J[a][k] and v[a].terms:
                acc = acc + v[a] * J[a][k]
        out.append(acc)
    return out


def _bracket_basis_J(setup: GeometrySetup) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectors ``[X_i, X_j]``, ``[X_i, J X_j]`` and ``[J X_i, J X_j]`` indexed [i, j, component]."""
    n, J, C = setup.dim, setup.frame.J, setup.algebra.C
    XJ = _tensor.zeros(n, 3, setup.params)
    JJ = _tensor.zeros(n, 3, setup.params)
    for i, j, m in _tensor.indices(n, 3):
        acc = XJ[i, j, m]
        for b in range(n):
            if J[j][b] and C[i, b, m].terms:
                acc = acc + C[i, b, m] * J[j][b]
        XJ[i, j, m] = acc
    for i, j, m in _tensor.indices(n, 3):
        acc = JJ[i, j, m]
        for a in range(n):
            if J[i][a]:
                acc = acc + XJ[a, j, m] * J[i][a]
        JJ[i, j, m] = acc
    return setup.algebra.C, XJ, JJ


def _first_failure(pairs, detail: str) -> Verdict:
    for idx, residual in pairs:
        if not residual.is_zero():
            return Verdict(False, tuple(i + 1 for i in idx), residual, detail)
    return Verdict(True, detail=detail)


# -- connection ----------------------------------------------------------


def levi_civita(setup: GeometrySetup) -> ConnectionTable:
    """Solve ``2 g(nabla_i X_j, X_k) = g([X_i,X_j],X_k) + g([X_k,X_i],X_j) + g([X_k,X_j],X_i)``."""
    n, g_inv = setup.dim, setup.frame.g_inv
    B = _bracket_lowered(setup)
    half = Fraction(1, 2)
    low = _tensor.zeros(n, 3, setup.params)
    for i, j, k in _tensor.indices(n, 3):
        low[i, j, k] = (B[i, j, k] + B[k, i, j] + B[k, j, i]) * half
    gamma = _tensor.zeros(n, 3, setup.params)
    for i, j, k in _tensor.indices(n, 3):
        acc = gamma[i, j, k]
        for q in range(n):
            if g_inv[q][k] and low[i, j, q].terms:
                acc = acc + low[i, j, q] * g_inv[q][k]
        gamma[i, j, k] = acc
    conn = ConnectionTable(gamma)
    for check in (check_torsion_free, check_metric_compatible):
        verdict = check(setup, conn)
        if not verdict:
            raise InternalConsistencyError(f"Levi-Civita connection: {verdict.describe()}")
    return conn


def check_torsion_free(setup: GeometrySetup, conn: ConnectionTable) -> Verdict:
    G, C = conn.gamma, setup.algebra.C
    return _first_failure(
        (((i, j, k), G[i, j, k] - G[j, i, k] - C[i, j, k]) for i, j, k in _tensor.indices(setup.dim, 3)),
        "nabla_i X_j - nabla_j X_i != [X_i, X_j]",
    )


def check_metric_compatible(setup: GeometrySetup, conn: ConnectionTable) -> Verdict:
    n, g, G = setup.dim, setup.frame.g, conn.gamma

    def residual(i, j, k):
        acc = Scalar.zero(setup.params)
        for m in range(n):
            if g[m][k]:
                acc = acc + G[i, j, m] * g[m][k]
            if g[j][m]:
                acc = acc + G[i, k, m] * g[j][m]
        return acc

    return _first_failure(
        (((i, j, k), residual(i, j, k)) for i, j, k in _tensor.indices(n, 3)),
        "g(nabla_i X_j, X_k) + g(X_j, nabla_i X_k) != 0",
    )


# -- F -------------------------------------------------------------------


def f_from_connection(setup: GeometrySetup, conn: ConnectionTable) -> np.ndarray:
    """``F_ijk = g(nabla_i (J X_j) - J nabla_i X_j, X_k)``."""
    n, J, G = setup.dim, setup.frame.J, conn.gamma
    F = _tensor.zeros(n, 3, setup.params)
    for i, j in itertools.product(range(n), repeat=2):
        nab_JXj = [Scalar.zero(setup.params) for _ in range(n)]
        for a in range(n):
            if J[j][a]:
                for m in range(n):
                    nab_JXj[m] = nab_JXj[m] + G[i, a, m] * J[j][a]
        J_nab = _J_vec(setup, G[i, j])
        diff = [p - q for p, q in zip(nab_JXj, J_nab)]
        F[i, j, :] = _lower_vec(setup, diff)
    return F


def f_from_brackets(setup: GeometrySetup) -> np.ndarray:
    """F from brackets alone, no connection involved::

        2F_ijk = g([X_i,JX_j] - J[X_i,X_j], X_k) + g(J[X_k,X_i] - [JX_k,X_i], X_j)
               + g([X_k,JX_j] - [JX_k,X_j], X_i)
    """
    n = setup.dim
    C, XJ, _ = _bracket_basis_J(setup)
    g = setup.frame.g

    def lowered(v, c):
        acc = Scalar.zero(setup.params)
        for m in range(n):
            if g[m][c] and v[m].terms:
                acc = acc + v[m] * g[m][c]
        return acc

    JC = np.empty((n, n), dtype=object)
    for a, b in itertools.product(range(n), repeat=2):
        JC[a, b] = _J_vec(setup, C[a, b])
    half = Fraction(1, 2)
    F = _tensor.zeros(n, 3, setup.params)
    for i, j, k in _tensor.indices(n, 3):
        t1 = [p - q for p, q in zip(XJ[i, j], JC[i, j])]
        # [JX_k, X_i] = -[X_i, JX_k]
        t2 = [p + q for p, q in zip(JC[k, i], XJ[i, k])]
        t3 = [p + q for p, q in zip(XJ[k, j], XJ[j, k])]
        F[i, j, k] = (lowered(t1, k) + lowered(t2, j) + lowered(t3, i)) * half
    return F


def check_f_symmetries(setup: GeometrySetup, F: np.ndarray) -> Verdict:
    """``F(x,y,z) = F(x,z,y) = F(x,Jy,Jz)`` on all frame triples."""
    n, J = setup.dim, setup.frame.J
    v = _first_failure(
        (((i, j, k), F[i, j, k] - F[i, k, j]) for i, j, k in _tensor.indices(n, 3)),
        "F(x,y,z) != F(x,z,y)",
    )
    if not v:
        return v
    FJ = _tensor.apply_frame_map(_tensor.apply_frame_map(F, J, 1), J, 2)
    return _first_failure(
        (((i, j, k), F[i, j, k] - FJ[i, j, k]) for i, j, k in _tensor.indices(n, 3)),
        "F(x,y,z) != F(x,Jy,Jz)",
    )


def f_tensor(setup: GeometrySetup, conn: ConnectionTable | None = None) -> FTensor:
    """F by two independent routes; they must agree exactly."""
    if conn is None:
        conn = levi_civita(setup)
    via_conn = f_from_connection(setup, conn)
    via_brackets = f_from_brackets(setup)
    agree = _first_failure(
        ((idx, via_conn[idx] - via_brackets[idx]) for idx in np.ndindex(via_conn.shape)),
        "F via connection != F via brackets",
    )
    if not agree:
        raise InternalConsistencyError(agree.describe())
    sym = check_f_symmetries(setup, via_conn)
    if not sym:
        raise InternalConsistencyError(sym.describe())
    return FTensor(via_conn)


# -- Nijenhuis and Lie forms ----------------------------------------------


def nijenhuis(setup: GeometrySetup) -> np.ndarray:
    """``N[i, j, k]`` with ``N(X_i, X_j) = [JX_i,JX_j] - [X_i,X_j] - J[JX_i,X_j] - J[X_i,JX_j]``."""
    n = setup.dim
    C, XJ, JJ = _bracket_basis_J(setup)
    N = _tensor.zeros(n, 3, setup.params)
    for i, j in itertools.product(range(n), repeat=2):
        # [JX_i, X_j] = -[X_j, JX_i]
        inner = [q - p for p, q in zip(XJ[j, i], XJ[i, j])]
        Jinner = _J_vec(setup, inner)
        N[i, j, :] = [a - b - c for a, b, c in zip(JJ[i, j], C[i, j], Jinner)]
    if setup.uses_standard_frame:
        expected = nijenhuis_standard_components(setup.algebra)
        for k, value in enumerate(expected):
            if N[0, 1, k] != value:
                raise InternalConsistencyError(
                    f"N_12^{k + 1}: definition gives {N[0, 1, k]}, component formula {value}"
                )
    return N


def nijenhuis_standard_components(algebra: LieAlgebra) -> tuple[Scalar, ...]:
    """``N_12^k`` for the standard 4-dimensional Norden frame, in closed form."""
    c = algebra.constant
    return (
        c(3, 4, 1) - c(1, 2, 1) - c(2, 3, 3) + c(1, 4, 3),
        c(3, 4, 2) - c(1, 2, 2) - c(2, 3, 4) + c(1, 4, 4),
        c(3, 4, 3) - c(1, 2, 3) + c(2, 3, 1) - c(1, 4, 1),
        c(3, 4, 4) - c(1, 2, 4) + c(2, 3, 2) - c(1, 4, 2),
    )


def lie_forms_standard_components(algebra: LieAlgebra) -> tuple[Scalar, ...]:
    """``theta(X_k)`` for the standard 4-dimensional Norden frame, in closed form."""
    c = algebra.constant
    return (
        2 * c(1, 3, 1) - c(1, 2, 4) + c(1, 4, 2) + c(2, 3, 2) - c(3, 4, 4),
        2 * c(2, 4, 2) + c(1, 2, 3) + c(1, 4, 1) + c(2, 3, 1) + c(3, 4, 3),
        2 * c(1, 3, 3) + c(1, 2, 2) + c(1, 4, 4) + c(2, 3, 4) + c(3, 4, 2),
        2 * c(2, 4, 4) - c(1, 2, 1) + c(1, 4, 3) + c(2, 3, 3) - c(3, 4, 1),
    )


def lie_forms(setup: GeometrySetup, F: FTensor) -> LieForms:
    n, g_inv, J = setup.dim, setup.frame.g_inv, setup.frame.J
    theta = []
    for k in range(n):
        acc = Scalar.zero(setup.params)
        for i, j in itertools.product(range(n), repeat=2):
            if g_inv[i][j]:
                acc = acc + F.F[i, j, k] * g_inv[i][j]
        theta.append(acc)
    theta_star = []
    for i in range(n):
        acc = Scalar.zero(setup.params)
        for k in range(n):
            if J[i][k]:
                acc = acc + theta[k] * J[i][k]
        theta_star.append(acc)
    if setup.uses_standard_frame:
        expected = lie_forms_standard_components(setup.algebra)
        for k, value in enumerate(expected):
            if theta[k] != value:
                raise InternalConsistencyError(
                    f"theta_{k + 1}: contraction gives {theta[k]}, component formula {value}"
                )
    return LieForms(tuple(theta), tuple(theta_star))


# -- classification ------------------------------------------------------


def classify(setup: GeometrySetup, F: FTensor, forms: LieForms) -> ClassVerdict:
    n, g, J = setup.dim, setup.frame.g, setup.frame.J
    T = F.F
    idx3 = list(_tensor.indices(n, 3))

    w0 = _first_failure(((idx, T[idx]) for idx in idx3), "F = 0")

    w3 = _first_failure(
        (((i, j, k), T[i, j, k] + T[j, k, i] + T[k, i, j]) for i, j, k in idx3),
        "F(x,y,z) + F(y,z,x) + F(z,x,y) = 0",
    )

    FJ = _tensor.apply_frame_map(T, J, 2)  # F(x, y, Jz)
    w2 = _first_failure(
        (((i, j, k), FJ[i, j, k] + FJ[j, k, i] + FJ[k, i, j]) for i, j, k in idx3),
        "F(x,y,Jz) + F(y,z,Jx) + F(z,x,Jy) = 0",
    )
    if w2:
        w2 = _first_failure((((k,), forms.theta[k]) for k in range(n)), "theta = 0")

    # g(X_i, J X_j) and theta(J X_k)
    gJ = [[sum((J[j][b] * g[i][b] for b in range(n)), Fraction(0)) for j in range(n)] for i in range(n)]
    factor = Fraction(1, n)  # 1/(2m) with dim = 2m

    def w1_residual(i, j, k):
        th, ths = forms.theta, forms.theta_star
        rhs = th[k] * g[i][j] + th[j] * g[i][k] + ths[k] * gJ[i][j] + ths[j] * gJ[i][k]
        return T[i, j, k] - rhs * factor

    w1 = _first_failure((((i, j, k), w1_residual(i, j, k)) for i, j, k in idx3), "W1 defining identity")

    return ClassVerdict(
        w0=w0.ok,
        w1=w1.ok,
        w2=w2.ok,
        w3=w3.ok,
        checks={"W0": w0, "W1": w1, "W2": w2, "W3": w3},
    )


def nabla_j_square_norm(setup: GeometrySetup, F: FTensor) -> Scalar:
    """``g^ij g^kl g^pq F_ikp F_jlq``."""
    n, gi = setup.dim, setup.frame.g_inv
    T = F.F
    nz = [[(j, gi[i][j]) for j in range(n) if gi[i][j]] for i in range(n)]
    total = Scalar.zero(setup.params)
    for i, k, p in _tensor.indices(n, 3):
        a = T[i, k, p]
        if not a.terms:
            continue
        for j, gij in nz[i]:
            for l, gkl in nz[k]:
                for q, gpq in nz[p]:
                    b = T[j, l, q]
                    if b.terms:
                        total = total + a * b * (gij * gkl * gpq)
    return total


_W2_CHAINS = (
    # (lhs terms, rhs terms): each side is a list of (sign, (i, j, k))
    ("C_13^1 = C_12^4 - C_23^2", [(1, (1, 3, 1))], [(1, (1, 2, 4)), (-1, (2, 3, 2))]),
    ("C_12^4 - C_23^2 = C_34^4 - C_14^2", [(1, (1, 2, 4)), (-1, (2, 3, 2))], [(1, (3, 4, 4)), (-1, (1, 4, 2))]),
    ("C_13^3 = -(C_12^2 + C_23^4)", [(1, (1, 3, 3))], [(-1, (1, 2, 2)), (-1, (2, 3, 4))]),
    ("C_12^2 + C_23^4 = C_14^4 + C_34^2", [(1, (1, 2, 2)), (1, (2, 3, 4))], [(1, (1, 4, 4)), (1, (3, 4, 2))]),
    ("C_24^4 = C_12^1 - C_14^3", [(1, (2, 4, 4))], [(1, (1, 2, 1)), (-1, (1, 4, 3))]),
    ("C_12^1 - C_14^3 = C_34^1 - C_23^3", [(1, (1, 2, 1)), (-1, (1, 4, 3))], [(1, (3, 4, 1)), (-1, (2, 3, 3))]),
    ("C_24^2 = -(C_12^3 + C_14^1)", [(1, (2, 4, 2))], [(-1, (1, 2, 3)), (-1, (1, 4, 1))]),
    ("C_12^3 + C_14^1 = C_23^1 + C_34^3", [(1, (1, 2, 3)), (1, (1, 4, 1))], [(1, (2, 3, 1)), (1, (3, 4, 3))]),
)


def w2_condition_check(algebra: LieAlgebra) -> Verdict:
    """Linear conditions on the structure constants equivalent to the W2 class
    for the standard 4-dimensional Norden frame. Witness is the 1-based
    number of the first failing equality."""
    if algebra.dim != 4:
        raise DimensionError(f"the W2 structure-constant conditions are for dimension 4, got {algebra.dim}")
    for number, (label, lhs, rhs) in enumerate(_W2_CHAINS, start=1):
        residual = Scalar.zero(algebra.params)
        for sign, ijk in lhs:
            residual = residual + algebra.constant(*ijk) * sign
        for sign, ijk in rhs:
            residual = residual - algebra.constant(*ijk) * sign
        if not residual.is_zero():
            return Verdict(False, (number,), residual, label)
    return Verdict(True)
