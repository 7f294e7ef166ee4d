"""Curvature of a left-invariant metric and the invariants built from it.

Sign convention: ``R(x,y)z = nabla_x nabla_y z - nabla_y nabla_x z - nabla_[x,y] z``
and ``R(x,y,z,u) = g(R(x,y)z, u)``, so ``R(x,y,y,x)`` is the numerator of
the sectional curvature. All tensors are constant in the left-invariant
frame, so every pointwise statement below is also a global one.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from . import _tensor
from .connection import ConnectionTable, f_tensor, levi_civita, nabla_j_square_norm
from .errors import DegeneratePlaneError, DimensionError, InternalConsistencyError
from .frame import GeometrySetup, Verdict
from .scalars import Scalar, as_fraction

__all__ = [
    "CurvatureTensor",
    "RicciData",
    "CurvatureLike",
    "SectionalCurvature",
    "HolomorphicConstancy",
    "NormCurvatureRelation",
    "IsotropicKahlerReport",
    "curvature_tensor",
    "check_curvature_symmetries",
    "ricci_and_scalars",
    "ricci_trace",
    "curvature_like",
    "evaluate",
    "sectional_curvature",
    "holomorphic_sectional_curvature",
    "plane_type",
    "holomorphic_constancy_lhs",
    "holomorphic_constancy_check",
    "norm_curvature_relation_check",
    "weyl_tensor",
    "isotropic_kahler_battery",
]


@dataclass(frozen=True)
class CurvatureTensor:
    """``R[i, j, k, l] = R(X_i, X_j, X_k, X_l)``."""

    R: np.ndarray


@dataclass(frozen=True)
class RicciData:
    rho: np.ndarray
    tau: Scalar
    tau_star: Scalar
    tau_star_star: Scalar


@dataclass(frozen=True)
class CurvatureLike:
    kind: str
    T: np.ndarray


@dataclass(frozen=True)
class SectionalCurvature:
    """``numerator / denominator``; ``value`` is None when the quotient is not a polynomial."""

    numerator: Scalar
    denominator: Scalar
    value: Scalar | None


# -- R and its traces ----------------------------------------------------


def check_curvature_symmetries(T: np.ndarray) -> Verdict:
    """Antisymmetry in each pair, pair exchange and the first Bianchi identity."""
    n = T.shape[0]
    for idx in _tensor.indices(n, 4):
        i, j, k, l = idx
        v = T[idx]
        for label, other in (
            ("T(x,y,z,u) = -T(y,x,z,u)", -T[j, i, k, l]),
            ("T(x,y,z,u) = -T(x,y,u,z)", -T[i, j, l, k]),
            ("T(x,y,z,u) = T(z,u,x,y)", T[k, l, i, j]),
        ):
            r = v - other
            if not r.is_zero():
                return Verdict(False, (i + 1, j + 1, k + 1, l + 1), r, label)
        b = v + T[j, k, i, l] + T[k, i, j, l]
        if not b.is_zero():
            return Verdict(False, (i + 1, j + 1, k + 1, l + 1), b, "first Bianchi identity")
    return Verdict(True)


def curvature_tensor(setup: GeometrySetup, conn: ConnectionTable | None = None) -> CurvatureTensor:
    if conn is None:
        conn = levi_civita(setup)
    n, g, G, C = setup.dim, setup.frame.g, conn.gamma, setup.algebra.C
    R = _tensor.zeros(n, 4, setup.params)
    for i, j, k in _tensor.indices(n, 3):
        vec = []
        for p in range(n):
            acc = Scalar.zero(setup.params)
            for a in range(n):
                if G[j, k, a].terms and G[i, a, p].terms:
                    acc = acc + G[j, k, a] * G[i, a, p]
                if G[i, k, a].terms and G[j, a, p].terms:
                    acc = acc - G[i, k, a] * G[j, a, p]
                if C[i, j, a].terms and G[a, k, p].terms:
                    acc = acc - C[i, j, a] * G[a, k, p]
            vec.append(acc)
        for l in range(n):
            acc = Scalar.zero(setup.params)
            for p in range(n):
                if g[p][l] and vec[p].terms:
                    acc = acc + vec[p] * g[p][l]
            R[i, j, k, l] = acc
    verdict = check_curvature_symmetries(R)
    if not verdict:
        raise InternalConsistencyError(f"curvature tensor: {verdict.describe()}")
    return CurvatureTensor(R)


def ricci_trace(setup: GeometrySetup, T: np.ndarray) -> np.ndarray:
    """``g^ij T(e_i, y, z, e_j)``."""
    n, gi = setup.dim, setup.frame.g_inv
    out = _tensor.zeros(n, 2, setup.params)
    for y, z in _tensor.indices(n, 2):
        acc = out[y, z]
        for i, j in _tensor.indices(n, 2):
            if gi[i][j] and T[i, y, z, j].terms:
                acc = acc + T[i, y, z, j] * gi[i][j]
        out[y, z] = acc
    return out


def ricci_and_scalars(setup: GeometrySetup, R: CurvatureTensor) -> RicciData:
    n, gi, J = setup.dim, setup.frame.g_inv, setup.frame.J
    rho = ricci_trace(setup, R.R)
    for y, z in _tensor.indices(n, 2):
        if rho[y, z] != rho[z, y]:
            raise InternalConsistencyError(f"Ricci tensor not symmetric at ({y + 1},{z + 1})")
    zero = Scalar.zero(setup.params)
    tau = zero
    tau_star = zero
    for i, j in _tensor.indices(n, 2):
        if gi[i][j]:
            tau = tau + rho[i, j] * gi[i][j]
            for b in range(n):
                if J[j][b]:
                    tau_star = tau_star + rho[i, b] * (gi[i][j] * J[j][b])
    RJJ = _tensor.apply_frame_map(_tensor.apply_frame_map(R.R, J, 2), J, 3)
    tss = zero
    for i, j, k, l in _tensor.indices(n, 4):
        if gi[i][l] and gi[j][k] and RJJ[i, j, k, l].terms:
            tss = tss + RJJ[i, j, k, l] * (gi[i][l] * gi[j][k])
    return RicciData(rho, tau, tau_star, tss)


# -- curvature-like tensors ------------------------------------------------


def _rank2(setup: GeometrySetup, S) -> np.ndarray:
    n = setup.dim
    out = np.empty((n, n), dtype=object)
    for a, b in _tensor.indices(n, 2):
        v = S[a, b] if isinstance(S, np.ndarray) else S[a][b]
        out[a, b] = v if isinstance(v, Scalar) else Scalar.const(v, setup.params)
    return out


def _psi1(setup: GeometrySetup, S: np.ndarray) -> np.ndarray:
    n, g = setup.dim, setup.frame.g
    T = _tensor.zeros(n, 4, setup.params)
    for x, y, z, u in _tensor.indices(n, 4):
        acc = T[x, y, z, u]
        if g[y][z]:
            acc = acc + S[x, u] * g[y][z]
        if g[x][z]:
            acc = acc - S[y, u] * g[x][z]
        if g[x][u]:
            acc = acc + S[y, z] * g[x][u]
        if g[y][u]:
            acc = acc - S[x, z] * g[y][u]
        T[x, y, z, u] = acc
    return T


def curvature_like(kind: str, setup: GeometrySetup, S=None) -> CurvatureLike:
    """``psi1`` (needs a symmetric ``S``), ``pi1 = psi1(g)/2`` or ``pi2``."""
    n, g, J = setup.dim, setup.frame.g, setup.frame.J
    if kind == "psi1":
        if S is None:
            raise ValueError("psi1 needs a symmetric rank-2 argument S")
        S = _rank2(setup, S)
        for a, b in _tensor.indices(n, 2):
            if S[a, b] != S[b, a]:
                raise ValueError(f"S is not symmetric at ({a + 1},{b + 1})")
        T = _psi1(setup, S)
    elif kind == "pi1":
        T = _psi1(setup, _rank2(setup, g))
        for idx in np.ndindex(T.shape):
            T[idx] = T[idx] * Fraction(1, 2)
    elif kind == "pi2":
        # g(X_a, J X_b)
        gJ = [[sum((J[b][q] * g[a][q] for q in range(n)), Fraction(0)) for b in range(n)] for a in range(n)]
        T = _tensor.zeros(n, 4, setup.params)
        for x, y, z, u in _tensor.indices(n, 4):
            T[x, y, z, u] = Scalar.const(gJ[y][z] * gJ[x][u] - gJ[x][z] * gJ[y][u], setup.params)
    else:
        raise ValueError(f"unknown curvature-like kind {kind!r}; expected psi1, pi1 or pi2")
    verdict = check_curvature_symmetries(T)
    if not verdict:
        raise InternalConsistencyError(f"{kind}: {verdict.describe()}")
    return CurvatureLike(kind, T)


# -- sectional curvature ---------------------------------------------------


def evaluate(T: np.ndarray, *vectors: Sequence) -> Scalar:
    """Multilinear evaluation of a frame tensor on coefficient vectors."""
    params = next(iter(T.flat)).params
    vecs = [[v if isinstance(v, Scalar) else Scalar.const(v, params) for v in vec] for vec in vectors]
    supports = [[(i, c) for i, c in enumerate(vec) if c.terms] for vec in vecs]
    total = Scalar.zero(params)
    for combo in itertools.product(*supports):
        idx = tuple(i for i, _ in combo)
        entry = T[idx]
        if entry.terms:
            coeff = Scalar.one(params)
            for _, c in combo:
                coeff = coeff * c
            total = total + entry * coeff
    return total


def _plane_denominator(setup: GeometrySetup, x, y) -> Scalar:
    gxx, gyy, gxy = setup.inner(x, x), setup.inner(y, y), setup.inner(x, y)
    return gxx * gyy - gxy * gxy


def sectional_curvature(setup: GeometrySetup, R: CurvatureTensor, x: Sequence, y: Sequence) -> SectionalCurvature:
    x, y = setup.vector(x), setup.vector(y)
    den = _plane_denominator(setup, x, y)
    if den.is_zero():
        raise DegeneratePlaneError("plane is degenerate: pi1(x,y,y,x) = 0")
    num = evaluate(R.R, x, y, y, x)
    if den.is_constant():
        value = num / den.constant_value()
    else:
        value = num.exact_div(den)
    return SectionalCurvature(num, den, value)


def holomorphic_sectional_curvature(setup: GeometrySetup, R: CurvatureTensor, x: Sequence) -> SectionalCurvature:
    """Sectional curvature of the J-invariant plane spanned by ``x`` and ``Jx``."""
    x = setup.vector(x)
    return sectional_curvature(setup, R, x, setup.J(x))


def _rank(rows: list[list[Fraction]]) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col] / rows[rank][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def plane_type(setup: GeometrySetup, x: Sequence, y: Sequence, assignment: Mapping[str, object] | None = None) -> str:
    """``"holomorphic"`` if ``J`` preserves the plane, ``"totally-real"`` if
    ``J`` maps it g-orthogonally to itself, else ``"generic"``.

    Isotropic planes are classified too; only linearly dependent ``x, y``
    are rejected.
    """

    def numeric(v):
        out = []
        for c in v:
            if isinstance(c, Scalar):
                out.append(c.eval(assignment or {}) if not c.is_constant() else c.constant_value())
            else:
                out.append(as_fraction(c))
        return out

    xs, ys = numeric(x), numeric(y)
    if len(xs) != setup.dim or len(ys) != setup.dim:
        raise DimensionError(f"expected vectors of length {setup.dim}")
    frame = setup.frame
    # the type only needs a 2-plane; metric degeneracy matters for the curvature quotient alone
    if _rank([xs, ys]) < 2:
        raise DegeneratePlaneError("x and y do not span a plane")
    jx, jy = list(frame.apply_J(xs)), list(frame.apply_J(ys))
    if _rank([xs, ys, jx, jy]) == 2:
        return "holomorphic"
    if all(frame.inner(a, b) == 0 for a in (jx, jy) for b in (xs, ys)):
        return "totally-real"
    return "generic"


# -- constant holomorphic sectional curvature --------------------------------

# 12-term identity: (coefficient, argument pattern). Each argument is
# (variable position in (x, y, z, u), apply J?).
_CONSTANCY_TERMS = (
    (3, ((0, 0), (1, 0), (2, 0), (3, 0))),
    (3, ((0, 0), (1, 0), (2, 1), (3, 1))),
    (3, ((0, 1), (1, 1), (2, 0), (3, 0))),
    (3, ((0, 1), (1, 1), (2, 1), (3, 1))),
    (-1, ((1, 1), (2, 1), (0, 0), (3, 0))),
    (1, ((0, 1), (2, 1), (1, 0), (3, 0))),
    (-1, ((1, 0), (2, 0), (0, 1), (3, 1))),
    (1, ((0, 0), (2, 0), (1, 1), (3, 1))),
    (-1, ((0, 1), (2, 0), (1, 0), (3, 1))),
    (1, ((1, 1), (2, 0), (0, 0), (3, 1))),
    (-1, ((0, 0), (2, 1), (1, 1), (3, 0))),
    (1, ((1, 0), (2, 1), (0, 1), (3, 0))),
)


def holomorphic_constancy_lhs(setup: GeometrySetup, T: np.ndarray) -> np.ndarray:
    """Left side of the curvature identity characterising pointwise constant
    holomorphic sectional curvature, evaluated on all frame 4-tuples."""
    n, J = setup.dim, setup.frame.J
    cache: dict[tuple[int, ...], np.ndarray] = {}

    def with_J(mask):
        if mask not in cache:
            out = T
            for slot, flag in enumerate(mask):
                if flag:
                    out = _tensor.apply_frame_map(out, J, slot)
            cache[mask] = out
        return cache[mask]

    out = _tensor.zeros(n, 4, setup.params)
    for idx in _tensor.indices(n, 4):
        acc = out[idx]
        for coeff, args in _CONSTANCY_TERMS:
            mask = tuple(flag for _, flag in args)
            v = with_J(mask)[tuple(idx[pos] for pos, _ in args)]
            if v.terms:
                acc = acc + v * coeff
        out[idx] = acc
    return out


@dataclass(frozen=True)
class HolomorphicConstancy:
    """Outcome of the constancy identity with ``H = (tau + tau**) / (4 n^2)``."""

    verdict: Verdict
    H: Scalar
    failures: int = 0

    @property
    def ok(self) -> bool:
        return self.verdict.ok

    def __bool__(self):
        return self.ok


def holomorphic_constancy_check(
    setup: GeometrySetup, R: CurvatureTensor, ricci: RicciData | None = None
) -> HolomorphicConstancy:
    """Test ``LHS(R) = 8 H (pi1 + pi2)`` entry-wise.

    ``H`` is fixed by the total trace of the identity. A pass means every
    non-degenerate J-invariant plane has sectional curvature ``H``.
    """
    if ricci is None:
        ricci = ricci_and_scalars(setup, R)
    m = setup.dim // 2
    H = (ricci.tau + ricci.tau_star_star) / (4 * m * m)
    lhs = holomorphic_constancy_lhs(setup, R.R)
    pi = curvature_like("pi1", setup).T + curvature_like("pi2", setup).T
    first = None
    failures = 0
    for idx in _tensor.indices(setup.dim, 4):
        r = lhs[idx] - H * pi[idx] * 8
        if not r.is_zero():
            failures += 1
            if first is None:
                first = Verdict(False, tuple(i + 1 for i in idx), r, "LHS != 8H(pi1 + pi2)")
    verdict = first if first is not None else Verdict(True, detail=f"H = {H}")
    return HolomorphicConstancy(verdict, H, failures)


@dataclass(frozen=True)
class NormCurvatureRelation:
    """``||nabla J||^2`` against ``+-8 n^2 H`` and ``+-2 (tau + tau**)``."""

    applicable: bool
    H: Scalar
    norm: Scalar
    checks: dict[str, Verdict] = field(default_factory=dict)
    constant_holomorphic: bool | None = None

    @property
    def ok(self) -> bool:
        return self.applicable and all(v.ok for v in self.checks.values())

    def __bool__(self):
        return self.ok


def norm_curvature_relation_check(
    setup: GeometrySetup,
    norm: Scalar,
    ricci: RicciData,
    class_flags: Mapping[str, bool],
    constancy: HolomorphicConstancy | None = None,
) -> NormCurvatureRelation:
    """For W2: ``||nabla J||^2 = 2(tau + tau**) = 8 n^2 H``; for W3 the same with minus signs.

    ``H`` comes from the trace formula, so the relations are checked even when
    the constancy identity itself fails; ``constant_holomorphic`` records it.
    """
    m = setup.dim // 2
    s = ricci.tau + ricci.tau_star_star
    H = s / (4 * m * m)
    checks = {}
    if class_flags.get("W2"):
        checks["W2: norm = 2(tau + tau**)"] = _equal(norm, s * 2)
        checks["W2: norm = 8n^2 H"] = _equal(norm, H * (8 * m * m))
    if class_flags.get("W3"):
        checks["W3: norm = -2(tau + tau**)"] = _equal(norm, s * -2)
        checks["W3: norm = -8n^2 H"] = _equal(norm, H * (-8 * m * m))
    return NormCurvatureRelation(
        applicable=bool(checks),
        H=H,
        norm=norm,
        checks=checks,
        constant_holomorphic=None if constancy is None else constancy.ok,
    )


def _equal(a: Scalar, b: Scalar) -> Verdict:
    r = a - b
    return Verdict(True) if r.is_zero() else Verdict(False, None, r, f"{a} != {b}")


# -- Weyl ------------------------------------------------------------------


def weyl_tensor(setup: GeometrySetup, R: CurvatureTensor, ricci: RicciData) -> np.ndarray:
    """``W = R - 1/(2(n-1)) (psi1(rho) - tau/(2n-1) pi1)`` for ``dim = 2n >= 4``."""
    if setup.dim < 4:
        raise DimensionError("the Weyl tensor needs dimension at least 4")
    m = setup.dim // 2
    psi = curvature_like("psi1", setup, ricci.rho).T
    pi1 = curvature_like("pi1", setup).T
    a = Fraction(1, 2 * (m - 1))
    b = Fraction(1, 2 * m - 1)
    W = np.empty(R.R.shape, dtype=object)
    for idx in np.ndindex(W.shape):
        W[idx] = R.R[idx] - (psi[idx] - ricci.tau * pi1[idx] * b) * a
    verdict = check_curvature_symmetries(W)
    if not verdict:
        raise InternalConsistencyError(f"Weyl tensor: {verdict.describe()}")
    trace = _tensor.first_nonzero(ricci_trace(setup, W))
    if trace is not None:
        raise InternalConsistencyError(f"Weyl tensor is not trace-free: entry {trace}")
    return W


# -- isotropic Kahler equivalences -----------------------------------------

CONDITIONS = (
    "isotropic_kahler",
    "abs_lambda_eq_abs_mu",
    "tau_zero",
    "holomorphic_curvature_zero",
    "weyl_zero",
    "R_eq_half_psi1_rho",
)


@dataclass(frozen=True)
class IsotropicKahlerReport:
    """``mode`` is ``numeric`` or ``symbolic`` for the two-parameter family and
    ``generic`` otherwise, where no equivalence is asserted."""

    mode: str
    conditions: dict[str, bool | None]
    equivalent: bool | None
    notes: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return bool(self.equivalent)


def _proportional(a: Scalar, q: Scalar) -> bool:
    """``a = c q`` for a nonzero rational ``c``."""
    if a.is_zero():
        return False
    quot = a.exact_div(q)
    return quot is not None and quot.is_constant()


def isotropic_kahler_battery(setup: GeometrySetup) -> IsotropicKahlerReport:
    """Evaluate the six conditions that are equivalent on the two-parameter
    family: zero ``||nabla J||^2``, ``|lambda| = |mu|``, ``tau = 0``,
    ``H = 0``, ``W = 0`` and ``R = psi1(rho)/2``."""
    from .families import match_paper_family

    conn = levi_civita(setup)
    F = f_tensor(setup, conn)
    norm = nabla_j_square_norm(setup, F)
    R = curvature_tensor(setup, conn)
    ricci = ricci_and_scalars(setup, R)
    m = setup.dim // 2
    H = (ricci.tau + ricci.tau_star_star) / (4 * m * m)
    W = weyl_tensor(setup, R, ricci) if setup.dim >= 4 else None
    psi = curvature_like("psi1", setup, ricci.rho).T
    diff = np.empty(R.R.shape, dtype=object)
    for idx in np.ndindex(diff.shape):
        diff[idx] = R.R[idx] - psi[idx] * Fraction(1, 2)

    match = match_paper_family(setup)
    if match is None:
        conditions = {
            "isotropic_kahler": norm.is_zero(),
            "abs_lambda_eq_abs_mu": None,
            "tau_zero": ricci.tau.is_zero(),
            "holomorphic_curvature_zero": H.is_zero(),
            "weyl_zero": W is not None and _tensor.is_zero(W),
            "R_eq_half_psi1_rho": _tensor.is_zero(diff),
        }
        return IsotropicKahlerReport("generic", conditions, None, ("input is not the two-parameter family",))

    lam, mu = match
    if isinstance(lam, Fraction):
        poly_form = lam * lam - mu * mu == 0
        abs_form = abs(lam) == abs(mu)
        notes = []
        if poly_form != abs_form:
            notes.append("|lambda| = |mu| disagrees with lambda^2 - mu^2 = 0")
        conditions = {
            "isotropic_kahler": norm.is_zero(),
            "abs_lambda_eq_abs_mu": abs_form,
            "tau_zero": ricci.tau.is_zero(),
            "holomorphic_curvature_zero": H.is_zero(),
            "weyl_zero": _tensor.is_zero(W),
            "R_eq_half_psi1_rho": _tensor.is_zero(diff),
        }
        values = set(conditions.values())
        return IsotropicKahlerReport("numeric", conditions, len(values) == 1 and not notes, tuple(notes))

    # symbolic: every quantity must be a nonzero rational multiple of lambda^2 - mu^2
    q = lam * lam - mu * mu
    proportional = {
        "isotropic_kahler": _proportional(norm, q),
        "abs_lambda_eq_abs_mu": True,
        "tau_zero": _proportional(ricci.tau, q),
        "holomorphic_curvature_zero": _proportional(H, q),
        "weyl_zero": _all_proportional(W, q),
        "R_eq_half_psi1_rho": _all_proportional(diff, q),
    }
    notes = ("symbolic mode: each condition reduces to lambda^2 - mu^2 = 0; |lambda| = |mu| is decided numerically",)
    return IsotropicKahlerReport("symbolic", proportional, all(proportional.values()), notes)


def _all_proportional(T: np.ndarray, q: Scalar) -> bool:
    entries = [v for _, v in _tensor.nonzero_items(T)]
    return bool(entries) and all(_proportional(v, q) for v in entries)

