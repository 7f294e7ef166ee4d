"""Lie algebras on a frame, Norden frame structures and validated setups.

Indices are 0-based internally. Everything user-facing (bracket keys in input
files, verdict witnesses, report labels) is 1-based.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from . import _tensor
from .errors import DimensionError, InvalidStructureError, SingularMetricError
from .scalars import Scalar, as_fraction, scalar_parse

__all__ = [
    "Verdict",
    "LieAlgebra",
    "FrameStructure",
    "GeometrySetup",
    "bracket",
    "check_antisymmetry",
    "check_jacobi",
    "check_norden",
    "associated_metric",
    "raise_index",
    "lower_index",
    "metric_signature",
    "standard_norden_frame",
    "basis_vector",
]

Matrix = tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class Verdict:
    """Outcome of an identity check.

    ``witness`` is the first violating 1-based index tuple and ``residual``
    the nonzero Scalar found there.
    """

    ok: bool
    witness: tuple[int, ...] | None = None
    residual: Scalar | None = None
    detail: str = ""

    def __bool__(self):
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "PASS" + (f" ({self.detail})" if self.detail else "")
        parts = ["FAIL"]
        if self.detail:
            parts.append(self.detail)
        if self.witness is not None:
            parts.append("at (" + ",".join(map(str, self.witness)) + ")")
        if self.residual is not None:
            parts.append(f"residual {self.residual}")
        return " ".join(parts)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "witness": list(self.witness) if self.witness is not None else None,
            "residual": str(self.residual) if self.residual is not None else None,
            "detail": self.detail,
        }


def _passed(detail: str = "") -> Verdict:
    return Verdict(True, detail=detail)


def _as_scalar(value, params) -> Scalar:
    if isinstance(value, Scalar):
        if value.params != tuple(params):
            raise InvalidStructureError(
                f"structure constant {value} uses parameters {list(value.params)}, expected {list(params)}"
            )
        return value
    if isinstance(value, str):
        return scalar_parse(value, params)
    return Scalar.const(value, params)


def _as_matrix(rows, name: str) -> Matrix:
    try:
        m = tuple(tuple(as_fraction(v) for v in row) for row in rows)
    except TypeError:
        raise InvalidStructureError(f"{name} must be a square matrix of rationals") from None
    if not m or any(len(row) != len(m) for row in m):
        raise DimensionError(f"{name} must be a non-empty square matrix")
    return m


def _invert(m: Matrix) -> Matrix:
    n = len(m)
    a = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise SingularMetricError("metric is singular on the frame")
        a[col], a[pivot] = a[pivot], a[col]
        p = a[col][col]
        a[col] = [v / p for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(tuple(row[n:]) for row in a)


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(tuple(sum((a[i][k] * b[k][j] for k in range(n)), Fraction(0)) for j in range(n)) for i in range(n))


class LieAlgebra:
    """Structure constants ``C[i, j, k]`` with ``[X_i, X_j] = sum_k C[i, j, k] X_k``.

    Antisymmetry is always enforced. The Jacobi identity is verified on
    construction unless ``check=False``, which exists so that broken inputs
    can still be diagnosed with :func:`check_jacobi`.
    """

    def __init__(self, structure: np.ndarray, params: Sequence[str] = (), *, check: bool = True):
        params = tuple(params)
        structure = np.asarray(structure, dtype=object)
        if structure.ndim != 3 or len(set(structure.shape)) != 1:
            raise DimensionError("structure constants must form a dim x dim x dim array")
        dim = structure.shape[0]
        if dim == 0 or dim % 2:
            raise DimensionError(f"frame dimension must be even and positive, got {dim}")
        C = np.empty(structure.shape, dtype=object)
        for idx in np.ndindex(structure.shape):
            C[idx] = _as_scalar(structure[idx], params)
        self.dim = dim
        self.params = params
        self.C = C
        self.C.setflags(write=False)
        verdict = check_antisymmetry(self)
        if not verdict:
            raise InvalidStructureError(f"structure constants are not antisymmetric: {verdict.describe()}", verdict)
        if check:
            verdict = check_jacobi(self)
            if not verdict:
                raise InvalidStructureError(f"Jacobi identity fails: {verdict.describe()}", verdict)

    @classmethod
    def from_brackets(
        cls,
        dim: int,
        brackets: Mapping[tuple[int, int], Mapping[int, object]],
        params: Sequence[str] = (),
        *,
        check: bool = True,
    ) -> "LieAlgebra":
        """Build from 1-based brackets ``{(i, j): {k: coeff}}`` listed for i < j."""
        params = tuple(params)
        C = _tensor.zeros(dim, 3, params)
        for (i, j), components in brackets.items():
            if not (1 <= i <= dim and 1 <= j <= dim):
                raise DimensionError(f"bracket index ({i},{j}) outside 1..{dim}")
            if i == j:
                raise InvalidStructureError(f"bracket [X_{i}, X_{i}] must not be listed")
            for k, value in components.items():
                if not 1 <= k <= dim:
                    raise DimensionError(f"component index {k} outside 1..{dim}")
                v = _as_scalar(value, params)
                a, b = (i, j) if i < j else (j, i)
                sign = 1 if i < j else -1
                C[a - 1, b - 1, k - 1] = C[a - 1, b - 1, k - 1] + v * sign
                C[b - 1, a - 1, k - 1] = C[b - 1, a - 1, k - 1] - v * sign
        return cls(C, params, check=check)

    @classmethod
    def abelian(cls, dim: int, params: Sequence[str] = ()) -> "LieAlgebra":
        return cls(_tensor.zeros(dim, 3, params), params)

    def constant(self, i: int, j: int, k: int) -> Scalar:
        """1-based accessor for ``C_ij^k``."""
        return self.C[i - 1, j - 1, k - 1]

    def bracket(self, x: Sequence, y: Sequence) -> tuple[Scalar, ...]:
        x = _vector(x, self.dim, self.params)
        y = _vector(y, self.dim, self.params)
        out = [Scalar.zero(self.params) for _ in range(self.dim)]
        for i, j in itertools.product(range(self.dim), repeat=2):
            if x[i].is_zero() or y[j].is_zero():
                continue
            xy = x[i] * y[j]
            for k in range(self.dim):
                c = self.C[i, j, k]
                if c.terms:
                    out[k] = out[k] + xy * c
        return tuple(out)

    def subs(self, assignment: Mapping[str, object]) -> "LieAlgebra":
        return LieAlgebra(_tensor.substitute(self.C, assignment), self.params, check=False)

    def brackets(self) -> dict[tuple[int, int], dict[int, Scalar]]:
        """Nonzero brackets for i < j, 1-based."""
        out = {}
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                comps = {k + 1: self.C[i, j, k] for k in range(self.dim) if not self.C[i, j, k].is_zero()}
                if comps:
                    out[(i + 1, j + 1)] = comps
        return out

    def __eq__(self, other):
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return self.params == other.params and self.dim == other.dim and all(
            self.C[idx] == other.C[idx] for idx in np.ndindex(self.C.shape)
        )

    def __repr__(self):
        body = ", ".join(
            f"[X{i},X{j}]=" + " + ".join(f"({v})X{k}" for k, v in comps.items())
            for (i, j), comps in self.brackets().items()
        )
        return f"LieAlgebra(dim={self.dim}, {body or 'abelian'})"


def _vector(v: Sequence, dim: int, params) -> tuple[Scalar, ...]:
    if len(v) != dim:
        raise DimensionError(f"expected a vector of length {dim}, got {len(v)}")
    return tuple(x if isinstance(x, Scalar) else Scalar.const(x, params) for x in v)


def basis_vector(dim: int, i: int, params: Sequence[str] = ()) -> tuple[Scalar, ...]:
    """1-based frame vector ``X_i`` as a coefficient vector."""
    if not 1 <= i <= dim:
        raise DimensionError(f"basis index {i} outside 1..{dim}")
    return tuple(Scalar.const(int(k == i - 1), params) for k in range(dim))


def check_antisymmetry(algebra: LieAlgebra) -> Verdict:
    C = algebra.C
    for i, j, k in _tensor.indices(algebra.dim, 3):
        r = C[i, j, k] + C[j, i, k]
        if not r.is_zero():
            return Verdict(False, (i + 1, j + 1, k + 1), r, "C_ij^k + C_ji^k != 0")
    return _passed()


def check_jacobi(algebra: LieAlgebra) -> Verdict:
    """Cyclic identity ``C_ij^k C_ks^l + C_js^k C_ki^l + C_si^k C_kj^l = 0``."""
    n = algebra.dim
    C = algebra.C
    # only nonzero constants contribute
    rows = [[[(k, C[i, j, k]) for k in range(n) if C[i, j, k].terms] for j in range(n)] for i in range(n)]

    def term(a, b, c, l):
        acc = Scalar.zero(algebra.params)
        for k, v in rows[a][b]:
            w = C[k, c, l]
            if w.terms:
                acc = acc + v * w
        return acc

    for i, j, s, l in _tensor.indices(n, 4):
        r = term(i, j, s, l) + term(j, s, i, l) + term(s, i, j, l)
        if not r.is_zero():
            return Verdict(False, (i + 1, j + 1, s + 1, l + 1), r, "Jacobi identity")
    return _passed()


class FrameStructure:
    """Constant metric ``g`` and almost complex structure ``J`` on the frame.

    ``J[i][k]`` is the k-th component of ``J X_i``. The metric must be
    symmetric and invertible; the Norden conditions are checked on
    construction unless ``check=False``.
    """

    def __init__(self, metric, J, *, check: bool = True):
        g = _as_matrix(metric, "metric")
        j = _as_matrix(J, "J")
        if len(g) != len(j):
            raise DimensionError(f"metric is {len(g)}x{len(g)} but J is {len(j)}x{len(j)}")
        if len(g) % 2:
            raise DimensionError(f"frame dimension must be even, got {len(g)}")
        n = len(g)
        for a, b in itertools.combinations(range(n), 2):
            if g[a][b] != g[b][a]:
                raise InvalidStructureError(f"metric is not symmetric at ({a + 1},{b + 1})")
        self.dim = n
        self.g = g
        self.J = j
        self.g_inv = _invert(g)
        if check:
            verdict = check_norden(self)
            if not verdict:
                raise InvalidStructureError(f"not a Norden frame: {verdict.describe()}", verdict)

    def apply_J(self, v: Sequence) -> tuple:
        return tuple(sum((v[i] * self.J[i][k] for i in range(self.dim) if self.J[i][k]), 0 * v[0]) for k in range(self.dim))

    def inner(self, x: Sequence, y: Sequence):
        n = self.dim
        total = 0 * x[0]
        for p in range(n):
            if _nonzero(x[p]):
                for q in range(n):
                    if self.g[p][q] and _nonzero(y[q]):
                        total = total + x[p] * y[q] * self.g[p][q]
        return total

    def __eq__(self, other):
        if not isinstance(other, FrameStructure):
            return NotImplemented
        return self.g == other.g and self.J == other.J

    def __repr__(self):
        return f"FrameStructure(g={[list(map(str, r)) for r in self.g]}, J={[list(map(str, r)) for r in self.J]})"


def _nonzero(v) -> bool:
    return not v.is_zero() if isinstance(v, Scalar) else v != 0


def check_norden(frame: FrameStructure) -> Verdict:
    """``J^2 = -Id`` and ``g(Jx, Jy) = -g(x, y)`` on all frame pairs."""
    n = frame.dim
    g, J = frame.g, frame.J
    JJ = _matmul(J, J)
    for i, k in itertools.product(range(n), repeat=2):
        want = Fraction(-1 if i == k else 0)
        if JJ[i][k] != want:
            return Verdict(False, (i + 1, k + 1), Scalar.const(JJ[i][k] - want), "J^2 != -Id")
    for i, j in itertools.product(range(n), repeat=2):
        gjj = sum((J[i][p] * J[j][q] * g[p][q] for p in range(n) for q in range(n)), Fraction(0))
        if gjj != -g[i][j]:
            return Verdict(False, (i + 1, j + 1), Scalar.const(gjj + g[i][j]), "g(JX_i,JX_j) != -g(X_i,X_j)")
    return _passed()


def associated_metric(frame: FrameStructure) -> Matrix:
    """``g~(X_i, X_j) = g(X_i, J X_j)``."""
    n = frame.dim
    return tuple(
        tuple(sum((frame.J[j][k] * frame.g[i][k] for k in range(n)), Fraction(0)) for j in range(n))
        for i in range(n)
    )


def raise_index(frame: FrameStructure, covector: Sequence) -> tuple:
    n = frame.dim
    if len(covector) != n:
        raise DimensionError(f"expected a covector of length {n}")
    return tuple(
        sum((covector[i] * frame.g_inv[j][i] for i in range(n) if frame.g_inv[j][i]), 0 * covector[0])
        for j in range(n)
    )


def lower_index(frame: FrameStructure, vector: Sequence) -> tuple:
    n = frame.dim
    if len(vector) != n:
        raise DimensionError(f"expected a vector of length {n}")
    return tuple(
        sum((vector[i] * frame.g[i][j] for i in range(n) if frame.g[i][j]), 0 * vector[0]) for j in range(n)
    )


def _charpoly(m: Matrix) -> list[Fraction]:
    """Coefficients of det(t I - M), highest degree first (Faddeev-LeVerrier)."""
    n = len(m)
    coeffs = [Fraction(1)]
    ident = tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
    Mk = ident
    c = Fraction(1)
    for k in range(1, n + 1):
        AM = _matmul(m, Mk)
        c = -sum((AM[i][i] for i in range(n)), Fraction(0)) / k
        coeffs.append(c)
        Mk = tuple(tuple(AM[i][j] + (c if i == j else 0) for j in range(n)) for i in range(n))
    return coeffs


def metric_signature(matrix) -> tuple[int, int, int]:
    """(positive, negative, zero) eigenvalue counts of a symmetric rational matrix.

    All roots of the characteristic polynomial are real, so Descartes' rule
    of signs counts them exactly.
    """
    m = _as_matrix(matrix, "matrix")
    coeffs = _charpoly(m)
    n = len(m)
    zero = 0
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
        zero += 1

    def changes(cs):
        signs = [c > 0 for c in cs if c != 0]
        return sum(a != b for a, b in zip(signs, signs[1:]))

    pos = changes(coeffs)
    deg = len(coeffs) - 1
    neg = changes([c * (-1) ** (deg - i) for i, c in enumerate(coeffs)])
    assert pos + neg + zero == n
    return pos, neg, zero


def standard_norden_frame(dim: int = 4) -> FrameStructure:
    """``J X_i = X_{i+n}``, ``J X_{i+n} = -X_i``, ``g = diag(1,..,1,-1,..,-1)``."""
    if dim <= 0 or dim % 2:
        raise DimensionError(f"frame dimension must be even and positive, got {dim}")
    n = dim // 2
    g = [[0] * dim for _ in range(dim)]
    J = [[0] * dim for _ in range(dim)]
    for i in range(n):
        g[i][i] = 1
        g[i + n][i + n] = -1
        J[i][i + n] = 1
        J[i + n][i] = -1
    return FrameStructure(g, J)


@dataclass(frozen=True)
class GeometrySetup:
    """A Lie algebra together with a Norden frame; validated on construction."""

    algebra: LieAlgebra
    frame: FrameStructure
    params: tuple[str, ...] = field(init=False)

    def __post_init__(self):
        if self.algebra.dim != self.frame.dim:
            raise DimensionError(f"algebra has dimension {self.algebra.dim}, frame {self.frame.dim}")
        object.__setattr__(self, "params", self.algebra.params)
        verdict = check_jacobi(self.algebra)
        if not verdict:
            raise InvalidStructureError(f"Jacobi identity fails: {verdict.describe()}", verdict)
        verdict = check_norden(self.frame)
        if not verdict:
            raise InvalidStructureError(f"not a Norden frame: {verdict.describe()}", verdict)

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def uses_standard_frame(self) -> bool:
        """True for the 4-dimensional frame with ``JX_1 = X_3`` and ``g = diag(1,1,-1,-1)``."""
        return self.dim == 4 and self.frame == standard_norden_frame(4)

    def basis(self, i: int) -> tuple[Scalar, ...]:
        return basis_vector(self.dim, i, self.params)

    def vector(self, v: Sequence) -> tuple[Scalar, ...]:
        return _vector(v, self.dim, self.params)

    def bracket(self, x, y):
        return self.algebra.bracket(x, y)

    def J(self, v):
        return self.frame.apply_J(self.vector(v))

    def inner(self, x, y) -> Scalar:
        return self.frame.inner(self.vector(x), self.vector(y))

    def subs(self, assignment: Mapping[str, object]) -> "GeometrySetup":
        return GeometrySetup(self.algebra.subs(assignment), self.frame)


def bracket(setup, x: Sequence, y: Sequence) -> tuple[Scalar, ...]:
    """Bilinear bracket of two coefficient vectors (setup or bare algebra)."""
    algebra = setup.algebra if isinstance(setup, GeometrySetup) else setup
    return algebra.bracket(x, y)
