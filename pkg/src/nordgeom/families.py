"""Built-in presets, the reference tables for the two-parameter family, and a
generator of random valid algebras for property tests."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Mapping

import numpy as np

from . import _tensor
from .errors import NordgeomError
from .frame import GeometrySetup, LieAlgebra, check_jacobi, standard_norden_frame
from .scalars import Scalar, as_fraction, scalar_parse

__all__ = [
    "FAMILY_PARAMS",
    "PRESETS",
    "PaperFamilyInstance",
    "GoldenTable",
    "GoldenTableError",
    "TableDiff",
    "TableCheck",
    "paper_frame",
    "paper_family_algebra",
    "build_paper_family",
    "abelian_setup",
    "preset",
    "match_paper_family",
    "load_golden_tables",
    "verify_golden_tables",
    "random_valid_algebra",
    "derived_series",
    "is_solvable",
]

FAMILY_PARAMS = ("lambda", "mu")


def paper_frame():
    """``J X_1 = X_3``, ``J X_2 = X_4``, ``g = diag(1, 1, -1, -1)``."""
    return standard_norden_frame(4)


def paper_family_algebra(lam=None, mu=None, params=FAMILY_PARAMS, *, check: bool = True) -> LieAlgebra:
    """The solvable family with brackets

    ``[X1,X2] = lam X1 - lam X2``, ``[X1,X3] = mu X2 + lam X4``,
    ``[X1,X4] = mu X2 + lam X3``, ``[X2,X3] = mu X1 + lam X4``,
    ``[X2,X4] = mu X1 + lam X3``, ``[X3,X4] = -mu X3 + mu X4``.

    ``lam`` and ``mu`` default to the symbolic parameters.
    """
    params = tuple(params)
    lam = Scalar.var("lambda", params) if lam is None else _scalar(lam, params)
    mu = Scalar.var("mu", params) if mu is None else _scalar(mu, params)
    brackets = {
        (1, 2): {1: lam, 2: -lam},
        (1, 3): {2: mu, 4: lam},
        (1, 4): {2: mu, 3: lam},
        (2, 3): {1: mu, 4: lam},
        (2, 4): {1: mu, 3: lam},
        (3, 4): {3: -mu, 4: mu},
    }
    return LieAlgebra.from_brackets(4, brackets, params, check=check)


def _scalar(value, params) -> Scalar:
    if isinstance(value, Scalar):
        return value
    return Scalar.const(as_fraction(value), params)


@dataclass(frozen=True)
class PaperFamilyInstance:
    setup: GeometrySetup
    assignment: Mapping[str, Fraction] | None = None

    @property
    def symbolic(self) -> bool:
        return self.assignment is None


def build_paper_family(assignment: Mapping[str, object] | None = None) -> PaperFamilyInstance:
    """Symbolic family, or the member at ``{"lambda": .., "mu": ..}``."""
    if assignment is None:
        return PaperFamilyInstance(GeometrySetup(paper_family_algebra(), paper_frame()))
    if set(assignment) != set(FAMILY_PARAMS):
        raise ValueError(f"assignment must bind exactly {list(FAMILY_PARAMS)}, got {sorted(assignment)}")
    bound = {k: as_fraction(v) for k, v in assignment.items()}
    algebra = paper_family_algebra(bound["lambda"], bound["mu"])
    return PaperFamilyInstance(GeometrySetup(algebra, paper_frame()), bound)


def abelian_setup(dim: int = 4, params=()) -> GeometrySetup:
    return GeometrySetup(LieAlgebra.abelian(dim, params), standard_norden_frame(dim))


PRESETS = ("paper-family", "paper-frame", "paper-frame-abelian")


def preset(name: str) -> GeometrySetup:
    """``paper-family`` is symbolic in lambda, mu; the frame presets carry the abelian algebra."""
    if name == "paper-family":
        return build_paper_family().setup
    if name in ("paper-frame", "paper-frame-abelian"):
        return abelian_setup(4)
    raise KeyError(f"unknown preset {name!r}; available: {', '.join(PRESETS)}")


def match_paper_family(setup: GeometrySetup):
    """``(lambda, mu)`` if ``setup`` is a member of the family on the standard
    frame, else None. Values are Fractions for a numeric member and Scalars
    otherwise."""
    if not setup.uses_standard_frame:
        return None
    lam = setup.algebra.constant(1, 2, 1)
    mu = setup.algebra.constant(3, 4, 4)
    candidate = paper_family_algebra(lam, mu, setup.params, check=False)
    if candidate != setup.algebra:
        return None
    if lam.is_constant() and mu.is_constant():
        return lam.constant_value(), mu.constant_value()
    return lam, mu


# -- reference tables -----------------------------------------------------


class GoldenTableError(NordgeomError, ValueError):
    pass


@dataclass(frozen=True)
class GoldenTable:
    name: str
    closure: str
    unlisted: str
    entries: dict[tuple[int, ...], Scalar]
    scalars: dict[str, Scalar] = field(default_factory=dict)

    def expanded(self, J=None) -> dict[tuple[int, ...], Scalar]:
        """Listed entries plus every image under the table's symmetry closure."""
        out = dict(self.entries)
        todo = list(out.items())
        while todo:
            idx, value = todo.pop()
            for image, v in _images(self.closure, idx, value, J):
                if image in out:
                    if out[image] != v:
                        raise GoldenTableError(
                            f"table {self.name}: entry {_tensor.key(image)} is both {out[image]} and {v}"
                        )
                else:
                    out[image] = v
                    todo.append((image, v))
        return out


def _images(closure: str, idx, value, J):
    if closure == "none":
        return []
    if closure == "symmetric":
        a, b = idx
        return [((b, a), value)]
    if closure == "riemann":
        i, j, k, l = idx
        return [((j, i, k, l), -value), ((i, j, l, k), -value), ((k, l, i, j), value)]
    if closure == "norden_f":
        if J is None:
            raise GoldenTableError("norden_f closure needs the frame's J")
        i, j, k = idx
        out = [((i, k, j), value)]
        # J X_a = s_a X_{p(a)}, so F(x,Jy,Jz) = F(x,y,z) gives F_{i p(j) p(k)} = s_j s_k F_ijk
        pj, sj = _signed_perm(J, j)
        pk, sk = _signed_perm(J, k)
        out.append(((i, pj, pk), value * (sj * sk)))
        return out
    raise GoldenTableError(f"unknown symmetry closure {closure!r}")


def _signed_perm(J, a):
    nz = [(k, c) for k, c in enumerate(J[a]) if c]
    if len(nz) != 1 or abs(nz[0][1]) != 1:
        raise GoldenTableError("norden_f closure needs J to be a signed permutation of the frame")
    return nz[0][0], int(nz[0][1])


_DATA_FILE = "golden_tables.json"


def load_golden_tables(path: str | Path | None = None) -> list[GoldenTable]:
    if path is None:
        text = resources.files("nordgeom").joinpath("data", _DATA_FILE).read_text()
    else:
        text = Path(path).read_text()
    data = json.loads(text)
    params = tuple(data.get("parameters", FAMILY_PARAMS))
    tables = []
    for raw in data["tables"]:
        entries = {
            _tensor.parse_key(k): scalar_parse(v, params) for k, v in raw.get("entries", {}).items()
        }
        scalars = {k: scalar_parse(v, params) for k, v in raw.get("scalars", {}).items()}
        tables.append(
            GoldenTable(
                name=raw["table"],
                closure=raw.get("symmetry_closure", "none"),
                unlisted=raw.get("unlisted", "zero"),
                entries=entries,
                scalars=scalars,
            )
        )
    return tables


@dataclass(frozen=True)
class TableDiff:
    index: str
    expected: Scalar
    computed: Scalar


@dataclass(frozen=True)
class TableCheck:
    name: str
    diffs: tuple[TableDiff, ...]
    compared: int

    @property
    def ok(self) -> bool:
        return not self.diffs


def _computed_quantities(setup: GeometrySetup):
    from .invariants import compute_invariants

    inv = compute_invariants(setup)
    planes = {}
    for p in inv.planes:
        if p.curvature is not None and p.curvature.value is not None:
            planes[(p.plane[0] - 1, p.plane[1] - 1)] = p.curvature.value
    return {
        "connection": (inv.connection.gamma, {}),
        "fundamental_tensor": (inv.F.F, {}),
        "nabla_j_norm": (None, {"norm_nabla_J_squared": inv.norm}),
        "curvature": (inv.R.R, {}),
        "ricci": (inv.ricci.rho, {"tau": inv.ricci.tau, "tau_star": inv.ricci.tau_star}),
        "holomorphic_sectional": (planes, {}),
        "weyl": (inv.weyl, {}),
    }


def verify_golden_tables(
    instance: PaperFamilyInstance, tables: list[GoldenTable] | None = None
) -> dict[str, TableCheck]:
    """Recompute every tabulated quantity and compare exactly.

    Listed entries are compared one by one; with ``unlisted == "zero"`` every
    entry outside the symmetry closure of the listed ones must vanish. For a
    numeric instance the tables are substituted first.
    """
    if tables is None:
        tables = load_golden_tables()
    setup = instance.setup
    computed = _computed_quantities(setup)
    J = setup.frame.J
    results = {}
    for table in tables:
        if table.name not in computed:
            raise GoldenTableError(f"no computed quantity for table {table.name!r}")
        tensor, scalars = computed[table.name]

        def expect(v: Scalar) -> Scalar:
            v = Scalar(setup.params, v.terms) if v.params != setup.params else v
            return v.subs(instance.assignment) if instance.assignment else v

        diffs = []
        compared = 0
        for name, value in table.scalars.items():
            compared += 1
            want = expect(value)
            got = scalars.get(name)
            if got is None or got != want:
                diffs.append(TableDiff(name, want, got if got is not None else Scalar.zero(setup.params)))
        closure = table.expanded(J)
        for idx, value in table.entries.items():
            compared += 1
            want = expect(value)
            got = _lookup(tensor, idx, setup)
            if got != want:
                diffs.append(TableDiff(_tensor.key(idx), want, got))
        if table.unlisted == "zero" and isinstance(tensor, np.ndarray):
            for idx in np.ndindex(tensor.shape):
                if idx in closure:
                    continue
                compared += 1
                if not tensor[idx].is_zero():
                    diffs.append(TableDiff(_tensor.key(idx), Scalar.zero(setup.params), tensor[idx]))
        results[table.name] = TableCheck(table.name, tuple(diffs), compared)
    return results


def _lookup(tensor, idx, setup) -> Scalar:
    if isinstance(tensor, dict):
        return tensor.get(idx, Scalar.zero(setup.params))
    return tensor[idx]


# -- random algebras -------------------------------------------------------

# W2 ansatz for the standard frame: these constants are fixed by the free ones.
_W2_DEPENDENT = {
    (1, 3, 1): [(1, (1, 2, 4)), (-1, (2, 3, 2))],
    (3, 4, 4): [(1, (1, 2, 4)), (-1, (2, 3, 2)), (1, (1, 4, 2))],
    (1, 3, 3): [(-1, (1, 2, 2)), (-1, (2, 3, 4))],
    (3, 4, 2): [(1, (1, 2, 2)), (1, (2, 3, 4)), (-1, (1, 4, 4))],
    (2, 4, 4): [(1, (1, 2, 1)), (-1, (1, 4, 3))],
    (3, 4, 1): [(1, (1, 2, 1)), (-1, (1, 4, 3)), (1, (2, 3, 3))],
    (2, 4, 2): [(-1, (1, 2, 3)), (-1, (1, 4, 1))],
    (3, 4, 3): [(1, (1, 2, 3)), (1, (1, 4, 1)), (-1, (2, 3, 1))],
}


def random_valid_algebra(
    seed: int,
    dim: int = 4,
    magnitude: int = 2,
    *,
    max_attempts: int = 200,
    w2_ansatz: bool = False,
    max_terms: int = 4,
) -> LieAlgebra | None:
    """Rejection-sample sparse integer structure constants until Jacobi holds.

    Deterministic in ``seed``. Returns None when ``max_attempts`` samples all
    fail. With ``w2_ansatz`` (dimension 4 only) the free constants are
    sampled and the remaining ones are solved from the W2 conditions for the
    standard frame, so every accepted sample is W2 there.
    """
    if magnitude < 0:
        raise ValueError("magnitude must be non-negative")
    if w2_ansatz and dim != 4:
        raise ValueError("the W2 ansatz is defined for dimension 4")
    rng = random.Random(seed)
    slots = [(i, j, k) for i in range(1, dim + 1) for j in range(i + 1, dim + 1) for k in range(1, dim + 1)]
    if w2_ansatz:
        slots = [s for s in slots if s not in _W2_DEPENDENT]
    if magnitude == 0:
        return LieAlgebra.abelian(dim)
    values = [v for v in range(-magnitude, magnitude + 1) if v]
    for _ in range(max_attempts):
        count = rng.randint(0, max_terms)
        chosen = {s: rng.choice(values) for s in rng.sample(slots, count)}
        if w2_ansatz:
            for target, combo in _W2_DEPENDENT.items():
                chosen[target] = sum(sign * chosen.get(src, 0) for sign, src in combo)
        brackets: dict[tuple[int, int], dict[int, int]] = {}
        for (i, j, k), v in chosen.items():
            if v:
                brackets.setdefault((i, j), {})[k] = v
        algebra = LieAlgebra.from_brackets(dim, brackets, check=False)
        if check_jacobi(algebra):
            return algebra
    return None


# -- solvability ------------------------------------------------------------


def _row_space(vectors: list[list[Fraction]]) -> list[list[Fraction]]:
    rows = [list(v) for v in vectors if any(v)]
    basis = []
    ncols = len(vectors[0]) if vectors else 0
    for col in range(ncols):
        pivot = next((r for r in rows if r[col] != 0), None)
        if pivot is None:
            continue
        rows.remove(pivot)
        pivot = [x / pivot[col] for x in pivot]
        rows = [[a - r[col] * b for a, b in zip(r, pivot)] for r in rows]
        rows = [r for r in rows if any(r)]
        basis.append(pivot)
    return basis


def derived_series(algebra: LieAlgebra, assignment: Mapping[str, object] | None = None) -> list[int]:
    """Dimensions of ``g, [g,g], [[g,g],[g,g]], ...`` until they stabilise.

    Parametric constants must be bound by ``assignment``.
    """
    n = algebra.dim
    C = [[[algebra.C[i, j, k].eval(assignment or {}) for k in range(n)] for j in range(n)] for i in range(n)]

    def br(u, v):
        return [
            sum((u[i] * v[j] * C[i][j][k] for i in range(n) for j in range(n) if u[i] and v[j]), Fraction(0))
            for k in range(n)
        ]

    space = [[Fraction(int(i == k)) for k in range(n)] for i in range(n)]
    dims = [n]
    while space:
        space = _row_space([br(u, v) for u in space for v in space]) if len(space) > 1 else []
        if len(space) == dims[-1]:
            break
        dims.append(len(space))
    return dims


def is_solvable(algebra: LieAlgebra, assignment: Mapping[str, object] | None = None) -> bool:
    return derived_series(algebra, assignment)[-1] == 0
