"""Input loading, the full geometry report, and its text/JSON renderings."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Mapping

import numpy as np

from . import _tensor
from .errors import NordgeomError
from .frame import (
    FrameStructure,
    GeometrySetup,
    LieAlgebra,
    Verdict,
    check_antisymmetry,
    check_jacobi,
    check_norden,
    standard_norden_frame,
)
from .invariants import GeometryInvariants, compute_invariants
from .curvature import isotropic_kahler_battery
from .scalars import Scalar, as_fraction

__all__ = [
    "InputError",
    "LoadedInput",
    "load_input",
    "load_preset",
    "validate",
    "build_report",
    "classification",
    "render_text",
    "to_json",
]


class InputError(NordgeomError, ValueError):
    """Unreadable or malformed input file."""


@dataclass(frozen=True)
class LoadedInput:
    """Raw, not yet validated, algebra and frame plus an echo of the source."""

    algebra: LieAlgebra
    frame: FrameStructure
    source: str
    bindings: Mapping[str, Fraction]

    def setup(self) -> GeometrySetup:
        return GeometrySetup(self.algebra, self.frame)


def _bind(algebra: LieAlgebra, bindings: Mapping[str, object]) -> LieAlgebra:
    if not bindings:
        return algebra
    unknown = sorted(set(bindings) - set(algebra.params))
    if unknown:
        raise InputError(f"cannot bind {unknown}: parameters are {list(algebra.params)}")
    C = _tensor.substitute(algebra.C, bindings)
    return LieAlgebra(C, algebra.params, check=False)


def load_preset(name: str, bindings: Mapping[str, object] | None = None) -> LoadedInput:
    from .families import PRESETS, paper_family_algebra

    bindings = {k: as_fraction(v) for k, v in (bindings or {}).items()}
    if name == "paper-family":
        algebra = paper_family_algebra(check=False)
    elif name in ("paper-frame", "paper-frame-abelian"):
        algebra = LieAlgebra.abelian(4)
    else:
        raise InputError(f"unknown preset {name!r}; available: {', '.join(PRESETS)}")
    return LoadedInput(_bind(algebra, bindings), standard_norden_frame(4), f"preset:{name}", bindings)


def load_input(path: str | Path, bindings: Mapping[str, object] | None = None) -> LoadedInput:
    """Read the JSON algebra format.

    ``{"dimension": 4, "parameters": [...], "brackets": {"1,2": {"1": "lambda"}},
    "metric": [[...]], "J": [[...]]}``. A ``"frame": "paper-frame"`` key may
    replace ``metric`` and ``J``.
    """
    bindings = {k: as_fraction(v) for k, v in (bindings or {}).items()}
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise InputError(f"{path}: top level must be an object")
    try:
        dim = int(data["dimension"])
        params = tuple(data.get("parameters", ()))
        brackets = {}
        for pair, comps in data.get("brackets", {}).items():
            i, j = (a + 1 for a in _tensor.parse_key(pair))
            brackets[(i, j)] = {int(k): v for k, v in comps.items()}
        algebra = LieAlgebra.from_brackets(dim, brackets, params, check=False)
        if data.get("frame") == "paper-frame":
            frame = standard_norden_frame(4)
        else:
            frame = FrameStructure(data["metric"], data["J"], check=False)
    except KeyError as exc:
        raise InputError(f"{path}: missing field {exc.args[0]!r}") from None
    except (TypeError, ValueError, NordgeomError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"{path}: {exc}") from None
    if frame.dim != dim:
        raise InputError(f"{path}: dimension {dim} but frame is {frame.dim}x{frame.dim}")
    return LoadedInput(_bind(algebra, bindings), frame, str(path), bindings)


def validate(loaded: LoadedInput) -> dict[str, Verdict]:
    return {
        "antisymmetry": check_antisymmetry(loaded.algebra),
        "jacobi": check_jacobi(loaded.algebra),
        "norden": check_norden(loaded.frame),
    }


# -- report ------------------------------------------------------------------


def _s(value) -> str:
    return str(value)


def _table(T: np.ndarray) -> dict[str, str]:
    return {_tensor.key(idx): _s(v) for idx, v in _tensor.nonzero_items(T)}


def _vector_table(values) -> dict[str, str]:
    return {str(i + 1): _s(v) for i, v in enumerate(values) if not v.is_zero()}


def classification(inv: GeometryInvariants) -> dict:
    return {
        "flags": inv.classes.flags(),
        "checks": {k: v.to_dict() for k, v in inv.classes.checks.items()},
        "w2_conditions": None if inv.w2_conditions is None else inv.w2_conditions.to_dict(),
    }


def _echo(loaded: LoadedInput) -> dict:
    a = loaded.algebra
    return {
        "source": loaded.source,
        "dimension": a.dim,
        "parameters": list(a.params),
        "bindings": {k: str(v) for k, v in sorted(loaded.bindings.items())},
        "brackets": {
            f"{i},{j}": {str(k): _s(v) for k, v in sorted(comps.items())}
            for (i, j), comps in sorted(a.brackets().items())
        },
        "metric": [[str(v) for v in row] for row in loaded.frame.g],
        "J": [[str(v) for v in row] for row in loaded.frame.J],
    }


def build_report(loaded: LoadedInput) -> dict:
    """Every invariant as a JSON-ready dict; Scalars are canonical strings."""
    setup = loaded.setup()
    inv = compute_invariants(setup)
    battery = isotropic_kahler_battery(setup)
    planes = []
    for p in inv.planes:
        c = p.curvature
        planes.append(
            {
                "plane": list(p.plane),
                "type": p.kind,
                "degenerate": c is None,
                "numerator": None if c is None else _s(c.numerator),
                "denominator": None if c is None else _s(c.denominator),
                "value": None if c is None or c.value is None else _s(c.value),
            }
        )
    rel = inv.norm_relation
    return {
        "input": _echo(loaded),
        "validation": {k: v.to_dict() for k, v in validate(loaded).items()},
        "classification": classification(inv),
        "connection": _table(inv.connection.gamma),
        "F": _table(inv.F.F),
        "N": _table(inv.N),
        "theta": _vector_table(inv.forms.theta),
        "theta_star": _vector_table(inv.forms.theta_star),
        "norm_nabla_J_squared": _s(inv.norm),
        "R": _table(inv.R.R),
        "rho": _table(inv.ricci.rho),
        "tau": _s(inv.ricci.tau),
        "tau_star": _s(inv.ricci.tau_star),
        "tau_star_star": _s(inv.ricci.tau_star_star),
        "sectional_curvatures": planes,
        "holomorphic_constancy": {
            "verdict": inv.constancy.verdict.to_dict(),
            "H": _s(inv.constancy.H),
            "failing_entries": inv.constancy.failures,
        },
        "weyl": None if inv.weyl is None else _table(inv.weyl),
        "norm_curvature_relation": {
            "applicable": rel.applicable,
            "H": _s(rel.H),
            "checks": {k: v.to_dict() for k, v in rel.checks.items()},
        },
        "isotropic_kahler": {
            "mode": battery.mode,
            "conditions": battery.conditions,
            "equivalent": battery.equivalent,
            "notes": list(battery.notes),
        },
    }


def to_json(data) -> str:
    """Canonical JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# -- text rendering ----------------------------------------------------------

_TABLES = (
    ("connection", "Levi-Civita connection  nabla_{X_i} X_j = sum_k G_ij^k X_k", 3),
    ("F", "F_ijk = g((nabla_{X_i} J) X_j, X_k)", 3),
    ("N", "Nijenhuis tensor N(X_i, X_j) = sum_k N_ij^k X_k", 3),
    ("R", "curvature R_ijkl = g(R(X_i,X_j)X_k, X_l)", 4),
    ("rho", "Ricci tensor rho_ij", 2),
    ("weyl", "Weyl tensor W_ijkl", 4),
)


def _render_table(title: str, entries: Mapping[str, str] | None, rank: int, dim: int) -> list[str]:
    lines = [title]
    if entries is None:
        lines.append("  (not defined in this dimension)")
        return lines
    total = dim**rank
    if entries:
        width = max(len(k) for k in entries) + 2
        for k in sorted(entries, key=lambda s: tuple(map(int, s.split(",")))):
            lines.append(f"  {'(' + k + ')':<{width}} = {entries[k]}")
    lines.append(f"  [{total - len(entries)} zero components suppressed]")
    return lines


def _verdict_line(name: str, v: Mapping) -> str:
    if v["ok"]:
        return f"  {name:<14} PASS"
    parts = [f"  {name:<14} FAIL"]
    if v.get("detail"):
        parts.append(v["detail"])
    if v.get("witness"):
        parts.append("at (" + ",".join(map(str, v["witness"])) + ")")
    if v.get("residual"):
        parts.append(f"residual {v['residual']}")
    return " ".join(parts)


def render_classification(cls: Mapping) -> list[str]:
    flags = cls["flags"]
    lines = ["classes: " + "  ".join(f"{k}={'yes' if flags[k] else 'no'}" for k in sorted(flags))]
    w2 = cls.get("w2_conditions")
    if w2 is not None:
        lines.append("W2 structure-constant conditions: " + ("hold" if w2["ok"] else f"fail ({w2['detail']})"))
    return lines


def render_text(report: Mapping) -> str:
    dim = report["input"]["dimension"]
    out: list[str] = []
    echo = report["input"]
    out.append(f"input: {echo['source']}  dimension {dim}  parameters {echo['parameters'] or '-'}")
    if echo["bindings"]:
        out.append("bindings: " + ", ".join(f"{k}={v}" for k, v in echo["bindings"].items()))
    out.append("")
    out.append("validation")
    for name, v in report["validation"].items():
        out.append(_verdict_line(name, v))
    out.append("")
    out.extend(render_classification(report["classification"]))
    out.append("")
    for key, title, rank in _TABLES[:3]:
        out.extend(_render_table(title, report[key], rank, dim))
        out.append("")
    out.append("theta   = " + _fmt_vector(report["theta"], dim))
    out.append("theta*  = " + _fmt_vector(report["theta_star"], dim))
    out.append(f"||nabla J||^2 = {report['norm_nabla_J_squared']}")
    out.append("")
    for key, title, rank in _TABLES[3:5]:
        out.extend(_render_table(title, report[key], rank, dim))
        out.append("")
    out.append(f"tau   = {report['tau']}")
    out.append(f"tau*  = {report['tau_star']}")
    out.append(f"tau** = {report['tau_star_star']}")
    out.append("")
    out.append("sectional curvature of coordinate planes")
    for p in report["sectional_curvatures"]:
        label = f"  span(X{p['plane'][0]}, X{p['plane'][1]})"
        if p["degenerate"]:
            out.append(f"{label:<18} degenerate")
        elif p["value"] is None:
            out.append(f"{label:<18} {p['type']:<13} ({p['numerator']}) / ({p['denominator']})")
        else:
            out.append(f"{label:<18} {p['type']:<13} {p['value']}")
    out.append("")
    hc = report["holomorphic_constancy"]
    out.append(f"holomorphic constancy identity with H = {hc['H']}: " + _short(hc["verdict"]))
    if not hc["verdict"]["ok"]:
        out.append(f"  {hc['failing_entries']} of {dim**4} entries differ")
    rel = report["norm_curvature_relation"]
    if rel["applicable"]:
        for name, v in rel["checks"].items():
            out.append(f"{name}: " + _short(v))
    out.append("")
    out.extend(_render_table(_TABLES[5][1], report["weyl"], 4, dim))
    ik = report["isotropic_kahler"]
    out.append("")
    out.append(f"isotropic-Kaehler conditions ({ik['mode']})")
    for name, value in ik["conditions"].items():
        out.append(f"  {name:<28} {_tri(value)}")
    if ik["equivalent"] is not None:
        out.append(f"  all equivalent: {'yes' if ik['equivalent'] else 'no'}")
    for note in ik["notes"]:
        out.append(f"  note: {note}")
    return "\n".join(out) + "\n"


def _short(v: Mapping) -> str:
    if v["ok"]:
        return "PASS"
    w = ",".join(map(str, v["witness"])) if v.get("witness") else ""
    return "FAIL" + (f" at ({w})" if w else "") + (f", residual {v['residual']}" if v.get("residual") else "")


def _tri(value) -> str:
    return "n/a" if value is None else ("true" if value else "false")


def _fmt_vector(entries: Mapping[str, str], dim: int) -> str:
    return "(" + ", ".join(entries.get(str(i), "0") for i in range(1, dim + 1)) + ")"
