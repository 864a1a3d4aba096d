"""JSON schemas for fields, matrices, polynomials, systems and actions.

Field:       {"p": 3, "r": 1} or {"p": 2, "r": 3, "modulus": [1, 1, 0, 1]}
Element:     little-endian coefficient array; a bare integer is accepted
             (and emitted) for r = 1.
Matrix:      {"rows": R, "cols": C, "entries": [[...], ...]}
Poly:        little-endian array of element encodings.
PolyMatrix:  like Matrix with polynomial entries.
System:      {"field": ..., "n": n, "k": k, "delta": d,
              "A": [[...]], "B": ..., "C": ..., "D": ...}
Action:      {"kind": "parity", "matrix": {...}} (field carried inside or
             supplied by context).

Codeword stream files are JSON lines, one block per line, null for erased
symbols.
"""

from __future__ import annotations

import json
from typing import Any, Sequence

from .actions import ActionSpec
from .erasure import ErasedWord
from .fields import FieldElement, FieldSpec, field_create
from .matrices import Matrix
from .polys import Poly, PolyMatrix
from .systems import IsoSystem

__all__ = [
    "field_to_json", "field_from_json",
    "element_to_json", "element_from_json",
    "matrix_to_json", "matrix_from_json",
    "poly_to_json", "poly_from_json",
    "polymatrix_to_json", "polymatrix_from_json",
    "system_to_json", "system_from_json",
    "action_to_json", "action_from_json",
    "stream_to_lines", "stream_from_lines",
    "dumps",
]


def dumps(obj: Any) -> str:
    """Canonical serialization: sorted keys, no whitespace drift."""
    return json.dumps(obj, sort_keys=True, separators=(",", ": "), indent=1)


def field_to_json(spec: FieldSpec) -> dict:
    out: dict[str, Any] = {"p": spec.p, "r": spec.r}
    if spec.r > 1:
        out["modulus"] = list(spec.modulus)  # type: ignore[arg-type]
    return out


def field_from_json(obj: dict) -> FieldSpec:
    return field_create(int(obj["p"]), int(obj.get("r", 1)), obj.get("modulus"))


def element_to_json(e: FieldElement) -> int | list[int]:
    if e.spec.r == 1:
        return e.coeffs[0]
    return list(e.coeffs)


def element_from_json(spec: FieldSpec, obj: int | Sequence[int]) -> FieldElement:
    return spec.element(obj if isinstance(obj, int) else list(obj))


def matrix_to_json(m: Matrix) -> dict:
    return {
        "rows": m.rows,
        "cols": m.cols,
        "entries": [[element_to_json(e) for e in row] for row in m.entries],
    }


def matrix_from_json(spec: FieldSpec, obj: dict) -> Matrix:
    entries = [[element_from_json(spec, e) for e in row] for row in obj["entries"]]
    m = Matrix.from_rows(spec, entries)
    if (m.rows, m.cols) != (int(obj["rows"]), int(obj["cols"])):
        raise ValueError("matrix entries disagree with the declared shape")
    return m


def poly_to_json(p: Poly) -> list:
    return [element_to_json(c) for c in p.coeffs]


def poly_from_json(spec: FieldSpec, obj: Sequence) -> Poly:
    return Poly.from_elements(spec, [element_from_json(spec, c) for c in obj])


def polymatrix_to_json(m: PolyMatrix) -> dict:
    return {
        "rows": m.rows,
        "cols": m.cols,
        "entries": [[poly_to_json(e) for e in row] for row in m.entries],
    }


def polymatrix_from_json(spec: FieldSpec, obj: dict) -> PolyMatrix:
    entries = [[poly_from_json(spec, e) for e in row] for row in obj["entries"]]
    return PolyMatrix.from_rows(spec, entries)


def _grid_to_json(m: Matrix) -> list:
    return [[element_to_json(e) for e in row] for row in m.entries]


def _grid_from_json(spec: FieldSpec, obj: Sequence[Sequence]) -> Matrix:
    return Matrix.from_rows(
        spec, [[element_from_json(spec, e) for e in row] for row in obj]
    )


def system_to_json(system: IsoSystem) -> dict:
    return {
        "field": field_to_json(system.spec),
        "n": system.n,
        "k": system.k,
        "delta": system.delta,
        "A": _grid_to_json(system.A),
        "B": _grid_to_json(system.B),
        "C": _grid_to_json(system.C),
        "D": _grid_to_json(system.D),
    }


def system_from_json(obj: dict) -> IsoSystem:
    spec = field_from_json(obj["field"])
    system = IsoSystem(
        A=_grid_from_json(spec, obj["A"]),
        B=_grid_from_json(spec, obj["B"]),
        C=_grid_from_json(spec, obj["C"]),
        D=_grid_from_json(spec, obj["D"]),
    )
    declared = (int(obj["n"]), int(obj["k"]), int(obj["delta"]))
    if (system.n, system.k, system.delta) != declared:
        raise ValueError("system matrices disagree with declared (n, k, delta)")
    return system


def action_to_json(act: ActionSpec, spec: FieldSpec) -> dict:
    return {"kind": act.kind, "field": field_to_json(spec), "matrix": matrix_to_json(act.matrix)}


def action_from_json(obj: dict, spec: FieldSpec | None = None) -> ActionSpec:
    if spec is None:
        if "field" not in obj:
            raise ValueError("action JSON without field context")
        spec = field_from_json(obj["field"])
    return ActionSpec(obj["kind"], matrix_from_json(spec, obj["matrix"]))


def stream_to_lines(word: ErasedWord) -> str:
    lines = []
    for t in range(word.blocks):
        lines.append(json.dumps(
            [None if s is None else element_to_json(s) for s in word.block(t)],
            separators=(",", ":"),
        ))
    return "\n".join(lines) + "\n"


def stream_from_lines(spec: FieldSpec, n: int, text: str) -> ErasedWord:
    symbols: list[FieldElement | None] = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        block = json.loads(line)
        if len(block) != n:
            raise ValueError(f"stream line holds {len(block)} symbols, expected {n}")
        for s in block:
            symbols.append(None if s is None else element_from_json(spec, s))
    return ErasedWord(n, tuple(symbols))
