"""JSON files for subalgebras and matrices.

Scalars are written as JSON integers when integral and as strings
("1/2", "sqrt(6)") otherwise, so files round-trip exactly.  On input,
floats are taken at their exact binary value.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

import sympy as sp

from ._exact import to_exact
from .catalog import Subalgebra
from .errors import CartanLabError
from .lie_core import SL3, SO2N, ANCoords, an_element, from_matrix

AMBIENTS = {"so2n": SO2N, "sl3": SL3}


class ParseError(CartanLabError):
    code = "parse-error"


def scalar_to_json(v) -> Any:
    v = sp.nsimplify(v) if isinstance(v, sp.Float) else sp.sympify(v)
    if v.is_Integer:
        return int(v)
    return str(v)


def scalar_from_json(v, where: str) -> sp.Expr:
    if isinstance(v, bool) or not isinstance(v, (int, float, str)):
        raise ParseError(f"{where}: expected a number, got {v!r}")
    if isinstance(v, str):
        try:
            return to_exact(Fraction(v))
        except ValueError:
            pass
        try:
            e = sp.sympify(v, rational=True)
        except (sp.SympifyError, SyntaxError, TypeError) as exc:
            raise ParseError(f"{where}: cannot parse {v!r}") from exc
        if not (e.is_number and e.is_real):
            raise ParseError(f"{where}: {v!r} is not a real number")
        return e
    try:
        return to_exact(v)
    except ValueError as exc:
        raise ParseError(f"{where}: {exc}") from exc


def _vector(v, where: str, length: int) -> list:
    if not isinstance(v, list):
        raise ParseError(f"{where}: expected a list")
    if len(v) != length:
        raise ParseError(f"{where}: expected length {length}, got {len(v)}")
    return [scalar_from_json(e, f"{where}[{i}]") for i, e in enumerate(v)]


def matrix_from_json(rows, where: str = "matrix") -> sp.Matrix:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ParseError(f"{where}: expected a non-empty list of rows")
    width = len(rows[0])
    for i, r in enumerate(rows):
        if len(r) != width:
            raise ParseError(f"{where}[{i}]: ragged row of length {len(r)}, expected {width}")
    return sp.Matrix([[scalar_from_json(e, f"{where}[{i}][{j}]") for j, e in enumerate(r)]
                      for i, r in enumerate(rows)])


def _element_from_json(d, ambient: str, n: int, where: str):
    if not isinstance(d, dict):
        raise ParseError(f"{where}: expected an object")
    if "matrix" in d:
        M = matrix_from_json(d["matrix"], f"{where}.matrix")
        try:
            return from_matrix(M, ambient, n)
        except CartanLabError as exc:
            raise ParseError(f"{where}.matrix: {exc}") from exc
    if ambient != SO2N:
        raise ParseError(f"{where}: sl3 elements must be given as a matrix")
    unknown = set(d) - {"t1", "t2", "phi", "x", "y", "eta"}
    if unknown:
        raise ParseError(f"{where}: unknown fields {sorted(unknown)}")
    m = n - 2
    c = ANCoords.make(
        n,
        t1=scalar_from_json(d.get("t1", 0), f"{where}.t1"),
        t2=scalar_from_json(d.get("t2", 0), f"{where}.t2"),
        phi=scalar_from_json(d.get("phi", 0), f"{where}.phi"),
        x=_vector(d.get("x", [0] * m), f"{where}.x", m),
        y=_vector(d.get("y", [0] * m), f"{where}.y", m),
        eta=scalar_from_json(d.get("eta", 0), f"{where}.eta"),
    )
    return an_element(n, c)


def subalgebra_from_json(doc: dict, label: str | None = None) -> Subalgebra:
    """Parse a SubalgebraFile document; errors name the offending field."""
    if not isinstance(doc, dict):
        raise ParseError("top level: expected an object")
    amb = doc.get("ambient")
    if amb not in AMBIENTS:
        raise ParseError(f"ambient: expected one of {sorted(AMBIENTS)}, got {amb!r}")
    ambient = AMBIENTS[amb]
    n = doc.get("n", 3)
    if not isinstance(n, int) or isinstance(n, bool) or n < 3:
        raise ParseError(f"n: expected an integer >= 3, got {n!r}")
    basis = doc.get("basis")
    if not isinstance(basis, list):
        raise ParseError("basis: expected a list")
    elements = [_element_from_json(b, ambient, n, f"basis[{i}]") for i, b in enumerate(basis)]
    return Subalgebra.span(ambient, n, elements, doc.get("label", label))


def subalgebra_to_json(h: Subalgebra) -> dict:
    basis = []
    for b in h.basis:
        if b.coords is not None:
            c = b.coords
            basis.append({
                "t1": scalar_to_json(c.t1), "t2": scalar_to_json(c.t2),
                "phi": scalar_to_json(c.phi), "x": [scalar_to_json(e) for e in c.x],
                "y": [scalar_to_json(e) for e in c.y], "eta": scalar_to_json(c.eta),
            })
        else:
            basis.append({"matrix": [[scalar_to_json(e) for e in b.M.row(i)]
                                     for i in range(b.M.rows)]})
    out = {"ambient": "sl3" if h.ambient == SL3 else "so2n", "n": h.n, "basis": basis}
    if h.label is not None:
        out["label"] = h.label
    return out


def load_json(path: str) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def load_subalgebra(path: str) -> Subalgebra:
    return subalgebra_from_json(load_json(path))


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


__all__ = [
    "ParseError", "scalar_to_json", "scalar_from_json", "matrix_from_json",
    "subalgebra_from_json", "subalgebra_to_json", "load_json", "load_subalgebra", "dumps",
]
