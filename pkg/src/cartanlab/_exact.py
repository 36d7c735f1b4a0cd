"""Exact linear algebra over Q and small real algebraic extensions.

Thin wrappers around sympy's DomainMatrix; the plain Matrix class is far
too slow for the few thousand rank computations a classification needs.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np
import sympy as sp
from sympy.polys.matrices import DomainMatrix


def to_exact(v) -> sp.Expr:
    """Convert a scalar to an exact sympy number.

    Floats are converted through their exact binary value, so 0.1 is not
    silently rounded to 1/10.
    """
    if isinstance(v, sp.Basic):
        if isinstance(v, sp.Float):
            return sp.Rational(float(v))
        return v
    if isinstance(v, bool):
        return sp.Integer(int(v))
    if isinstance(v, (int, np.integer)):
        return sp.Integer(int(v))
    if isinstance(v, Fraction):
        return sp.Rational(v.numerator, v.denominator)
    if isinstance(v, (float, np.floating)):
        if not np.isfinite(v):
            raise ValueError(f"non-finite entry {v!r}")
        return sp.Rational(float(v))
    if isinstance(v, str):
        return sp.Rational(Fraction(v))
    raise TypeError(f"cannot interpret {v!r} as an exact scalar")


def is_rational(v) -> bool:
    return bool(getattr(v, "is_Rational", False))


def dm(rows: Sequence[Sequence], ncols: int | None = None) -> DomainMatrix:
    rows = [list(r) for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    return DomainMatrix.from_list_sympy(len(rows), ncols, rows, extension=True)


def rank(rows: Sequence[Sequence]) -> int:
    rows = [r for r in rows]
    if not rows or not len(rows[0]):
        return 0
    if all(all(e == 0 for e in r) for r in rows):
        return 0
    return dm(rows).rank()


def row_basis(rows: Sequence[Sequence]) -> list[tuple]:
    """Reduced row echelon basis of the row span (nonzero rows only)."""
    rows = [r for r in rows]
    if not rows:
        return []
    if all(all(e == 0 for e in r) for r in rows):
        return []
    red, pivots = dm(rows).rref()
    mat = red.to_Matrix()
    return [tuple(mat.row(i)) for i in range(len(pivots))]


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[tuple]:
    """Basis of {v : rows . v = 0}."""
    rows = [r for r in rows]
    if ncols is None:
        ncols = len(rows[0])
    if not rows or all(all(e == 0 for e in r) for r in rows):
        return [tuple(sp.Integer(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    ns = dm(rows, ncols).nullspace()
    mat = ns.to_Matrix()
    return [tuple(mat.row(i)) for i in range(mat.rows)]


def solve_in_span(basis: Sequence[Sequence], v: Sequence) -> tuple | None:
    """Coefficients c with sum c_i basis_i = v, or None."""
    if not basis:
        return () if all(e == 0 for e in v) else None
    k = len(basis)
    cols = [list(b) + [0] for b in basis]
    aug = [[cols[j][i] for j in range(k)] + [-v[i]] for i in range(len(v))]
    ns = nullspace(aug, k + 1)
    for w in ns:
        if w[k] != 0:
            return tuple(sp.radsimp(wi / w[k]) for wi in w[:k])
    return None


def in_span(basis: Sequence[Sequence], v: Sequence) -> bool:
    if all(e == 0 for e in v):
        return True
    if not basis:
        return False
    return rank(list(basis) + [list(v)]) == rank(list(basis))


def intersect_spans(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[tuple]:
    """Basis of span(a) intersected with span(b)."""
    if not a or not b:
        return []
    dim = len(a[0])
    ka = len(a)
    rows = [[a[j][i] for j in range(ka)] + [-b[j][i] for j in range(len(b))]
            for i in range(dim)]
    out = []
    for w in nullspace(rows, ka + len(b)):
        out.append(tuple(sum((w[j] * a[j][i] for j in range(ka)), sp.Integer(0))
                         for i in range(dim)))
    return row_basis(out)


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), sp.Integer(0))


def real_root_count(poly: sp.Poly) -> int:
    """Number of distinct real roots, exact (Sturm) for rational coefficients."""
    if poly.degree() <= 0:
        return 0
    return sp.Poly(sp.sqf_part(poly.as_expr()), *poly.gens).count_roots()
