"""Structural type of a subalgebra of a+n, and the compact-form verdict.

Everything here is exact: the decision tree works on rational (or small
algebraic) coordinate vectors of h cap n, so no tolerance ever decides a
label.  Vectors of h cap n are laid out as (phi, x..., y..., eta).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Sequence

import numpy as np
import sympy as sp
from scipy.optimize import minimize
from scipy.linalg import expm

from . import _exact as ex
from .catalog import DeformationMatrix, Subalgebra, ad_exp, conjugate, sl3_subgroups
from .errors import InvalidParams, UnknownLabel, UnsupportedInput
from .lie_core import (ALPHA, ALPHA_2BETA, ALPHA_BETA, BETA, PERPENDICULAR,
                       POSITIVE_ROOTS, ROOT_FUNCTIONALS, ROOT_HEIGHT, SL3, SO2N,
                       ANCoords, an_element, bracket, root_value)

CDS = "CDS"
P210 = "P2.10"
UNRESOLVED = "incompatible-unresolved"

# ---------------------------------------------------------------------------
# Coordinates of h cap n


def _parts(v: Sequence, m: int) -> tuple:
    return v[0], tuple(v[1:1 + m]), tuple(v[1 + m:1 + 2 * m]), v[1 + 2 * m]


def _field_index(m: int) -> dict:
    return {ALPHA: [0], ALPHA_BETA: list(range(1, 1 + m)),
            BETA: list(range(1 + m, 1 + 2 * m)), ALPHA_2BETA: [1 + 2 * m]}


def root_space(m: int, root: str) -> list[tuple]:
    """Basis of u_root in nil coordinates."""
    size = 2 * m + 2
    return [tuple(sp.Integer(int(i == j)) for j in range(size)) for i in _field_index(m)[root]]


def _within(u: Sequence, roots: Sequence[str], m: int) -> bool:
    allowed = set()
    for r in roots:
        allowed.update(_field_index(m)[r])
    return all(v[i] == 0 for v in u for i in range(len(v)) if i not in allowed)


def _meets(u: Sequence, root: str, m: int) -> bool:
    return bool(u) and bool(ex.intersect_spans(list(u), root_space(m, root)))


def _equals_root_space(u: Sequence, root: str, m: int) -> bool:
    return _within(u, [root], m) and len(u) == len(_field_index(m)[root])


def _single_root(u: Sequence, m: int) -> str | None:
    if not u:
        return None
    for r in POSITIVE_ROOTS:
        if _within(u, [r], m):
            return r
    return None


def _root_part(v: Sequence, roots: Sequence[str], m: int) -> tuple:
    keep = set()
    for r in roots:
        keep.update(_field_index(m)[r])
    return tuple(e if i in keep else sp.Integer(0) for i, e in enumerate(v))


def _kills(T: Sequence, functional: Sequence) -> bool:
    return sp.simplify(functional[0] * T[0] + functional[1] * T[1]) == 0


# ---------------------------------------------------------------------------
# Split and compatibility


@dataclass(frozen=True)
class SplitInfo:
    """Torus projection, h cap n, and how h sits relative to A."""

    rank: int
    torus: tuple
    nil: tuple
    split: bool
    compatible: bool
    T0: tuple | None = None
    omega: str | None = None
    c: tuple | None = None


def _element_over(h: Subalgebra, T: Sequence) -> tuple:
    """Flat vector of some element of h whose torus part is T."""
    w = ex.solve_in_span([v[:2] for v in h.vectors], tuple(T))
    if w is None:
        raise InvalidParams(f"{tuple(T)} is not in the torus projection")
    return tuple(sp.expand(sum((wj * v[i] for wj, v in zip(w, h.vectors)), sp.Integer(0)))
                 for i in range(2 * h.n))


def split_and_compatibility(h: Subalgebra) -> SplitInfo:
    """Torus part of h, h cap n, and whether h is split / compatible with A."""
    if h.ambient != SO2N or not h.in_an:
        raise UnsupportedInput("needs a subalgebra of a+n in so(2,n)")
    m = h.n - 2
    tor = tuple(h.torus_projection)
    u = tuple(h.nil_vectors)
    r = len(tor)
    if r == 0:
        return SplitInfo(0, tor, u, True, True)
    if r == 2:
        split = all(ex.in_span(list(u), _element_over(h, T)[2:]) for T in ((1, 0), (0, 1)))
        return SplitInfo(2, tor, u, split, split)
    T0 = tor[0]
    V = _element_over(h, T0)[2:]
    if ex.in_span(list(u), V):
        return SplitInfo(1, tor, u, True, True, T0)
    zero_roots = [rt for rt in POSITIVE_ROOTS if root_value(rt, *T0) == 0]
    cpart = _root_part(V, zero_roots, m)
    rest = tuple(a - b for a, b in zip(V, cpart))
    compatible = ex.in_span(list(u), rest)
    omega = zero_roots[0] if (compatible and zero_roots) else None
    return SplitInfo(1, tor, u, False, compatible, T0, omega, cpart if compatible else None)


def _regular_torus(tor: Sequence) -> tuple:
    """A torus element in span(tor) on which no positive root vanishes."""
    cands = [tuple(t) for t in tor]
    if len(cands) == 2:
        cands = [(3, 1), (5, 2), (7, 3), (1, 0), (0, 1)]
    for T in cands:
        if all(root_value(rt, *T) != 0 for rt in POSITIVE_ROOTS):
            return T
    return cands[0]


def normalize_compatible(h: Subalgebra) -> Subalgebra:
    """Conjugate h by exp(Z), Z in n, into a position compatible with A.

    With X in h over a torus element T, each root component V_rho with
    rho(T) != 0 is removed by Ad(exp(V_rho / rho(T))), processed by
    increasing root height.  Brackets only push error to greater heights,
    so three passes finish exactly.
    """
    info = split_and_compatibility(h)
    if info.compatible:
        return h
    T = info.T0 if info.rank == 1 else _regular_torus(info.torus)
    X = an_element(h.n, ANCoords.from_vector(h.n, _element_over(h, T)))
    cur = h
    steps = []
    m = h.n - 2
    for height in (1, 2, 3):
        nil = X.coords.nil_vector()
        W = [sp.Integer(0)] * (2 * m + 2)
        for rt in POSITIVE_ROOTS:
            val = root_value(rt, *T)
            if ROOT_HEIGHT[rt] != height or val == 0:
                continue
            for i in _field_index(m)[rt]:
                W[i] = sp.expand(nil[i] / val)
        if all(e == 0 for e in W):
            continue
        Z = an_element(h.n, ANCoords.from_vector(h.n, (0, 0) + tuple(W)))
        cur = conjugate(cur, Z)
        X = ad_exp(Z, X)
        steps.append(tuple(W))
    params = dict(h.params)
    if not split_and_compatibility(cur).compatible:
        params[UNRESOLVED] = True
        return h.relabel(h.label, params)
    params["normalizer"] = steps
    return cur.relabel(h.label, params)


# ---------------------------------------------------------------------------
# Verdict records


def _jsonable(v):
    if isinstance(v, (list, tuple)):
        return [_jsonable(e) for e in v]
    if isinstance(v, Mapping):
        return {str(k): _jsonable(e) for k, e in v.items()}
    if isinstance(v, sp.MatrixBase):
        return [[_jsonable(e) for e in row] for row in v.tolist()]
    if isinstance(v, sp.Basic):
        return str(v)
    if isinstance(v, (np.integer, np.floating)):
        return v.item()
    return v


@dataclass(frozen=True)
class TypeVerdict:
    label: str
    params: Mapping = field(default_factory=dict)
    flags: tuple = ()

    def to_json(self) -> dict:
        return {"label": self.label, "params": _jsonable(self.params), "flags": list(self.flags)}


@dataclass(frozen=True)
class CKVerdict:
    verdict: str
    justification: tuple = ()
    note: str = ""

    def __post_init__(self):
        if self.verdict != "Inconclusive" and not self.justification:
            raise ValueError("a verdict needs a justification")

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "justification": list(self.justification),
                "note": self.note}


# ---------------------------------------------------------------------------
# Growth exponent of a single nilpotent element


def _jordan_sizes(M: sp.MatrixBase) -> list[int]:
    """Jordan block sizes of a nilpotent matrix, decreasing."""
    size = M.shape[0]
    ranks = [size]
    P = sp.eye(size)
    while ranks[-1] > 0:
        P = (P * M).applyfunc(sp.expand)
        ranks.append(ex.rank([list(P.row(i)) for i in range(size)]))
        if len(ranks) > size + 1:
            raise InvalidParams("matrix is not nilpotent")
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    sizes = []
    for k in range(len(at_least), 0, -1):
        exactly = at_least[k - 1] - (at_least[k] if k < len(at_least) else 0)
        sizes += [k] * exactly
    return sizes


def nilpotent_exponent(X) -> sp.Rational:
    """p with ||exp(sX) ^ exp(sX)|| ~ ||exp(sX)||^p as s -> oo.

    ||exp(sX)|| grows like s^(s1-1) for the top Jordan block size s1, and
    the wedge square like s^max(2 s1 - 4, s1 + s2 - 2).
    """
    sizes = _jordan_sizes(sp.Matrix(X.M))
    s1 = sizes[0]
    if s1 < 2:
        raise InvalidParams("element is zero")
    s2 = sizes[1] if len(sizes) > 1 else 1
    return sp.Rational(max(2 * s1 - 4, s1 + s2 - 2), s1 - 1)


# ---------------------------------------------------------------------------
# Quantified conditions over all nonzero h in h cap n


def _xy_image(u: Sequence, m: int) -> list[tuple]:
    return ex.row_basis([tuple(v[1:1 + 2 * m]) for v in u])


def _poly_has_real_root(g: sp.Expr, s: sp.Symbol) -> tuple[bool, bool]:
    """(has a real root, decided exactly)."""
    poly = sp.Poly(g, s)
    if poly.degree() <= 0:
        return False, True
    if all(ex.is_rational(c) for c in poly.all_coeffs()):
        return ex.real_root_count(poly) > 0, True
    roots = sp.Poly(g, s).nroots(n=30)
    return any(abs(sp.im(r)) < 1e-10 for r in roots), False


def never_rank_one(u: Sequence, m: int) -> tuple[bool, bool]:
    """Whether dim<x_h, y_h> != 1 for every h in span(u).

    Returns (answer, exact).  Elements of u_(alpha+2beta) have x = y = 0 and
    pass.  Otherwise x and y are parallel iff (s A + t B) c = 0 for some real
    (s, t) != 0 and some c != 0, where A, B are the x- and y-matrices of the
    image; this is a real root of the gcd of the maximal minors.
    """
    img = _xy_image(u, m)
    k = len(img)
    if k == 0:
        return True, True
    if k > m:
        return False, True
    A = sp.Matrix([[v[i] for v in img] for i in range(m)])
    B = sp.Matrix([[v[m + i] for v in img] for i in range(m)])
    if ex.rank([list(A.row(i)) for i in range(m)]) < k:
        return False, True
    s = sp.Symbol("s")
    P = s * A + B
    g = sp.Integer(0)
    for rows in combinations(range(m), k):
        d = sp.expand(P.extract(list(rows), list(range(k))).det())
        g = sp.gcd(g, d)
        if g != 0 and sp.Poly(g, s).degree() == 0:
            return True, True
    if g == 0:
        return False, True
    has_root, exact = _poly_has_real_root(g, s)
    return not has_root, exact


def always_rank_one(u: Sequence, m: int) -> bool:
    """Whether h -> (x_h, y_h) is injective with parallel x_h, y_h throughout."""
    if not u or _meets(u, ALPHA_2BETA, m):
        return False
    k = len(u)
    if ex.rank([tuple(v[1:1 + 2 * m]) for v in u]) < k:
        return False
    A = [[v[1 + i] for v in u] for i in range(m)]
    B = [[v[1 + m + i] for v in u] for i in range(m)]
    for i, j in combinations(range(m), 2):
        for a, b in combinations(range(k), 2):
            q = A[i][a] * B[j][b] + A[i][b] * B[j][a] - A[j][a] * B[i][b] - A[j][b] * B[i][a]
            if sp.expand(q) != 0:
                return False
        for a in range(k):
            if sp.expand(A[i][a] * B[j][a] - A[j][a] * B[i][a]) != 0:
                return False
    return True


# ---------------------------------------------------------------------------
# SO(1,n) recognition


def _orth_project(v: Sequence, basis: Sequence) -> tuple:
    """Orthogonal projection of v onto span(basis), exact."""
    if not basis:
        return tuple(sp.Integer(0) for _ in v)
    G = sp.Matrix([[ex.dot(a, b) for b in basis] for a in basis])
    rhs = sp.Matrix([ex.dot(a, v) for a in basis])
    w = G.LUsolve(rhs)
    return tuple(sp.expand(sum((w[j] * basis[j][i] for j in range(len(basis))), sp.Integer(0)))
                 for i in range(len(v)))


def _recognize_so1n_vectors(u: Sequence, m: int) -> dict | None:
    if not u:
        return None
    if any(e != 0 for v in u for e in _parts(v, m)[2]):
        return None
    u0 = []
    for w in ex.nullspace([[v[0] for v in u]], len(u)):
        u0.append(tuple(sp.expand(sum((w[j] * u[j][i] for j in range(len(u))), sp.Integer(0)))
                        for i in range(len(u[0]))))
    X0 = ex.row_basis([_parts(v, m)[1] for v in u0])
    # b in X0 with eta_h = b . x_h on u0
    if X0:
        rows = [[ex.dot(xb, _parts(v, m)[1]) for xb in X0] + [-_parts(v, m)[3]] for v in u0]
        sol = ex.nullspace(rows, len(X0) + 1) if rows else []
        w = None
        for s in sol:
            if s[-1] != 0:
                w = [e / s[-1] for e in s[:-1]]
                break
        if rows and w is None:
            return None
        if not rows:
            w = [0] * len(X0)
        b = tuple(sp.expand(sum((wj * xb[i] for wj, xb in zip(w, X0)), sp.Integer(0)))
                  for i in range(m))
    else:
        if any(_parts(v, m)[3] != 0 for v in u0):
            return None
        b = tuple(sp.Integer(0) for _ in range(m))
    star = [v for v in u if v[0] != 0]
    flags = []
    if star:
        v = star[0]
        phi, x, _, eta = _parts(v, m)
        xs = tuple(e / phi for e in x)
        c = tuple(sp.expand(a - pj) for a, pj in zip(xs, _orth_project(xs, X0)))
        p = sp.expand(eta / phi - ex.dot(b, xs))
    else:
        c = tuple(sp.Integer(0) for _ in range(m))
        p = sp.floor(ex.dot(b, b) / 2) + 1
        flags.append("p-free")
    # exact residual check on every basis vector
    for v in u:
        phi, x, _, eta = _parts(v, m)
        shifted = tuple(a - phi * cc for a, cc in zip(x, c))
        if not ex.in_span(X0, shifted):
            return None
        if sp.expand(eta - p * phi - ex.dot(b, x)) != 0:
            return None
    if not sp.simplify(ex.dot(b, b) - ex.dot(c, c) - 2 * p) < 0:
        return None
    return {"X0": list(X0), "b": b, "c": c, "p": p, "flags": flags}


def recognize_so1n(h: Subalgebra) -> dict | None:
    """Parameters (X0, b, c, p) if h cap n has the SO(1,n) shape, else None."""
    if not h.in_an:
        return None
    return _recognize_so1n_vectors(list(h.nil_vectors), h.n - 2)


# ---------------------------------------------------------------------------
# The decision tree


def _classify_nilpotent(h: Subalgebra, u: Sequence, m: int) -> TypeVerdict:
    if len(u) == 1:
        Z = an_element(h.n, ANCoords.from_vector(h.n, (0, 0) + tuple(u[0])))
        return TypeVerdict("T2.5-1", {"element": tuple(u[0]), "p": nilpotent_exponent(Z)})
    flags = []
    if _within(u, [ALPHA_BETA, BETA, ALPHA_2BETA], m):
        ok, exact = never_rank_one(u, m)
        if not exact:
            flags.append("inexact-real-root")
        if ok:
            return TypeVerdict("T2.5-2", {"image": _xy_image(u, m)}, tuple(flags))
        if always_rank_one(u, m):
            return TypeVerdict("T2.5-3", {"image": _xy_image(u, m)})
    so = _recognize_so1n_vectors(u, m)
    if so is not None:
        return TypeVerdict("T2.5-4", {k: so[k] for k in ("X0", "b", "c", "p")}, tuple(so["flags"]))
    return TypeVerdict(CDS, {"via": "T2.5"}, tuple(flags))


def _classify_split(T: tuple, u: Sequence, m: int) -> TypeVerdict:
    dim = 1 + len(u)
    base = {"T": T}
    if not u:
        return TypeVerdict("T2.6-1", base)
    flags = []
    phi0 = _within(u, [ALPHA_BETA, BETA, ALPHA_2BETA], m)
    if _kills(T, ROOT_FUNCTIONALS[ALPHA]) and phi0:
        ok, exact = never_rank_one(u, m)
        if not exact:
            flags.append("inexact-real-root")
        if ok:
            return TypeVerdict("T2.6-2", dict(base, image=_xy_image(u, m)), tuple(flags))
    no_eta = not _meets(u, ALPHA_2BETA, m)
    if _kills(T, ROOT_FUNCTIONALS[BETA]) and _within(u, [ALPHA_BETA, ALPHA_2BETA], m) and no_eta:
        return TypeVerdict("T2.6-3", base)
    if _kills(T, ROOT_FUNCTIONALS[ALPHA_BETA]) and _within(u, [BETA, ALPHA_2BETA], m) and no_eta:
        return TypeVerdict("T2.6-4", base)
    if _kills(T, ROOT_FUNCTIONALS[BETA]):
        so = _recognize_so1n_vectors(u, m)
        if so is not None:
            out = dict(base, **{k: so[k] for k in ("X0", "b", "c", "p")})
            return TypeVerdict("T2.6-5", out, tuple(flags + so["flags"]))
    if _kills(T, (1, -2)) and dim == 2:
        phi, x, y, eta = _parts(u[0], m)
        if phi != 0 and any(e != 0 for e in y) and all(e == 0 for e in x) and eta == 0:
            return TypeVerdict("T2.6-6", dict(base, phi=phi, y=y))
    if _kills(T, ROOT_FUNCTIONALS[BETA]) and dim == 2:
        phi, x, y, eta = _parts(u[0], m)
        if all(e == 0 for e in y) and sp.simplify(ex.dot(x, x) + 2 * phi * eta) != 0:
            return TypeVerdict("T2.6-7", dict(base, phi=phi, x=x, eta=eta))
    omega = _single_root(u, m)
    if omega is not None:
        gamma = PERPENDICULAR[omega]
        w = root_value(omega, *T)
        if w == 0:
            return TypeVerdict(CDS, {"via": P210, "omega": omega, "T": T}, tuple(flags))
        p = sp.simplify(-root_value(gamma, *T) / w)
        params = {"omega": omega, "gamma": gamma, "p": p, "T": T}
        if abs(p) < 1:
            return TypeVerdict("T2.6-8", params, tuple(flags))
        return TypeVerdict(P210, params, tuple(flags))
    return TypeVerdict(CDS, {"via": "T2.6", "T": T}, tuple(flags))


def _classify_nonsplit(info: SplitInfo, m: int) -> TypeVerdict:
    T, omega, c, u = info.T0, info.omega, info.c, info.nil
    params = {"omega": omega, "T": T, "c": c}
    if omega == ALPHA:
        if _within(u, [ALPHA_BETA], m):
            return TypeVerdict("T2.9-1", params)
        if _within(u, [ALPHA_2BETA], m):
            return TypeVerdict("T2.9-2", params)
    if omega == ALPHA_2BETA:
        if _within(u, [ALPHA], m):
            return TypeVerdict("T2.9-3", params)
        if _within(u, [BETA], m) or _within(u, [ALPHA_BETA], m):
            return TypeVerdict("T2.9-4", params)
    if omega in (BETA, ALPHA_BETA):
        gamma = PERPENDICULAR[omega]
        if (u and _within(u, [omega, ALPHA_2BETA], m) and not _meets(u, omega, m)
                and not _meets(u, ALPHA_2BETA, m)):
            return TypeVerdict("T2.9-5", params)
        if _within(u, [gamma, ALPHA_2BETA], m) and not _meets(u, ALPHA_2BETA, m):
            return TypeVerdict("T2.9-6", dict(params, gamma=gamma))
        if _equals_root_space(u, ALPHA_2BETA, m):
            return TypeVerdict("T2.9-7", params)
    if omega == ALPHA_BETA and _equals_root_space(u, ALPHA, m):
        return TypeVerdict("T2.9-8", params)
    return TypeVerdict(CDS, dict(params, via="T2.9"))


def classify_type(h: Subalgebra) -> TypeVerdict:
    """Which item of the classification h falls under."""
    if h.ambient != SO2N or not h.in_an:
        raise UnsupportedInput("classification needs a subalgebra of a+n in so(2,n)")
    if h.params.get(UNRESOLVED):
        return TypeVerdict(UNRESOLVED, {}, (UNRESOLVED,))
    m = h.n - 2
    if h.dim == 0:
        return TypeVerdict("T2.5-1", {"dim": 0}, ("trivial",))
    info = split_and_compatibility(h)
    if info.rank == 2:
        return TypeVerdict(CDS, {"via": "L2.11"})
    if info.rank == 0:
        return _classify_nilpotent(h, list(info.nil), m)
    flags: tuple = ()
    if not info.compatible:
        h = normalize_compatible(h)
        if h.params.get(UNRESOLVED):
            return TypeVerdict(UNRESOLVED, {}, (UNRESOLVED,))
        info = split_and_compatibility(h)
        flags = ("normalized",)
    if info.split:
        v = _classify_split(info.T0, list(info.nil), m)
    else:
        v = _classify_nonsplit(info, m)
    return TypeVerdict(v.label, v.params, v.flags + flags)


def is_cds(v: TypeVerdict) -> bool:
    return v.label in (CDS, P210)


# ---------------------------------------------------------------------------
# SU(1,m) conjugacy of deformation matrices


@dataclass(frozen=True)
class SUDecision:
    yes: bool
    a: float | None = None
    b: float | None = None
    S: np.ndarray | None = None
    reason: str = ""

    def to_json(self) -> dict:
        out = {"decision": "yes" if self.yes else "no", "reason": self.reason}
        if self.yes:
            out.update(a=self.a, b=self.b, S=np.asarray(self.S).tolist())
        return out


def _complex_basis(J: np.ndarray) -> np.ndarray:
    """Orthonormal e1, -J e1, e2, -J e2, ... for an orthogonal J with J^2 = -I."""
    k = J.shape[0]
    cols: list[np.ndarray] = []
    for i in range(k):
        if len(cols) == k:
            break
        v = np.eye(k)[i]
        for w in cols:
            v = v - (w @ v) * w
        if np.linalg.norm(v) < 1e-8:
            continue
        v = v / np.linalg.norm(v)
        w2 = -J @ v
        for w in cols:
            w2 = w2 - (w @ w2) * w
        w2 = w2 / np.linalg.norm(w2)
        cols += [v, w2]
    return np.column_stack(cols)


def _has_floats(B) -> bool:
    if isinstance(B, DeformationMatrix):
        return False
    if isinstance(B, np.ndarray):
        return B.dtype.kind == "f"
    if isinstance(B, sp.MatrixBase):
        return any(isinstance(e, sp.Float) for e in B)
    return any(isinstance(e, (float, np.floating, sp.Float)) for row in B for e in row)


def su_conjugacy(B, tol: float = 1e-9) -> SUDecision:
    """Is B orthogonally conjugate to a block sum of copies of [[a, b], [-b, a]]?

    That happens iff sym(B) = a I and the skew part K satisfies
    K^T K = b^2 I with b != 0.  Exact when B is given exactly (integers,
    fractions, sympy rationals); float input is judged with tolerance ``tol``.
    """
    floats = _has_floats(B)
    D = B if isinstance(B, DeformationMatrix) else DeformationMatrix(B, validate=False)
    M = D.B
    k = M.rows
    if M.rows != M.cols or k % 2:
        raise InvalidParams("B must be square of even size")
    exact = not floats and all(ex.is_rational(e) for e in M)
    if exact:
        S = (M + M.T) / 2
        K = (M - M.T) / 2
        a = S[0, 0]
        if S != a * sp.eye(k):
            return SUDecision(False, reason="symmetric part is not scalar")
        KK = (K.T * K).applyfunc(sp.expand)
        b2 = KK[0, 0]
        if KK != b2 * sp.eye(k) or b2 == 0:
            return SUDecision(False, reason="skew part is not a multiple of an orthogonal matrix")
        a_f = float(a)
        b_f = float(sp.sqrt(b2))
        K_num = np.array(K.evalf(17).tolist(), dtype=float)
    else:
        Mn = D.numeric
        S = (Mn + Mn.T) / 2
        K_num = (Mn - Mn.T) / 2
        a_f = float(np.trace(S) / k)
        scale = max(1.0, np.abs(Mn).max())
        if np.abs(S - a_f * np.eye(k)).max() > tol * scale:
            return SUDecision(False, reason="symmetric part is not scalar")
        KK = K_num.T @ K_num
        b2 = float(np.trace(KK) / k)
        if b2 <= tol * scale or np.abs(KK - b2 * np.eye(k)).max() > tol * scale ** 2:
            return SUDecision(False, reason="skew part is not a multiple of an orthogonal matrix")
        b_f = float(np.sqrt(b2))
    # K = b J0 with J0 orthogonal and skew; in the basis e, -J0 e, ... K becomes
    # a block sum of [[0, b], [-b, 0]].
    O = _complex_basis(K_num / b_f)
    return SUDecision(True, a_f, b_f, O, "symmetric part scalar, skew part conformal")


def block_form(a: float, b: float, k: int) -> np.ndarray:
    out = np.zeros((k, k))
    for i in range(0, k, 2):
        out[i:i + 2, i:i + 2] = [[a, b], [-b, a]]
    return out


def su_conjugacy_search(B, starts: int = 40, seed: int = 0, tol: float = 1e-7) -> tuple[bool, float]:
    """Independent numerical oracle for :func:`su_conjugacy`.

    Minimizes ||O^T B O - (a I + b J)||^2 over O = R0 expm(S), S skew, from
    random starts; a and b are eliminated in closed form.  Returns
    (found, best residual).
    """
    Bn = np.asarray(DeformationMatrix(B, validate=False).numeric if not isinstance(B, np.ndarray)
                    else B, dtype=float)
    k = Bn.shape[0]
    J = block_form(0.0, 1.0, k)
    iu = np.triu_indices(k, 1)
    rng = np.random.default_rng(seed)
    refl = np.eye(k)
    refl[0, 0] = -1.0
    scale = max(1.0, float(np.abs(Bn).max()))

    def resid(theta, R0):
        S = np.zeros((k, k))
        S[iu] = theta
        S = S - S.T
        O = R0 @ expm(S)
        C = O.T @ Bn @ O
        a = np.trace(C) / k
        b = np.sum(C * J) / k
        return float(np.sum((C - a * np.eye(k) - b * J) ** 2)) / scale ** 2

    best = np.inf
    for i in range(starts):
        R0 = np.eye(k) if i % 2 == 0 else refl
        x0 = rng.normal(scale=np.pi, size=len(iu[0]))
        res = minimize(resid, x0, args=(R0,), method="L-BFGS-B",
                       options={"maxiter": 2000, "gtol": 1e-12, "ftol": 1e-16})
        best = min(best, res.fun)
        if best < tol:
            break
    return best < tol, best


# ---------------------------------------------------------------------------
# Invariants of h_B


def center_dim(h: Subalgebra) -> int:
    """Dimension of the center of h, by an exact linear system."""
    if h.dim == 0:
        return 0
    rows = []
    for bj in h.basis:
        cols = [bracket(bi, bj).flat() if h.in_an else tuple(bracket(bi, bj).M) for bi in h.basis]
        rows += [[c[r] for c in cols] for r in range(len(cols[0]))]
    return len(ex.nullspace(rows, h.dim))


def hb_iso_invariants(B) -> tuple[int, bool, bool]:
    """(center dim of the nilradical, Heisenberg x abelian, isomorphic to h_SU)."""
    D = B if isinstance(B, DeformationMatrix) else DeformationMatrix(B)
    M = D.B
    A = (M.T - M).applyfunc(sp.expand)
    k = M.rows
    kernel = len(ex.nullspace([list(A.row(i)) for i in range(k)], k))
    # [(x, Bx), (x', Bx')] = x^T (B^T - B) x' on the eta axis: the derived
    # algebra is at most the eta line, so the nilradical is Heisenberg x abelian.
    heis = True
    return 1 + kernel, heis, A.det() != 0


# ---------------------------------------------------------------------------
# d(H) and the compact-form verdict


def d_of(label: str, n: int | None = None, m: int | None = None, dim: int | None = None) -> int:
    """dim H - dim K_H for the named groups."""
    key = label.replace(" ", "").upper()
    if key in ("SO(2,N)", "SO2N"):
        return 2 * _need(n, "n")
    if key in ("SO(1,N)", "SO1N"):
        return _need(n, "n")
    if key in ("SU(1,M)", "SU1M"):
        return 2 * _need(m, "m")
    if key in ("AN", "SUBALGEBRA-OF-AN", "AN-SUBGROUP"):
        return _need(dim, "dim")
    if key == "L5":
        return 2
    if key in ("SL(3,R)", "SL3"):
        return 5
    if key in ("SL(2,R)", "SL2"):
        return 2
    raise UnknownLabel(f"no d() for {label!r}")


def _need(v, name):
    if v is None:
        raise InvalidParams(f"{name} is required")
    return int(v)


HAS = "HasCompactForm"
NO = "NoCompactForm"
CONJ = "ConjecturalNo-SU1m"
HCOMPACT = "HCompact"
GHCOMPACT = "GmodHCompact"
INCONCLUSIVE = "Inconclusive"

LINEAR_TYPES = {"T2.6-3", "T2.6-4", "T2.6-5", "T2.6-7", "T2.9-1", "T2.9-4", "T2.9-5", "T2.9-6"}
QUADRATIC_TYPES = {"T2.6-2", "T2.9-2", "T2.9-3", "T2.9-7", "T2.9-8"}


def _window_kind(v: TypeVerdict) -> str | None:
    if v.label == "T2.6-8":
        return "quadratic" if v.params["omega"] in (ALPHA, ALPHA_2BETA) else "linear"
    if v.label in LINEAR_TYPES:
        return "linear"
    if v.label in QUADRATIC_TYPES:
        return "quadratic"
    return None


def _odd_conjectural(verdict: str, tags: list, assume: bool) -> CKVerdict:
    if assume:
        return CKVerdict(NO, tuple(tags + ["Thm 1.8", "Conj 1.7 assumed"]))
    return CKVerdict(CONJ, tuple(tags + ["Conj 1.7"]), "depends on the SU(1,m) conjecture")


def ck_verdict(h: Subalgebra, assume_su_conjecture: bool = False) -> CKVerdict:
    """Does G/H admit a compact Clifford-Klein form?"""
    if h.ambient == SL3:
        return _ck_sl3(h)
    if h.label == "SO(1,n)":
        return _ck_named("SO(1,n)", h.n)
    if h.label == "L5":
        return CKVerdict(NO, ("Cor SO/L5",))
    if h.ambient != SO2N or not h.in_an:
        raise UnsupportedInput("verdicts need a subalgebra of a+n or a named catalog group")
    n = h.n
    if h.dim == 0:
        return CKVerdict(HCOMPACT, ("Lemma 3.1",), "H is trivial, G/H is G")
    v = classify_type(h)
    if v.label == UNRESOLVED:
        return CKVerdict(INCONCLUSIVE, (), "could not normalize to a compatible position")
    if is_cds(v):
        if h.dim == 2 * n:
            return CKVerdict(GHCOMPACT, ("Lemma 3.1", "L2.11"), "H is co-compact (contains AN)")
        return CKVerdict(NO, ("Lemma CDS->notess", v.label if v.label != CDS else "CDS"))
    if split_and_compatibility(h).rank == 0:
        return CKVerdict(NO, (v.label, "Prop unip->notess"))
    if h.dim == 1:
        return CKVerdict(NO, (v.label, "Prop 3.7"))
    if v.label == "T2.6-5" and h.dim == n:
        if n % 2 == 0:
            return CKVerdict(HAS, ("T2.6-5", "Prop 2.13", "Thm 1.6(1)"))
        return CKVerdict(NO, ("T2.6-5", "Prop 2.13", "Prop Kulkarni"))
    if v.label == "T2.6-6":
        return CKVerdict(NO, ("T2.6-6", "Cor SO/L5"))
    kind = _window_kind(v)
    if kind == "linear" and h.dim < n:
        return CKVerdict(NO, (v.label, "Lemma 4.x(1)"))
    if v.label == "T2.6-2" and h.dim == n and n % 2 == 0:
        return CKVerdict(HAS, ("T2.6-2", "Cor 5.5", "Thm 1.5"))
    if n % 2 == 1:
        if v.label == "T2.6-2" and h.dim == n - 1:
            return _odd_conjectural(NO, ["T2.6-2", "Thm 5.2(1)"], assume_su_conjecture)
        if n == 3 and h.dim == 2:
            if v.label == "T2.9-2":
                return _odd_conjectural(NO, ["T2.9-2", "Thm 5.2(2a)"], assume_su_conjecture)
            if v.label == "T2.9-3":
                return _odd_conjectural(NO, ["T2.9-3", "Thm 5.2(2b)"], assume_su_conjecture)
            if v.label == "T2.6-8" and v.params["omega"] in (ALPHA, ALPHA_2BETA):
                if abs(v.params["p"]) < sp.Rational(1, 3):
                    return _odd_conjectural(NO, ["T2.6-8", "Thm 5.2(2c)"], assume_su_conjecture)
                return CKVerdict(NO, ("T2.6-8", "Prop 2.10", "Thm 3.4(2)"))
            if v.label in ("T2.9-7", "T2.9-8"):
                return CKVerdict(NO, (v.label, "Thm 3.4(2)", "T2.6-6", "Cor SO/L5"))
    if kind == "quadratic" and h.dim < 2 * (n // 2):
        return CKVerdict(NO, (v.label, "Lemma 4.x(2)"))
    if kind is not None:
        return CKVerdict(NO, (v.label, "Thm 5.2"))
    return CKVerdict(INCONCLUSIVE, (), f"no rule for {v.label} at dim {h.dim}")


def _ck_named(name: str, n: int) -> CKVerdict:
    if name == "SO(1,n)":
        if n % 2 == 0:
            return CKVerdict(HAS, ("Thm 1.6(1)", "Prop 2.13"))
        return CKVerdict(NO, ("Prop Kulkarni",))
    if name == "SU(1,m)":
        if n % 2 == 0:
            return CKVerdict(HAS, ("Thm 1.5",))
        return CKVerdict(CONJ, ("Conj 1.7",))
    if name == "L5":
        return CKVerdict(NO, ("Cor SO/L5",))
    raise UnknownLabel(name)


def ck_verdict_named(name: str, n: int, assume_su_conjecture: bool = False) -> CKVerdict:
    """Verdict for the reductive catalog groups SO(1,n), SU(1,m) (n = 2m or 2m+1), L5."""
    v = _ck_named(name, n)
    if v.verdict == CONJ and assume_su_conjecture:
        return CKVerdict(NO, ("Thm 1.8", "Conj 1.7 assumed"))
    return v


def sl3_d(h: Subalgebra) -> int:
    """dim h - dim(h cap so(3)); equals d(H) for subgroups in standard position."""
    so3 = [tuple(b.M) for b in sl3_subgroups("so3").basis]
    hv = [tuple(b.M) for b in h.basis]
    return h.dim - len(ex.intersect_spans(hv, so3))


def _ck_sl3(h: Subalgebra) -> CKVerdict:
    d = sl3_d(h)
    if d == 0:
        return CKVerdict(HCOMPACT, ("Lemma 3.1",), "H is compact")
    borel = [tuple(b.M) for b in sl3_subgroups("borel").basis]
    hv = [tuple(b.M) for b in h.basis]
    if h.dim == 8 or len(ex.intersect_spans(hv, borel)) == 5:
        return CKVerdict(GHCOMPACT, ("Lemma 3.1",), "H contains a Borel subgroup")
    if d == 1:
        return CKVerdict(NO, ("Prop 3.7",))
    return CKVerdict(NO, ("Prop SL3-B+", "Thm 7.1"))


__all__ = [
    "CDS", "P210", "UNRESOLVED", "root_space", "SplitInfo", "split_and_compatibility",
    "normalize_compatible", "TypeVerdict", "CKVerdict", "nilpotent_exponent", "never_rank_one",
    "always_rank_one", "recognize_so1n", "classify_type", "is_cds", "SUDecision",
    "su_conjugacy", "block_form", "su_conjugacy_search", "center_dim", "hb_iso_invariants",
    "d_of", "ck_verdict", "ck_verdict_named", "sl3_d",
]
