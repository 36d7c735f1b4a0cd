"""Named subalgebras and one exemplar per classification item.

Every constructor returns a :class:`Subalgebra` whose basis is exact,
linearly independent and closed under the bracket; closure is verified
on construction.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np
import sympy as sp

from . import _exact as ex
from .errors import (AmbientMismatch, DimensionMismatch, InvalidDimension,
                     InvalidParams, NotClosed, RealEigenvalue, UnknownLabel,
                     Unrealizable)
from .lie_core import (ALPHA, ALPHA_2BETA, ALPHA_BETA, BETA, PERPENDICULAR,
                       ROOT_FIELD, ROOT_FUNCTIONALS, SL3, SO2N, AlgElement,
                       ANCoords, an_bracket, an_element, bracket, form_matrix,
                       from_matrix)

# ---------------------------------------------------------------------------
# Subalgebra


@dataclass(frozen=True, eq=False)
class Subalgebra:
    """Span of an exact basis inside so(2,n) or sl(3,R)."""

    ambient: str
    n: int
    basis: tuple
    label: str | None = None
    params: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(self.basis))
        for b in self.basis:
            if b.ambient != self.ambient or b.n != self.n:
                raise AmbientMismatch("basis element from a different algebra")

    @classmethod
    def span(cls, ambient: str, n: int, elements: Iterable[AlgElement], label: str | None = None,
             params: Mapping | None = None, check: bool = True) -> "Subalgebra":
        """Subalgebra spanned by ``elements`` (dependent ones are dropped)."""
        elements = list(elements)
        coords = _uses_coords(ambient, elements)
        kept: list[AlgElement] = []
        vecs: list[tuple] = []
        for e in elements:
            v = e.flat() if coords else tuple(e.M)
            if all(c == 0 for c in v):
                continue
            if ex.rank(vecs + [v]) == len(vecs) + 1:
                kept.append(e)
                vecs.append(v)
        h = cls(ambient, n, tuple(kept), label, dict(params or {}))
        if check:
            h.check_closed()
        return h

    @cached_property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def in_an(self) -> bool:
        """True if every basis element lies in a+n of so(2,n)."""
        return self.ambient == SO2N and all(b.coords is not None for b in self.basis)

    @cached_property
    def vectors(self) -> list[tuple]:
        """Exact coordinate vectors of the basis (ANCoords when in a+n)."""
        if self.in_an:
            return [b.coords.vector() for b in self.basis]
        return [tuple(b.M) for b in self.basis]

    def element(self, coeffs: Sequence) -> AlgElement:
        out = None
        for c, b in zip(coeffs, self.basis):
            term = b * c
            out = term if out is None else out + term
        return out

    def contains(self, X: AlgElement) -> bool:
        v = X.flat() if (self.in_an and X.coords is not None) else tuple(X.M)
        vecs = self.vectors if (self.in_an and X.coords is not None) else [tuple(b.M) for b in self.basis]
        return ex.in_span(vecs, v)

    def brackets(self) -> list[AlgElement]:
        out = []
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                out.append(bracket(self.basis[i], self.basis[j]))
        return out

    def is_closed(self) -> bool:
        if self.dim <= 1:
            return True
        br = self.brackets()
        if self.in_an:
            rows = self.vectors + [b.coords.vector() for b in br]
        else:
            rows = [tuple(b.M) for b in self.basis] + [tuple(b.M) for b in br]
        return ex.rank(rows) == self.dim

    def check_closed(self) -> None:
        if not self.is_closed():
            raise NotClosed(f"span of {self.label or 'basis'} is not closed under the bracket")

    @cached_property
    def nil_vectors(self) -> list[tuple]:
        """Basis of h cap n as n-coordinate vectors (phi, x, y, eta)."""
        if not self.in_an:
            raise AmbientMismatch("h cap n is only defined for subalgebras of a+n")
        if not self.vectors:
            return []
        cols = [[v[0] for v in self.vectors], [v[1] for v in self.vectors]]
        out = []
        for w in ex.nullspace(cols, self.dim):
            vec = tuple(sp.expand(sum((w[j] * self.vectors[j][i] for j in range(self.dim)),
                                      sp.Integer(0))) for i in range(2 * self.n))
            out.append(vec[2:])
        return ex.row_basis(out)

    @cached_property
    def torus_projection(self) -> list[tuple]:
        """Basis of the image of h under the projection to a."""
        if not self.in_an:
            raise AmbientMismatch("projection to a is only defined for subalgebras of a+n")
        return ex.row_basis([v[:2] for v in self.vectors])

    @property
    def compatible(self) -> bool:
        from .classify import split_and_compatibility
        return split_and_compatibility(self).compatible

    def same_span(self, other: "Subalgebra") -> bool:
        if (self.ambient, self.n, self.dim) != (other.ambient, other.n, other.dim):
            return False
        a = [tuple(b.M) for b in self.basis]
        b = [tuple(c.M) for c in other.basis]
        return ex.rank(a + b) == self.dim

    def relabel(self, label: str | None, params: Mapping | None = None) -> "Subalgebra":
        return Subalgebra(self.ambient, self.n, self.basis, label,
                          dict(self.params if params is None else params))

    def __repr__(self) -> str:
        return f"Subalgebra({self.ambient}, n={self.n}, dim={self.dim}, label={self.label!r})"


def _uses_coords(ambient: str, elements: Sequence[AlgElement]) -> bool:
    return ambient == SO2N and all(e.coords is not None for e in elements)


def zero_subalgebra(n: int, ambient: str = SO2N) -> Subalgebra:
    return Subalgebra(ambient, n if ambient == SO2N else 3, (), "zero")


# ---------------------------------------------------------------------------
# Adjoint action of exp(Z), Z nilpotent


def ad_exp(Z: AlgElement, X: AlgElement) -> AlgElement:
    """Ad(exp Z) X = sum ad_Z^k X / k! for nilpotent Z in n."""
    if Z.coords is None or not Z.coords.is_nilpotent():
        raise InvalidParams("conjugating element must lie in n")
    if X.coords is not None:
        out = list(X.coords.vector())
        term = X.coords
        k = 1
        while True:
            term = an_bracket(Z.coords, term)
            tv = term.vector()
            if all(e == 0 for e in tv):
                break
            out = [o + t / sp.factorial(k) for o, t in zip(out, tv)]
            k += 1
        return an_element(X.n, ANCoords.from_vector(X.n, [sp.expand(o) for o in out]))
    out = X.M
    term = X
    k = 1
    while True:
        term = bracket(Z, term)
        if term.is_zero():
            break
        out = out + term.M / sp.factorial(k)
        k += 1
    return from_matrix(out.applyfunc(sp.expand), X.ambient, X.n, check=False)


def conjugate(h: Subalgebra, Z: AlgElement, label: str | None = None) -> Subalgebra:
    """Ad(exp Z) h for Z in n."""
    return Subalgebra.span(h.ambient, h.n, [ad_exp(Z, b) for b in h.basis],
                           label if label is not None else h.label, h.params, check=False)


# ---------------------------------------------------------------------------
# Small builders


def an(n: int, **kw) -> AlgElement:
    return an_element(n, ANCoords.make(n, **kw))


def torus(n: int, t1, t2) -> AlgElement:
    return an(n, t1=t1, t2=t2)


def root_element(n: int, root: str, value) -> AlgElement:
    """Element of the root space u_root; vector roots take a length n-2 vector."""
    fld = ROOT_FIELD[root]
    return an(n, **{fld: value})


def unit(n: int, i: int) -> list:
    v = [0] * (n - 2)
    v[i] = 1
    return v


def torus_in_kernel(functional: Sequence) -> tuple:
    """Generator (t1, t2) of the kernel of a functional a*t1 + b*t2."""
    a, b = (ex.to_exact(f) for f in functional)
    if a == 0 and b == 0:
        raise InvalidParams("zero functional has no one-dimensional kernel")
    return (b, -a)


def _vec_param(v, n: int, name: str) -> tuple:
    v = tuple(ex.to_exact(e) for e in v)
    if len(v) != n - 2:
        raise InvalidParams(f"{name} must have length {n - 2}")
    return v


def _matrix_param(B) -> sp.ImmutableMatrix:
    return sp.ImmutableMatrix([[ex.to_exact(e) for e in row] for row in B])


# ---------------------------------------------------------------------------
# Deformation matrices and h_B


@dataclass(frozen=True, eq=False)
class DeformationMatrix:
    """Square matrix B with no real eigenvalue."""

    B: sp.ImmutableMatrix

    def __init__(self, B, validate: bool = True):
        M = B if isinstance(B, sp.MatrixBase) else _matrix_param(B)
        M = sp.ImmutableMatrix(M).applyfunc(ex.to_exact)
        if M.rows != M.cols:
            raise DimensionMismatch("deformation matrix must be square")
        object.__setattr__(self, "B", M)
        if validate and self.has_real_eigenvalue():
            raise RealEigenvalue("B has a real eigenvalue")

    @property
    def size(self) -> int:
        return self.B.rows

    @property
    def is_rational(self) -> bool:
        return all(ex.is_rational(e) for e in self.B)

    def has_real_eigenvalue(self) -> bool:
        """Exact Sturm count for rational B, else eigenvalues with 1e-9 threshold."""
        if self.size == 0:
            return False
        if self.is_rational:
            dM = ex.dm(self.B.tolist())
            coeffs = [dM.domain.to_sympy(c) for c in dM.charpoly()]
            return ex.real_root_count(sp.Poly(coeffs, sp.Symbol("lam"))) > 0
        ev = np.linalg.eigvals(np.array(self.B.evalf().tolist(), dtype=float))
        return bool(np.any(np.abs(ev.imag) <= 1e-9))

    def charpoly(self) -> sp.Poly:
        lam = sp.Symbol("lam")
        return (lam * sp.eye(self.size) - sp.Matrix(self.B)).det().as_poly(lam) \
            if self.size else sp.Poly(1, lam)

    @property
    def numeric(self) -> np.ndarray:
        return np.array(self.B.evalf().tolist(), dtype=float)


def standard_complex_structure(k: int) -> sp.ImmutableMatrix:
    """Block diagonal [[0, 1], [-1, 0]] of size k (k even)."""
    if k % 2:
        raise DimensionMismatch("complex structure needs even size")
    J = sp.zeros(k, k)
    for i in range(0, k, 2):
        J[i, i + 1] = 1
        J[i + 1, i] = -1
    return sp.ImmutableMatrix(J)


def h_B(m: int, B) -> Subalgebra:
    """2m-dimensional subalgebra of so(2, 2m) deforming SU(1,m) cap AN."""
    if m < 2:
        raise InvalidDimension("m must be at least 2")
    D = B if isinstance(B, DeformationMatrix) else DeformationMatrix(B)
    k = 2 * m - 2
    if D.size != k:
        raise DimensionMismatch(f"B must be {k}x{k} for m={m}")
    n = 2 * m
    basis = [torus(n, 1, 1), an(n, eta=1)]
    for i in range(k):
        col = [D.B[r, i] for r in range(k)]
        basis.append(an(n, x=unit(n, i), y=col))
    return Subalgebra.span(SO2N, n, basis, "h_B", {"B": D.B})


def h_SU(m: int) -> Subalgebra:
    """SU(1,m) cap AN, i.e. h_B with B the standard complex structure."""
    return h_B(m, standard_complex_structure(2 * m - 2)).relabel("h_SU")


def random_deformation(k: int, rng: np.random.Generator, den: int = 4,
                       max_tries: int = 200) -> DeformationMatrix:
    """Random rational k x k matrix without real eigenvalues (k even)."""
    if k % 2:
        raise DimensionMismatch("no real-eigenvalue-free matrices of odd size")
    for _ in range(max_tries):
        M = [[sp.Rational(int(rng.integers(-3 * den, 3 * den + 1)), den) for _ in range(k)]
             for _ in range(k)]
        # Cheap float screen; acceptance still goes through the exact test.
        ev = np.linalg.eigvals(np.array(M, dtype=float))
        if np.any(np.abs(ev.imag) < 1e-6 * max(1.0, np.abs(ev).max())):
            continue
        try:
            return DeformationMatrix(M)
        except RealEigenvalue:
            continue
    # Fall back to a perturbed complex structure, which always works.
    J = standard_complex_structure(k)
    S = sp.Matrix(k, k, lambda i, j: sp.Rational(int(rng.integers(-1, 2)), 8 * k))
    return DeformationMatrix(J + (S + S.T) / 2)


# ---------------------------------------------------------------------------
# Reductive and semisimple pieces


def so1n_an(n: int) -> Subalgebra:
    """Lie algebra of SO(1,n) cap AN: y = 0, eta = phi, t2 = 0, x free."""
    form_matrix(n)
    basis = [torus(n, 1, 0), an(n, phi=1, eta=1)]
    basis += [an(n, x=unit(n, i)) for i in range(n - 2)]
    return Subalgebra.span(SO2N, n, basis, "so1n_an")


def so1n_vector(n: int) -> tuple:
    """The vector (0, 1, 0, ..., 0, -1, 0) whose stabilizer is SO(1,n)."""
    v = [0] * (n + 2)
    v[1], v[n] = 1, -1
    return tuple(v)


def so_basis(n: int) -> list[sp.ImmutableMatrix]:
    """Basis {Q (E_ij - E_ji)} of so(2,n)."""
    Q = form_matrix(n).Q
    N = n + 2
    out = []
    for i in range(N):
        for j in range(i + 1, N):
            S = sp.zeros(N, N)
            S[i, j], S[j, i] = 1, -1
            out.append(sp.ImmutableMatrix(Q * S))
    return out


def so1n(n: int) -> Subalgebra:
    """Full so(1,n): stabilizer of the negative vector (0,1,0,...,0,-1,0)."""
    v = sp.Matrix(so1n_vector(n))
    basis = so_basis(n)
    N = n + 2
    rows = [[(B * v)[r] for B in basis] for r in range(N)]
    elems = []
    for w in ex.nullspace(rows, len(basis)):
        M = sp.zeros(N, N)
        for c, B in zip(w, basis):
            M += c * B
        elems.append(from_matrix(M, SO2N, n))
    return Subalgebra.span(SO2N, n, elems, "SO(1,n)")


def l5_pi(n: int, t=0, u=0, v=0) -> AlgElement:
    """Image of [[t, u], [v, -t]] under the irreducible 5-dim representation."""
    form_matrix(n)
    t, u, v = (ex.to_exact(e) for e in (t, u, v))
    r6 = sp.sqrt(6)
    P = sp.Matrix([
        [4 * t, 2 * u, 0, 0, 0],
        [2 * v, 2 * t, r6 * u, 0, 0],
        [0, r6 * v, 0, -r6 * u, 0],
        [0, 0, -r6 * v, -2 * t, -2 * u],
        [0, 0, 0, -2 * v, -4 * t],
    ])
    N = n + 2
    idx = [0, 1, 2, N - 2, N - 1]
    M = sp.zeros(N, N)
    for a in range(5):
        for b in range(5):
            M[idx[a], idx[b]] = P[a, b]
    return from_matrix(M, SO2N, n)


def l5(n: int) -> Subalgebra:
    basis = [l5_pi(n, t=1), l5_pi(n, u=1), l5_pi(n, v=1)]
    return Subalgebra.span(SO2N, n, basis, "L5")


def l5_an(n: int) -> Subalgebra:
    """l5 cap (a+n): the (4,2) torus direction and phi=2, y=sqrt6 e1."""
    return Subalgebra.span(SO2N, n, [l5_pi(n, t=1), l5_pi(n, u=1)], "l5_an")


def full_an(n: int) -> Subalgebra:
    basis = [torus(n, 1, 0), torus(n, 0, 1), an(n, phi=1), an(n, eta=1)]
    basis += [an(n, x=unit(n, i)) for i in range(n - 2)]
    basis += [an(n, y=unit(n, i)) for i in range(n - 2)]
    return Subalgebra.span(SO2N, n, basis, "an")


def full_a(n: int) -> Subalgebra:
    return Subalgebra.span(SO2N, n, [torus(n, 1, 0), torus(n, 0, 1)], "a")


def full_n(n: int) -> Subalgebra:
    h = full_an(n)
    return Subalgebra.span(SO2N, n, h.basis[2:], "n")


def _sl3(M) -> AlgElement:
    return from_matrix(sp.Matrix(M), SL3, 3)


SL3_WHICH = ("sl2-top-left", "full-diagonal-torus", "upper-triangular-2d")


def sl3_subgroups(which: str) -> Subalgebra:
    if which == "sl2-top-left":
        basis = [_sl3([[1, 0, 0], [0, -1, 0], [0, 0, 0]]),
                 _sl3([[0, 1, 0], [0, 0, 0], [0, 0, 0]]),
                 _sl3([[0, 0, 0], [1, 0, 0], [0, 0, 0]])]
    elif which == "full-diagonal-torus":
        basis = [_sl3([[1, 0, 0], [0, -1, 0], [0, 0, 0]]),
                 _sl3([[0, 0, 0], [0, 1, 0], [0, 0, -1]])]
    elif which == "upper-triangular-2d":
        basis = [_sl3([[2, 0, 0], [0, -1, 0], [0, 0, -1]]),
                 _sl3([[0, 1, 0], [0, 0, 0], [0, 0, 0]])]
    elif which == "so3":
        basis = [_sl3([[0, 1, 0], [-1, 0, 0], [0, 0, 0]]),
                 _sl3([[0, 0, 1], [0, 0, 0], [-1, 0, 0]]),
                 _sl3([[0, 0, 0], [0, 0, 1], [0, -1, 0]])]
    elif which == "borel":
        basis = [_sl3([[1, 0, 0], [0, -1, 0], [0, 0, 0]]),
                 _sl3([[0, 0, 0], [0, 1, 0], [0, 0, -1]]),
                 _sl3([[0, 1, 0], [0, 0, 0], [0, 0, 0]]),
                 _sl3([[0, 0, 1], [0, 0, 0], [0, 0, 0]]),
                 _sl3([[0, 0, 0], [0, 0, 1], [0, 0, 0]])]
    else:
        raise UnknownLabel(f"unknown sl3 subgroup {which!r}")
    return Subalgebra.span(SL3, 3, basis, which)


# ---------------------------------------------------------------------------
# Exemplars


T25 = tuple(f"T2.5-{i}" for i in range(1, 5))
T26 = tuple(f"T2.6-{i}" for i in range(1, 9))
T29 = tuple(f"T2.9-{i}" for i in range(1, 9))
EXEMPLAR_LABELS = T25 + T26 + T29 + ("P2.10",)

# Smallest n for which each item is nonvacuous.
DEFAULT_N = {label: 3 for label in EXEMPLAR_LABELS}
DEFAULT_N.update({"T2.5-2": 4, "T2.5-3": 4, "T2.9-6": 4})

UNREALIZABLE = {
    "T2.9-5": "x = T0 + c acts on u_omega + u_(alpha+2beta) diagonally with eigenvalues "
              "0 and (alpha+2beta)(T0) != 0, so an invariant nonzero subspace meeting "
              "both summands trivially does not exist",
}


def _omega(params: Mapping, default: str) -> str:
    w = params.get("omega", default)
    if w not in ROOT_FUNCTIONALS:
        raise InvalidParams(f"unknown root {w!r}")
    return w


def _subspace(params: Mapping, key: str, n: int, default: list) -> list[tuple]:
    vecs = [_vec_param(v, n, key) for v in params.get(key, default)]
    if vecs and ex.rank(vecs) != len(vecs):
        raise InvalidParams(f"{key} vectors are dependent")
    return vecs


def _nonzero(params: Mapping, key: str, default) -> sp.Expr:
    v = ex.to_exact(params.get(key, default))
    if v == 0:
        raise InvalidParams(f"{key} must be nonzero")
    return v


def _torus_param(params: Mapping, default: tuple) -> tuple:
    T = tuple(ex.to_exact(e) for e in params.get("T", default))
    if len(T) != 2 or all(e == 0 for e in T):
        raise InvalidParams("torus generator must be a nonzero pair")
    return T


def _check_parallel(T: tuple, ref: tuple) -> None:
    if T[0] * ref[1] - T[1] * ref[0] != 0:
        raise InvalidParams(f"torus generator {T} must be proportional to {ref}")


def _so1n_nil(n: int, params: Mapping, need_phi: bool) -> list[AlgElement]:
    """Elements realizing y = 0, x in phi c + X0, eta = p phi + b.x."""
    X0 = _subspace(params, "X0", n, [unit(n, i) for i in range(n - 2)])
    b = _vec_param(params.get("b", [0] * (n - 2)), n, "b")
    c = _vec_param(params.get("c", [0] * (n - 2)), n, "c")
    p = ex.to_exact(params.get("p", 1))
    if any(e != 0 for e in b) and not ex.in_span(X0, b):
        raise InvalidParams("b must lie in X0")
    if any(ex.dot(c, v) != 0 for v in X0):
        raise InvalidParams("c must be orthogonal to X0")
    if not ex.dot(b, b) - ex.dot(c, c) - 2 * p < 0:
        raise InvalidParams("sign condition |b|^2 - |c|^2 - 2p < 0 fails")
    out = [an(n, x=v, eta=ex.dot(b, v)) for v in X0]
    if need_phi or params.get("with_phi", True):
        out.append(an(n, phi=1, x=c, eta=p + ex.dot(b, c)))
    return out


def _graph_over(n: int, params: Mapping, key: str, fld: str, default_dim: int = 1) -> list[AlgElement]:
    V = _subspace(params, key, n, [unit(n, i) for i in range(default_dim)])
    if not V:
        raise InvalidParams(f"{key} must be nonempty")
    f = [ex.to_exact(e) for e in params.get("f", [0] * len(V))]
    if len(f) != len(V):
        raise InvalidParams("f needs one value per basis vector")
    return [an(n, **{fld: v, "eta": fv}) for v, fv in zip(V, f)]


def p210_torus(omega: str, p) -> tuple:
    """Generator of ker(p omega + gamma), gamma perpendicular to omega."""
    p = ex.to_exact(p)
    gamma = PERPENDICULAR[omega]
    L = [p * a + b for a, b in zip(ROOT_FUNCTIONALS[omega], ROOT_FUNCTIONALS[gamma])]
    return torus_in_kernel(L)


def _ex_T25_1(n, P):
    el = dict(P.get("element", {"y": unit(n, 0)}))
    if el.get("t1", 0) or el.get("t2", 0):
        raise InvalidParams("element must be nilpotent")
    X = an(n, **el)
    if X.is_zero():
        raise InvalidParams("element must be nonzero")
    return [X]


def _ex_T25_2(n, P):
    if n < 4:
        raise Unrealizable("needs x and y to be independent, so n >= 4")
    A = _matrix_param(P.get("A", [[0, -1], [1, 0]]))
    k = A.rows
    if k > n - 2:
        raise InvalidParams("block too large for n")
    DeformationMatrix(A)
    tail = P.get("tail", [[0] * k for _ in range(n - 2 - k)])
    tail = _matrix_param(tail) if n - 2 - k else sp.zeros(0, k)
    out = [an(n, eta=1)]
    for i in range(k):
        y = [A[r, i] for r in range(k)] + [tail[r, i] for r in range(n - 2 - k)]
        out.append(an(n, x=unit(n, i), y=y))
    return out


def _ex_T25_3(n, P):
    if n < 4:
        raise Unrealizable("needs a two-dimensional W, so n >= 4")
    W = _subspace(P, "W", n, [unit(n, 0), unit(n, 1)])
    c, d = (ex.to_exact(e) for e in P.get("cd", (1, 2)))
    if len(W) < 2:
        raise InvalidParams("W must have dimension >= 2")
    if c == 0 and d == 0:
        raise InvalidParams("(c, d) must be nonzero")
    return [an(n, x=[c * e for e in w], y=[d * e for e in w]) for w in W]


def _ex_T25_4(n, P):
    P = dict(P)
    P.setdefault("X0", [unit(n, i) for i in range(n - 2)])
    if not P["X0"]:
        raise InvalidParams("X0 must be nonzero (else the item degenerates to dim 1)")
    return _so1n_nil(n, P, need_phi=True)


def _ex_T26_1(n, P):
    return [torus(n, *_torus_param(P, (1, 2)))]


def _ex_T26_2(n, P):
    T = _torus_param(P, (1, 1))
    _check_parallel(T, (1, 1))
    out = [torus(n, *T), an(n, eta=1)]
    if "B" in P:
        D = DeformationMatrix(P["B"])
        k = D.size
        if k > n - 2:
            raise InvalidParams("B too large for n")
        for i in range(k):
            y = [D.B[r, i] for r in range(k)] + [0] * (n - 2 - k)
            out.append(an(n, x=unit(n, i), y=y))
    return out


def _ex_T26_3(n, P):
    T = _torus_param(P, (1, 0))
    _check_parallel(T, (1, 0))
    return [torus(n, *T)] + _graph_over(n, P, "X", "x")


def _ex_T26_4(n, P):
    T = _torus_param(P, (0, 1))
    _check_parallel(T, (0, 1))
    return [torus(n, *T)] + _graph_over(n, P, "Y", "y")


def _ex_T26_5(n, P):
    T = _torus_param(P, (1, 0))
    _check_parallel(T, (1, 0))
    P = dict(P)
    P.setdefault("X0", [unit(n, i) for i in range(n - 2)])
    return [torus(n, *T)] + _so1n_nil(n, P, need_phi=True)


def _ex_T26_6(n, P):
    T = _torus_param(P, (2, 1))
    _check_parallel(T, (2, 1))
    phi = _nonzero(P, "phi", 1)
    y = _vec_param(P.get("y", unit(n, 0)), n, "y")
    if all(e == 0 for e in y):
        raise InvalidParams("y must be nonzero")
    return [torus(n, *T), an(n, phi=phi, y=y)]


def _ex_T26_7(n, P):
    T = _torus_param(P, (1, 0))
    _check_parallel(T, (1, 0))
    phi = ex.to_exact(P.get("phi", 1))
    x = _vec_param(P.get("x", unit(n, 0)), n, "x")
    eta = ex.to_exact(P.get("eta", -1))
    if not ex.dot(x, x) + 2 * phi * eta < 0:
        raise InvalidParams("need |x|^2 + 2 phi eta < 0 (otherwise item 5 or a CDS)")
    return [torus(n, *T), an(n, phi=phi, x=x, eta=eta)]


def _ex_P210(n, P, strict: bool = False):
    omega = _omega(P, ALPHA)
    p = ex.to_exact(P.get("p", sp.Rational(1, 2)))
    if strict and not (0 < abs(p) < 1):
        raise InvalidParams("item 8 needs 0 < |p| < 1")
    T = p210_torus(omega, p)
    if omega in (ALPHA, ALPHA_2BETA):
        u = [root_element(n, omega, _nonzero(P, "scale", 1))]
    else:
        V = _subspace(P, "V", n, [unit(n, 0)])
        if not V:
            raise InvalidParams("V must be nonempty")
        u = [root_element(n, omega, v) for v in V]
    return [torus(n, *T)] + u


def _x_line(n, T, root, c):
    """T + c with c in u_root."""
    fld = ROOT_FIELD[root]
    return an(n, t1=T[0], t2=T[1], **{fld: c})


def _root_vec(P, n, key, root, default):
    if root in (ALPHA, ALPHA_2BETA):
        return _nonzero(P, key, default if not isinstance(default, list) else 1)
    v = _vec_param(P.get(key, default if isinstance(default, list) else unit(n, 0)), n, key)
    if all(e == 0 for e in v):
        raise InvalidParams(f"{key} must be nonzero")
    return v


def _ex_T29_1(n, P):
    lam = _nonzero(P, "lam", 1)
    X = _subspace(P, "X", n, [unit(n, 0)])
    if not X:
        raise InvalidParams("X must be nonempty")
    return [_x_line(n, (1, 1), ALPHA, lam)] + [an(n, x=v) for v in X]


def _ex_T29_2(n, P):
    lam = _nonzero(P, "lam", 1)
    return [_x_line(n, (1, 1), ALPHA, lam), an(n, eta=1)]


def _ex_T29_3(n, P):
    lam = _nonzero(P, "lam", 1)
    return [_x_line(n, (1, -1), ALPHA_2BETA, lam), an(n, phi=1)]


def _ex_T29_4(n, P):
    lam = _nonzero(P, "lam", 1)
    sub = P.get("sub", BETA)
    if sub not in (BETA, ALPHA_BETA):
        raise InvalidParams("sub must be beta or alpha+beta")
    V = _subspace(P, "V", n, [unit(n, 0)])
    if not V:
        raise InvalidParams("V must be nonempty")
    return [_x_line(n, (1, -1), ALPHA_2BETA, lam)] + [root_element(n, sub, v) for v in V]


def _ex_T29_5(n, P):
    raise Unrealizable(UNREALIZABLE["T2.9-5"])


def _kernel_gen(omega):
    return torus_in_kernel(ROOT_FUNCTIONALS[omega])


def _ex_T29_6(n, P):
    omega = _omega(P, BETA)
    if omega not in (BETA, ALPHA_BETA):
        raise InvalidParams("omega must be beta or alpha+beta")
    gamma = PERPENDICULAR[omega]
    c = _root_vec(P, n, "c", omega, unit(n, 0))
    default_V = [unit(n, i) for i in range(n - 2) if ex.dot(c, unit(n, i)) == 0][:1]
    V = _subspace(P, "V", n, default_V)
    if any(ex.dot(c, v) != 0 for v in V):
        raise InvalidParams("V must be orthogonal to c (bracket closure)")
    f = [ex.to_exact(e) for e in P.get("f", [0] * len(V))]
    out = [_x_line(n, _kernel_gen(omega), omega, c)]
    out += [an(n, **{ROOT_FIELD[gamma]: v, "eta": fv}) for v, fv in zip(V, f)]
    return out


def _ex_T29_7(n, P):
    omega = _omega(P, BETA)
    if omega not in (BETA, ALPHA_BETA):
        raise InvalidParams("omega must be beta or alpha+beta")
    c = _root_vec(P, n, "c", omega, unit(n, 0))
    return [_x_line(n, _kernel_gen(omega), omega, c), an(n, eta=1)]


def _ex_T29_8(n, P):
    c = _root_vec(P, n, "c", ALPHA_BETA, unit(n, 0))
    return [_x_line(n, _kernel_gen(ALPHA_BETA), ALPHA_BETA, c), an(n, phi=1)]


_BUILDERS: dict[str, Callable] = {
    "T2.5-1": _ex_T25_1, "T2.5-2": _ex_T25_2, "T2.5-3": _ex_T25_3, "T2.5-4": _ex_T25_4,
    "T2.6-1": _ex_T26_1, "T2.6-2": _ex_T26_2, "T2.6-3": _ex_T26_3, "T2.6-4": _ex_T26_4,
    "T2.6-5": _ex_T26_5, "T2.6-6": _ex_T26_6, "T2.6-7": _ex_T26_7,
    "T2.6-8": lambda n, P: _ex_P210(n, P, strict=True),
    "T2.9-1": _ex_T29_1, "T2.9-2": _ex_T29_2, "T2.9-3": _ex_T29_3, "T2.9-4": _ex_T29_4,
    "T2.9-5": _ex_T29_5, "T2.9-6": _ex_T29_6, "T2.9-7": _ex_T29_7, "T2.9-8": _ex_T29_8,
    "P2.10": _ex_P210,
}


def exemplar(item: str, n: int | None = None, params: Mapping | None = None) -> Subalgebra:
    """Minimal subalgebra of a+n realizing one classification item."""
    if item not in _BUILDERS:
        raise UnknownLabel(f"unknown classification item {item!r}")
    n = DEFAULT_N[item] if n is None else int(n)
    form_matrix(n)
    params = dict(params or {})
    elements = _BUILDERS[item](n, params)
    h = Subalgebra.span(SO2N, n, elements, item, params)
    return h


# ---------------------------------------------------------------------------
# Random parameters for exemplars


def _rq(rng, lo=-3, hi=3, den=2, nonzero=False):
    while True:
        v = sp.Rational(int(rng.integers(lo * den, hi * den + 1)), den)
        if not nonzero or v != 0:
            return v


def _rvec(rng, n, nonzero=True):
    while True:
        v = [_rq(rng) for _ in range(n - 2)]
        if not nonzero or any(e != 0 for e in v):
            return v


def _rcombo(rng, vecs, m):
    """Random rational combination of ``vecs`` (zero vector if empty)."""
    coef = [_rq(rng) for _ in vecs]
    return [sum((a * v[i] for a, v in zip(coef, vecs)), sp.Integer(0)) for i in range(m)]


def _rsubspace(rng, n, k):
    while True:
        V = [_rvec(rng, n) for _ in range(k)]
        if ex.rank(V) == k:
            return V


def sample_params(item: str, n: int, rng: np.random.Generator) -> dict:
    """Random valid parameters for ``exemplar(item, n, ...)``."""
    m = n - 2
    if item == "T2.5-1":
        el = {"phi": _rq(rng), "x": _rvec(rng, n, False), "y": _rvec(rng, n, False),
              "eta": _rq(rng)}
        if all(e == 0 for e in [el["phi"], el["eta"]] + el["x"] + el["y"]):
            el["eta"] = 1
        return {"element": el}
    if item == "T2.5-2":
        A = random_deformation(2, rng).B.tolist()
        return {"A": A, "tail": [[_rq(rng) for _ in range(2)] for _ in range(m - 2)]}
    if item == "T2.5-3":
        return {"W": _rsubspace(rng, n, 2), "cd": (_rq(rng, nonzero=True), _rq(rng))}
    if item in ("T2.5-4", "T2.6-5"):
        k = int(rng.integers(1 if item == "T2.5-4" else 0, m + 1))
        X0 = _rsubspace(rng, n, k) if k else []
        b = _rcombo(rng, X0, m)
        if X0 and k < m:
            c = _rcombo(rng, ex.nullspace(X0, m), m)
        elif not X0:
            c = _rvec(rng, n, False)
        else:
            c = [0] * m
        p = (ex.dot(b, b) - ex.dot(c, c)) / 2 + sp.Rational(int(rng.integers(1, 7)), 2)
        out = {"X0": X0, "b": b, "c": c, "p": p}
        if item == "T2.6-5":
            out["T"] = (_rq(rng, nonzero=True), 0)
        return out
    if item == "T2.6-1":
        return {"T": (_rq(rng), _rq(rng, nonzero=True))}
    if item == "T2.6-2":
        s = _rq(rng, nonzero=True)
        out = {"T": (s, s)}
        if n >= 4 and n % 2 == 0:
            out["B"] = random_deformation(m, rng).B.tolist()
        return out
    if item in ("T2.6-3", "T2.6-4"):
        k = int(rng.integers(1, m + 1))
        key = "X" if item == "T2.6-3" else "Y"
        T = (_rq(rng, nonzero=True), 0) if item == "T2.6-3" else (0, _rq(rng, nonzero=True))
        return {"T": T, key: _rsubspace(rng, n, k), "f": [_rq(rng) for _ in range(k)]}
    if item == "T2.6-6":
        s = _rq(rng, nonzero=True)
        return {"T": (2 * s, s), "phi": _rq(rng, nonzero=True), "y": _rvec(rng, n)}
    if item == "T2.6-7":
        phi = _rq(rng, nonzero=True)
        x = _rvec(rng, n, False)
        eta = -(ex.dot(x, x) + sp.Rational(int(rng.integers(1, 5)), 2)) / (2 * phi)
        return {"T": (_rq(rng, nonzero=True), 0), "phi": phi, "x": x, "eta": eta}
    if item in ("T2.6-8", "P2.10"):
        omega = [ALPHA, BETA, ALPHA_BETA, ALPHA_2BETA][int(rng.integers(0, 4))]
        if item == "T2.6-8":
            p = sp.Rational(int(rng.choice([-1, 1])) * int(rng.integers(1, 8)), 8)
        else:
            p = sp.Rational(int(rng.integers(-12, 13)), 8)
        out = {"omega": omega, "p": p}
        if omega in (BETA, ALPHA_BETA):
            out["V"] = _rsubspace(rng, n, int(rng.integers(1, m + 1)))
        else:
            out["scale"] = _rq(rng, nonzero=True)
        return out
    if item == "T2.9-1":
        return {"lam": _rq(rng, nonzero=True), "X": _rsubspace(rng, n, int(rng.integers(1, m + 1)))}
    if item in ("T2.9-2", "T2.9-3"):
        return {"lam": _rq(rng, nonzero=True)}
    if item == "T2.9-4":
        return {"lam": _rq(rng, nonzero=True), "sub": [BETA, ALPHA_BETA][int(rng.integers(0, 2))],
                "V": _rsubspace(rng, n, int(rng.integers(1, m + 1)))}
    if item == "T2.9-6":
        omega = [BETA, ALPHA_BETA][int(rng.integers(0, 2))]
        c = _rvec(rng, n)
        perp = ex.nullspace([c], m)
        k = int(rng.integers(1, len(perp) + 1)) if perp else 0
        V = [_rcombo(rng, perp, m) for _ in range(k)]
        V = [tuple(v) for v in ex.row_basis(V)] if V else []
        return {"omega": omega, "c": c, "V": V, "f": [_rq(rng) for _ in V]}
    if item == "T2.9-7":
        omega = [BETA, ALPHA_BETA][int(rng.integers(0, 2))]
        return {"omega": omega, "c": _rvec(rng, n)}
    if item == "T2.9-8":
        return {"c": _rvec(rng, n)}
    if item == "T2.9-5":
        raise Unrealizable(UNREALIZABLE["T2.9-5"])
    raise UnknownLabel(item)


# ---------------------------------------------------------------------------
# Label registry used by the CLI


NAMED = {
    "h_B": "2m-dim deformation of SU(1,m) cap AN (n = 2m); param B",
    "h_SU": "SU(1,m) cap AN (n = 2m)",
    "so1n_an": "SO(1,n) cap AN",
    "so1n": "full so(1,n), stabilizer of (0,1,0,...,0,-1,0)",
    "l5": "principal sl(2) via the 5-dim irreducible representation",
    "l5_an": "l5 cap (a+n)",
    "an": "the full a+n",
    "a": "the split Cartan subalgebra",
    "n": "the nilradical n",
    "zero": "the zero subalgebra",
}


def default_hb_matrix(m: int) -> sp.ImmutableMatrix:
    """A fixed generic B (no real eigenvalue, det(B^T - B) != 0) for catalog use."""
    k = 2 * m - 2
    B = sp.zeros(k, k)
    for i in range(0, k, 2):
        B[i, i], B[i, i + 1] = 1, 2
        B[i + 1, i], B[i + 1, i + 1] = -1, 0
    return sp.ImmutableMatrix(B)


def catalog_labels(n: int) -> list[str]:
    labels = list(NAMED)
    if n % 2:
        labels = [x for x in labels if x not in ("h_B", "h_SU")]
    for item in EXEMPLAR_LABELS:
        if item in UNREALIZABLE:
            continue
        if DEFAULT_N[item] <= n:
            labels.append(item)
    return labels


def build(label: str, n: int | None = None, params: Mapping | None = None) -> Subalgebra:
    """Catalog lookup by stable label string."""
    params = dict(params or {})
    if label in _BUILDERS:
        return exemplar(label, n, params)
    if label in SL3_WHICH or label in ("so3", "borel"):
        return sl3_subgroups(label)
    if n is None:
        n = 4
    if label in ("h_B", "h_SU"):
        if n % 2 or n < 4:
            raise InvalidDimension(f"{label} lives in so(2, 2m); n = {n} is not even")
        m = n // 2
        if label == "h_SU":
            return h_SU(m)
        return h_B(m, params.get("B", default_hb_matrix(m)))
    table = {"so1n_an": so1n_an, "so1n": so1n, "l5": l5, "l5_an": l5_an, "an": full_an,
             "a": full_a, "n": full_n, "zero": zero_subalgebra}
    if label not in table:
        raise UnknownLabel(f"unknown catalog label {label!r}")
    return table[label](n)


__all__ = [
    "Subalgebra", "zero_subalgebra", "ad_exp", "conjugate", "an", "torus", "root_element",
    "unit", "torus_in_kernel", "DeformationMatrix", "standard_complex_structure", "h_B",
    "h_SU", "random_deformation", "so1n_an", "so1n_vector", "so_basis", "so1n", "l5_pi",
    "l5", "l5_an", "full_an", "full_a", "full_n", "SL3_WHICH", "sl3_subgroups",
    "EXEMPLAR_LABELS", "DEFAULT_N", "UNREALIZABLE", "p210_torus", "exemplar",
    "sample_params", "NAMED", "default_hb_matrix", "catalog_labels", "build",
]
