"""Ambient algebras so(2,n) and sl(3,R) in the upper-triangular basis.

Vectors of R^{n+2} carry the form with Gram matrix ``Q`` that pairs
e_1 with e_{n+2} and e_2 with e_{n+1} and is the identity on the middle
block.  In this basis a maximal split torus ``a`` is diagonal and the
nilpotent radical ``n`` of the minimal parabolic is strictly upper
triangular.  An element of a+n is determined by its first two rows,

    t1  phi  x    eta   0
    0   t2   y    0    -eta

with the remaining entries forced by  M^T Q + Q M = 0.

Exact (sympy) entries are used for construction and membership;
exponentials and everything downstream of them are float64.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Mapping, Sequence

import numpy as np
import scipy.linalg
import sympy as sp

from ._exact import to_exact
from .errors import (AmbientMismatch, DimensionMismatch, InvalidDimension,
                     NotInAlgebra, NotInGroup, NotTriangular)

SO2N = "so2n"
SL3 = "sl3"

ALPHA = "alpha"
BETA = "beta"
ALPHA_BETA = "alpha+beta"
ALPHA_2BETA = "alpha+2beta"
POSITIVE_ROOTS = (ALPHA, BETA, ALPHA_BETA, ALPHA_2BETA)

# Roots as linear functionals on the torus coordinates (t1, t2).
ROOT_FUNCTIONALS = {
    ALPHA: (1, -1),
    BETA: (0, 1),
    ALPHA_BETA: (1, 0),
    ALPHA_2BETA: (1, 1),
}
ROOT_HEIGHT = {ALPHA: 1, BETA: 1, ALPHA_BETA: 2, ALPHA_2BETA: 3}
# The other positive root orthogonal to a given one.
PERPENDICULAR = {ALPHA: ALPHA_2BETA, ALPHA_2BETA: ALPHA, BETA: ALPHA_BETA, ALPHA_BETA: BETA}
# Which coordinate field houses each root space.
ROOT_FIELD = {ALPHA: "phi", BETA: "y", ALPHA_BETA: "x", ALPHA_2BETA: "eta"}


def root_value(root: str, t1, t2):
    a, b = ROOT_FUNCTIONALS[root]
    return a * t1 + b * t2


# ---------------------------------------------------------------------------
# The form


@dataclass(frozen=True)
class BilinearSpace:
    """R^{n+2} with the signature (2, n) form Q."""

    n: int
    Q: sp.ImmutableMatrix
    P: np.ndarray

    @property
    def N(self) -> int:
        return self.n + 2

    def quadratic(self, v: Sequence) -> sp.Expr:
        v = sp.Matrix([to_exact(e) for e in v])
        return sp.expand((v.T * self.Q * v)[0, 0])

    @cached_property
    def Qf(self) -> np.ndarray:
        return np.array(self.Q.tolist(), dtype=float)


@lru_cache(maxsize=None)
def form_matrix(n: int) -> BilinearSpace:
    """Gram matrix of the (2, n) form and an orthogonal diagonalizing basis.

    Rows of ``P`` are the orthonormal eigenvectors of ``Q``; the n positive
    directions come first, then (e2 - e_{n+1})/sqrt2 and (e1 - e_{n+2})/sqrt2.
    """
    if not isinstance(n, (int, np.integer)) or n < 3:
        raise InvalidDimension(f"n must be an integer >= 3, got {n!r}")
    n = int(n)
    N = n + 2
    Q = sp.zeros(N, N)
    Q[0, N - 1] = Q[N - 1, 0] = 1
    Q[1, N - 2] = Q[N - 2, 1] = 1
    for i in range(2, N - 2):
        Q[i, i] = 1
    r = 1.0 / np.sqrt(2.0)
    P = np.zeros((N, N))
    P[0, 0] = P[0, N - 1] = r
    P[1, 1] = P[1, N - 2] = r
    for i in range(2, N - 2):
        P[i, i] = 1.0
    P[N - 2, 1], P[N - 2, N - 2] = r, -r
    P[N - 1, 0], P[N - 1, N - 1] = r, -r
    return BilinearSpace(n=n, Q=sp.ImmutableMatrix(Q), P=P)


# ---------------------------------------------------------------------------
# Coordinates on a+n


def _vec(v, length: int) -> tuple:
    v = tuple(to_exact(e) for e in v)
    if len(v) != length:
        raise DimensionMismatch(f"expected a vector of length {length}, got {len(v)}")
    return v


@dataclass(frozen=True)
class ANCoords:
    """Coordinates (t1, t2, phi, x, y, eta) of an element of a+n in so(2,n).

    ``phi`` spans the alpha root space, ``y`` the beta root space, ``x`` the
    alpha+beta root space and ``eta`` the alpha+2beta root space.
    """

    t1: sp.Expr
    t2: sp.Expr
    phi: sp.Expr
    x: tuple
    y: tuple
    eta: sp.Expr

    def __post_init__(self):
        for name in ("t1", "t2", "phi", "eta"):
            object.__setattr__(self, name, to_exact(getattr(self, name)))
        x = tuple(to_exact(e) for e in self.x)
        y = tuple(to_exact(e) for e in self.y)
        if len(x) != len(y):
            raise DimensionMismatch("x and y must have the same length")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return len(self.x) + 2

    @classmethod
    def make(cls, n: int, t1=0, t2=0, phi=0, x=None, y=None, eta=0) -> "ANCoords":
        """Keyword constructor; missing vectors default to zero."""
        m = n - 2
        x = _vec(x if x is not None else [0] * m, m)
        y = _vec(y if y is not None else [0] * m, m)
        return cls(t1, t2, phi, x, y, eta)

    def vector(self) -> tuple:
        """Flat coordinate vector (t1, t2, phi, x..., y..., eta) of length 2n."""
        return (self.t1, self.t2, self.phi) + self.x + self.y + (self.eta,)

    @classmethod
    def from_vector(cls, n: int, v: Sequence) -> "ANCoords":
        v = tuple(v)
        if len(v) != 2 * n:
            raise DimensionMismatch(f"expected {2 * n} coordinates, got {len(v)}")
        m = n - 2
        return cls(v[0], v[1], v[2], v[3:3 + m], v[3 + m:3 + 2 * m], v[-1])

    def nil_vector(self) -> tuple:
        """The n-part only: (phi, x..., y..., eta)."""
        return self.vector()[2:]

    def is_nilpotent(self) -> bool:
        return self.t1 == 0 and self.t2 == 0


def coord_slices(n: int) -> dict:
    """Index ranges of each field inside ``ANCoords.vector``."""
    m = n - 2
    return {"t": slice(0, 2), "phi": slice(2, 3), "x": slice(3, 3 + m),
            "y": slice(3 + m, 3 + 2 * m), "eta": slice(2 * n - 1, 2 * n)}


def _an_matrix(c: ANCoords) -> sp.ImmutableMatrix:
    n = c.n
    N = n + 2
    zero = sp.Integer(0)
    rows = [[zero] * N for _ in range(N)]
    rows[0][0] = c.t1
    rows[0][1] = c.phi
    rows[1][1] = c.t2
    rows[0][n] = c.eta
    rows[1][n + 1] = -c.eta
    for i in range(n - 2):
        rows[0][2 + i] = c.x[i]
        rows[1][2 + i] = c.y[i]
        rows[2 + i][n] = -c.y[i]
        rows[2 + i][n + 1] = -c.x[i]
    rows[n][n] = -c.t2
    rows[n][n + 1] = -c.phi
    rows[n + 1][n + 1] = -c.t1
    return sp.ImmutableMatrix(rows)


def _coords_of_matrix(M: sp.MatrixBase, n: int) -> ANCoords | None:
    """Read off a+n coordinates if ``M`` lies in a+n, else None."""
    N = n + 2
    for i in range(N):
        for j in range(i):
            if M[i, j] != 0:
                return None
    c = ANCoords(M[0, 0], M[1, 1], M[0, 1],
                 tuple(M[0, 2 + i] for i in range(n - 2)),
                 tuple(M[1, 2 + i] for i in range(n - 2)), M[0, n])
    if _an_matrix(c) != sp.ImmutableMatrix(M):
        return None
    return c


# ---------------------------------------------------------------------------
# Algebra elements


def _ambient_size(ambient: str, n: int) -> int:
    if ambient == SO2N:
        return n + 2
    if ambient == SL3:
        return 3
    raise AmbientMismatch(f"unknown ambient {ambient!r}")


@dataclass(frozen=True, eq=False)
class AlgElement:
    """Element of so(2,n) or sl(3,R), stored with exact entries."""

    ambient: str
    n: int
    M: sp.ImmutableMatrix
    coords: ANCoords | None = None

    def __eq__(self, other):
        if not isinstance(other, AlgElement):
            return NotImplemented
        return (self.ambient, self.n) == (other.ambient, other.n) and self.M == other.M

    def __hash__(self):
        return hash((self.ambient, self.n, tuple(self.M)))

    @cached_property
    def numeric(self) -> np.ndarray:
        return np.array(self.M.evalf(17).tolist(), dtype=float)

    def flat(self) -> tuple:
        """Exact coordinate vector: ANCoords vector if present, else matrix entries."""
        if self.coords is not None:
            return self.coords.vector()
        return tuple(self.M)

    def __add__(self, other: "AlgElement") -> "AlgElement":
        _check_same(self, other)
        return from_matrix(self.M + other.M, self.ambient, self.n, check=False)

    def __sub__(self, other: "AlgElement") -> "AlgElement":
        _check_same(self, other)
        return from_matrix(self.M - other.M, self.ambient, self.n, check=False)

    def __mul__(self, s) -> "AlgElement":
        s = to_exact(s)
        if self.coords is not None:
            return an_element(self.n, ANCoords.from_vector(
                self.n, [s * e for e in self.coords.vector()]))
        return AlgElement(self.ambient, self.n, sp.ImmutableMatrix(self.M * s))

    __rmul__ = __mul__

    def __neg__(self) -> "AlgElement":
        return self * -1

    def is_zero(self) -> bool:
        return all(e == 0 for e in self.M)


def _check_same(X: AlgElement, Y: AlgElement) -> None:
    if X.ambient != Y.ambient or X.n != Y.n:
        raise AmbientMismatch(f"{X.ambient}({X.n}) vs {Y.ambient}({Y.n})")


def an_element(n: int, c: ANCoords | Mapping) -> AlgElement:
    """The element of a+n in so(2,n) with the given coordinates."""
    form_matrix(n)
    if not isinstance(c, ANCoords):
        c = ANCoords.make(n, **dict(c))
    if c.n != n:
        raise DimensionMismatch(f"coordinate vectors have length {c.n - 2}, expected {n - 2}")
    return AlgElement(SO2N, n, _an_matrix(c), c)


def in_algebra(M, ambient: str, n: int) -> bool:
    M = sp.ImmutableMatrix(M)
    if ambient == SO2N:
        Q = form_matrix(n).Q
        return all(e == 0 for e in (M.T * Q + Q * M).applyfunc(sp.expand))
    if ambient == SL3:
        return sp.expand(M.trace()) == 0
    raise AmbientMismatch(f"unknown ambient {ambient!r}")


def from_matrix(M, ambient: str = SO2N, n: int | None = None, check: bool = True) -> AlgElement:
    """Wrap an exact matrix, detecting a+n coordinates when present."""
    M = sp.ImmutableMatrix(M).applyfunc(to_exact)
    if ambient == SL3:
        n = 3
    elif n is None:
        n = M.shape[0] - 2
    size = _ambient_size(ambient, n)
    if M.shape != (size, size):
        raise DimensionMismatch(f"expected a {size}x{size} matrix, got {M.shape}")
    if check and not in_algebra(M, ambient, n):
        raise NotInAlgebra(f"matrix is not in {ambient}")
    coords = _coords_of_matrix(M, n) if ambient == SO2N else None
    return AlgElement(ambient, n, M, coords)


def zero(ambient: str, n: int) -> AlgElement:
    size = _ambient_size(ambient, n)
    return from_matrix(sp.zeros(size, size), ambient, n, check=False)


def an_bracket(c: ANCoords, d: ANCoords) -> ANCoords:
    """Bracket of two a+n elements computed directly in coordinates."""
    def e(v):
        return sp.expand(v)
    t1, t2, t1p, t2p = c.t1, c.t2, d.t1, d.t2
    phi = e((t1 - t2) * d.phi - (t1p - t2p) * c.phi)
    x = tuple(e(t1 * xp - t1p * xx + c.phi * yp - d.phi * yy)
              for xx, yy, xp, yp in zip(c.x, c.y, d.x, d.y))
    y = tuple(e(t2 * yp - t2p * yy) for yy, yp in zip(c.y, d.y))
    xpy = sum((a * b for a, b in zip(d.x, c.y)), sp.Integer(0))
    xyp = sum((a * b for a, b in zip(c.x, d.y)), sp.Integer(0))
    eta = e((t1 + t2) * d.eta - (t1p + t2p) * c.eta + xpy - xyp)
    return ANCoords(0, 0, phi, x, y, eta)


def bracket(X: AlgElement, Y: AlgElement) -> AlgElement:
    """Commutator XY - YX."""
    _check_same(X, Y)
    if X.coords is not None and Y.coords is not None:
        return an_element(X.n, an_bracket(X.coords, Y.coords))
    M = (X.M * Y.M - Y.M * X.M).applyfunc(sp.expand)
    return from_matrix(M, X.ambient, X.n, check=False)


def root_components(X: AlgElement) -> dict:
    """Split an a+n element into its torus part and root-space components."""
    if X.coords is None:
        raise NotTriangular("element does not lie in a+n")
    c = X.coords
    return {"a": (c.t1, c.t2), ALPHA: c.phi, BETA: c.y, ALPHA_BETA: c.x, ALPHA_2BETA: c.eta}


def nilpotency_index(M) -> int:
    """Smallest k with M^k = 0 (exact), or 0 if M is not nilpotent."""
    M = sp.Matrix(M)
    size = M.shape[0]
    P = sp.eye(size)
    for k in range(1, size + 1):
        P = (P * M).applyfunc(sp.expand)
        if all(e == 0 for e in P):
            return k
    return 0


# ---------------------------------------------------------------------------
# Wedge square (the representation g -> g ^ g)


@lru_cache(maxsize=None)
def wedge_pairs(N: int) -> tuple[np.ndarray, np.ndarray]:
    i, j = np.triu_indices(N, k=1)
    return i, j


def compound2(g: np.ndarray) -> np.ndarray:
    """Second compound matrix: the action of g on the wedge square."""
    i, j = wedge_pairs(g.shape[0])
    return g[np.ix_(i, i)] * g[np.ix_(j, j)] - g[np.ix_(i, j)] * g[np.ix_(j, i)]


def wedge_derivation(X: np.ndarray) -> np.ndarray:
    """Derivative of the wedge-square representation at X.

    Entry [(k,l),(i,j)] is the coefficient of e_k ^ e_l in
    X e_i ^ e_j + e_i ^ X e_j.
    """
    N = X.shape[0]
    i, j = wedge_pairs(N)
    K = len(i)
    index = -np.ones((N, N), dtype=int)
    index[i, j] = np.arange(K)
    D = np.zeros((K, K), dtype=X.dtype)
    for col, (a, b) in enumerate(zip(i, j)):
        for k in range(N):
            # X e_a ^ e_b contributes X[k,a] e_k ^ e_b
            if X[k, a] != 0 and k != b:
                if k < b:
                    D[index[k, b], col] += X[k, a]
                else:
                    D[index[b, k], col] -= X[k, a]
            # e_a ^ X e_b contributes X[k,b] e_a ^ e_k
            if X[k, b] != 0 and k != a:
                if a < k:
                    D[index[a, k], col] += X[k, b]
                else:
                    D[index[k, a], col] -= X[k, b]
    return D


# ---------------------------------------------------------------------------
# Group elements


@dataclass(frozen=True, eq=False)
class GroupElement:
    """Element of SO(2,n) or SL(3,R), float64.

    ``wedge`` optionally carries an accurately computed g ^ g (products of
    exponentials of the derived representation avoid the cancellation that
    taking minors of a badly conditioned g would incur); ``inverse`` plays
    the same role for the smallest singular value in SL(3).
    """

    ambient: str
    n: int
    g: np.ndarray
    wedge: np.ndarray | None = field(default=None, repr=False)
    inverse: np.ndarray | None = field(default=None, repr=False)

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        if (self.ambient, self.n) != (other.ambient, other.n):
            raise AmbientMismatch("cannot multiply elements of different groups")
        w = None
        if self.wedge is not None or other.wedge is not None:
            w = self.wedge_matrix() @ other.wedge_matrix()
        inv = None
        if self.inverse is not None and other.inverse is not None:
            inv = other.inverse @ self.inverse
        return GroupElement(self.ambient, self.n, self.g @ other.g, w, inv)

    def wedge_matrix(self) -> np.ndarray:
        return self.wedge if self.wedge is not None else compound2(self.g)

    def inv(self) -> "GroupElement":
        if self.ambient == SO2N:
            Q = form_matrix(self.n).Qf
            ginv = Q @ self.g.T @ Q
            w = None
            if self.wedge is not None:
                CQ = compound2(Q)
                w = CQ @ self.wedge.T @ CQ
            return GroupElement(SO2N, self.n, ginv, w, self.g)
        ginv = self.inverse if self.inverse is not None else np.linalg.inv(self.g)
        return GroupElement(self.ambient, self.n, ginv, None, self.g)

    def check(self, tol: float = 1e-10) -> None:
        """Raise NotInGroup unless the defining identity holds (relative tol)."""
        scale = max(1.0, np.linalg.norm(self.g, 2)) ** 2
        if self.ambient == SO2N:
            Q = form_matrix(self.n).Qf
            err = np.max(np.abs(self.g.T @ Q @ self.g - Q))
        else:
            scale = max(1.0, np.linalg.norm(self.g, 2)) ** 3
            err = abs(np.linalg.det(self.g) - 1.0)
        if err > tol * scale:
            raise NotInGroup(f"group identity violated by {err:.3e}")


def identity(ambient: str, n: int) -> GroupElement:
    size = _ambient_size(ambient, n)
    return GroupElement(ambient, n, np.eye(size), None, np.eye(size))


def exp_nilpotent(M: np.ndarray, index: int) -> np.ndarray:
    """Exponential of a nilpotent matrix by its finite power series."""
    out = np.eye(M.shape[0])
    term = np.eye(M.shape[0])
    for k in range(1, index):
        term = term @ M / k
        out = out + term
    return out


def _taylor_expm(M: np.ndarray, degree: int = 18) -> np.ndarray:
    """Scaling and squaring with a plain Taylor polynomial."""
    norm = np.abs(M).sum(axis=0).max()
    s = max(0, int(np.ceil(np.log2(norm / 0.25)))) if norm > 0 else 0
    A = M / 2.0 ** s
    out = np.eye(M.shape[0])
    term = np.eye(M.shape[0])
    for k in range(1, degree + 1):
        term = term @ A / k
        out = out + term
    for _ in range(s):
        out = out @ out
    return out


def expm(M: np.ndarray) -> np.ndarray:
    """Matrix exponential.

    scipy's expm treats triangular input with a Parlett-style fix-up that
    divides by differences of diagonal entries; on a+n elements with t1 and
    t2 one ulp apart this loses most digits, so triangular matrices go
    through plain scaling and squaring instead.
    """
    M = np.asarray(M, dtype=float)
    if not np.tril(M, -1).any() or not np.triu(M, 1).any():
        return _taylor_expm(M)
    return scipy.linalg.expm(M)


def _expm(M: np.ndarray, nil_index: int) -> np.ndarray:
    if nil_index:
        return exp_nilpotent(M, nil_index)
    return expm(M)


def exp_element(X: AlgElement, t: float = 1.0, with_wedge: bool = False) -> GroupElement:
    """exp(tX).  Nilpotent elements use the terminating power series."""
    A = t * X.numeric
    idx = _nil_index_cached(X)
    g = _expm(A, idx)
    w = None
    if with_wedge:
        D = wedge_derivation(A)
        w = _expm(D, 2 * idx - 1 if idx else 0)
    inv = _expm(-A, idx) if X.ambient == SL3 else None
    return GroupElement(X.ambient, X.n, g, w, inv)


def _nil_index_cached(X: AlgElement) -> int:
    cache = X.__dict__.get("_nil_index")
    if cache is None:
        if X.coords is not None and not X.coords.is_nilpotent():
            cache = 0
        else:
            cache = nilpotency_index(X.M)
        X.__dict__["_nil_index"] = cache
    return cache


def a_element(n: int, u1: float, u2: float) -> GroupElement:
    """exp of the torus element (u1, u2): diag(e^u1, e^u2, 1, ..., e^-u2, e^-u1)."""
    d = np.ones(n + 2)
    d[0], d[1], d[-2], d[-1] = np.exp(u1), np.exp(u2), np.exp(-u2), np.exp(-u1)
    g = np.diag(d)
    return GroupElement(SO2N, n, g, np.diag(compound2(g).diagonal().copy()))


def compact_algebra_element(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Random element of the maximal compact subalgebra of so(2,n) (float)."""
    Q = form_matrix(n).Qf
    S = rng.normal(size=(n + 2, n + 2)) * scale
    Y = Q @ (S - S.T)
    return Y - Y.T


def random_compact(ambient: str, n: int, rng: np.random.Generator, scale: float = 1.0) -> GroupElement:
    """Random element of the maximal compact subgroup (SO(2)xSO(n) or SO(3))."""
    if ambient == SO2N:
        Z = compact_algebra_element(n, rng, scale)
    elif ambient == SL3:
        S = rng.normal(size=(3, 3)) * scale
        Z = S - S.T
    else:
        raise AmbientMismatch(f"unknown ambient {ambient!r}")
    k = scipy.linalg.expm(Z)
    return GroupElement(ambient, n, k, compound2(k), k.T)


__all__ = [
    "SO2N", "SL3", "ALPHA", "BETA", "ALPHA_BETA", "ALPHA_2BETA", "POSITIVE_ROOTS",
    "ROOT_FUNCTIONALS", "ROOT_HEIGHT", "PERPENDICULAR", "ROOT_FIELD", "root_value",
    "BilinearSpace", "form_matrix", "ANCoords", "coord_slices", "AlgElement",
    "an_element", "in_algebra", "from_matrix", "zero", "an_bracket", "bracket",
    "root_components", "nilpotency_index", "wedge_pairs", "compound2",
    "wedge_derivation", "GroupElement", "identity", "exp_nilpotent", "expm", "exp_element",
    "a_element", "compact_algebra_element", "random_compact",
]
