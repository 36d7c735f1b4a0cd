"""Orbit sampling of mu(H) and growth-window estimation.

A window [p, q] means mu(H) lies between the curves u1 + u2 = p u1 and
u1 + u2 = q u1 up to bounded error (and the stated log corrections), since
u1 = log ||h|| and u1 + u2 = log ||h ^ h||.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg
import sympy as sp

from .cartan import ChamberPoint, SL3ChamberPoint, mu
from .catalog import Subalgebra
from .classify import CDS, P210, UNRESOLVED, TypeVerdict
from .errors import InsufficientData, NoPrediction
from .lie_core import (ALPHA, ALPHA_2BETA, SL3, ANCoords, GroupElement, an_element,
                       expm, wedge_derivation)

DEFAULT_T_GRID = tuple(np.geomspace(1.0, 24.0, 40))
KAPPAS = (0.5, 1.0, 2.0)
PRODUCT_RTOL = 1e-8
EPS = np.finfo(float).eps
CORRECTIONS = ("none", "log", "log2", "per-log", "per-log2")
EXACT = "exact-from-theorem"
FITTED = "fitted"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class GrowthWindow:
    """mu(H) ~ [||h||^p, ||h||^q] with optional log factors on either side."""

    p: float
    q: float
    lower_correction: str = "none"
    upper_correction: str = "none"
    confidence: str = EXACT
    exponents: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        for c in (self.lower_correction, self.upper_correction):
            if c not in CORRECTIONS:
                raise ValueError(f"unknown correction {c!r}")
        if self.p > self.q + 1e-12:
            raise ValueError(f"empty window [{self.p}, {self.q}]")

    def to_json(self) -> dict:
        return {"p": float(self.p), "q": float(self.q), "lower_correction": self.lower_correction,
                "upper_correction": self.upper_correction, "confidence": self.confidence}


# ---------------------------------------------------------------------------
# Predicted windows


def _w(p, q, lo="none", hi="none") -> GrowthWindow:
    return GrowthWindow(float(p), float(q), lo, hi)


_FIXED = {
    "T2.5-2": (2, 2), "T2.5-3": (1, 1), "T2.5-4": (1, 1),
    "T2.6-2": (2, 2), "T2.6-3": (1, 1), "T2.6-4": (1, 1), "T2.6-5": (1, 1),
    "T2.6-6": (1.5, 1.5), "T2.6-7": (1, 1),
    "T2.9-5": (1, 1.5),
}
_T29 = {
    "T2.9-1": (1, 2, "none", "per-log"),
    "T2.9-2": (2, 2, "per-log2", "none"),
    "T2.9-3": (2, 2, "per-log2", "none"),
    "T2.9-4": (1, 2, "none", "per-log"),
    "T2.9-6": (1, 1, "none", "log2"),
    "T2.9-7": (1, 2, "log", "none"),
    "T2.9-8": (1, 2, "log", "none"),
}


def predicted_window(v: TypeVerdict) -> GrowthWindow:
    """The window stated by the theorem item behind ``v``."""
    label = v.label
    if label in (CDS, P210):
        return _w(1, 2)
    if label == UNRESOLVED:
        raise NoPrediction("type could not be resolved")
    if label == "T2.5-1":
        if "p" not in v.params:
            raise NoPrediction("the trivial subgroup has bounded mu")
        p = v.params["p"]
        return _w(p, p)
    if label in _FIXED:
        return _w(*_FIXED[label])
    if label in _T29:
        return _w(*_T29[label])
    if label == "T2.6-1":
        a, b = sorted(abs(sp.sympify(t)) for t in v.params["T"])
        return _w(1 + a / b, 1 + a / b)
    if label == "T2.6-8":
        p = abs(sp.sympify(v.params["p"]))
        if v.params["omega"] in (ALPHA, ALPHA_2BETA):
            return _w(2 / (1 + p), 2)
        return _w(1, 1 + p)
    raise NoPrediction(f"no window for {label!r}")


# ---------------------------------------------------------------------------
# Sampling


@dataclass(frozen=True)
class OrbitSample:
    """Chamber points of exp-trajectories through H.

    ``records`` rows are (direction_id, t, u1, u2); ``kinds`` describes
    each direction id.
    """

    label: str | None
    seed: int
    n: int
    ambient: str
    records: np.ndarray
    kinds: tuple

    @property
    def points(self) -> list[ChamberPoint]:
        return [ChamberPoint(float(a), float(b)) for a, b in self.records[:, 2:4]]

    def trajectory(self, did: int) -> np.ndarray:
        return self.records[self.records[:, 0] == did]

    @property
    def direction_ids(self) -> list[int]:
        return sorted({int(d) for d in self.records[:, 0]})

    def to_csv(self, target=None) -> str:
        """CSV with columns direction_id, t, u1, u2 (repr floats, byte-stable)."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["direction_id", "t", "u1", "u2"])
        for did, t, u1, u2 in self.records:
            w.writerow([int(did), repr(float(t)), repr(float(u1)), repr(float(u2))])
        text = buf.getvalue()
        if target is not None:
            with open(target, "w", newline="") as fh:
                fh.write(text)
        return text


def _series(A: np.ndarray) -> np.ndarray:
    """exp(A) for nilpotent (strictly triangular) A; terms vanish exactly."""
    out = np.eye(A.shape[0])
    term = np.eye(A.shape[0])
    for k in range(1, A.shape[0] + 1):
        term = term @ A / k
        if not term.any():
            break
        out = out + term
    return out


def _is_nilpotent(A: np.ndarray) -> bool:
    return not np.triu(A).diagonal().any() and not np.tril(A).any()


def exp_float(A: np.ndarray, ambient: str, n: int) -> GroupElement:
    """exp(A) for a float algebra matrix, with an accurate wedge (or inverse)."""
    if ambient == SL3:
        return GroupElement(SL3, 3, scipy.linalg.expm(A), None, scipy.linalg.expm(-A))
    D = wedge_derivation(A)
    if _is_nilpotent(A):
        return GroupElement(ambient, n, _series(A), _series(D))
    return GroupElement(ambient, n, expm(A), expm(D))


def _unit(A: np.ndarray) -> np.ndarray:
    return A / np.linalg.norm(A, 2)


def _directions(h: Subalgebra, n_dirs: int, rng: np.random.Generator):
    basis = [b.numeric for b in h.basis]
    dirs = [(_unit(B), "basis") for B in basis]
    flat = np.array([B.ravel() for B in basis]).T
    Q, _ = np.linalg.qr(flat)
    size = basis[0].shape[0]
    for _ in range(n_dirs):
        c = rng.normal(size=Q.shape[1])
        dirs.append((_unit((Q @ c).reshape(size, size)), "random"))
    return dirs


def _nil_directions(h: Subalgebra) -> list[np.ndarray]:
    if not h.in_an:
        return [_unit(b.numeric) for b in h.basis if _is_nilpotent(b.numeric)]
    return [_unit(an_element(h.n, ANCoords.from_vector(h.n, (0, 0) + tuple(v))).numeric)
            for v in h.nil_vectors]


def _product_error(g1: GroupElement, g2: GroupElement, g: GroupElement) -> float:
    """Relative roundoff bound of the top singular values of g = g1 g2.

    Products of two large unipotent factors can cancel down by many orders
    of magnitude; such points carry no information and are dropped.
    """
    def rel(a, b, c):
        return EPS * np.linalg.norm(a, 2) * np.linalg.norm(b, 2) / np.linalg.norm(c, 2)
    err = rel(g1.g, g2.g, g.g)
    if g.ambient != SL3:
        err = max(err, rel(g1.wedge_matrix(), g2.wedge_matrix(), g.wedge_matrix()))
    return float(err)


def _mu_row(g: GroupElement) -> tuple:
    c = mu(g)
    if isinstance(c, SL3ChamberPoint):
        return (c.v1, c.v2)
    return (c.u1, c.u2)


def sample_orbit(h: Subalgebra, t_grid: Sequence[float] | None = None, n_dirs: int = 8,
                 seed: int = 0, products: bool = True, n_lead: int = 3) -> OrbitSample:
    """mu along exp(t X) for basis and random unit X in h, plus products.

    Nilpotent directions are run at parameter expm1(t) so that u1 grows
    linearly in t.  Products are exp(s X_i) exp(expm1(kappa t) V_j) with X_i
    one of the first ``n_lead`` directions and V_j in h cap n.
    """
    grid = np.asarray(DEFAULT_T_GRID if t_grid is None else t_grid, dtype=float)
    if grid.ndim != 1 or np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise ValueError("t_grid must be positive and increasing")
    rng = np.random.default_rng(seed)
    rows: list[tuple] = []
    kinds: list[str] = []
    if h.dim == 0:
        kinds.append("identity")
        rows += [(0, t, 0.0, 0.0) for t in grid]
        return OrbitSample(h.label, seed, h.n, h.ambient, np.array(rows, dtype=float), tuple(kinds))
    dirs = _directions(h, n_dirs, rng)

    def param(A, t):
        return np.expm1(t) if _is_nilpotent(A) else t

    for A, kind in dirs:
        did = len(kinds)
        kinds.append(kind + (":nil" if _is_nilpotent(A) else ""))
        for t in grid:
            rows.append((did, t) + _mu_row(exp_float(param(A, t) * A, h.ambient, h.n)))
    if products:
        leads = [A for A, _ in dirs if not _is_nilpotent(A)][:n_lead] or [A for A, _ in dirs][:n_lead]
        for A in leads:
            for V in _nil_directions(h):
                for kappa in KAPPAS:
                    did = len(kinds)
                    kinds.append(f"product:kappa={kappa}")
                    for t in grid:
                        g1 = exp_float(param(A, t) * A, h.ambient, h.n)
                        g2 = exp_float(np.expm1(kappa * t) * V, h.ambient, h.n)
                        g = g1 @ g2
                        if _product_error(g1, g2, g) > PRODUCT_RTOL:
                            continue
                        rows.append((did, t) + _mu_row(g))
    return OrbitSample(h.label, seed, h.n, h.ambient, np.array(rows, dtype=float), tuple(kinds))


# ---------------------------------------------------------------------------
# Fitting


def _correction_of(k: float) -> str:
    """Name of the log factor (log u1)^k, k rounded to -2, -1, 1, 2."""
    r = int(np.clip(np.round(k), -2, 2))
    return {-2: "per-log2", -1: "per-log", 0: "none", 1: "log", 2: "log2"}[r]


def trajectory_exponent(u1: np.ndarray, s: np.ndarray, log_threshold: float = 0.3) -> tuple:
    """Fit s = e u1 + k log u1 + c; drop k when it is insignificant.

    Returns (e, k) with k = 0.0 when the linear model is used.
    """
    X3 = np.column_stack([u1, np.log(u1), np.ones_like(u1)])
    coef3, *_ = np.linalg.lstsq(X3, s, rcond=None)
    if abs(coef3[1]) >= log_threshold:
        return float(coef3[0]), float(coef3[1])
    X2 = np.column_stack([u1, np.ones_like(u1)])
    coef2, *_ = np.linalg.lstsq(X2, s, rcond=None)
    return float(coef2[0]), 0.0


def fit_window(sample: OrbitSample, t_min: float = 4.0, min_points: int = 6,
               min_span: float = 3.0) -> GrowthWindow:
    """Empirical window from per-trajectory exponents of u1 + u2 against u1.

    Trajectories whose u1 stays within a factor ``min_span`` are skipped:
    over such a range u1 and log u1 are nearly collinear and the fit is
    not identifiable.
    """
    fits = []
    for did in sample.direction_ids:
        tr = sample.trajectory(did)
        keep = tr[:, 2] >= t_min
        if keep.sum() < min_points or tr[keep, 2].max() < min_span * tr[keep, 2].min():
            continue
        u1, u2 = tr[keep, 2], tr[keep, 3]
        e, k = trajectory_exponent(u1, u1 + u2)
        fits.append((float(np.clip(e, 1.0, 2.0)), k))
    if not fits:
        raise InsufficientData(f"no trajectory has {min_points} points with u1 >= {t_min}")
    es = np.array([f[0] for f in fits])
    lo, hi = int(np.argmin(es)), int(np.argmax(es))
    return GrowthWindow(float(es[lo]), float(es[hi]), _correction_of(fits[lo][1]),
                        _correction_of(fits[hi][1]), FITTED, tuple(fits))


def ratio_profile(sample: OrbitSample, t_min: float = 4.0) -> np.ndarray:
    """(u1 + u2)/u1 for every point with u1 >= t_min."""
    r = sample.records
    keep = r[:, 2] >= t_min
    return (r[keep, 2] + r[keep, 3]) / r[keep, 2]


__all__ = [
    "DEFAULT_T_GRID", "KAPPAS", "CORRECTIONS", "GrowthWindow", "predicted_window", "OrbitSample",
    "exp_float", "sample_orbit", "trajectory_exponent", "fit_window", "ratio_profile",
]
