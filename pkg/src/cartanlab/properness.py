"""Properness evidence from Cartan projections.

Two subgroups act properly on each other's quotient iff mu(H1) and mu(H2)
drift apart: no compact thickening of one meets the other outside a
compact set.  Here that is read off in two ways, from the exact growth
windows of the classification and from sampled chamber points.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.optimize

from .cartan import SL3ChamberPoint, bplus_distance, mu, opposition_involution
from .catalog import Subalgebra
from .classify import TypeVerdict, classify_type, sl3_d
from .errors import HypothesisViolated, InsufficientData, NoPrediction, UnsupportedInput
from .growth import (DEFAULT_T_GRID, EXACT, GrowthWindow, OrbitSample, exp_float,
                     predicted_window)
from .lie_core import SL3, SO2N, GroupElement, a_element, form_matrix, random_compact

PROPER = "proper"
NOT_PROPER = "not-proper"
UNKNOWN = "unknown"

PROPER_SLOPE = 0.3
NOT_PROPER_SLOPE = 0.05

# Exact windows of the reductive catalog entries: SO(1,n) sits on the wall
# u2 = 0 and SU(1,m) on the diagonal u1 = u2.
REDUCTIVE_WINDOWS = {
    "SO(1,n)": GrowthWindow(1.0, 1.0, confidence=EXACT),
    "SU(1,m)": GrowthWindow(2.0, 2.0, confidence=EXACT),
}
REDUCTIVE_TORUS = {"SO(1,n)": (1.0, 0.0), "SU(1,m)": (1.0, 1.0)}

# Lower corrections that keep the exact ray of the endpoint inside the
# window, and likewise for the upper end.
_LOWER_KEEPS = ("none", "per-log", "per-log2")
_UPPER_KEEPS = ("none", "log", "log2")


def _window(v) -> GrowthWindow:
    if isinstance(v, GrowthWindow):
        return v
    if isinstance(v, TypeVerdict):
        return predicted_window(v)
    if isinstance(v, str) and v in REDUCTIVE_WINDOWS:
        return REDUCTIVE_WINDOWS[v]
    raise UnsupportedInput(f"cannot read a window from {v!r}")


def _has_exact_ray(w: GrowthWindow, e: float) -> bool:
    if w.p < e < w.q:
        return True
    if e == w.p and w.lower_correction in _LOWER_KEEPS:
        return True
    return e == w.q and w.upper_correction in _UPPER_KEEPS


def proper_pair_predicted(v1, v2) -> str:
    """proper / not-proper / unknown from two theorem windows.

    Disjoint exponent intervals are proper: log factors cannot close a gap
    between powers.  A common interior stretch is not proper.  When the
    intervals meet in one exponent, the answer is not-proper only if both
    windows are that single exponent and both contain its exact ray;
    otherwise the log factors decide and we return unknown.
    """
    try:
        w1, w2 = _window(v1), _window(v2)
    except NoPrediction:
        return UNKNOWN
    if w1.confidence != EXACT or w2.confidence != EXACT:
        return UNKNOWN
    lo, hi = max(w1.p, w2.p), min(w1.q, w2.q)
    if lo > hi:
        return PROPER
    if lo < hi:
        return NOT_PROPER
    degenerate = w1.p == w1.q and w2.p == w2.q
    if degenerate and _has_exact_ray(w1, lo) and _has_exact_ray(w2, lo):
        return NOT_PROPER
    return UNKNOWN


# ---------------------------------------------------------------------------
# Sampling the reductive entries


def reductive_sample(kind: str, n: int, t_grid: Sequence[float] | None = None,
                     n_dirs: int = 4, seed: int = 0) -> OrbitSample:
    """mu of K exp(t a_L) K for L = SO(1,n) or SU(1,m) (n = 2m).

    mu is bi-K-invariant, so the compact factors only exercise the
    numerics; the image is that of the split torus of L, which is all of
    mu(L) up to a compact set.
    """
    if kind not in REDUCTIVE_TORUS:
        raise UnsupportedInput(f"unknown reductive entry {kind!r}")
    if kind == "SU(1,m)" and n % 2:
        raise UnsupportedInput("SU(1,m) lives in SO(2,2m)")
    grid = np.asarray(DEFAULT_T_GRID if t_grid is None else t_grid, dtype=float)
    rng = np.random.default_rng(seed)
    d1, d2 = REDUCTIVE_TORUS[kind]
    rows = []
    for did in range(n_dirs):
        k1 = random_compact(SO2N, n, rng)
        k2 = random_compact(SO2N, n, rng)
        for t in grid:
            c = mu(k1 @ a_element(n, d1 * t, d2 * t) @ k2)
            rows.append((did, t, c.u1, c.u2))
    return OrbitSample(kind, seed, n, SO2N, np.array(rows, dtype=float),
                       tuple(["K a K"] * n_dirs))


# ---------------------------------------------------------------------------
# Empirical separation


def _ray_angle(e: float) -> float:
    """Angle of the ray u1 + u2 = e u1 from the wall u2 = 0."""
    return float(np.arctan(e - 1.0))


def ideal_slope(v1, v2) -> float | None:
    """sin of the angular gap between two disjoint exact windows, else None.

    This is the separation slope of the two bounding rays: a point at
    radius R on one is at distance R sin(gap) from the other.
    """
    w1, w2 = _window(v1), _window(v2)
    if w1.q < w2.p:
        return float(np.sin(_ray_angle(w2.p) - _ray_angle(w1.q)))
    if w2.q < w1.p:
        return float(np.sin(_ray_angle(w1.p) - _ray_angle(w2.q)))
    return None


@dataclass(frozen=True)
class PropernessReport:
    left: str | None
    right: str | None
    predicted: str
    slope: float
    intercept: float
    radii: tuple
    distances: tuple
    n_left: int
    n_right: int
    seed: int
    notes: tuple = field(default=())
    proper_threshold: float = PROPER_SLOPE

    @property
    def empirical(self) -> str:
        if self.slope >= self.proper_threshold:
            return PROPER
        if self.slope <= NOT_PROPER_SLOPE:
            return NOT_PROPER
        return UNKNOWN

    def to_json(self) -> dict:
        return {
            "left": self.left, "right": self.right, "predicted": self.predicted,
            "empirical": self.empirical, "slope": self.slope, "intercept": self.intercept,
            "radii": list(self.radii), "distances": list(self.distances),
            "n_left": self.n_left, "n_right": self.n_right, "seed": self.seed,
            "proper_threshold": self.proper_threshold, "notes": list(self.notes),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["radius", "distance"])
        for R, d in zip(self.radii, self.distances):
            w.writerow([repr(float(R)), repr(float(d))])
        return buf.getvalue()


def _segments(sample: OrbitSample) -> tuple[np.ndarray, np.ndarray]:
    """Consecutive point pairs along each trajectory (single points as
    degenerate segments)."""
    starts, ends = [], []
    for did in sample.direction_ids:
        pts = sample.trajectory(did)[:, 2:4]
        if len(pts) == 1:
            starts.append(pts)
            ends.append(pts)
        else:
            starts.append(pts[:-1])
            ends.append(pts[1:])
    return np.vstack(starts), np.vstack(ends)


def _point_to_segments(P: np.ndarray, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Distance from each row of P to the union of segments [A_i, B_i]."""
    D = B - A
    L2 = np.einsum("ij,ij->i", D, D)
    L2 = np.where(L2 > 0, L2, 1.0)
    W = P[:, None, :] - A[None, :, :]
    s = np.clip(np.einsum("pij,ij->pi", W, D) / L2, 0.0, 1.0)
    closest = A[None] + s[..., None] * D[None]
    return np.linalg.norm(P[:, None, :] - closest, axis=2).min(axis=1)


def _one_sided(P: np.ndarray, other: OrbitSample, R: float) -> float | None:
    r = np.hypot(P[:, 0], P[:, 1])
    sel = P[(r >= R) & (r <= 2 * R)]
    if len(sel) == 0:
        return None
    A, B = _segments(other)
    return float(_point_to_segments(sel, A, B).min())


def _horizon(sample: OrbitSample) -> float:
    """Median over trajectories of the final chamber radius.

    A few long trajectories must not set the horizon: annuli beyond the
    typical reach would compare one sample against a sparse tail of the
    other.
    """
    ends = [np.hypot(*sample.trajectory(d)[-1, 2:4]) for d in sample.direction_ids]
    return float(np.median(ends))


def default_radii(sL: OrbitSample, sR: OrbitSample, count: int = 6) -> np.ndarray:
    """Geometric radii from 2 up to half the smaller sampling horizon."""
    horizon = min(_horizon(sL), _horizon(sR))
    top = horizon / 2.0
    if top <= 2.0:
        raise InsufficientData(f"sampling horizon {horizon:.3g} is too small")
    return np.geomspace(2.0, top, count)


def cone_separation(sL: OrbitSample, sR: OrbitSample, radii: Sequence[float] | None = None,
                    predicted: str = UNKNOWN, ideal: float | None = None) -> PropernessReport:
    """Distance between mu-samples over annuli [R, 2R] and its slope in R.

    At each radius the distance is the smaller of the two one-sided
    distances from sample points in the annulus to the other sample, where
    each sample is read as its piecewise linear trajectories (so the grid
    spacing does not masquerade as separation).

    The slope counts as proper evidence above PROPER_SLOPE, or above half
    of ``ideal`` (the bounding-ray slope, see ideal_slope) when that is
    smaller: two exact windows can be proper with a narrow angular gap.
    """
    threshold = PROPER_SLOPE if ideal is None else min(PROPER_SLOPE, ideal / 2.0)
    radii = default_radii(sL, sR) if radii is None else np.asarray(radii, dtype=float)
    PL, PR = sL.records[:, 2:4], sR.records[:, 2:4]
    dist = []
    for R in radii:
        cands = [d for d in (_one_sided(PL, sR, R), _one_sided(PR, sL, R)) if d is not None]
        if not cands:
            raise InsufficientData(f"annulus [{R:.3g}, {2 * R:.3g}] is empty in both samples")
        dist.append(min(cands))
    X = np.column_stack([radii, np.ones_like(radii)])
    (slope, intercept), *_ = np.linalg.lstsq(X, np.array(dist), rcond=None)
    notes = ()
    if NOT_PROPER_SLOPE < slope < threshold:
        notes = ("slope between thresholds: sublinear or slow divergence cannot be told apart",)
    return PropernessReport(sL.label, sR.label, predicted, float(slope), float(intercept),
                            tuple(float(r) for r in radii), tuple(dist), len(PL), len(PR),
                            sL.seed, notes, threshold)


# ---------------------------------------------------------------------------
# SL(3): crossing the fixed ray of the opposition involution


@dataclass(frozen=True)
class BPlusCrossing:
    """Per-t minimum over s of the distance from mu(Phi(s, t)) to B+."""

    label: str | None
    t: tuple
    s_star: tuple
    minima: tuple

    def to_json(self) -> dict:
        return {"label": self.label, "t": list(self.t), "s_star": list(self.s_star),
                "minima": list(self.minima)}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "s_star", "min_distance"])
        for row in zip(self.t, self.s_star, self.minima):
            w.writerow([repr(float(x)) for x in row])
        return buf.getvalue()


def _sl3_pair(h: Subalgebra) -> tuple[np.ndarray, np.ndarray]:
    """Two independent directions X, Y in h, X non-nilpotent when possible."""
    mats = [b.numeric for b in h.basis]
    order = sorted(range(len(mats)), key=lambda i: np.allclose(np.linalg.eigvals(mats[i]), 0))
    X = mats[order[0]]
    Y = mats[order[1]]
    return X / np.linalg.norm(X, 2), Y / np.linalg.norm(Y, 2)


def sl3_bplus_crossing(h: Subalgebra, t_max: float = 10.0, steps: int = 20,
                       s_steps: int = 200) -> BPlusCrossing:
    """Follow Phi(s, t) = exp(t (cos(pi s) X + sin(pi s) Y)) from h_t to h_t^-1.

    mu(Phi(0, t)) and mu(Phi(1, t)) are exchanged by the opposition
    involution, so v2 changes sign along s and the curve meets B+ (where
    v2 = 0).  The crossing is located by a sign scan and refined with
    Brent's method.
    """
    if h.ambient != SL3:
        raise UnsupportedInput("B+ crossing is an SL(3,R) construction")
    if sl3_d(h) < 2:
        raise HypothesisViolated(f"d(H) = {sl3_d(h)} < 2")
    X, Y = _sl3_pair(h)

    def point(s: float, t: float) -> SL3ChamberPoint:
        A = t * (np.cos(np.pi * s) * X + np.sin(np.pi * s) * Y)
        return mu(exp_float(A, SL3, 3))

    ts = np.linspace(t_max / steps, t_max, steps)
    grid = np.linspace(0.0, 1.0, s_steps + 1)
    s_star, minima = [], []
    for t in ts:
        v2 = np.array([point(s, t).v2 for s in grid])
        best_s = float(grid[np.argmin(np.abs(v2))])
        sign = np.nonzero(np.sign(v2[:-1]) * np.sign(v2[1:]) < 0)[0]
        if len(sign):
            i = sign[0]
            best_s = scipy.optimize.brentq(lambda s: point(s, t).v2, grid[i], grid[i + 1],
                                           xtol=1e-14)
        s_star.append(best_s)
        minima.append(bplus_distance(point(best_s, t)))
    return BPlusCrossing(h.label, tuple(ts.tolist()), tuple(s_star), tuple(minima))


# ---------------------------------------------------------------------------
# Perturbation constant of mu


@dataclass(frozen=True)
class AppendixConstant:
    C: float
    g_scale: float
    n_samples: int
    seed: int
    ambient: str

    def to_json(self) -> dict:
        return {"C": self.C, "g_scale": self.g_scale, "n_samples": self.n_samples,
                "seed": self.seed, "ambient": self.ambient}


def _log_diag(c) -> np.ndarray:
    if isinstance(c, SL3ChamberPoint):
        return c.as_array()
    return np.array([c.u1, c.u2, -c.u2, -c.u1])


def _random_a(ambient: str, n: int, log_norm: float, rng: np.random.Generator) -> GroupElement:
    if ambient == SL3:
        # v1 = L fixes |g| = e^L; v3 in [-2L, -L/2] keeps v1 >= v2 >= v3.
        v3 = -log_norm * rng.uniform(0.5, 2.0)
        v = np.array([log_norm, -(log_norm + v3), v3])
        d = np.exp(v)
        return GroupElement(SL3, 3, np.diag(d), None, np.diag(1.0 / d))
    u2 = log_norm * rng.uniform()
    return a_element(n, log_norm, u2)


def _random_h(ambient: str, n: int, scale: float, rng: np.random.Generator) -> GroupElement:
    size = 3 if ambient == SL3 else n + 2
    if ambient == SL3:
        A = rng.normal(size=(3, 3))
        A -= np.trace(A) / 3 * np.eye(3)
    else:
        Q = form_matrix(n).Qf
        S = rng.normal(size=(size, size))
        # M = Q^-1 S' with S' skew solves M^T Q + Q M = 0.
        A = np.linalg.solve(Q, S - S.T)
    A *= scale / np.linalg.norm(A, 2)
    return exp_float(A, ambient, 3 if ambient == SL3 else n)


def appendix_constant(n_samples: int = 200, g_scale: float = 1e4, seed: int = 0,
                      ambient: str = SL3, n: int = 3, h_scale: float = 1.0) -> AppendixConstant:
    """max over samples of max(|mu(g)^-1 mu(gh)|, |mu(g)^-1 mu(hg)|) / max(|h|, |h^-1|).

    g = k a k' with log|g| uniform in [0, log g_scale]; h = exp of a random
    algebra element of operator norm ``h_scale``.  The norm of the diagonal
    quotient is exp of the largest coordinate difference.
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_samples):
        a = _random_a(ambient, n, rng.uniform(0.0, np.log(g_scale)), rng)
        g = random_compact(ambient, n, rng) @ a @ random_compact(ambient, n, rng)
        hh = _random_h(ambient, n, h_scale, rng)
        base = _log_diag(mu(g))
        num = max(np.exp(np.max(_log_diag(mu(g @ hh)) - base)),
                  np.exp(np.max(_log_diag(mu(hh @ g)) - base)))
        den = max(np.linalg.norm(hh.g, 2), np.linalg.norm(hh.inv().g, 2))
        worst = max(worst, num / den)
    return AppendixConstant(float(worst), float(g_scale), n_samples, seed, ambient)


def check_opposition(points: Sequence[SL3ChamberPoint], tol: float = 1e-12) -> tuple[bool, int]:
    """(i is an involution on every point, number of points it fixes)."""
    invol = all(np.allclose(opposition_involution(opposition_involution(c)).as_array(),
                            c.as_array(), atol=tol) for c in points)
    fixed = sum(np.allclose(opposition_involution(c).as_array(), c.as_array(), atol=tol)
                for c in points)
    return invol, fixed


__all__ = [
    "PROPER", "NOT_PROPER", "UNKNOWN", "PROPER_SLOPE", "NOT_PROPER_SLOPE",
    "REDUCTIVE_WINDOWS", "proper_pair_predicted", "ideal_slope", "reductive_sample", "PropernessReport",
    "default_radii", "cone_separation", "BPlusCrossing", "sl3_bplus_crossing",
    "AppendixConstant", "appendix_constant", "check_opposition",
]
