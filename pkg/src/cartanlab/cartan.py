"""Cartan projection, chamber coordinates and SL(3) opposition geometry.

For SO(2,n) the form's orthonormal eigenbasis ``P`` turns the Cartan
involution into transpose-inverse, so g in K mu(g) K is just an SVD.  The
singular values of g come as {s1, s2, 1, ..., 1, 1/s2, 1/s1}; we return
(u1, u2) = (log s1, log s2).

u1 + u2 is read from the top singular value of g ^ g rather than from the
second singular value of g: when s1 >> s2 the latter is polluted by
roundoff of order eps * s1.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InsufficientData, NotInGroup
from .lie_core import SL3, SO2N, GroupElement, compound2

WALL_SLACK = 1e-9
PATTERN_TOL = 1e-7
EPS = np.finfo(float).eps


@dataclass(frozen=True)
class ChamberPoint:
    """log Cartan coordinates (u1, u2), u1 >= u2 >= 0."""

    u1: float
    u2: float

    def __post_init__(self):
        if not (self.u1 + WALL_SLACK >= self.u2 >= -WALL_SLACK):
            raise ValueError(f"({self.u1}, {self.u2}) is outside the closed chamber")

    @property
    def radius(self) -> float:
        return float(np.hypot(self.u1, self.u2))

    def as_array(self) -> np.ndarray:
        return np.array([self.u1, self.u2])


@dataclass(frozen=True)
class SL3ChamberPoint:
    """log Cartan coordinates (v1, v2, v3) of SL(3,R), decreasing, sum zero."""

    v1: float
    v2: float
    v3: float

    def __post_init__(self):
        if not (self.v1 + WALL_SLACK >= self.v2 >= self.v3 - WALL_SLACK):
            raise ValueError(f"{self.as_tuple()} is not ordered")
        if abs(self.v1 + self.v2 + self.v3) > WALL_SLACK * max(1.0, abs(self.v1)):
            raise ValueError(f"{self.as_tuple()} does not sum to zero")

    def as_tuple(self) -> tuple:
        return (self.v1, self.v2, self.v3)

    def as_array(self) -> np.ndarray:
        return np.array(self.as_tuple())


def _top_singular(A: np.ndarray) -> float:
    return float(np.linalg.norm(A, 2))


def mu(g: GroupElement, pattern_tol: float = PATTERN_TOL,
       wall_slack: float = WALL_SLACK) -> ChamberPoint | SL3ChamberPoint:
    """Cartan projection of ``g``."""
    if g.ambient == SL3:
        return _mu_sl3(g, pattern_tol)
    if g.ambient != SO2N:
        raise NotInGroup(f"unknown ambient {g.ambient!r}")
    sv = np.linalg.svd(g.g, compute_uv=False)
    if not np.all(np.isfinite(sv)) or sv[0] <= 0:
        raise NotInGroup("zero or non-finite matrix")
    N = len(sv)
    s1 = sv[0]
    noise = 16 * N * EPS * s1
    # Absolute error of each computed singular value is about eps * s1, so
    # values below the noise floor cannot be checked against the pattern.
    for i in range(N // 2):
        small = sv[N - 1 - i]
        if small <= noise:
            continue
        allowed = pattern_tol + noise / small
        if abs(np.log(sv[i]) + np.log(small)) > allowed:
            raise NotInGroup(f"singular values {sv[i]:.6g}, {small:.6g} do not pair")
    logs = np.log(np.maximum(sv, np.finfo(float).tiny))
    for i in range(2, N - 2):
        if abs(logs[i]) > pattern_tol + 16 * N * EPS * s1:
            raise NotInGroup(f"singular value {sv[i]:.6g} should be 1")
    u1 = float(logs[0])
    u12 = float(np.log(_top_singular(g.wedge_matrix())))
    u2 = u12 - u1
    if u2 < -pattern_tol:
        raise NotInGroup(f"wedge norm below the pattern ({u2:.3e})")
    u2 = min(max(u2, 0.0), u1)
    return ChamberPoint(u1, u2)


def _mu_sl3(g: GroupElement, pattern_tol: float) -> SL3ChamberPoint:
    A = g.g
    det = np.linalg.det(A)
    s1 = _top_singular(A)
    if not np.isfinite(det) or abs(det - 1.0) > pattern_tol * max(1.0, s1) ** 3:
        raise NotInGroup(f"det = {det!r}")
    inv = g.inverse if g.inverse is not None else np.linalg.inv(A)
    v1 = float(np.log(s1))
    v3 = -float(np.log(_top_singular(inv)))
    v2 = -(v1 + v3)
    v2 = min(max(v2, v3), v1)
    return SL3ChamberPoint(v1, v2, -(v1 + v2))


def rho_norm(c: ChamberPoint) -> float:
    """log of the operator norm of a ^ a for a = exp(c)."""
    return c.u1 + c.u2


def wedge_norm_of_torus(u1: float, u2: float, n: int) -> float:
    """Brute-force oracle: build diag(...) ^ diag(...) and take its norm."""
    d = np.ones(n + 2)
    d[0], d[1], d[-2], d[-1] = np.exp(u1), np.exp(u2), np.exp(-u2), np.exp(-u1)
    return float(np.log(_top_singular(compound2(np.diag(d)))))


def cds_criterion(points: Sequence[ChamberPoint], n_bins: int = 8, min_points: int = 20,
                  base_radius: float = 1.0) -> str:
    """Sector-coverage test for mu(H) filling the chamber.

    Directions u2/u1 in [0, 1] are split into ``n_bins`` bins and radii into
    dyadic annuli [base*2^k, base*2^(k+1)) up to half the largest sampled
    radius.  Returns "fills" if every bin is hit in every annulus, "thin"
    if some bin is missed in all of the upper half of the annuli, else
    "inconclusive".
    """
    pts = np.array([[p.u1, p.u2] for p in points], dtype=float).reshape(-1, 2)
    if len(pts) < min_points:
        raise InsufficientData(f"{len(pts)} points, need at least {min_points}")
    r = np.hypot(pts[:, 0], pts[:, 1])
    keep = r >= base_radius
    pts, r = pts[keep], r[keep]
    if len(pts) == 0:
        raise InsufficientData("no points beyond the base radius")
    horizon = r.max() / 2.0
    n_ann = int(np.floor(np.log2(horizon / base_radius))) if horizon > base_radius else 0
    if n_ann < 2:
        return "inconclusive"
    ratio = np.clip(pts[:, 1] / pts[:, 0], 0.0, 1.0)
    bins = np.minimum((ratio * n_bins).astype(int), n_bins - 1)
    ann = np.floor(np.log2(r / base_radius)).astype(int)
    hit = np.zeros((n_ann, n_bins), dtype=bool)
    sel = ann < n_ann
    hit[ann[sel], bins[sel]] = True
    if hit.all():
        return "fills"
    upper = hit[n_ann // 2:]
    if (~upper.any(axis=0)).any():
        return "thin"
    return "inconclusive"


def opposition_involution(c: SL3ChamberPoint) -> SL3ChamberPoint:
    """A+ representative of mu(g^-1) given mu(g)."""
    return SL3ChamberPoint(-c.v3, -c.v2, -c.v1)


def bplus_distance(c: SL3ChamberPoint) -> float:
    """Euclidean distance from ``c`` to the fixed ray {(s, 0, -s) : s >= 0}."""
    v = c.as_array()
    d = np.array([1.0, 0.0, -1.0]) / np.sqrt(2.0)
    s = max(0.0, float(v @ d))
    return float(np.linalg.norm(v - s * d))


def chamber_array(points: Iterable[ChamberPoint]) -> np.ndarray:
    return np.array([[p.u1, p.u2] for p in points], dtype=float).reshape(-1, 2)


__all__ = [
    "WALL_SLACK", "PATTERN_TOL", "ChamberPoint", "SL3ChamberPoint", "mu", "rho_norm",
    "wedge_norm_of_torus", "cds_criterion", "opposition_involution", "bplus_distance",
    "chamber_array",
]
