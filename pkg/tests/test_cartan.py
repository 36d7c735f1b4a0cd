import numpy as np
import pytest
import sympy as sp
from hypothesis import given, strategies as st

from cartanlab import catalog as C
from cartanlab.cartan import (ChamberPoint, SL3ChamberPoint, bplus_distance, cds_criterion,
                              mu, opposition_involution, rho_norm, wedge_norm_of_torus)
from cartanlab.errors import InsufficientData, NotInGroup
from cartanlab.lie_core import SL3, SO2N, GroupElement, a_element, exp_element, random_compact

from oracles import mp_singular_values, wedge_norm_bruteforce

chamber = st.tuples(st.floats(0, 20), st.floats(0, 1)).map(lambda p: (p[0], p[0] * p[1]))


def test_identity_maps_to_origin():
    c = mu(GroupElement(SO2N, 3, np.eye(5)))
    assert (c.u1, c.u2) == (0.0, 0.0)


def test_torus_element_example():
    c = mu(a_element(4, 3.0, 1.0))
    assert abs(c.u1 - 3.0) < 1e-12 and abs(c.u2 - 1.0) < 1e-12


def test_exp_of_l5_torus():
    # l5_pi(t=1) = diag(4, 2, 0, -2, -4), so mu(exp(tH)) = (4t, 2t).
    c = mu(exp_element(C.l5_pi(3, t=1), 2.0))
    assert np.allclose([c.u1, c.u2], [8.0, 4.0], atol=1e-12)


@given(chamber, st.integers(3, 6), st.integers(0, 10**6))
def test_kak_recovers_known_a(a, n, seed):
    rng = np.random.default_rng(seed)
    k1, k2 = random_compact(SO2N, n, rng), random_compact(SO2N, n, rng)
    c = mu(k1 @ a_element(n, *a) @ k2)
    assert abs(c.u1 - a[0]) <= 1e-8 * max(1, a[0]) and abs(c.u2 - a[1]) <= 1e-8 * max(1, a[0])


@given(st.integers(0, 10**6))
def test_mu_is_bi_k_invariant(seed):
    rng = np.random.default_rng(seed)
    X = C.an(4, t1=1, t2=rng.uniform(-1, 1), phi=1, x=[1, 2], y=[0, 1], eta=3)
    g = exp_element(X, 2.0, with_wedge=True)
    k1, k2 = random_compact(SO2N, 4, rng), random_compact(SO2N, 4, rng)
    a, b = mu(g), mu(k1 @ g @ k2)
    assert np.allclose([a.u1, a.u2], [b.u1, b.u2], rtol=1e-9, atol=1e-9)


def test_mu_against_high_precision_singular_values():
    # [DERIVED] mpmath SVD at 60 digits.
    X = C.an(3, t1=1, t2=sp.Rational(1, 2), phi=2, x=[1], y=[-1], eta=1)
    g = exp_element(X, 3.0, with_wedge=True)
    sv = mp_singular_values(g.g)
    c = mu(g)
    assert abs(c.u1 - np.log(sv[0])) < 1e-10
    assert abs(c.u2 - np.log(sv[1])) < 1e-9


def test_mu_of_inverse_in_so2n_is_the_same():
    # The Weyl group of so(2,n) contains -1, so mu(g^-1) = mu(g).
    g = exp_element(C.an(4, t1=2, t2=1, phi=1, x=[1, 1], eta=2), 1.5, with_wedge=True)
    a, b = mu(g), mu(g.inv())
    assert np.allclose([a.u1, a.u2], [b.u1, b.u2], atol=1e-9)


def test_non_group_element_rejected():
    with pytest.raises(NotInGroup):
        mu(GroupElement(SO2N, 3, np.diag([2.0, 1.0, 3.0, 1.0, 1.0])))


def test_chamber_point_outside_rejected():
    with pytest.raises(ValueError):
        ChamberPoint(1.0, 2.0)


@given(chamber, st.integers(3, 6))
def test_rho_norm_is_log_wedge_norm(a, n):
    assert abs(wedge_norm_of_torus(*a, n) - rho_norm(ChamberPoint(*a))) < 1e-9 * max(1, a[0])


def test_rho_norm_example():
    assert abs(rho_norm(ChamberPoint(np.log(2), np.log(1.5))) - np.log(3)) < 1e-15


def test_wedge_bruteforce_oracle_on_torus():
    # [DERIVED] mpmath 2x2 minors.
    g = a_element(3, 1.2, 0.4).g
    assert abs(np.log(wedge_norm_bruteforce(g)) - 1.6) < 1e-12


# -- SL3 ------------------------------------------------------------------------


def test_sl3_diagonal():
    g = GroupElement(SL3, 3, np.diag([4.0, 0.5, 0.5]))
    c = mu(g)
    assert np.allclose(c.as_tuple(), [np.log(4), np.log(0.5), np.log(0.5)], atol=1e-12)


@given(st.floats(0, 8), st.floats(0, 8), st.integers(0, 10**6))
def test_sl3_inverse_is_opposition(a, b, seed):
    rng = np.random.default_rng(seed)
    d = np.exp([a, b - a, -b])
    d /= np.cbrt(np.prod(d))
    k1, k2 = random_compact(SL3, 3, rng), random_compact(SL3, 3, rng)
    g = k1 @ GroupElement(SL3, 3, np.diag(d), None, np.diag(1 / d)) @ k2
    c, ci = mu(g), mu(g.inv())
    assert np.allclose(opposition_involution(c).as_tuple(), ci.as_tuple(), atol=1e-8)


def test_opposition_example_and_involution():
    c = SL3ChamberPoint(3.0, 1.0, -4.0)
    assert opposition_involution(c).as_tuple() == (4.0, -1.0, -3.0)
    assert opposition_involution(opposition_involution(c)) == c


def test_bplus_distance_examples():
    assert bplus_distance(SL3ChamberPoint(2.0, 0.0, -2.0)) < 1e-15
    c = SL3ChamberPoint(2.0, 1.0, -3.0)
    # the v2 component cannot be reached along (1,0,-1); distance is |v - proj|
    v = np.array(c.as_tuple())
    d = np.array([1, 0, -1]) / np.sqrt(2)
    assert abs(bplus_distance(c) - np.linalg.norm(v - (v @ d) * d)) < 1e-15


# -- CDS sector test --------------------------------------------------------------


def test_cds_fills_on_the_whole_chamber():
    rng = np.random.default_rng(0)
    r = np.exp(rng.uniform(0, np.log(64), 4000))
    th = rng.uniform(0, 1, 4000)
    pts = [ChamberPoint(x, x * f) for x, f in zip(r, th)]
    assert cds_criterion(pts) == "fills"


def test_cds_thin_on_a_ray():
    pts = [ChamberPoint(x, 0.0) for x in np.geomspace(1, 64, 200)]
    assert cds_criterion(pts) == "thin"


def test_cds_needs_points():
    with pytest.raises(InsufficientData):
        cds_criterion([ChamberPoint(1.0, 0.0)])
