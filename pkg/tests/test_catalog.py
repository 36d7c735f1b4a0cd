import numpy as np
import pytest
import sympy as sp
from hypothesis import given, strategies as st

from cartanlab import catalog as C
from cartanlab.errors import (DimensionMismatch, InvalidDimension, InvalidParams,
                              NotClosed, RealEigenvalue, UnknownLabel, Unrealizable)
from cartanlab.lie_core import SL3, SO2N, bracket, form_matrix

from oracles import charpoly

REMARK_B = [[0, 1, 0, 1], [-1, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0]]


def in_so(h):
    Q = form_matrix(h.n).Q
    return all((b.M.T * Q + Q * b.M).applyfunc(sp.expand) == sp.zeros(h.n + 2, h.n + 2)
               for b in h.basis)


def in_sl3(h):
    return all(b.M.trace() == 0 and b.M.shape == (3, 3) for b in h.basis)


# -- h_B ----------------------------------------------------------------------


def test_h_su_m2_dimension_and_label():
    h = C.h_SU(2)
    assert (h.n, h.dim, h.label) == (4, 4, "h_SU")


def test_h_b_remark_matrix():
    B = C.DeformationMatrix(REMARK_B)
    # [PAPER] the explicit m=3 matrix has characteristic polynomial lam^4 - lam^2 + 1
    p, lam = charpoly(B.B)
    assert sp.expand(p - (lam**4 - lam**2 + 1)) == 0
    h = C.h_B(3, B)
    assert h.dim == 6 and in_so(h)


def test_h_b_rejects_real_eigenvalue():
    with pytest.raises(RealEigenvalue):
        C.h_B(2, [[1, 0], [0, 1]])


def test_h_b_rejects_wrong_size():
    with pytest.raises(DimensionMismatch):
        C.h_B(3, [[0, 1], [-1, 0]])


def test_h_b_rejects_small_m():
    with pytest.raises(InvalidDimension):
        C.h_B(1, [])


@given(st.integers(2, 4), st.integers(0, 10**6))
def test_random_h_b_closed(m, seed):
    D = C.random_deformation(2 * m - 2, np.random.default_rng(seed))
    h = C.h_B(m, D)
    assert h.dim == 2 * m and h.is_closed() and in_so(h)


def test_non_closed_span_is_rejected():
    with pytest.raises(NotClosed):
        C.Subalgebra.span(SO2N, 4, [C.an(4, x=[1, 0]), C.an(4, y=[1, 0])])


# -- reductive pieces ---------------------------------------------------------


@pytest.mark.parametrize("n", [3, 4, 5])
def test_so1n_an(n):
    h = C.so1n_an(n)
    assert h.dim == n and in_so(h)
    assert all(b.coords.eta == b.coords.phi and b.coords.t2 == 0 for b in h.basis)


@pytest.mark.parametrize("n", [3, 4])
def test_so1n_full(n):
    h = C.so1n(n)
    assert h.dim == n * (n + 1) // 2 and in_so(h)
    v = sp.Matrix(C.so1n_vector(n))
    assert form_matrix(n).quadratic(list(v)) < 0
    assert all(b.M * v == sp.zeros(n + 2, 1) for b in h.basis)


def test_l5_pi_values():
    # [PAPER] the torus maps to diag(4, 2, 0, -2, -4); u to phi = 2, y = sqrt6 e1
    X = C.l5_pi(3, t=1)
    assert X.M == sp.diag(4, 2, 0, -2, -4)
    c = C.l5_pi(3, u=1).coords
    assert c.phi == 2 and c.y == (sp.sqrt(6),) and c.x == (0,) and c.eta == 0


@pytest.mark.parametrize("n", [3, 5])
def test_l5_is_a_homomorphic_image(n):
    H, E, F = C.l5_pi(n, t=1), C.l5_pi(n, u=1), C.l5_pi(n, v=1)
    # sl2 relations [H,E]=2E, [H,F]=-2F, [E,F]=H with H = diag(1,-1)
    assert bracket(H, E) == E * 2
    assert bracket(H, F) == F * -2
    assert bracket(E, F) == H
    assert C.l5(n).dim == 3 and in_so(C.l5(n))


def test_l5_an():
    h = C.l5_an(4)
    assert h.dim == 2 and h.in_an


@pytest.mark.parametrize("n", [3, 4, 6])
def test_full_an_dimensions(n):
    assert C.full_an(n).dim == 2 * n
    assert C.full_a(n).dim == 2
    assert C.full_n(n).dim == 2 * n - 2


# -- exemplars ----------------------------------------------------------------


@pytest.mark.parametrize("item", [x for x in C.EXEMPLAR_LABELS if x not in C.UNREALIZABLE])
def test_every_exemplar_is_a_closed_subalgebra_of_an(item):
    rng = np.random.default_rng(7)
    for n in (C.DEFAULT_N[item], C.DEFAULT_N[item] + 1):
        for P in ({}, C.sample_params(item, n, rng)):
            h = C.exemplar(item, n, P)
            assert h.in_an and h.is_closed() and in_so(h)
            assert h.label == item


def test_unrealizable_item():
    with pytest.raises(Unrealizable):
        C.exemplar("T2.9-5", 4)


def test_unknown_item():
    with pytest.raises(UnknownLabel):
        C.exemplar("T9.9", 4)
    with pytest.raises(UnknownLabel):
        C.build("nope", 4)


def test_invalid_exemplar_params():
    with pytest.raises(DimensionMismatch):
        C.exemplar("T2.5-1", 4, {"element": {"x": [1, 2, 3]}})
    with pytest.raises(InvalidParams):
        C.torus_in_kernel((0, 0))


# -- sl(3,R) ------------------------------------------------------------------


@pytest.mark.parametrize("which,dim", [("sl2-top-left", 3), ("full-diagonal-torus", 2),
                                       ("upper-triangular-2d", 2), ("so3", 3), ("borel", 5)])
def test_sl3_subgroups(which, dim):
    h = C.sl3_subgroups(which)
    assert h.ambient == SL3 and h.dim == dim and in_sl3(h) and h.is_closed()


# -- conjugation and labels ---------------------------------------------------


@given(st.integers(0, 10**6))
def test_conjugation_preserves_dimension_and_closure(seed):
    rng = np.random.default_rng(seed)
    Z = C.an(4, phi=C._rq(rng), x=[C._rq(rng), C._rq(rng)], y=[C._rq(rng), C._rq(rng)],
             eta=C._rq(rng))
    h = C.h_SU(2)
    g = C.conjugate(h, Z)
    assert g.dim == h.dim and g.is_closed() and in_so(g)


def test_catalog_labels_n4():
    labels = C.catalog_labels(4)
    assert len(labels) + len(C.SL3_WHICH) == 33 and "h_B" in labels and "T2.9-5" not in labels
    assert "h_B" not in C.catalog_labels(5)


def test_build_h_b_needs_even_n():
    with pytest.raises(InvalidDimension):
        C.build("h_B", 5)


def test_default_hb_matrix_is_generic():
    B = sp.Matrix(C.default_hb_matrix(3))
    assert not C.DeformationMatrix(B).has_real_eigenvalue()
    assert (B.T - B).det() != 0
