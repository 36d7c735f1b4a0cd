import json

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from cartanlab import catalog as C
from cartanlab.errors import NotClosed
from cartanlab.io import (ParseError, dumps, load_json, load_subalgebra, matrix_from_json,
                          scalar_from_json, scalar_to_json, subalgebra_from_json,
                          subalgebra_to_json)


@pytest.mark.parametrize("v,expected", [
    (3, 3), ("1/2", sp.Rational(1, 2)), (0.5, sp.Rational(1, 2)), ("sqrt(6)", sp.sqrt(6)),
    ("-2", -2),
])
def test_scalar_from_json(v, expected):
    assert scalar_from_json(v, "x") == expected


@pytest.mark.parametrize("v", [True, None, [1], "abc(", "I"])
def test_bad_scalars(v):
    with pytest.raises(ParseError):
        scalar_from_json(v, "x")


@given(st.fractions(max_denominator=50))
def test_scalar_round_trip(q):
    assert scalar_from_json(scalar_to_json(sp.Rational(q.numerator, q.denominator)), "x") == q


@pytest.mark.parametrize("label,n", [("h_B", 4), ("so1n_an", 5), ("l5_an", 3), ("T2.6-8", 4),
                                     ("sl2-top-left", None), ("so1n", 3)])
def test_subalgebra_round_trip(label, n):
    h = C.build(label, n)
    doc = json.loads(dumps(subalgebra_to_json(h)))
    g = subalgebra_from_json(doc)
    assert g.same_span(h) and g.label == h.label


def test_field_path_in_error():
    doc = {"ambient": "so2n", "n": 4, "basis": [{"x": [1, 2]}, {"y": [1, 2, 3]}]}
    with pytest.raises(ParseError, match=r"basis\[1\]\.y: expected length 2, got 3"):
        subalgebra_from_json(doc)


@pytest.mark.parametrize("doc,fragment", [
    ({"ambient": "so3", "basis": []}, "ambient"),
    ({"ambient": "so2n", "n": 2, "basis": []}, "n:"),
    ({"ambient": "so2n", "n": 4}, "basis"),
    ({"ambient": "so2n", "n": 4, "basis": [{"zeta": 1}]}, "unknown fields"),
    ({"ambient": "sl3", "basis": [{"phi": 1}]}, "matrix"),
    ({"ambient": "sl3", "basis": [{"matrix": [[1, 0], [0, 1, 2]]}]}, "ragged"),
    ({"ambient": "sl3", "basis": [{"matrix": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}]}, "basis[0].matrix"),
])
def test_invalid_documents(doc, fragment):
    with pytest.raises(ParseError) as exc:
        subalgebra_from_json(doc)
    assert fragment in str(exc.value)


def test_non_closed_input():
    doc = {"ambient": "so2n", "n": 4, "basis": [{"x": [1, 0]}, {"y": [1, 0]}]}
    with pytest.raises(NotClosed):
        subalgebra_from_json(doc)


def test_load_json_reports_position(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"ambient": "so2n",\n  "n": }')
    with pytest.raises(ParseError, match="line 2 column"):
        load_json(str(p))
    with pytest.raises(ParseError):
        load_subalgebra(str(tmp_path / "missing.json"))


def test_matrix_from_json():
    M = matrix_from_json([[0, "1/2"], [-1, 0.25]])
    assert M == sp.Matrix([[0, sp.Rational(1, 2)], [-1, sp.Rational(1, 4)]])
    with pytest.raises(ParseError):
        matrix_from_json([])


def test_dumps_is_sorted_and_stable():
    h = C.h_SU(2)
    assert dumps(subalgebra_to_json(h)) == dumps(subalgebra_to_json(C.h_SU(2)))
    assert dumps({"b": 1, "a": 2}).index('"a"') < dumps({"b": 1, "a": 2}).index('"b"')
