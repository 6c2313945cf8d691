from __future__ import annotations

import pytest

from ptfcount.circuit import Circuit
from ptfcount.errors import DegreeExceeded, ParseError
from ptfcount.generate import gen_instance
from ptfcount.polynomial import Polynomial
from ptfcount.ptfc import parse_instance, serialize

from .helpers import depth2_example


def test_parse_example():
    p = parse_instance("ptfc v1\nnvars 2\nptf k=2\nterm 1 : 0 1\nterm -1 :")
    assert p == Polynomial(2, 2, {(0, 1): 1, (): -1})


def test_canonical_form_merges_and_sorts():
    text = "ptfc v1  # header\n\nnvars 3\nptf k=2\nterm 2 : 1 0\nterm 5 :\nterm -2 : 0 1\nterm 1 : 2\n"
    assert serialize(parse_instance(text)) == "ptfc v1\nnvars 3\nptf k=2\nterm 5 :\nterm 1 : 2\n"


@pytest.mark.parametrize("i", range(100))
def test_round_trip_generated(i):
    kind = "ptf" if i % 2 else "circuit"
    obj = gen_instance(kind, 8 + i % 5, 2, 2 + i % 2, 24, 6, seed=i)
    text = serialize(obj)
    again = parse_instance(text, strict=True)
    assert again == obj
    assert serialize(again) == text


def test_circuit_round_trip():
    c = depth2_example()
    assert parse_instance(serialize(c)) == c
    assert isinstance(parse_instance(serialize(c)), Circuit)


def test_degree_exceeded():
    with pytest.raises(DegreeExceeded):
        parse_instance("ptfc v1\nnvars 3\nptf k=2\nterm 1 : 0 1 2\n")


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("ptfc v2\nnvars 1\nptf k=1\n", 1, 1),
        ("ptfc v1\nnvars x\n", 2, 7),
        ("ptfc v1\nnvars 2\nptf k=1\nterm 1 0\n", 4, 8),
        ("ptfc v1\nnvars 2\nptf k=1\nterm z : 0\n", 4, 6),
        ("ptfc v1\nnvars 2\nptf k=1\nterm 1 : 7\n", 4, 10),
        ("ptfc v1\nnvars 2\ngate g0 inputs x0 x9 k=1\nterm 1 :\noutput g0\n", 3, 19),
        ("ptfc v1\nnvars 2\ngate g0 inputs g0 k=1\nterm 1 :\noutput g0\n", 3, 16),
        ("ptfc v1\nnvars 2\ngate g1 inputs x0 k=1\nterm 1 :\noutput g1\n", 3, 6),
        ("ptfc v1\nnvars 2\ngate g0 inputs x0 k=1\nterm 1 :\n", 5, 1),
        ("ptfc v1\nnvars 2\nbogus\n", 3, 1),
    ],
)
def test_syntax_errors_report_position(text, line, column):
    with pytest.raises(ParseError) as err:
        parse_instance(text)
    assert (err.value.line, err.value.column) == (line, column)


def test_strict_rejects_even_sum():
    text = "ptfc v1\nnvars 2\nptf k=1\nterm 1 : 0\nterm 1 :\n"
    assert parse_instance(text).coefficient_sum() == 2
    with pytest.raises(ParseError):
        parse_instance(text, strict=True)


def test_zero_input_gate_round_trips():
    c = depth2_example().replace_gates({0: -1})
    assert parse_instance(serialize(c)) == c
