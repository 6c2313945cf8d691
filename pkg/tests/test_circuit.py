from __future__ import annotations

from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ptfcount.circuit import Circuit, Gate, eval_circuit, restrict_circuit
from ptfcount.errors import ZeroValue
from ptfcount.generate import gen_circuit
from ptfcount.hypercube import assignment_to_index
from ptfcount.polynomial import Polynomial

from .helpers import depth2_example


def test_eval_examples():
    single = Circuit.single(Polynomial(1, 1, {(0,): -1}))
    assert eval_circuit(single, (1,)) == -1
    c = depth2_example()
    assert eval_circuit(c, (1, 1)) == -1
    assert eval_circuit(c, (-1, 1)) == 1


def test_structure():
    c = depth2_example()
    assert c.depth == 2
    assert c.size == 4
    assert c.bottom_gates() == [0, 1]
    assert c.k == 1


def test_eval_zero_gate_raises():
    g = Gate((("x", 0), ("x", 1)), Polynomial(2, 1, {(0,): 1, (1,): 1}))
    with pytest.raises(ZeroValue):
        eval_circuit(Circuit(2, [g]), (1, -1))


def test_validation():
    with pytest.raises(ValueError):
        Circuit(1, [Gate((("x", 3),), Polynomial(1, 1, {(0,): 1}))])
    with pytest.raises(ValueError):
        Circuit(1, [Gate((("g", 0),), Polynomial(1, 1, {(0,): 1}))])
    with pytest.raises(ValueError):
        Gate((("x", 0),), Polynomial(2, 1, {(0,): 1}))


@settings(max_examples=1000)
@given(st.integers(0, 10_000), st.integers(2, 3), st.data())
def test_restriction_commutes_with_evaluation(seed, depth, data):
    c = gen_circuit(8, 2, depth, size=16, seed=seed)
    a = data.draw(st.lists(st.sampled_from((-1, 1)), min_size=8, max_size=8))
    fixed = data.draw(st.sets(st.integers(0, 7)))
    r = restrict_circuit(c, {i: a[i] for i in fixed})
    assert r.evaluate(a) == c.evaluate(a)
    assert r.depth <= c.depth


def test_satisfied_mask_matches_evaluate():
    c = gen_circuit(9, 2, 3, seed=4)
    idx = np.arange(1 << 9, dtype=np.uint64)
    mask = c.satisfied_mask(idx)
    for a in product((-1, 1), repeat=9):
        assert mask[assignment_to_index(a)] == (c.evaluate(a) == -1)


def test_replace_gates_feeds_constants():
    c = depth2_example()
    r = c.replace_gates({0: -1, 1: 1})
    assert r.depth == 1
    top = r.output_polynomial()
    assert top.is_constant() and top.constant_term == 1  # -1 + 1 + 1
    with pytest.raises(ValueError):
        c.replace_gates({2: 1})


def test_lift_bottom_gate():
    c = gen_circuit(10, 2, 2, seed=1)
    for j in c.bottom_gates():
        q = c.lift(j)
        g = c.gates[j]
        for a in product((-1, 1), repeat=10):
            assert q.value(a) == g.poly.value([a[i] for _, i in g.inputs])
            break


def test_relabel_permutes_inputs():
    c = gen_circuit(6, 2, 2, seed=2)
    perm = {i: 5 - i for i in range(6)}
    r = c.relabel(perm, 6)
    for a in product((-1, 1), repeat=6):
        assert r.evaluate(a[::-1]) == c.evaluate(a)
