from __future__ import annotations

from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from ptfcount.brute import (
    brute_count_circuit,
    brute_count_conjunction,
    brute_count_poly,
    count_satisfying,
    exact_bias,
    minority_indices,
    sign_table,
)
from ptfcount.circuit import Circuit
from ptfcount.errors import LimitExceeded, ZeroValue
from ptfcount.generate import random_poly
from ptfcount.hypercube import assignment_to_index
from ptfcount.polynomial import Polynomial
from ptfcount.seeding import rng

from .helpers import depth2_example


def lin(n, coeffs, c0=0):
    terms = {(i,): c for i, c in enumerate(coeffs) if c}
    terms[()] = c0
    return Polynomial(n, 1, terms)


def test_brute_count_poly_examples():
    assert brute_count_poly(Polynomial(2, 2, {(0, 1): 1})) == 2
    assert brute_count_poly(lin(3, [1, 1, 1], -2)) == 7
    assert brute_count_poly(Polynomial.constant(1, 3)) == 0


def test_brute_count_poly_zero_and_limit():
    with pytest.raises(ZeroValue):
        brute_count_poly(lin(2, [1, 1]))
    with pytest.raises(LimitExceeded):
        brute_count_poly(Polynomial.constant(-1, 30))


def test_brute_count_conjunction_examples():
    assert brute_count_conjunction([lin(2, [-1, 0]), lin(2, [0, -1])]) == 1
    assert brute_count_conjunction([], n=3) == 8
    x01 = Polynomial(2, 2, {(0, 1): 1})
    assert brute_count_conjunction([x01, -x01]) == 0


def test_brute_count_circuit_examples():
    assert brute_count_circuit(depth2_example()) == 1
    assert brute_count_circuit(Circuit.single(Polynomial.constant(-1, 4))) == 16
    assert brute_count_circuit(Circuit.single(Polynomial.constant(3, 4))) == 0


def test_exact_bias_examples():
    assert exact_bias(lin(3, [1, 1, 1], -2)) == (-1, Fraction(1, 8))
    assert exact_bias(lin(1, [1])) == (1, Fraction(1, 2))
    assert exact_bias(Polynomial.constant(-1, 2)) == (-1, Fraction(0))


def test_count_matches_pointwise_enumeration():
    for seed in range(5):
        p = random_poly(7, 2, 8, rng(seed))
        q = random_poly(7, 2, 8, rng(seed, 1))
        direct = sum(
            p.value(a) < 0 and q.value(a) < 0 for a in product((-1, 1), repeat=7)
        )
        assert brute_count_conjunction([p, q]) == direct


def test_large_support_block_path_agrees_with_split_count():
    # 22 variables with full support exceeds the lookup-table size and uses block restriction
    p = random_poly(22, 1, 6, rng(9))
    total = brute_count_poly(p)
    split = sum(
        brute_count_poly(p.restrict({21: s}).relabel({i: i for i in range(21)}, 21))
        for s in (1, -1)
    )
    assert total == split


def test_minority_indices_and_sign_table():
    p = lin(3, [1, 1, 1], -2)
    assert list(minority_indices([p], 3)) == [assignment_to_index((1, 1, 1))]
    table = sign_table(p)
    assert table.sum() == 7 and not table[assignment_to_index((1, 1, 1))]


def test_count_satisfying_stats():
    from ptfcount.stats import RunStats

    stats = RunStats()
    count_satisfying(5, [lin(5, [1, 0, 0, 0, 0])], stats=stats)
    assert stats.brute_assignments == 32
    assert np.isscalar(stats.brute_assignments)
