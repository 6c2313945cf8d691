from __future__ import annotations

import numpy as np
import pytest

from ptfcount.circuit import Circuit
from ptfcount.errors import InfeasibleBudget
from ptfcount.generate import default_budget, gen_circuit, gen_instance
from ptfcount.hypercube import value_table
from ptfcount.polynomial import Polynomial


def test_same_seed_same_instance():
    assert gen_instance("circuit", 12, 2, 3, seed=5) == gen_instance("circuit", 12, 2, 3, seed=5)
    assert gen_instance("ptf", 12, 2, seed=5) == gen_instance("ptf", 12, 2, seed=5)
    assert gen_instance("ptf", 12, 2, seed=5) != gen_instance("ptf", 12, 2, seed=6)


@pytest.mark.parametrize("n", range(1, 13))
def test_generated_polynomials_never_vanish(n):
    for seed in range(3):
        p = gen_instance("ptf", n, min(2, n), coeff_bits=4, seed=seed)
        assert p.coefficient_sum() % 2 == 1
        assert np.all(value_table(p) != 0)


def test_circuit_gates_have_odd_sums_and_fit_budget():
    for seed in range(20):
        for depth in (2, 3, 4):
            c = gen_circuit(14, 2, depth, size=24, seed=seed)
            assert c.depth == depth
            assert c.size <= 24
            assert all(g.poly.coefficient_sum() % 2 for g in c.gates)


def test_depth_one_gives_a_polynomial():
    assert isinstance(gen_instance("circuit", 8, 2, depth=1), Polynomial)
    assert isinstance(gen_instance("circuit", 8, 2, depth=2), Circuit)


def test_infeasible_budget():
    with pytest.raises(InfeasibleBudget):
        gen_circuit(10, 2, 3, size=5)


def test_default_budget():
    assert default_budget(14) == 18
