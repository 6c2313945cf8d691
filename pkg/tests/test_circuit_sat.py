from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from ptfcount.brute import (
    brute_count_circuit,
    brute_count_conjunction,
    brute_count_poly,
    count_satisfying,
    exact_bias,
    minority_indices,
)
from ptfcount.circuit import Circuit, Gate
from ptfcount.circuit_sat import (
    ParamConfig,
    RestrictionPlan,
    bias_classifier,
    classify_gates,
    count_circuit,
    count_conjunction,
    count_reduced,
    enumerate_minority,
    make_context,
    minority_block,
    oracle_shape,
    plan_restriction,
    simplify,
)
from ptfcount.generate import gen_circuit, random_poly
from ptfcount.hypercube import assignment_to_index
from ptfcount.ldt import ConjunctionOracle
from ptfcount.polynomial import Polynomial
from ptfcount.seeding import rng
from ptfcount.stats import RunStats

from .helpers import depth2_example


def linear(n, coeffs, c0):
    terms = {(i,): c for i, c in enumerate(coeffs) if c}
    terms[()] = c0
    return Polynomial(n, 1, terms)


# parameters


@pytest.mark.parametrize("k, d", [(1, 2), (2, 2), (2, 3), (3, 4)])
def test_param_invariants(k, d):
    cfg = ParamConfig(k=k, d=d)
    eps = [cfg.eps(i) for i in range(1, d + 1)]
    beta = [cfg.beta(i) for i in range(1, d + 1)]
    assert all(a > b for a, b in zip(eps, eps[1:]))
    assert all(a > b for a, b in zip(beta, beta[1:]))
    for n in (4, 14, 100):
        for lvl in range(1, d + 1):
            assert 0 < cfg.delta(lvl, n) < 1
            assert 2 <= cfg.survivors(lvl, n) <= n
    assert cfg.zeta == min(1, 4 / (2 * k * k))
    assert 0 < cfg.saving_exponent < cfg.alpha


def test_clamps_are_logged():
    # a huge A drives the block exponent to almost zero, so n**alpha rounds to 1
    cfg = ParamConfig(k=2, d=2, A=1e12)
    stats = RunStats()
    assert cfg.block(14, stats) == 2
    assert stats.clamps and "block" in stats.clamps[0]


def test_desk_scale_values():
    cfg = ParamConfig(k=2, d=2)
    assert cfg.survivors(1, 14) == 9
    assert cfg.delta(1, 14) == Fraction(1, 4)
    assert cfg.survivors(2, 14) == 14
    assert oracle_shape(14, 2) == (2, 2)


# gate classification


def test_classify_threshold_of_eight_under_restriction():
    # x0 + ... + x7 - 7 keeps an odd coefficient sum, so it never vanishes
    cfg = ParamConfig(k=1, d=2)
    gate = linear(8, [1] * 8, -7)
    plan = RestrictionPlan(8, (0, 1, 2), (3, 4, 5, 6, 7))
    classify = bias_classifier(cfg, 0)
    delta = Fraction(1, 4)
    constant = biased = 0
    for s in range(plan.leaves):
        q = plan.restrict_poly(gate, s)
        constant += exact_bias(q)[1] == 0
        biased += bool(classify_gates([q], delta, 1, classify).biased)
    assert constant == 31
    assert biased == 32
    # all five fixed variables at +1 leaves x0 + x1 + x2 - 2, positive only at (1, 1, 1)
    only = plan.restrict_poly(gate, 0)
    assert exact_bias(only) == (-1, Fraction(1, 8))


def test_single_variable_gate_is_unbiased():
    cls = classify_gates([Polynomial(3, 1, {(0,): 1})], Fraction(1, 4), 0, bias_classifier(ParamConfig(1, 2), 0))
    assert cls.unbiased == [0] and not cls.good


def test_constant_bottom_layer_is_always_good():
    gates = [Gate((), Polynomial.constant(-1)), Gate((), Polynomial.constant(3)),
             Gate((("g", 0), ("g", 1), ("x", 0)), Polynomial(3, 1, {(0,): 1, (1,): 1, (2,): 1}))]
    c = Circuit(6, gates)
    plan, leaves = simplify(c, 2, ParamConfig(k=1, d=2), seed=1)
    for _, _, _, cls in leaves:
        assert cls.good and cls.unbiased == []


def test_plan_covers_all_variables():
    plan = plan_restriction(14, 1, ParamConfig(k=2, d=2), seed=3)
    assert sorted(plan.survivors + plan.fixed) == list(range(14))
    assert len(plan.survivors) >= 2


# minority enumeration


def test_minority_example():
    g = linear(4, [1, 1, 1, 1], -3)
    o = ConjunctionOracle(2, 1, 1, 10, seed=0)
    got = enumerate_minority([g], 4, Fraction(1, 4), o, k=1)
    assert minority_block(Fraction(1, 4), 4, 2) == 1
    assert list(got) == [assignment_to_index((1, 1, 1, 1))]


def test_minority_all_constant():
    o = ConjunctionOracle(2, 1, 1, 10, seed=0)
    got = enumerate_minority([Polynomial.constant(-1, 6, 1)] * 3, 6, Fraction(1, 16), o, k=1)
    assert len(got) == 0


def test_minority_matches_brute_on_unpromised_gates():
    o = ConjunctionOracle(3, 1, 2, 30, seed=2)
    for i in range(5):
        gates = [random_poly(9, 2, 6, rng(i, j)) for j in range(2)]
        got = enumerate_minority(gates, 9, Fraction(1, 64), o, k=2)
        assert np.array_equal(np.sort(got), minority_indices(gates, 9))


# AND of PTFs


def conj(polys, n, seed=0):
    ctx = make_context(max(n, 2), ParamConfig(k=2, d=1), seed)
    return count_conjunction(polys, n, ctx, seed)


def test_conjunction_examples():
    assert conj([linear(2, [-1, 0], 0), linear(2, [0, -1], 0)], 2) == 1
    assert conj([], 5) == 32
    p = random_poly(12, 2, 10, rng(12))
    assert conj([p], 12) == brute_count_poly(p)


def test_conjunction_random_matches_brute():
    for i in range(4):
        ps = [random_poly(11, 2, 6, rng(40, i, j)) for j in range(3)]
        assert conj(ps, 11, seed=i) == brute_count_conjunction(ps)


# depth reduction


def test_depth2_example():
    assert count_circuit(depth2_example())[0] == 1


def test_depth1_delegates_to_conjunction():
    p = random_poly(10, 2, 8, rng(3))
    c = Circuit.single(p)
    got, stats = count_circuit(c)
    assert got == brute_count_poly(p)
    assert stats.level_calls["conjunction"] == 1


def test_contradictory_side_polynomials_give_zero():
    c = gen_circuit(10, 2, 2, seed=7)
    ctx = make_context(10, ParamConfig(k=2, d=2), seed=0)
    p = random_poly(10, 2, 6, rng(1))
    assert count_reduced(c, [p, -p], ctx, seed=0) == 0


def test_constant_output_circuits():
    always = Circuit.single(Polynomial.constant(-1, 6))
    never = Circuit.single(Polynomial.constant(5, 6))
    assert count_circuit(always)[0] == 64
    assert count_circuit(never)[0] == 0


@pytest.mark.parametrize("depth", [2, 3])
def test_random_circuits_match_brute(depth):
    for i in range(6):
        c = gen_circuit(12, 2, depth, seed=100 + i)
        got, stats = count_circuit(c, seed=i)
        assert got == brute_count_circuit(c)
        assert stats.restrictions > 0


def test_side_polynomials_are_respected():
    c = gen_circuit(11, 2, 2, seed=5)
    side = [random_poly(11, 2, 6, rng(6))]
    ctx = make_context(11, ParamConfig(k=2, d=2), seed=0)
    assert count_reduced(c, side, ctx, seed=0) == count_satisfying(11, side, circuit=c)


def test_partition_identity_on_trace():
    for i in range(4):
        c = gen_circuit(10, 2, 2 + i % 2, seed=200 + i)
        trace: list = []
        count_circuit(c, seed=i, trace=trace)
        for entry in trace:
            if entry["good"]:
                direct = count_satisfying(entry["circuit"].n, entry["side"], circuit=entry["circuit"])
                assert entry["minority"] + sum(entry["per_guess"].values()) == direct


# robustness to wrong classifications


def always_biased(value):
    return lambda q, delta: (True, value)


def flipping(seed):
    gen = np.random.default_rng(seed)

    def classify(q, delta):
        return bool(gen.random() < 0.5), int(gen.choice((-1, 1)))

    return classify


@pytest.mark.parametrize("make", [
    lambda: always_biased(1),
    lambda: always_biased(-1),
    lambda: (lambda q, delta: (False, 1)),
    lambda: flipping(0),
    lambda: flipping(1),
])
def test_misclassification_never_changes_the_count(make):
    for i in range(3):
        c = gen_circuit(10, 2, 2 + i % 2, seed=300 + i)
        got, _ = count_circuit(c, seed=i, classifier=make())
        assert got == brute_count_circuit(c)


def test_stats_record_the_size_warning_and_config():
    c = gen_circuit(14, 2, 2, seed=1)
    _, stats = count_circuit(c)
    rec = stats.to_record()
    assert rec["config"]["A"] == 4.0 and rec["config"]["B"] == 1.0
    assert any("exceeds" in w for w in rec["warnings"])
