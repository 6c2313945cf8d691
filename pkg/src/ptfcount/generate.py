"""Random instances with guaranteed nonvanishing gates.

A multilinear integer polynomial evaluated at a +-1 point is congruent to
its coefficient sum modulo 2, so forcing that sum to be odd keeps every
value away from zero.
"""
from __future__ import annotations

from math import floor

import numpy as np

from .circuit import Circuit, Gate
from .errors import InfeasibleBudget
from .hypercube import value_table
from .polynomial import Polynomial, monomial_order
from .seeding import rng


def random_poly(n: int, k: int, coeff_bits: int, gen: np.random.Generator,
                density: float = 1.0, const_scale: int = 1) -> Polynomial:
    """Degree-``k`` polynomial on ``n`` variables with an odd coefficient sum.

    Each monomial of degree <= k is kept with probability ``density``; the
    constant term is always present and drawn ``const_scale`` times wider.
    """
    k = min(k, n)
    hi = 1 << coeff_bits
    terms: dict[tuple[int, ...], int] = {}
    for mono in monomial_order(n, k):
        if mono and gen.random() >= density:
            continue
        width = hi * const_scale if not mono else hi
        c = int(gen.integers(-width + 1, width))
        if c:
            terms[mono] = c
    if sum(terms.values()) % 2 == 0:
        terms[()] = terms.get((), 0) + (1 if gen.random() < 0.5 else -1)
    return Polynomial(n, k, terms)


def gen_ptf(n: int, k: int, coeff_bits: int = 8, seed: int = 0, density: float = 1.0) -> Polynomial:
    return random_poly(n, k, coeff_bits, rng(seed, "ptf", n, k), density)


def default_budget(n: int) -> int:
    return max(1, floor(n ** 1.1))


def gen_circuit(n: int, k: int, depth: int, size: int | None = None, coeff_bits: int = 4,
                seed: int = 0, bottom: int = 3, width: int = 2, biased: float = 0.7) -> Circuit:
    """Layered circuit of exactly the requested depth and at most ``size`` wires.

    Every non-bottom gate reads all gates of the layer beneath it. The
    remaining wire budget is spread over ``bottom`` gates reading random
    input variables. A fraction ``biased`` of the bottom gates draw their
    constant term from a doubled range, which tilts them towards one value
    without usually making them constant. Upper gates are redrawn (a few times at most)
    until they are not constant functions of their inputs.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    size = default_budget(n) if size is None else size
    gen = rng(seed, "circuit", n, k, depth, size)
    if depth == 1:
        widths = [1]
    else:
        widths = [bottom] + [width] * (depth - 2) + [1]
    upper = sum(widths[i] * widths[i - 1] for i in range(1, depth))
    spare = size - upper
    if spare < widths[0]:
        raise InfeasibleBudget(f"size {size} cannot hold a depth-{depth} circuit with these widths")
    fan = min(n, spare // widths[0])
    gates: list[Gate] = []
    prev: list[int] = []
    for layer, w in enumerate(widths):
        cur = []
        for _ in range(w):
            if layer == 0:
                picked = sorted(int(v) for v in gen.choice(n, size=fan, replace=False))
                inputs = tuple(("x", v) for v in picked)
            else:
                inputs = tuple(("g", j) for j in prev)
            scale = 2 if layer == 0 and gen.random() < biased else 1
            poly = random_poly(len(inputs), k, coeff_bits, gen, const_scale=scale)
            for _ in range(20 if layer else 0):
                vals = value_table(poly)
                if vals.min() < 0 < vals.max():
                    break
                poly = random_poly(len(inputs), k, coeff_bits, gen)
            cur.append(len(gates))
            gates.append(Gate(inputs, poly))
        prev = cur
    return Circuit(n, gates)


def gen_instance(kind: str, n: int, k: int, depth: int = 1, size: int | None = None,
                 coeff_bits: int = 8, seed: int = 0) -> Polynomial | Circuit:
    """A ``ptf`` (Polynomial) or ``circuit`` instance, deterministic in ``seed``.

    A circuit request of depth 1 yields a single polynomial.
    """
    if kind == "ptf" or (kind == "circuit" and depth == 1):
        return gen_ptf(n, k, coeff_bits, seed)
    if kind == "circuit":
        return gen_circuit(n, k, depth, size, coeff_bits, seed)
    raise ValueError(f"unknown instance kind {kind!r}")
