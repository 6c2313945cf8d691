"""
Counting a single threshold function with memoised decision trees
=================================================================

A random degree-2 polynomial on 18 variables is counted two ways: by
enumerating all 2^18 points, and by splitting off a small block of
variables, turning each restriction of the rest into a coefficient vector,
and letting a decision tree classify that vector. Restrictions with the
same answers share a tree leaf, so the number of leaves, not the number of
restrictions, is what the counter pays for in exact work.
"""
from __future__ import annotations

import time

from ptfcount import PtfSatConfig, brute_count_poly, count_ptf
from ptfcount.generate import gen_ptf
from ptfcount.polynomial import weight

p = gen_ptf(18, 2, coeff_bits=16, seed=11)
print(f"{len(p.terms)} terms, weight {weight(p)} bits")

t = time.perf_counter()
truth = brute_count_poly(p)
print(f"exhaustive count: {truth}  ({time.perf_counter() - t:.2f}s)")

# a block of 4 variables: 2^14 restrictions, each a 11-dimensional vector
got, stats = count_ptf(p, PtfSatConfig(seed=1, m=4))
print(f"tree count:       {got}")
assert got == truth

rec = stats.to_record()
print(f"restrictions {rec['restrictions']}, tree leaves reached {rec['distinct_leaves_resolved']}")
print(f"linear queries {rec['linear_queries']}, full point evaluations {rec['point_evaluations']}")

# The sign pattern of a restriction on 4 variables is one of at most 2^16
# functions; in practice only a few hundred occur, and each is resolved once.
