"""
Inside one decision tree
========================

Each tree node asks linear questions about the hidden coefficient vector
w: "is the polynomial negative at point b?" (a label query), and, when the
sample does not already cover every point, comparisons of two points'
values. Points whose sign follows from the answers by linear programming
are resolved without a query. Query vectors only ever contain -2..2.
"""
from __future__ import annotations

from collections import Counter

from ptfcount import LdtTree, brute_count_poly
from ptfcount.generate import random_poly
from ptfcount.polynomial import coeff_vector
from ptfcount.seeding import rng

m, k = 3, 2
polys = [random_poly(m, k, 12, rng(5, i)) for i in range(40)]

for c0 in (2.0, 0.25):
    tree = LdtTree(m, k, eps=0.25, seed=9, c0=c0)
    answers = [tree.run(coeff_vector(p, m, k)) for p in polys]
    assert all(a is None or a == brute_count_poly(p) for a, p in zip(answers, polys))
    kinds = Counter("label" if q.label else "comparison" for q in tree.iter_queries())
    entries = sorted({c for q in tree.iter_queries() for c in q.coeffs})
    print(f"c0={c0}: sample {tree.sample_size}, budget {tree.budget}, nodes {tree.nodes}")
    print(f"  queries by kind {dict(kinds)}, coefficient values used {entries}")
    print(f"  abstentions {answers.count(None)} of {len(polys)}")

# With the default constant the first round already asks about all 8
# points, so the tree is a lookup on sign patterns. The smaller constant
# samples fewer points and leans on comparisons plus inference.
