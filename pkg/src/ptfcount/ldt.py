"""Lazily materialised linear decision trees over coefficient vectors.

A tree determines the sign of ``<w, h>`` for every point ``h`` of
``H = {eval_b : b in {-1,1}^m}``, where ``w`` is the coefficient vector of
a degree-k polynomial on m variables; since ``<coeff(P), eval_b> = P(b)``
this is the truth table of ``sgn(P)``.

Each node runs one round: sample points from the still-unresolved set, ask
their label queries ``<w, a> >= 0`` and, when the sample does not cover the
unresolved set, the comparison queries ``<w, a - a'> >= 0`` and
``<w, a + a'> >= 0``. The answers are then used to infer the sign of the
remaining points exactly (two rational feasibility checks per point).
A path that would exceed the depth budget ends in an abstaining leaf.

Node contents are a pure function of ``(seed, answer path)``, so a node is
built the first time some input reaches it and cached; traversals from any
number of threads see the same tree.
"""
from __future__ import annotations

import threading
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import ceil, log2
from typing import Iterator, Sequence

import numpy as np

from .errors import InfeasibleConstraints, ParameterViolation, ZeroLabelQuery
from .hypercube import dtype_for
from .polynomial import Polynomial, coeff_vector, embedding, monomial_order, num_monomials
from .rational_lp import strictly_feasible
from .seeding import derive, rng

QUERY_RANGE = (-2, -1, 0, 1, 2)

Constraint = tuple[tuple[int, ...], bool]


@dataclass(frozen=True)
class LinearQuery:
    """``<coeffs, w> >= 0 ?``"""

    coeffs: tuple[int, ...]
    label: bool = False

    def __post_init__(self):
        bad = [c for c in self.coeffs if c not in QUERY_RANGE]
        if bad:
            raise AssertionError(f"query coefficient(s) {bad} outside {{-2..2}}")


class PointSet:
    """Monomial evaluation vectors of every point of {-1,1}^m."""

    def __init__(self, m: int, k: int):
        self.m = m
        self.k = k
        order = monomial_order(m, k)
        self.r = len(order)
        pts = np.ones((1 << m, self.r), dtype=np.int64)
        for b in range(1 << m):
            for j, mono in enumerate(order):
                if sum((b >> v) & 1 for v in mono) & 1:
                    pts[b, j] = -1
        pts.setflags(write=False)
        self.points = pts

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, i: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.points[i])


@lru_cache(maxsize=None)
def eval_points(m: int, k: int) -> PointSet:
    return PointSet(m, k)


def infer_sign(constraints: Sequence[Constraint], target: Sequence[int]) -> int:
    """+1 or -1 if every weight vector consistent with the answers gives
    ``<w, target>`` that sign (ignoring ``<w, target> = 0``), else 0.

    A "yes" answer means ``<w, q> >= 0``, a "no" means ``<w, q> < 0``.
    """
    weak = [q for q, yes in constraints if yes]
    strict = [tuple(-x for x in q) for q, yes in constraints if not yes]
    target = tuple(int(x) for x in target)
    can_pos = strictly_feasible(weak, strict + [target])
    can_neg = strictly_feasible(weak, strict + [tuple(-x for x in target)])
    if can_pos and can_neg:
        return 0
    if can_pos:
        return 1
    if can_neg:
        return -1
    if strict and not strictly_feasible(weak, strict):
        raise InfeasibleConstraints("recorded answers admit no weight vector")
    return 0


class _Node:
    __slots__ = (
        "seed", "depth", "unresolved", "neg", "constraints",
        "sample", "queries", "qmat", "n_labels", "children", "leaf",
    )

    def __init__(self, seed: int, depth: int, unresolved: tuple[int, ...], neg: int,
                 constraints: tuple[Constraint, ...]):
        self.seed = seed
        self.depth = depth
        self.unresolved = unresolved
        self.neg = neg
        self.constraints = constraints
        self.sample: tuple[int, ...] = ()
        self.queries: tuple[LinearQuery, ...] = ()
        self.qmat: np.ndarray | None = None
        self.n_labels = 0
        self.children: dict[bytes, _Node] = {}
        # None while internal; ABSTAIN or the satisfied-points bitmask at a leaf
        self.leaf: int | str | None = None


ABSTAIN = "abstain"


class LdtTree:
    """One random linear decision tree for degree-``k`` PTFs on ``m`` variables.

    ``c0`` scales the per-round sample size and ``c1`` the depth budget.
    """

    def __init__(self, m: int, k: int, eps: float, seed: int, c0: float = 2.0, c1: float = 8.0):
        if not 0 < eps < 1:
            raise ValueError("eps must lie in (0, 1)")
        self.m, self.k, self.eps, self.seed = m, k, eps, seed
        self.c0, self.c1 = c0, c1
        self.H = eval_points(m, k)
        self.r = self.H.r
        lg = ceil(log2(self.r + 1))
        self.sample_size = max(1, ceil(c0 * self.r * lg))
        self.budget = ceil(c1 * self.r * lg * ceil(log2(len(self.H) / eps)))
        self._lock = threading.Lock()
        self._root: _Node | None = None
        self.nodes = 0
        self.resolved_leaves = 0
        self.abstain_leaves = 0
        self.leaf_depths: Counter = Counter()

    # construction

    def _make(self, seed: int, depth: int, unresolved: tuple[int, ...], neg: int,
              constraints: tuple[Constraint, ...]) -> _Node:
        node = _Node(seed, depth, unresolved, neg, constraints)
        self.nodes += 1
        if not unresolved:
            node.leaf = neg
            self.resolved_leaves += 1
            self.leaf_depths[depth] += 1
            return node
        s = min(len(unresolved), self.sample_size)
        pick = rng(seed, "sample").choice(len(unresolved), size=s, replace=False)
        sample = tuple(sorted(unresolved[i] for i in pick))
        pts = self.H.points
        queries = [LinearQuery(tuple(int(x) for x in pts[a]), label=True) for a in sample]
        if s < len(unresolved):
            for i, a in enumerate(sample):
                for b in sample[i + 1:]:
                    queries.append(LinearQuery(tuple(int(x) for x in pts[a] - pts[b])))
                    queries.append(LinearQuery(tuple(int(x) for x in pts[a] + pts[b])))
        if depth + len(queries) > self.budget:
            node.leaf = ABSTAIN
            self.abstain_leaves += 1
            self.leaf_depths[depth] += 1
            return node
        node.sample = sample
        node.queries = tuple(queries)
        node.qmat = np.array([q.coeffs for q in queries], dtype=np.int64)
        node.n_labels = len(sample)
        return node

    def _child(self, node: _Node, key: bytes, answers: Sequence[bool]) -> _Node:
        constraints = node.constraints + tuple(
            (q.coeffs, bool(yes)) for q, yes in zip(node.queries, answers)
        )
        neg = node.neg
        for a, yes in zip(node.sample, answers[: node.n_labels]):
            if not yes:
                neg |= 1 << a
        in_sample = set(node.sample)
        pts = self.H.points
        still = []
        for u in node.unresolved:
            if u in in_sample:
                continue
            s = infer_sign(constraints, pts[u])
            if s < 0:
                neg |= 1 << u
            elif s == 0:
                still.append(u)
        return self._make(derive(node.seed, key), node.depth + len(node.queries),
                          tuple(still), neg, constraints)

    def root(self) -> _Node:
        with self._lock:
            if self._root is None:
                self._root = self._make(derive(self.seed, "root"), 0, tuple(range(len(self.H))), 0, ())
            return self._root

    # traversal

    def run_table(self, w: Sequence[int], stats=None) -> int | None:
        """Bitmask of points ``b`` with ``P(b) < 0``, or None on abstention."""
        w = _as_weights(w)
        if len(w) != self.r:
            raise ValueError(f"expected a coefficient vector of length {self.r}")
        node = self.root()
        queries = 0
        while node.leaf is None:
            vals = node.qmat @ w
            if np.any(vals[: node.n_labels] == 0):
                raise ZeroLabelQuery("a label query evaluated to zero; the polynomial vanishes on the cube")
            answers = vals >= 0
            queries += len(vals)
            key = np.packbits(answers).tobytes()
            child = node.children.get(key)
            if child is None:
                with self._lock:
                    child = node.children.get(key)
                    if child is None:
                        child = self._child(node, key, answers.tolist())
                        node.children[key] = child
            node = child
        if stats is not None:
            stats.linear_queries += queries
            stats.tree_runs += 1
            if node.leaf is ABSTAIN:
                stats.tree_abstains += 1
        return None if node.leaf is ABSTAIN else node.leaf

    def run(self, w: Sequence[int], stats=None) -> int | None:
        """Number of satisfying assignments, or None on abstention."""
        mask = self.run_table(w, stats)
        return None if mask is None else mask.bit_count()

    # inspection

    def iter_nodes(self) -> Iterator[_Node]:
        if self._root is None:
            return
        stack = [self._root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(node.children.values())

    def iter_queries(self) -> Iterator[LinearQuery]:
        for node in self.iter_nodes():
            yield from node.queries

    def summary(self) -> dict:
        return {
            "m": self.m, "k": self.k, "eps": self.eps, "seed": self.seed,
            "budget": self.budget, "sample_size": self.sample_size,
            "nodes": self.nodes, "resolved_leaves": self.resolved_leaves,
            "abstain_leaves": self.abstain_leaves,
            "leaf_depths": {str(d): c for d, c in sorted(self.leaf_depths.items())},
        }


def _as_weights(w) -> np.ndarray:
    # query entries are at most 2 in absolute value, so 2 * r * max|w| bounds every answer
    if isinstance(w, np.ndarray) and w.dtype == np.int64:
        if len(w) == 0 or int(np.abs(w).max()) * 2 * len(w) < 1 << 63:
            return w
        return w.astype(object)
    w = [int(x) for x in w]
    return np.array(w, dtype=dtype_for(2 * len(w) * max((abs(x) for x in w), default=0)))


def build_tree(m: int, k: int, eps: float, seed: int, c0: float = 2.0, c1: float = 8.0) -> LdtTree:
    return LdtTree(m, k, eps, seed, c0, c1)


def run_tree(tree: LdtTree, w: Sequence[int], stats=None) -> int | None:
    return tree.run(w, stats)


class TupleTree:
    """``ell`` independent trees run in sequence, one per polynomial."""

    def __init__(self, m: int, k: int, ell: int, seed: int, eps: float = 0.5,
                 c0: float = 2.0, c1: float = 8.0):
        self.components = [
            LdtTree(m, k, eps / ell, derive(seed, "component", j), c0, c1) for j in range(ell)
        ]

    def run_tables(self, ws: Sequence[Sequence[int]], stats=None) -> list[int] | None:
        masks = []
        for tree, w in zip(self.components, ws):
            mask = tree.run_table(w, stats)
            if mask is None:
                return None
            masks.append(mask)
        return masks


class ConjunctionOracle:
    """Counts common satisfying assignments of up to ``ell`` PTFs on up to
    ``m`` variables, by running ``n_trees`` independent tuple trees until
    one does not abstain.
    """

    def __init__(self, m: int, ell: int, k: int, n_trees: int, seed: int,
                 c0: float = 2.0, c1: float = 8.0):
        if m < 0 or ell < 1 or n_trees < 1:
            raise ValueError("need m >= 0, ell >= 1 and n_trees >= 1")
        self.m, self.ell, self.k, self.n_trees, self.seed = m, ell, k, n_trees, seed
        self.c0, self.c1 = c0, c1
        self.r = num_monomials(m, k)
        self._trees: dict[int, TupleTree] = {}
        self._lock = threading.Lock()
        self._answers: dict = {}
        self._pos_cache: dict[int, np.ndarray] = {}

    def tree(self, i: int) -> TupleTree:
        t = self._trees.get(i)
        if t is None:
            with self._lock:
                t = self._trees.get(i)
                if t is None:
                    t = TupleTree(self.m, self.k, self.ell, derive(self.seed, "tuple", i),
                                  0.5, self.c0, self.c1)
                    self._trees[i] = t
        return t

    def reseeded(self, label) -> ConjunctionOracle:
        """Fresh oracle with the same shape and a derived seed."""
        return ConjunctionOracle(self.m, self.ell, self.k, self.n_trees,
                                 derive(self.seed, "reseed", label), self.c0, self.c1)

    def count_vectors(self, ws: Sequence[Sequence[int]], nvars: int, stats=None) -> int | None:
        """``ws`` are coefficient vectors over ``(nvars, k)``.

        Answers are memoised by input: a tree's output is a fixed function of
        its input, so a repeated call returns what the first one did.
        """
        if nvars > self.m:
            raise ParameterViolation(f"call on {nvars} variables exceeds oracle m={self.m}")
        if len(ws) > self.ell:
            raise ParameterViolation(f"call with {len(ws)} polynomials exceeds oracle ell={self.ell}")
        pos = self._positions(nvars)
        rows = [_as_weights(w) for w in ws]
        if any(len(w) != len(pos) for w in rows):
            raise ValueError("coefficient vector length does not match nvars")
        dtype = object if any(w.dtype == object for w in rows) else np.int64
        padded = np.zeros((self.ell, self.r), dtype=dtype)
        if dtype == object:
            padded[:] = 0
        for i, w in enumerate(rows):
            padded[i, pos] = w
        padded[len(rows):, 0] = -1
        if stats is not None:
            stats.oracle_calls += 1
        key = (nvars, padded.tobytes() if dtype != object else repr(padded.tolist()))
        if key in self._answers:
            if stats is not None:
                stats.oracle_cache_hits += 1
            return self._answers[key]
        answer = self._count_padded(padded, nvars, stats)
        with self._lock:
            self._answers[key] = answer
        return answer

    def _positions(self, nvars: int) -> np.ndarray:
        pos = self._pos_cache.get(nvars)
        if pos is None:
            pos = np.array(embedding(nvars, self.m, self.k), dtype=np.intp)
            self._pos_cache[nvars] = pos
        return pos

    def _count_padded(self, padded: np.ndarray, nvars: int, stats) -> int | None:
        for i in range(self.n_trees):
            masks = self.tree(i).run_tables(padded, stats)
            if masks is None:
                continue
            common = (1 << (1 << self.m)) - 1
            for mask in masks:
                common &= mask
            total = common.bit_count()
            scale = 1 << (self.m - nvars)
            if total % scale:
                raise AssertionError("padded count is not divisible by the dummy-variable factor")
            return total // scale
        if stats is not None:
            stats.oracle_abstains += 1
        return None

    def count(self, polys: Sequence[Polynomial], nvars: int | None = None, stats=None) -> int | None:
        if nvars is None:
            nvars = polys[0].n if polys else 0
        ws = [coeff_vector(p, nvars, self.k) for p in polys]
        return self.count_vectors(ws, nvars, stats)

    def all_trees(self) -> Iterator[LdtTree]:
        for t in self._trees.values():
            yield from t.components
