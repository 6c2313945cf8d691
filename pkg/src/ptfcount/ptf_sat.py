"""Zero-error #SAT for a single polynomial threshold function by memoisation.

The last ``n - m`` variables are enumerated. Each restriction leaves a
degree-k polynomial on ``m`` variables whose coefficient vector is fed to a
fixed family of random linear decision trees; restrictions that induce the
same answers land on the same cached leaf, so the count for that leaf is
computed once. No full assignment of the input polynomial is ever evaluated
in the enumeration loop.
"""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import floor, log2

from .ldt import LdtTree
from .hypercube import restriction_table
from .polynomial import Polynomial
from .seeding import derive
from .stats import RunStats


def default_block_size(n: int, k: int) -> int:
    """``floor(n**(1/(k+1)) / log2 n)`` clamped to ``[2, n]``."""
    if n <= 2:
        return n
    return min(n, max(2, floor(n ** (1 / (k + 1)) / log2(n))))


@dataclass
class PtfSatConfig:
    seed: int = 0
    m: int | None = None
    n_trees: int | None = None
    eps: float = 0.5
    c0: float = 2.0
    c1: float = 8.0
    workers: int = 1

    def resolve(self, n: int, k: int) -> tuple[int, int]:
        m = default_block_size(n, k) if self.m is None else self.m
        if not 0 <= m <= n:
            raise ValueError(f"block size m={m} outside [0, {n}]")
        n_trees = 10 * n if self.n_trees is None else self.n_trees
        return m, max(1, n_trees)


def make_trees(m: int, k: int, cfg: PtfSatConfig, n_trees: int) -> list[LdtTree]:
    return [LdtTree(m, k, cfg.eps, derive(cfg.seed, "tree", i), cfg.c0, cfg.c1) for i in range(n_trees)]


def count_ptf(p: Polynomial, cfg: PtfSatConfig | None = None) -> tuple[int | None, RunStats]:
    """Number of ``a`` with ``p(a) < 0``, or None if every tree abstained on
    some restriction. Never returns a wrong count.
    """
    cfg = cfg or PtfSatConfig()
    start = time.perf_counter()
    n, k = p.n, p.k
    m, n_trees = cfg.resolve(n, k)
    stats = RunStats(seed=cfg.seed, config={
        "mode": "ptf", "n": n, "k": k, "m": m, "n_trees": n_trees, "eps": cfg.eps,
        "c0": cfg.c0, "c1": cfg.c1,
    })
    trees = make_trees(m, k, cfg, n_trees)
    table = restriction_table(p, m, k)
    rows = len(table)
    stats.restrictions = rows

    workers = max(1, min(cfg.workers, rows))
    bounds = [rows * i // workers for i in range(workers + 1)]
    chunks = list(zip(bounds[:-1], bounds[1:]))

    def work(lo: int, hi: int) -> tuple[int, bool, RunStats]:
        local = RunStats()
        total, failed = 0, False
        for s in range(lo, hi):
            w = table[s]
            for tree in trees:
                res = tree.run(w, local)
                if res is not None:
                    total += res
                    break
            else:
                failed = True
        return total, failed, local

    if workers == 1:
        results = [work(*chunks[0])]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda c: work(*c), chunks))

    total, failed = 0, False
    for part, part_failed, local in results:
        total += part
        failed |= part_failed
        stats.merge(local)
    _collect_tree_stats(stats, trees)
    stats.wall_time = time.perf_counter() - start
    return (None if failed else total), stats


def _collect_tree_stats(stats: RunStats, trees) -> None:
    for t in trees:
        stats.ldt_nodes += t.nodes
        stats.resolved_leaves += t.resolved_leaves
        stats.abstain_leaves += t.abstain_leaves
        # a leaf is materialised by the first traversal that reaches it and
        # its table is computed exactly then
        stats.distinct_leaves_resolved += t.resolved_leaves
        stats.truth_table_computations += t.resolved_leaves
