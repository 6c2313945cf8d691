"""Zero-error #SAT for constant-depth circuits of PTF gates.

The counter peels one layer at a time. A random restriction leaves few
variables alive; bottom gates whose restriction is nearly constant
("biased") are set to their majority value and the few remaining gates
are guessed. Assignments on which some biased gate takes its minority
value are enumerated explicitly and checked directly; every other
satisfying assignment is counted exactly once through one of the guesses,
with side polynomials forcing each gate to the value it was replaced by.
At depth one the problem is an AND of PTFs, handled by a second
restriction plus the small-conjunction oracle.

Gate classification only affects running time: every count below is exact
whatever the classifier says.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import ceil, floor, log2
from typing import Callable, Iterator, Sequence

import numpy as np

from .brute import DEFAULT_BRUTE_LIMIT, count_satisfying, exact_bias, satisfied_at
from .circuit import Circuit
from .errors import ZeroValue
from .hypercube import restriction_table, vectors_to_tables
from .ldt import ConjunctionOracle
from .polynomial import Polynomial
from .seeding import derive, rng
from .stats import RunStats

# classifier(poly, delta) -> (biased?, majority value)
Classifier = Callable[[Polynomial, Fraction], tuple[bool, int]]


@dataclass
class ParamConfig:
    """Exponents and derived sizes for the depth-reduction counter.

    ``A`` and ``B`` are the two free constants. Every size of the form
    ``n ** e`` is rounded up and clamped to ``[2, n]``.
    """

    k: int
    d: int
    A: float = 4.0
    B: float = 1.0
    brute_limit: int = DEFAULT_BRUTE_LIMIT
    bias_samples: int = 4096
    c0: float = 2.0
    c1: float = 8.0

    @property
    def zeta(self) -> float:
        return min(1.0, self.A / (2 * self.B * self.k ** 2))

    def eps(self, level: int) -> float:
        if level == 1:
            return 1 / (10 * self.A)
        return (self.zeta / (10 * self.A * (self.k + 1))) ** level

    def beta(self, level: int) -> float:
        if level == 1:
            return 1 / 10
        return self.A * self.eps(level)

    @property
    def alpha(self) -> float:
        return self.zeta * self.eps(1) / (2 * (self.k + 1))

    @property
    def saving_exponent(self) -> float:
        return self.zeta * self.eps(self.d) / (2 * (self.k + 1))

    def delta(self, level: int, n: int) -> Fraction:
        if n < 1:
            return Fraction(1, 2)
        return Fraction(1, 2 ** ceil(n ** (self.beta(level) / (self.B * self.k ** 2))))

    def survivors(self, level: int, n: int, stats: RunStats | None = None) -> int:
        return _clamped(n ** (1 - 2 * self.beta(level)), n, f"survivors[level={level},n={n}]", stats)

    def unbiased_bound(self, level: int, n: int) -> int:
        return ceil(n ** self.beta(level)) if n >= 1 else 0

    def block(self, n: int, stats: RunStats | None = None) -> int:
        return _clamped(n ** self.alpha, n, f"block[n={n}]", stats)

    def record(self) -> dict:
        return {
            "k": self.k, "d": self.d, "A": self.A, "B": self.B, "zeta": self.zeta,
            "eps": [self.eps(i) for i in range(1, self.d + 1)],
            "beta": [self.beta(i) for i in range(1, self.d + 1)],
            "alpha": self.alpha, "saving_exponent": self.saving_exponent,
            "brute_limit": self.brute_limit, "c0": self.c0, "c1": self.c1,
        }


def _clamped(x: float, n: int, what: str, stats: RunStats | None) -> int:
    v = ceil(x - 1e-9)
    out = min(n, max(2, v)) if n >= 2 else n
    if out != v and stats is not None:
        stats.clamp(f"{what}: {x:.4g} -> {out}")
    return out


@dataclass
class RestrictionPlan:
    """Which variables survive; every assignment to the others is a leaf.

    Survivors are renumbered ``0 .. len(survivors)-1`` in increasing order.
    """

    n: int
    survivors: tuple[int, ...]
    fixed: tuple[int, ...]

    @property
    def leaves(self) -> int:
        return 1 << len(self.fixed)

    def sigma(self, s: int) -> dict[int, int]:
        return {v: -1 if (s >> j) & 1 else 1 for j, v in enumerate(self.fixed)}

    def _mapping(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.survivors)}

    def restrict_poly(self, p: Polynomial, s: int) -> Polynomial:
        return p.restrict(self.sigma(s)).relabel(self._mapping(), len(self.survivors))

    def restrict_circuit(self, c: Circuit, s: int) -> Circuit:
        return c.restrict(self.sigma(s)).relabel(self._mapping(), len(self.survivors))


def plan_restriction(n: int, level: int, cfg: ParamConfig, seed: int,
                     stats: RunStats | None = None) -> RestrictionPlan:
    keep = cfg.survivors(level, n, stats)
    chosen = rng(seed, "survivors").choice(n, size=keep, replace=False) if keep else []
    survivors = tuple(sorted(int(v) for v in chosen))
    fixed = tuple(v for v in range(n) if v not in set(survivors))
    return RestrictionPlan(n, survivors, fixed)


@dataclass
class GateClassification:
    """Bottom gates after a restriction, split by closeness to a constant."""

    polys: list[Polynomial]
    biased: list[int]
    constants: dict[int, int]
    unbiased: list[int]
    good: bool

    @property
    def normalized(self) -> list[Polynomial]:
        """``-a_i * Q_i`` for each biased gate: satisfied exactly on its majority side."""
        return [self.polys[i] * -self.constants[i] for i in self.biased]


def bias_classifier(cfg: ParamConfig, seed: int) -> Classifier:
    """Exact minority fraction when the support is small enough, sampled otherwise."""

    def classify(q: Polynomial, delta: Fraction) -> tuple[bool, int]:
        if len(q.support()) <= cfg.brute_limit:
            a, frac = exact_bias(q, cfg.brute_limit)
            return frac <= delta, a
        pts = rng(seed, "bias", q.n, tuple(q.items())).integers(0, 2, size=(cfg.bias_samples, q.n))
        neg = 0
        for row in pts:
            v = q.value([-1 if b else 1 for b in row])
            if v == 0:
                raise ZeroValue(f"{q!r} vanishes on the cube")
            neg += v < 0
        a = -1 if 2 * neg > cfg.bias_samples else 1
        minority = min(neg, cfg.bias_samples - neg)
        return Fraction(minority, cfg.bias_samples) <= delta, a

    return classify


def classify_gates(polys: Sequence[Polynomial], delta: Fraction, bound: int,
                   classifier: Classifier) -> GateClassification:
    biased, unbiased, constants = [], [], {}
    for i, q in enumerate(polys):
        is_biased, a = classifier(q, delta)
        if is_biased:
            biased.append(i)
            constants[i] = a
        else:
            unbiased.append(i)
    return GateClassification(list(polys), biased, constants, unbiased, len(unbiased) <= bound)


def simplify(c: Circuit, level: int, cfg: ParamConfig, seed: int,
             classifier: Classifier | None = None, stats: RunStats | None = None,
             ) -> tuple[RestrictionPlan, Iterator[tuple[int, Circuit, list[int], GateClassification]]]:
    """Restriction plan for ``c`` plus, lazily per leaf, the restricted
    circuit, its bottom-gate indices and their classification."""
    n = c.n
    plan = plan_restriction(n, level, cfg, seed, stats)
    delta = cfg.delta(level, n)
    bound = cfg.unbiased_bound(level, n)
    classifier = classifier or bias_classifier(cfg, seed)

    def leaves():
        for s in range(plan.leaves):
            cs = plan.restrict_circuit(c, s)
            bottom = cs.bottom_gates()
            cls = classify_gates([cs.lift(j) for j in bottom], delta, bound, classifier)
            yield s, cs, bottom, cls

    return plan, leaves()


def minority_block(delta: Fraction, m: int, limit: int) -> int:
    """Number of low variables completed by brute force: ``floor(log2(1/delta)/2)``.

    Rounding down keeps ``2**q <= 1/sqrt(delta)``, which is what makes a
    nonconstant restricted gate at least a ``sqrt(delta)`` fraction wrong.
    """
    q = floor(log2(1 / delta) / 2 + 1e-12) if delta < 1 else 0
    return max(0, min(q, m // 2, limit))


def enumerate_minority(gates: Sequence[Polynomial], m: int, delta: Fraction,
                       oracle: ConjunctionOracle, k: int | None = None,
                       stats: RunStats | None = None) -> np.ndarray | None:
    """All encoded ``a in {-1,1}^m`` with ``P_i(a) > 0`` for some gate.

    For each assignment ``rho`` to the top ``m - q`` variables the oracle
    checks whether every restricted gate is constantly -1; only when one is
    not are the ``2**q`` completions examined. None if the oracle abstains.
    """
    if not gates:
        return np.zeros(0, dtype=np.uint64)
    k = oracle.k if k is None else k
    q = minority_block(delta, m, oracle.m)
    tables = [restriction_table(g.with_n(m) if g.n != m else g, q, k) for g in gates]
    found: list[np.ndarray] = []
    low = np.arange(1 << q, dtype=np.uint64)
    rows = 1 << (m - q)
    for rho in range(rows):
        nonconstant = False
        for t in tables:
            cnt = oracle.count_vectors([-t[rho]], q, stats)
            if cnt is None:
                return None
            if cnt:
                nonconstant = True
                break
        if not nonconstant:
            continue
        vals = vectors_to_tables(np.stack([t[rho] for t in tables]), q, k)
        if np.any(vals == 0):
            raise ZeroValue("a gate vanishes on the cube")
        hit = np.any(vals > 0, axis=0)
        found.append(low[hit] | np.uint64(rho << q))
        if stats is not None:
            stats.minority_rho_bruteforced += 1
            stats.brute_assignments += 1 << q
    if stats is not None:
        stats.minority_rho_scanned += rows
    return np.concatenate(found) if found else np.zeros(0, dtype=np.uint64)


@dataclass
class CountContext:
    """Shared state of one counting run: parameters, oracle, counters, hooks."""

    cfg: ParamConfig
    oracle: ConjunctionOracle
    stats: RunStats
    retries: int
    classifier: Classifier | None = None
    trace: list | None = None
    _reseeded: dict = field(default_factory=dict)

    def oracle_for(self, attempt: int, label) -> ConjunctionOracle:
        if attempt == 0:
            return self.oracle
        key = (label, attempt)
        if key not in self._reseeded:
            self._reseeded[key] = self.oracle.reseeded(key)
        return self._reseeded[key]


def count_conjunction(polys: Sequence[Polynomial], n: int, ctx: CountContext, seed: int,
                      oracle: ConjunctionOracle | None = None) -> int | None:
    """#{a in {-1,1}^n : P(a) < 0 for every P}, or None if the oracle abstains."""
    cfg, stats = ctx.cfg, ctx.stats
    oracle = oracle or ctx.oracle
    stats.bump_level("conjunction")
    if not polys:
        return 1 << n
    k = oracle.k
    fan_in = sum(len(p.support()) for p in polys)
    if n >= 2 and fan_in > n ** (1 + cfg.eps(1)):
        stats.warn(f"conjunction fan-in {fan_in} exceeds n^(1+eps1) at n={n}")
    plan = plan_restriction(n, 1, cfg, seed, stats)
    delta = cfg.delta(1, n)
    bound = cfg.unbiased_bound(1, n)
    classifier = ctx.classifier or bias_classifier(cfg, seed)
    n_s = len(plan.survivors)
    m = min(cfg.block(n_s, stats), oracle.m, n_s)
    total = 0
    for s in range(plan.leaves):
        stats.restrictions += 1
        ps = [plan.restrict_poly(p, s) for p in polys]
        cls = classify_gates(ps, delta, bound, classifier)
        if not cls.good:
            total += count_satisfying(n_s, ps, limit=cfg.brute_limit, stats=stats)
            continue
        stats.good_restrictions += 1
        normalized = cls.normalized
        any_plus = any(cls.constants[i] == 1 for i in cls.biased)
        t_norm = [restriction_table(h, m, k) for h in normalized]
        t_all = [restriction_table(p, m, k) for p in ps]
        t_unb = [t_all[i] for i in cls.unbiased]
        for rho in range(1 << (n_s - m)):
            nonconstant = False
            for t in t_norm:
                cnt = oracle.count_vectors([-t[rho]], m, stats)
                if cnt is None:
                    return None
                if cnt:
                    nonconstant = True
                    break
            if nonconstant:
                vals = vectors_to_tables(np.stack([t[rho] for t in t_all]), m, k)
                if np.any(vals == 0):
                    raise ZeroValue("a gate vanishes on the cube")
                total += int(np.count_nonzero(np.all(vals < 0, axis=0)))
                stats.brute_assignments += 1 << m
                continue
            if any_plus:
                continue
            cnt = oracle.count_vectors([t[rho] for t in t_unb], m, stats)
            if cnt is None:
                return None
            total += cnt
    return total


def count_reduced(c: Circuit, side: Sequence[Polynomial], ctx: CountContext, seed: int,
                  oracle: ConjunctionOracle | None = None) -> int | None:
    """#{a : C(a) = -1 and P(a) < 0 for every side polynomial P}."""
    cfg, stats = ctx.cfg, ctx.stats
    oracle = oracle or ctx.oracle
    n, d = c.n, c.depth
    stats.bump_level(f"depth{d}")
    if d == 1:
        return count_conjunction([c.output_polynomial(), *side], n, ctx, derive(seed, "conj"), oracle)

    plan, leaves = simplify(c, d, cfg, seed, ctx.classifier, stats)
    delta = cfg.delta(d, n)
    total = 0
    for s, cs, bottom, cls in leaves:
        stats.restrictions += 1
        ps = [plan.restrict_poly(p, s) for p in side]
        n_s = cs.n
        entry = None
        if ctx.trace is not None:
            entry = {"depth": d, "sigma": s, "circuit": cs, "side": ps, "good": cls.good}
            ctx.trace.append(entry)
        if not cls.good:
            got = count_satisfying(n_s, ps, circuit=cs, limit=cfg.brute_limit, stats=stats)
            total += got
            if entry is not None:
                entry["brute"] = got
            continue
        stats.good_restrictions += 1

        normalized = cls.normalized
        minority = enumerate_minority(normalized, n_s, delta, oracle, stats=stats)
        if minority is None:
            return None
        stats.point_evaluations += len(minority)
        minority_count = int(np.count_nonzero(satisfied_at(minority, ps, cs))) if len(minority) else 0

        fixed = {bottom[i]: cls.constants[i] for i in cls.biased}
        unbiased = [(bottom[i], cls.polys[i]) for i in cls.unbiased]
        per_guess = {}
        for b in product((-1, 1), repeat=len(unbiased)):
            values = dict(fixed)
            values.update({j: bj for (j, _), bj in zip(unbiased, b)})
            cb = cs.replace_gates(values)
            pb = list(ps) + normalized + [r * -bj for (_, r), bj in zip(unbiased, b)]
            got = _count_guess(cb, pb, ctx, derive(seed, "guess", s, b), (s, b))
            if got is None:
                return None
            per_guess[b] = got
        total += minority_count + sum(per_guess.values())
        if entry is not None:
            entry.update(minority=minority_count, per_guess=per_guess)
    return total


def _count_guess(cb: Circuit, pb: list[Polynomial], ctx: CountContext, seed: int, label) -> int | None:
    if cb.depth == 1:
        top = cb.output_polynomial()
        if top.is_constant() and top.constant_term > 0:
            return 0
    for attempt in range(ctx.retries):
        oracle = ctx.oracle_for(attempt, label)
        sub = derive(seed, "attempt", attempt)
        if cb.depth == 1:
            got = count_conjunction([cb.output_polynomial(), *pb], cb.n, ctx, sub, oracle)
        else:
            got = count_reduced(cb, pb, ctx, sub, oracle)
        if got is not None:
            return got
    return None


def oracle_shape(n: int, k: int) -> tuple[int, int]:
    """(variables, polynomials) handled by the small-conjunction oracle."""
    m = max(2, ceil(n ** (1 / (2 * (k + 1))) - 1e-9))
    ell = max(1, ceil(n ** 0.1 - 1e-9))
    return m, ell


def make_context(n: int, cfg: ParamConfig, seed: int = 0, n_trees: int | None = None,
                 classifier: Classifier | None = None, trace: list | None = None) -> CountContext:
    """Oracle and counters sized for an ``n``-variable top-level instance."""
    m, ell = oracle_shape(n, cfg.k)
    n_trees = max(1, 10 * n if n_trees is None else n_trees)
    stats = RunStats(seed=seed, config={"mode": "circuit", "n": n, "oracle_m": m,
                                        "oracle_ell": ell, "n_trees": n_trees, **cfg.record()})
    oracle = ConjunctionOracle(m, ell, cfg.k, n_trees, derive(seed, "oracle"), cfg.c0, cfg.c1)
    return CountContext(cfg, oracle, stats, retries=n_trees, classifier=classifier, trace=trace)


def count_circuit(c: Circuit, cfg: ParamConfig | None = None, seed: int = 0,
                  classifier: Classifier | None = None, trace: list | None = None,
                  n_trees: int | None = None) -> tuple[int | None, RunStats]:
    """Exact number of satisfying assignments of ``c``, or None on abstention."""
    start = time.perf_counter()
    cfg = cfg or ParamConfig(k=max(1, c.k), d=c.depth)
    n = c.n
    ctx = make_context(n, cfg, seed, n_trees, classifier, trace)
    stats = ctx.stats
    stats.config.update(size=c.size)
    if c.size > n ** (1 + cfg.eps(cfg.d)):
        stats.warn(f"size {c.size} exceeds n^(1+eps_d) = {n ** (1 + cfg.eps(cfg.d)):.3f}")
    for lvl in range(2, cfg.d + 1):
        lhs = (1 - 2 * cfg.beta(lvl)) * (1 + cfg.eps(lvl - 1))
        if lhs < 1 + cfg.eps(lvl):
            stats.warn(f"size recurrence fails at level {lvl} for these constants")
    result = count_reduced(c, [], ctx, derive(seed, "top"))
    oracles = [ctx.oracle, *ctx._reseeded.values()]
    for o in oracles:
        for t in o.all_trees():
            stats.ldt_nodes += t.nodes
            stats.resolved_leaves += t.resolved_leaves
            stats.abstain_leaves += t.abstain_leaves
            stats.distinct_leaves_resolved += t.resolved_leaves
            stats.truth_table_computations += t.resolved_leaves
    stats.wall_time = time.perf_counter() - start
    return result, stats
