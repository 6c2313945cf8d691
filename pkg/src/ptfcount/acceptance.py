"""Acceptance checks: each one runs a solver against an independent oracle.

Every check returns a :class:`CheckResult`; ``run_all`` runs them in order.
They are shared by the test suite and ``ptfcount selftest``.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import sqrt
from typing import Callable

import numpy as np

from .brute import brute_count_circuit, brute_count_poly, count_satisfying, minority_indices
from .circuit_sat import count_circuit, enumerate_minority, minority_block
from .generate import gen_circuit, random_poly
from .hypercube import restriction_table, value_table, vectors_to_tables
from .ldt import QUERY_RANGE, ConjunctionOracle, LdtTree
from .polynomial import Polynomial
from .ptf_sat import PtfSatConfig, count_ptf
from .seeding import derive, rng
from .stats import RunStats


@dataclass
class CheckResult:
    key: str
    title: str
    passed: bool
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        facts = ", ".join(f"{k}={v}" for k, v in self.detail.items())
        return f"[{status}] {self.key} {self.title} ({facts}; {self.seconds:.1f}s)"


def _timed(key: str, title: str, fn: Callable[[], tuple[bool, dict]]) -> CheckResult:
    start = time.perf_counter()
    ok, detail = fn()
    return CheckResult(key, title, ok, detail, time.perf_counter() - start)


def _query_violations(trees) -> tuple[int, int]:
    seen = bad = 0
    for t in trees:
        for q in t.iter_queries():
            seen += 1
            bad += any(c not in QUERY_RANGE for c in q.coeffs)
    return seen, bad


def check_single_ptf(seed: int = 1, instances: int = 200) -> CheckResult:
    """Single-PTF counter equals brute force on random degree-2 inputs."""

    def run():
        mismatches = abstains = 0
        for i in range(instances):
            n = 10 + i % 7
            gen = rng(seed, "single", i)
            bits = int(gen.integers(1, 33))
            p = random_poly(n, 2, bits, gen)
            got, _ = count_ptf(p, PtfSatConfig(seed=derive(seed, "run", i)))
            if got is None:
                abstains += 1
            elif got != brute_count_poly(p):
                mismatches += 1
        return mismatches == 0 and abstains == 0, {
            "instances": instances, "mismatches": mismatches, "abstains": abstains}

    res = _timed("C1", "single PTF counter vs brute force", run)
    res.detail["under_10min"] = res.seconds <= 600
    res.passed = res.passed and res.seconds <= 600
    return res


def check_tree_abstention(seed: int = 2, polys: int = 100, trees: int = 20,
                          c0_values: tuple[float, ...] = (2.0, 0.25, 0.1)) -> CheckResult:
    """Fresh trees on m=3, k=2, eps=1/4: exact when answering, rarely abstaining.

    The default ``c0`` samples every point in the first round; the smaller
    values force comparison queries and sign inference.
    """
    m, k, eps = 3, 2, 0.25

    def run():
        detail: dict = {}
        ok = True
        built = []
        for c0 in c0_values:
            wrong = abstain = 0
            for i in range(polys):
                p = random_poly(m, k, 16, rng(seed, "tree-poly", i))
                truth = brute_count_poly(p)
                vec = restriction_table(p, m, k)[0]
                for j in range(trees):
                    t = LdtTree(m, k, eps, derive(seed, "tree", c0, i, j), c0=c0)
                    built.append(t)
                    got = t.run(vec)
                    if got is None:
                        abstain += 1
                    elif got != truth:
                        wrong += 1
            runs = polys * trees
            limit = eps + 3 * sqrt(eps * (1 - eps) / runs)
            rate = abstain / runs
            ok &= wrong == 0 and rate <= limit
            detail[f"c0_{c0}"] = f"wrong {wrong}, abstain {rate:.3f} <= {limit:.3f}"
        seen, bad = _query_violations(built)
        detail["queries"] = seen
        detail["range_violations"] = bad
        return ok and bad == 0, detail

    return _timed("C2", "tree zero-error and abstention rate", run)


def biased_gate(m: int, delta: Fraction, gen: np.random.Generator, bits: int = 10) -> Polynomial:
    """Random degree-2 polynomial positive on at most a ``delta`` fraction of the cube.

    The constant is chosen below the ``delta`` quantile of the non-constant
    part, with odd parity so the polynomial never vanishes.
    """
    p = random_poly(m, 2, bits, gen)
    body = {mono: c for mono, c in p.terms.items() if mono}
    vals = np.sort(value_table(Polynomial(m, 2, body)))[::-1]
    allowed = int(delta * (1 << m))
    c = -int(vals[allowed]) - 1
    body[()] = c
    return Polynomial(m, 2, body)


def check_minority(seed: int = 3, instances: int = 50, m: int = 14) -> CheckResult:
    """Minority enumeration is exact and brute-forces few blocks."""

    def run():
        mismatches = scan_violations = 0
        worst = 0.0
        for i in range(instances):
            gen = rng(seed, "minority", i)
            delta = Fraction(1, 16) if i % 2 == 0 else Fraction(1, 64)
            ell = 1 + i % 3
            gates = [biased_gate(m, delta, gen) for _ in range(ell)]
            q = minority_block(delta, m, m)
            oracle = ConjunctionOracle(q, 1, 2, 10 * m, derive(seed, "oracle", i))
            stats = RunStats()
            got = enumerate_minority(gates, m, delta, oracle, k=2, stats=stats)
            truth = minority_indices(gates, m)
            if got is None or not np.array_equal(np.sort(got), truth):
                mismatches += 1
            bound = ell * sqrt(delta) * (1 << (m - q))
            worst = max(worst, stats.minority_rho_bruteforced / bound)
            scan_violations += stats.minority_rho_bruteforced > bound
        return mismatches == 0 and scan_violations == 0, {
            "instances": instances, "mismatches": mismatches,
            "scan_violations": scan_violations, "max_scan_ratio": round(worst, 4)}

    return _timed("C3", "minority enumeration exactness and scan bound", run)


def check_circuits(seed: int = 4, n: int = 14, depth2: int = 50, depth3: int = 20) -> CheckResult:
    """Circuit counter equals brute force on random depth-2 and depth-3 circuits."""

    def run():
        mismatches = abstains = total = 0
        for d, count in ((2, depth2), (3, depth3)):
            for i in range(count):
                c = gen_circuit(n, 2, d, seed=derive(seed, "circuit", d, i))
                assert c.size <= n ** 1.1
                got, _ = count_circuit(c, seed=derive(seed, "run", d, i))
                total += 1
                if got is None:
                    abstains += 1
                elif got != brute_count_circuit(c):
                    mismatches += 1
        success = (total - abstains) / total
        return mismatches == 0 and success >= 0.5, {
            "instances": total, "mismatches": mismatches, "success_rate": round(success, 3)}

    return _timed("C4", "circuit counter vs brute force", run)


def check_partition(seed: int = 5, instances: int = 30, n: int = 10) -> CheckResult:
    """Per good restriction: minority count plus per-guess counts equals the direct count."""

    def run():
        checked = violations = 0
        for i in range(instances):
            d = 2 if i % 2 == 0 else 3
            c = gen_circuit(n, 2, d, seed=derive(seed, "circuit", i))
            trace: list = []
            got, _ = count_circuit(c, seed=derive(seed, "run", i), trace=trace)
            for entry in trace:
                if not entry["good"] or "per_guess" not in entry:
                    continue
                checked += 1
                direct = count_satisfying(entry["circuit"].n, entry["side"], circuit=entry["circuit"])
                if entry["minority"] + sum(entry["per_guess"].values()) != direct:
                    violations += 1
            if got is not None and got != brute_count_circuit(c):
                violations += 1
        return violations == 0 and checked > 0, {
            "instances": instances, "restrictions_checked": checked, "violations": violations}

    return _timed("C5", "partition identity per good restriction", run)


def distinct_sign_patterns(p: Polynomial, m: int) -> int:
    table = restriction_table(p, m, p.k)
    signs = vectors_to_tables(table, m, p.k) < 0
    return len(np.unique(np.packbits(signs, axis=1), axis=0))


def check_memoization(seed: int = 6, n: int = 20, m: int = 4) -> CheckResult:
    """Single-PTF counter at n=20, m=4 is driven by tree leaves, not point evaluations."""

    def run():
        p = random_poly(n, 2, 16, rng(seed, "memo"))
        cfg = PtfSatConfig(seed=seed, m=m)
        got, stats = count_ptf(p, cfg)
        patterns = distinct_sign_patterns(p, m)
        budget = LdtTree(m, 2, cfg.eps, 0, cfg.c0, cfg.c1).budget
        rows = 1 << (n - m)
        ok = (
            got == brute_count_poly(p)
            and stats.point_evaluations == 0
            and stats.distinct_leaves_resolved <= patterns <= rows
            and stats.linear_queries <= rows * budget
        )
        return ok, {
            "point_evaluations": stats.point_evaluations,
            "resolved_leaves": stats.distinct_leaves_resolved, "sign_patterns": patterns,
            "restrictions": rows, "linear_queries": stats.linear_queries,
            "query_bound": rows * budget}

    return _timed("C6", "memoisation structure", run)


def check_determinism(seed: int = 7) -> CheckResult:
    """Same seed, same records, for any worker count."""

    def run():
        p = random_poly(16, 2, 20, rng(seed, "det-ptf"))
        records = []
        for workers in (1, 1, 3, 8):
            got, stats = count_ptf(p, PtfSatConfig(seed=seed, workers=workers))
            records.append(f'{{"value": {got}, "stats": {stats.to_json()}}}')
        c = gen_circuit(12, 2, 2, seed=derive(seed, "det-circuit"))
        circ = []
        for _ in range(2):
            got, stats = count_circuit(c, seed=seed)
            circ.append(f'{{"value": {got}, "stats": {stats.to_json()}}}')
        ptf_same = len(set(records)) == 1
        circ_same = len(set(circ)) == 1
        return ptf_same and circ_same, {"ptf_runs": len(records), "ptf_identical": ptf_same,
                                        "circuit_identical": circ_same}

    return _timed("C7", "determinism across repeats and worker counts", run)


CHECKS: dict[str, Callable[[], CheckResult]] = {
    "C1": check_single_ptf,
    "C2": check_tree_abstention,
    "C3": check_minority,
    "C4": check_circuits,
    "C5": check_partition,
    "C6": check_memoization,
    "C7": check_determinism,
}


def run_all(keys=None, echo: Callable[[str], None] | None = None) -> list[CheckResult]:
    out = []
    for key in keys or CHECKS:
        res = CHECKS[key]()
        if echo is not None:
            echo(res.line())
        out.append(res)
    return out
