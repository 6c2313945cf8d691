"""Exhaustive counting: the ground truth every faster path is checked against."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .circuit import Circuit
from .errors import LimitExceeded, ZeroValue
from .hypercube import value_table
from .polynomial import Polynomial

DEFAULT_BRUTE_LIMIT = 26

# assignments handled per numpy block
_BLOCK_VARS = 20
# polynomials with at most this many support variables are evaluated by table lookup
_TABLE_SUPPORT = 20


class _Evaluator:
    """Exact values of one polynomial at batches of encoded assignments."""

    def __init__(self, p: Polynomial):
        self.p = p
        self.support = p.support()
        self.table = None
        if len(self.support) <= _TABLE_SUPPORT:
            local = p.relabel({v: i for i, v in enumerate(self.support)}, len(self.support))
            self.table = value_table(local)

    def block(self, hi: int, block: int) -> np.ndarray:
        """Values at every assignment whose variables >= ``block`` encode ``hi``."""
        if self.table is not None:
            return self(_block_indices(hi, block))
        sigma = {v: -1 if (hi >> (v - block)) & 1 else 1 for v in self.support if v >= block}
        low = self.p.restrict(sigma)
        return value_table(Polynomial._trusted(block, low.k, dict(low.terms)))

    def __call__(self, indices: np.ndarray) -> np.ndarray:
        indices = np.asarray(indices, dtype=np.uint64)
        if self.table is not None:
            idx = np.zeros(len(indices), dtype=np.int64)
            for i, v in enumerate(self.support):
                idx |= ((indices >> np.uint64(v)) & np.uint64(1)).astype(np.int64) << i
            return self.table[idx]
        vals = np.zeros(len(indices), dtype=object)
        for mono, c in self.p.terms.items():
            flip = np.zeros(len(indices), dtype=bool)
            for v in mono:
                flip ^= ((indices >> np.uint64(v)) & np.uint64(1)).astype(bool)
            vals = vals + np.where(flip, -c, c)
        return vals


def poly_values(p: Polynomial, indices: np.ndarray) -> np.ndarray:
    """Exact values of ``p`` at the encoded assignments ``indices``."""
    return _Evaluator(p)(indices)


def _block_indices(hi: int, block: int) -> np.ndarray:
    return np.arange(1 << block, dtype=np.uint64) | np.uint64(hi << block)


def _blocks(n: int) -> Iterator[tuple[int, int]]:
    block = min(n, _BLOCK_VARS)
    for hi in range(1 << (n - block)):
        yield hi, block


def satisfied_at(
    indices: np.ndarray, polys: Sequence[Polynomial] = (), circuit: Circuit | None = None
) -> np.ndarray:
    """True where the circuit (if any) and every polynomial are satisfied."""
    return _satisfied(np.asarray(indices, dtype=np.uint64), [_Evaluator(p) for p in polys], circuit)


def _satisfied(indices: np.ndarray, evaluators: list[_Evaluator], circuit: Circuit | None,
               hi_block: tuple[int, int] | None = None) -> np.ndarray:
    ok = np.ones(len(indices), dtype=bool)
    if circuit is not None:
        ok &= circuit.satisfied_mask(indices)
    for ev in evaluators:
        vals = ev.block(*hi_block) if hi_block is not None else ev(indices)
        if np.any(vals == 0):
            raise ZeroValue(f"{ev.p!r} vanishes on the cube")
        ok &= vals < 0
    return ok


def count_satisfying(
    n: int,
    polys: Sequence[Polynomial] = (),
    circuit: Circuit | None = None,
    limit: int = DEFAULT_BRUTE_LIMIT,
    stats=None,
) -> int:
    """#{a in {-1,1}^n : C(a) = -1 and P(a) < 0 for every P}."""
    if n > limit:
        raise LimitExceeded(f"{n} variables exceeds the brute-force limit {limit}")
    evaluators = [_Evaluator(p) for p in polys]
    total = 0
    for hi, block in _blocks(n):
        idx = _block_indices(hi, block)
        total += int(np.count_nonzero(_satisfied(idx, evaluators, circuit, (hi, block))))
    if stats is not None:
        stats.brute_assignments += 1 << n
    return total


def brute_count_poly(p: Polynomial, limit: int = DEFAULT_BRUTE_LIMIT) -> int:
    return count_satisfying(p.n, [p], limit=limit)


def brute_count_conjunction(polys: Sequence[Polynomial], n: int | None = None, limit: int = DEFAULT_BRUTE_LIMIT) -> int:
    if n is None:
        if not polys:
            raise ValueError("n is required for an empty conjunction")
        n = polys[0].n
    if any(p.n != n for p in polys):
        raise ValueError("all polynomials must share the same variable count")
    return count_satisfying(n, polys, limit=limit)


def brute_count_circuit(
    c: Circuit, side: Sequence[Polynomial] = (), limit: int = DEFAULT_BRUTE_LIMIT
) -> int:
    return count_satisfying(c.n, side, circuit=c, limit=limit)


def sign_table(p: Polynomial) -> np.ndarray:
    """Boolean truth table (True = satisfied) over all 2**n assignments."""
    vals = value_table(p)
    if np.any(vals == 0):
        raise ZeroValue(f"{p!r} vanishes on the cube")
    return vals < 0


def exact_bias(p: Polynomial, limit: int = DEFAULT_BRUTE_LIMIT) -> tuple[int, Fraction]:
    """Majority value and exact minority fraction of ``sgn(p)``.

    Only the support is enumerated; the fraction does not depend on unused
    variables. Ties go to +1.
    """
    support = p.support()
    local = p.relabel({v: i for i, v in enumerate(support)}, len(support))
    sat = count_satisfying(local.n, [local], limit=limit)
    total = 1 << local.n
    if sat > total - sat:
        return -1, Fraction(total - sat, total)
    return 1, Fraction(sat, total)


def minority_indices(polys: Sequence[Polynomial], n: int, limit: int = DEFAULT_BRUTE_LIMIT) -> np.ndarray:
    """Sorted encoded assignments where some polynomial is positive."""
    if n > limit:
        raise LimitExceeded(f"{n} variables exceeds the brute-force limit {limit}")
    evaluators = [_Evaluator(p) for p in polys]
    found = []
    for hi, block in _blocks(n):
        idx = _block_indices(hi, block)
        hit = np.zeros(len(idx), dtype=bool)
        for ev in evaluators:
            vals = ev.block(hi, block)
            if np.any(vals == 0):
                raise ZeroValue(f"{ev.p!r} vanishes on the cube")
            hit |= vals > 0
        found.append(idx[hit])
    return np.concatenate(found) if found else np.zeros(0, dtype=np.uint64)
