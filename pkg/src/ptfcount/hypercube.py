"""Vectorised exact evaluation over {-1,1}^n.

Assignments are encoded as integers: bit ``i`` set means ``x_i = -1``. With
that encoding the table of values of a multilinear polynomial is the
(unnormalised) Walsh-Hadamard transform of its coefficient array indexed by
monomial bitmask, which is how every table here is produced.

Arrays use int64 whenever the coefficient mass bounds every partial sum
below 2**62 and fall back to Python-int object arrays otherwise, so results
stay exact either way.
"""
from __future__ import annotations

import numpy as np

from .polynomial import Polynomial, monomial_order

_INT64_SAFE = 1 << 62

# largest n materialised as a single table; callers chunk above this
MAX_TABLE_VARS = 22


def dtype_for(bound: int) -> type | np.dtype:
    return np.int64 if bound < _INT64_SAFE else object


def walsh_hadamard(arr: np.ndarray) -> np.ndarray:
    """Unnormalised transform along the last axis (length must be 2**n)."""
    out = np.array(arr, copy=True)
    size = out.shape[-1]
    lead = out.shape[:-1]
    h = 1
    while h < size:
        view = out.reshape(*lead, size // (2 * h), 2, h)
        a = view[..., 0, :].copy()
        b = view[..., 1, :]
        view[..., 0, :] = a + b
        view[..., 1, :] = a - b
        h *= 2
    return out


def mask_of(mono) -> int:
    m = 0
    for v in mono:
        m |= 1 << v
    return m


def value_table(p: Polynomial, n: int | None = None) -> np.ndarray:
    """Exact values of ``p`` at all 2**n assignments."""
    n = p.n if n is None else n
    if n > MAX_TABLE_VARS:
        raise ValueError(f"refusing to materialise 2**{n} values")
    bound = sum(abs(c) for c in p.terms.values())
    coeffs = np.zeros(1 << n, dtype=dtype_for(bound))
    if coeffs.dtype == object:
        coeffs[:] = 0
    for mono, c in p.terms.items():
        if mono and mono[-1] >= n:
            raise ValueError(f"monomial {mono} outside {n} variables")
        coeffs[mask_of(mono)] = c
    return walsh_hadamard(coeffs)


def parity_signs(indices: np.ndarray, mask: int) -> np.ndarray:
    """+1/-1 per index: (-1) ** popcount(index & mask)."""
    if mask == 0:
        return np.ones(len(indices), dtype=np.int64)
    bits = np.bitwise_count(indices & np.uint64(mask)).astype(np.int64)
    return 1 - 2 * (bits & 1)


def restriction_table(p: Polynomial, keep: int, k: int | None = None) -> np.ndarray:
    """Coefficient vectors of every restriction of the high variables.

    Row ``s`` holds ``coeff_vector(p restricted by s, keep, k)`` where ``s``
    encodes values of variables ``keep .. n-1`` (bit j <-> variable keep+j).
    """
    k = p.k if k is None else k
    n = p.n
    free = n - keep
    order = monomial_order(keep, k)
    col = {mono: i for i, mono in enumerate(order)}
    bound = sum(abs(c) for c in p.terms.values())
    table = np.zeros((1 << free, len(order)), dtype=dtype_for(bound))
    if table.dtype == object:
        table[:] = 0
    idx = np.arange(1 << free, dtype=np.uint64)
    for mono, c in p.terms.items():
        low = tuple(v for v in mono if v < keep)
        high = 0
        for v in mono:
            if v >= keep:
                high |= 1 << (v - keep)
        j = col[low]
        if high:
            signs = parity_signs(idx, high)
            if table.dtype == object:
                signs = signs.astype(object)
            table[:, j] += c * signs
        else:
            table[:, j] += c
    return table


def vectors_to_tables(vectors: np.ndarray, q: int, k: int) -> np.ndarray:
    """Value tables (rows x 2**q) from coefficient vectors over (q, k)."""
    vectors = np.atleast_2d(vectors)
    order = monomial_order(q, k)
    coeffs = np.zeros((vectors.shape[0], 1 << q), dtype=vectors.dtype)
    if coeffs.dtype == object:
        coeffs[:] = 0
    for j, mono in enumerate(order):
        coeffs[:, mask_of(mono)] = vectors[:, j]
    return walsh_hadamard(coeffs)


def assignment_columns(indices: np.ndarray, n: int) -> list[np.ndarray]:
    """Per-variable boolean arrays: True where the variable is -1."""
    indices = np.asarray(indices, dtype=np.uint64)
    return [((indices >> np.uint64(i)) & np.uint64(1)).astype(bool) for i in range(n)]


def index_to_assignment(index: int, n: int) -> tuple[int, ...]:
    return tuple(-1 if (index >> i) & 1 else 1 for i in range(n))


def assignment_to_index(a) -> int:
    return sum(1 << i for i, v in enumerate(a) if v < 0)
