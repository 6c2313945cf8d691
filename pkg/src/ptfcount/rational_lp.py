"""Exact rational simplex for small dense LPs.

Solves ``max c.x  s.t.  A x <= b, x >= 0`` with ``b >= 0`` so the origin is
a feasible starting basis. Arithmetic is exact (GMP rationals, or
``fractions.Fraction`` without gmpy2) and pivoting uses Bland's rule, so
the method cannot cycle. Problem sizes here are a few dozen rows and columns.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

try:  # GMP rationals are an order of magnitude faster when available
    from gmpy2 import mpq as Rational
except ImportError:  # pragma: no cover
    Rational = Fraction

INFINITY = float("inf")


def maximize(
    c: Sequence[int],
    A: Sequence[Sequence[int]],
    b: Sequence[int],
    stop_above: Fraction | int | None = None,
) -> Fraction | float:
    """Optimal objective value, or ``INFINITY`` if unbounded.

    With ``stop_above`` set, returns as soon as a basic feasible solution
    with objective strictly above it is reached.
    """
    m, n = len(A), len(c)
    if any(bi < 0 for bi in b):
        raise ValueError("right-hand side must be non-negative")
    width = n + m
    rows: list[list] = []
    for i, (row, bi) in enumerate(zip(A, b)):
        if len(row) != n:
            raise ValueError("constraint row length does not match objective")
        t = [Rational(a) for a in row] + [Rational(0)] * m + [Rational(bi)]
        t[n + i] = Rational(1)
        rows.append(t)
    z = [Rational(-ci) for ci in c] + [Rational(0)] * (m + 1)
    basis = [n + i for i in range(m)]

    while True:
        if stop_above is not None and z[-1] > stop_above:
            return Fraction(z[-1])
        col = next((j for j in range(width) if z[j] < 0), None)
        if col is None:
            return Fraction(z[-1])
        best = None
        for i, t in enumerate(rows):
            a = t[col]
            if a > 0:
                ratio = t[-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return INFINITY
        r = best[1]
        _pivot(rows, z, r, col)
        basis[r] = col


def _pivot(rows: list[list], z: list, r: int, col: int) -> None:
    prow = rows[r]
    inv = 1 / prow[col]
    if inv != 1:
        prow[:] = [v * inv for v in prow]
    nz = [(j, v) for j, v in enumerate(prow) if v]
    for i, t in enumerate(rows):
        if i != r:
            f = t[col]
            if f:
                for j, v in nz:
                    t[j] -= f * v
    f = z[col]
    if f:
        for j, v in nz:
            z[j] -= f * v


def strictly_feasible(
    weak: Sequence[Sequence[int]], strict: Sequence[Sequence[int]]
) -> bool:
    """Is there ``w`` with ``q.w >= 0`` for weak rows and ``q.w > 0`` for strict rows?

    The system is homogeneous, so it is feasible iff the LP maximising a
    shared margin ``s`` (bounded by 1, with ``sum |w_i| <= 1``) has a
    positive optimum. ``w`` is split as ``w+ - w-``.
    """
    rows = list(weak) + list(strict)
    if not strict:
        return True
    r = len(rows[0])
    A: list[list[int]] = []
    b: list[int] = []
    for q in weak:
        A.append([-x for x in q] + list(q) + [0])
        b.append(0)
    for q in strict:
        A.append([-x for x in q] + list(q) + [1])
        b.append(0)
    A.append([0] * (2 * r) + [1])
    b.append(1)
    A.append([1] * (2 * r) + [0])
    b.append(1)
    c = [0] * (2 * r) + [1]
    return maximize(c, A, b, stop_above=0) > 0
