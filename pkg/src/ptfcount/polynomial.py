"""Sparse multilinear integer polynomials over {-1, 1} variables.

Variables are 0-indexed. A monomial is a strictly increasing tuple of
variable indices; the empty tuple is the constant term. Coefficients are
Python ints, so every operation here is exact.

Boolean convention: -1 is True. A polynomial ``P`` sign-represents the
function ``sgn(P(a))`` and an assignment satisfies it when ``P(a) < 0``.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterable, Mapping, Sequence

from .errors import DegreeExceeded, TooManyVariables, ZeroValue

Monomial = tuple[int, ...]
PartialAssignment = Mapping[int, int]


@lru_cache(maxsize=None)
def monomial_order(m: int, k: int) -> tuple[Monomial, ...]:
    """All multilinear monomials of degree <= k in m variables.

    Degree-major, lexicographic within a degree, constant first. The length
    is ``num_monomials(m, k)``.
    """
    out: list[Monomial] = []
    for d in range(min(k, m) + 1):
        out.extend(combinations(range(m), d))
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(m: int, k: int) -> dict[Monomial, int]:
    return {mono: i for i, mono in enumerate(monomial_order(m, k))}


def num_monomials(m: int, k: int) -> int:
    return sum(comb(m, i) for i in range(min(k, m) + 1))


def check_assignment(sigma: PartialAssignment, n: int) -> None:
    for var, val in sigma.items():
        if not 0 <= var < n:
            raise ValueError(f"variable {var} outside [0, {n})")
        if val not in (-1, 1):
            raise ValueError(f"variable {var} bound to {val!r}, expected -1 or 1")


class Polynomial:
    """Immutable multilinear polynomial with integer coefficients.

    ``n`` is the number of variables the polynomial is defined over and
    ``k`` its degree bound; only nonzero coefficients are stored.
    """

    __slots__ = ("n", "k", "_terms", "_hash")

    def __init__(self, n: int, k: int, terms: Mapping[Iterable[int], int] | None = None):
        if n < 0 or k < 0:
            raise ValueError("n and k must be non-negative")
        self.n = n
        self.k = k
        clean: dict[Monomial, int] = {}
        for mono, c in (terms or {}).items():
            mono = tuple(mono)
            if any(b <= a for a, b in zip(mono, mono[1:])):
                raise ValueError(f"monomial {mono} is not strictly increasing")
            if mono and (mono[0] < 0 or mono[-1] >= n):
                raise TooManyVariables(f"monomial {mono} uses a variable outside [0, {n})")
            if len(mono) > k:
                raise DegreeExceeded(f"monomial {mono} has degree {len(mono)} > k={k}")
            c = int(c)
            if c:
                clean[mono] = c
        self._terms = clean
        self._hash: int | None = None

    @classmethod
    def constant(cls, c: int, n: int = 0, k: int = 0) -> Polynomial:
        return cls(n, k, {(): c})

    @classmethod
    def _trusted(cls, n: int, k: int, terms: dict[Monomial, int]) -> Polynomial:
        # internal fast path: terms already canonical and nonzero
        p = cls.__new__(cls)
        p.n, p.k, p._terms, p._hash = n, k, terms, None
        return p

    @property
    def terms(self) -> Mapping[Monomial, int]:
        return self._terms

    def items(self) -> list[tuple[Monomial, int]]:
        """Terms sorted in canonical monomial order."""
        return sorted(self._terms.items(), key=lambda t: (len(t[0]), t[0]))

    @property
    def degree(self) -> int:
        return max((len(m) for m in self._terms), default=0)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not m for m in self._terms)

    @property
    def constant_term(self) -> int:
        return self._terms.get((), 0)

    def coefficient_sum(self) -> int:
        return sum(self._terms.values())

    def support(self) -> tuple[int, ...]:
        return tuple(sorted({v for mono in self._terms for v in mono}))

    def value(self, a: Sequence[int]) -> int:
        """Exact value at a full assignment (no zero check)."""
        total = 0
        for mono, c in self._terms.items():
            s = c
            for v in mono:
                if a[v] < 0:
                    s = -s
            total += s
        return total

    def restrict(self, sigma: PartialAssignment) -> Polynomial:
        """Substitute the bound variables; the result keeps the same ``n``."""
        if not sigma:
            return self
        out: dict[Monomial, int] = {}
        for mono, c in self._terms.items():
            rest = []
            for v in mono:
                val = sigma.get(v)
                if val is None:
                    rest.append(v)
                elif val < 0:
                    c = -c
            key = tuple(rest)
            out[key] = out.get(key, 0) + c
        return Polynomial._trusted(self.n, self.k, {m: c for m, c in out.items() if c})

    def relabel(self, mapping: Mapping[int, int], n: int) -> Polynomial:
        """Rename variables through ``mapping`` (old -> new) into ``n`` variables."""
        out: dict[Monomial, int] = {}
        for mono, c in self._terms.items():
            key = tuple(sorted(mapping[v] for v in mono))
            out[key] = out.get(key, 0) + c
        return Polynomial(n, self.k, out)

    def with_n(self, n: int) -> Polynomial:
        return Polynomial(n, self.k, self._terms)

    def __neg__(self) -> Polynomial:
        return Polynomial._trusted(self.n, self.k, {m: -c for m, c in self._terms.items()})

    def __mul__(self, s: int) -> Polynomial:
        if not isinstance(s, int):
            return NotImplemented
        if s == 0:
            return Polynomial._trusted(self.n, self.k, {})
        return Polynomial._trusted(self.n, self.k, {m: s * c for m, c in self._terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.n == other.n and self.k == other.k and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.k, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        if not self._terms:
            return f"Polynomial(n={self.n}, k={self.k}, 0)"
        parts = []
        for mono, c in self.items():
            var = "*".join(f"x{v}" for v in mono)
            parts.append(f"{c}*{var}" if var else str(c))
        return f"Polynomial(n={self.n}, k={self.k}, {' + '.join(parts)})"


def eval_poly(p: Polynomial, a: Sequence[int]) -> int:
    if len(a) != p.n:
        raise ValueError(f"assignment has {len(a)} entries, polynomial has {p.n} variables")
    v = p.value(a)
    if v == 0:
        raise ZeroValue(f"{p!r} vanishes at {tuple(a)}")
    return v


def restrict_poly(p: Polynomial, sigma: PartialAssignment) -> Polynomial:
    check_assignment(sigma, p.n)
    return p.restrict(sigma)


def weight(p: Polynomial) -> int:
    """Bit length of the sum of absolute coefficient values."""
    return sum(abs(c) for c in p.terms.values()).bit_length()


def coeff_vector(p: Polynomial, m: int, k: int) -> tuple[int, ...]:
    """Coefficients of ``p`` listed in ``monomial_order(m, k)``."""
    index = monomial_index(m, k)
    out = [0] * len(index)
    for mono, c in p.terms.items():
        if len(mono) > k:
            raise DegreeExceeded(f"monomial {mono} has degree > {k}")
        if mono and mono[-1] >= m:
            raise TooManyVariables(f"monomial {mono} uses a variable >= {m}")
        out[index[mono]] = c
    return tuple(out)


def from_coeff_vector(vec: Sequence[int], m: int, k: int) -> Polynomial:
    order = monomial_order(m, k)
    if len(vec) != len(order):
        raise ValueError(f"expected {len(order)} coefficients, got {len(vec)}")
    return Polynomial(m, k, {mono: c for mono, c in zip(order, vec) if c})


@lru_cache(maxsize=None)
def embedding(m_from: int, m_to: int, k: int) -> tuple[int, ...]:
    """Positions of the (m_from, k) monomials inside the (m_to, k) order."""
    if m_from > m_to:
        raise TooManyVariables(f"cannot embed {m_from} variables into {m_to}")
    target = monomial_index(m_to, k)
    return tuple(target[mono] for mono in monomial_order(m_from, k))


def lift_monomials(poly: Polynomial, wires: Sequence[int], n: int) -> Polynomial:
    """Substitute variable ``wires[i]`` for local variable ``i``.

    Repeated wires are reduced with ``x*x = 1``.
    """
    out: dict[Monomial, int] = {}
    for mono, c in poly.terms.items():
        vs: set[int] = set()
        for v in mono:
            vs ^= {wires[v]}
        key = tuple(sorted(vs))
        out[key] = out.get(key, 0) + c
    return Polynomial(n, poly.k, out)
