"""Circuits whose gates are polynomial threshold functions.

A wire is ``("x", i)`` for input variable ``i`` or ``("g", j)`` for the
output of gate ``j``. Each gate carries a polynomial over its own input
positions (local variable ``p`` is the gate's ``p``-th wire). Gates are
stored in topological order and the last gate is the circuit output.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from .errors import ZeroValue
from .hypercube import assignment_columns, value_table
from .polynomial import PartialAssignment, Polynomial, check_assignment, lift_monomials

Wire = tuple[str, int]

# gates with larger fan-in are evaluated term by term instead of by table lookup
_GATHER_FANIN = 16


@dataclass(frozen=True)
class Gate:
    inputs: tuple[Wire, ...]
    poly: Polynomial

    def __post_init__(self):
        if self.poly.n != len(self.inputs):
            raise ValueError(
                f"gate polynomial has {self.poly.n} variables but {len(self.inputs)} inputs"
            )

    @property
    def fan_in(self) -> int:
        return len(self.inputs)


class Circuit:
    def __init__(self, n: int, gates: Sequence[Gate]):
        if not gates:
            raise ValueError("a circuit needs at least one gate")
        self.n = n
        self.gates: tuple[Gate, ...] = tuple(gates)
        for j, g in enumerate(self.gates):
            for kind, idx in g.inputs:
                if kind == "x":
                    if not 0 <= idx < n:
                        raise ValueError(f"gate {j} reads x{idx}, circuit has {n} inputs")
                elif kind == "g":
                    if not 0 <= idx < j:
                        raise ValueError(f"gate {j} reads g{idx}, which is not an earlier gate")
                else:
                    raise ValueError(f"unknown wire kind {kind!r}")

    @classmethod
    def single(cls, p: Polynomial) -> Circuit:
        """Depth-1 circuit computing ``sgn(p)`` directly on the inputs."""
        return cls(p.n, [Gate(tuple(("x", i) for i in range(p.n)), p)])

    @property
    def output(self) -> int:
        return len(self.gates) - 1

    @cached_property
    def gate_depths(self) -> tuple[int, ...]:
        depths: list[int] = []
        for g in self.gates:
            depths.append(1 + max((depths[i] for kind, i in g.inputs if kind == "g"), default=0))
        return tuple(depths)

    @property
    def depth(self) -> int:
        return self.gate_depths[self.output]

    @property
    def size(self) -> int:
        return sum(g.fan_in for g in self.gates)

    @property
    def k(self) -> int:
        return max(g.poly.k for g in self.gates)

    @property
    def weight(self) -> int:
        return max(sum(abs(c) for c in g.poly.terms.values()).bit_length() for g in self.gates)

    def bottom_gates(self) -> list[int]:
        return [j for j, d in enumerate(self.gate_depths) if d == 1]

    def gate_values(self, a: Sequence[int]) -> list[int]:
        vals: list[int] = []
        for j, g in enumerate(self.gates):
            local = [a[i] if kind == "x" else vals[i] for kind, i in g.inputs]
            v = g.poly.value(local)
            if v == 0:
                raise ZeroValue(f"gate {j} vanishes at {tuple(a)}")
            vals.append(-1 if v < 0 else 1)
        return vals

    def evaluate(self, a: Sequence[int]) -> int:
        if len(a) != self.n:
            raise ValueError(f"assignment has {len(a)} entries, circuit has {self.n} inputs")
        return self.gate_values(a)[-1]

    def satisfied_mask(self, indices: np.ndarray) -> np.ndarray:
        """Boolean array: output is -1 at each encoded assignment."""
        cols = assignment_columns(indices, self.n)
        return self._gate_masks(cols, len(np.atleast_1d(indices)))[-1]

    def _gate_masks(self, cols: list[np.ndarray], count: int) -> list[np.ndarray]:
        outs: list[np.ndarray] = []
        for j, g in enumerate(self.gates):
            wires = [cols[i] if kind == "x" else outs[i] for kind, i in g.inputs]
            neg = _eval_gate(g.poly, wires, count, j)
            outs.append(neg)
        return outs

    def restrict(self, sigma: PartialAssignment) -> Circuit:
        """Fix input variables; wires carrying fixed values are folded away."""
        check_assignment(sigma, self.n)
        gates = []
        for g in self.gates:
            local = {p: sigma[i] for p, (kind, i) in enumerate(g.inputs) if kind == "x" and i in sigma}
            gates.append(_fold_inputs(g, local))
        return Circuit(self.n, gates)

    def relabel(self, mapping: Mapping[int, int], n: int) -> Circuit:
        """Rename input variables (old -> new) into a circuit on ``n`` inputs."""
        gates = [
            Gate(tuple((kind, mapping[i]) if kind == "x" else (kind, i) for kind, i in g.inputs), g.poly)
            for g in self.gates
        ]
        return Circuit(n, gates)

    def lift(self, j: int) -> Polynomial:
        """Polynomial over the circuit inputs for a gate reading only inputs."""
        g = self.gates[j]
        if any(kind != "x" for kind, _ in g.inputs):
            raise ValueError(f"gate {j} reads other gates")
        return lift_monomials(g.poly, [i for _, i in g.inputs], self.n)

    def replace_gates(self, values: Mapping[int, int]) -> Circuit:
        """Drop the given gates, feeding their constant values to readers."""
        if self.output in values:
            raise ValueError("cannot replace the output gate")
        remap: dict[int, int] = {}
        gates = []
        for j, g in enumerate(self.gates):
            if j in values:
                continue
            local = {p: values[i] for p, (kind, i) in enumerate(g.inputs) if kind == "g" and i in values}
            folded = _fold_inputs(g, local)
            inputs = tuple((kind, remap[i]) if kind == "g" else (kind, i) for kind, i in folded.inputs)
            remap[j] = len(gates)
            gates.append(Gate(inputs, folded.poly))
        return Circuit(self.n, gates)

    def output_polynomial(self) -> Polynomial:
        if self.depth != 1:
            raise ValueError("only depth-1 circuits are a single polynomial over the inputs")
        return self.lift(self.output)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Circuit):
            return NotImplemented
        return self.n == other.n and self.gates == other.gates

    def __hash__(self) -> int:
        return hash((self.n, self.gates))

    def __repr__(self) -> str:
        return f"Circuit(n={self.n}, gates={len(self.gates)}, depth={self.depth}, size={self.size})"


def _fold_inputs(g: Gate, local: Mapping[int, int]) -> Gate:
    if not local:
        return g
    keep = [p for p in range(g.fan_in) if p not in local]
    poly = g.poly.restrict(local).relabel({p: i for i, p in enumerate(keep)}, len(keep))
    return Gate(tuple(g.inputs[p] for p in keep), poly)


def _eval_gate(poly: Polynomial, wires: list[np.ndarray], count: int, j: int) -> np.ndarray:
    if len(wires) <= _GATHER_FANIN:
        table = value_table(poly)
        idx = np.zeros(count, dtype=np.int64)
        for p, w in enumerate(wires):
            idx |= w.astype(np.int64) << p
        vals = table[idx]
    else:
        vals = np.zeros(count, dtype=object)
        for mono, c in poly.terms.items():
            flip = np.zeros(count, dtype=bool)
            for v in mono:
                flip ^= wires[v]
            vals = vals + np.where(flip, -c, c)
    if np.any(vals == 0):
        raise ZeroValue(f"gate {j} vanishes on a reachable input")
    return vals < 0


def eval_circuit(c: Circuit, a: Sequence[int]) -> int:
    return c.evaluate(a)


def restrict_circuit(c: Circuit, sigma: PartialAssignment) -> Circuit:
    return c.restrict(sigma)
