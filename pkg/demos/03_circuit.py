"""
Counting a depth-3 threshold circuit
====================================

The circuit counter fixes most variables, sets nearly-constant bottom
gates to their majority value, guesses the rest, and recurses on a
shallower circuit with side conditions that force every replaced gate to
the value it was given. The rare inputs on which a replaced gate disagrees
with its majority are collected separately and checked directly.
"""
from __future__ import annotations

from ptfcount import ParamConfig, brute_count_circuit, count_circuit
from ptfcount.brute import count_satisfying
from ptfcount.generate import gen_circuit

c = gen_circuit(13, 2, 3, seed=21)
print(c)
for j, g in enumerate(c.gates):
    wires = " ".join(f"{kind}{i}" for kind, i in g.inputs)
    print(f"  g{j} <- {wires}: {g.poly}")

cfg = ParamConfig(k=2, d=3)
trace: list = []
got, stats = count_circuit(c, cfg, seed=4, trace=trace)
truth = brute_count_circuit(c)
print(f"count {got}, exhaustive {truth}")
assert got == truth

rec = stats.to_record()
print(f"restrictions {rec['restrictions']} (good {rec['good_restrictions']}), "
      f"oracle calls {rec['oracle_calls']} ({rec['oracle_cache_hits']} repeats)")
print(f"calls per level {rec['level_calls']}")

# Every good restriction splits its count into minority inputs plus one
# term per guess of the unbiased gates; check that split directly.
for entry in trace[:5]:
    if entry["good"]:
        direct = count_satisfying(entry["circuit"].n, entry["side"], circuit=entry["circuit"])
        parts = entry["minority"] + sum(entry["per_guess"].values())
        print(f"depth {entry['depth']} leaf {entry['sigma']}: {entry['minority']} minority "
              f"+ {len(entry['per_guess'])} guesses = {parts} (direct {direct})")
