"""Run instrumentation: counters that make the algorithms' structure visible."""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field, fields
from typing import Any


@dataclass
class RunStats:
    seed: int = 0
    config: dict[str, Any] = field(default_factory=dict)
    # direct evaluations of a polynomial or circuit at a single point
    point_evaluations: int = 0
    linear_queries: int = 0
    ldt_nodes: int = 0
    resolved_leaves: int = 0
    abstain_leaves: int = 0
    # resolved leaves reached by at least one traversal
    distinct_leaves_resolved: int = 0
    truth_table_computations: int = 0
    tree_runs: int = 0
    tree_abstains: int = 0
    brute_assignments: int = 0
    oracle_calls: int = 0
    oracle_abstains: int = 0
    # oracle calls answered from the memo of earlier identical calls
    oracle_cache_hits: int = 0
    minority_rho_scanned: int = 0
    minority_rho_bruteforced: int = 0
    restrictions: int = 0
    good_restrictions: int = 0
    level_calls: Counter = field(default_factory=Counter)
    clamps: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    wall_time: float = 0.0

    def bump_level(self, name: str, by: int = 1) -> None:
        self.level_calls[name] += by

    def clamp(self, note: str) -> None:
        if note not in self.clamps:
            self.clamps.append(note)

    def warn(self, note: str) -> None:
        if note not in self.warnings:
            self.warnings.append(note)

    def merge(self, other: RunStats) -> None:
        """Add another worker's counters into this one."""
        for f in fields(self):
            if f.name in ("seed", "config", "wall_time"):
                continue
            mine, theirs = getattr(self, f.name), getattr(other, f.name)
            if isinstance(mine, int):
                setattr(self, f.name, mine + theirs)
            elif isinstance(mine, Counter):
                mine.update(theirs)
            elif isinstance(mine, list):
                for note in theirs:
                    if note not in mine:
                        mine.append(note)

    def to_record(self, include_timing: bool = False) -> dict[str, Any]:
        rec: dict[str, Any] = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "wall_time":
                if include_timing:
                    rec[f.name] = round(v, 6)
                continue
            if isinstance(v, Counter):
                v = dict(sorted(v.items()))
            rec[f.name] = v
        return rec

    def to_json(self, include_timing: bool = False) -> str:
        return json.dumps(self.to_record(include_timing), sort_keys=True)
