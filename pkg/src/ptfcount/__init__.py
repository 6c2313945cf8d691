"""Exact model counting for polynomial threshold functions and PTF circuits."""
from __future__ import annotations

from .brute import brute_count_circuit, brute_count_conjunction, brute_count_poly
from .circuit import Circuit, Gate
from .circuit_sat import ParamConfig, count_circuit
from .errors import PtfError
from .generate import gen_instance
from .ldt import ConjunctionOracle, LdtTree
from .polynomial import Polynomial
from .ptf_sat import PtfSatConfig, count_ptf
from .ptfc import parse_instance, serialize
from .stats import RunStats

__all__ = [
    "Circuit", "ConjunctionOracle", "Gate", "LdtTree", "ParamConfig", "Polynomial",
    "PtfError", "PtfSatConfig", "RunStats", "brute_count_circuit", "brute_count_conjunction",
    "brute_count_poly", "count_circuit", "count_ptf", "gen_instance", "parse_instance",
    "serialize",
]
