"""Command-line driver. Every command prints one JSON record per line.

Exit status: 0 when a count was produced, 2 when the solver abstained,
1 on any error.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .acceptance import CHECKS
from .brute import DEFAULT_BRUTE_LIMIT, brute_count_circuit, count_satisfying
from .circuit import Circuit
from .circuit_sat import ParamConfig, count_circuit
from .errors import PtfError
from .generate import default_budget, gen_instance
from .polynomial import Polynomial
from .ptf_sat import PtfSatConfig, count_ptf
from .ptfc import parse_instance, read_instance, serialize
from .stats import RunStats

EXIT_COUNT, EXIT_ERROR, EXIT_ABSTAIN = 0, 1, 2

# (kind, n, depth, seed) per bench suite
SUITES = {
    "small": [("ptf", 10, 1, 0), ("ptf", 12, 1, 1), ("ptf", 14, 1, 2),
              ("circuit", 10, 2, 3), ("circuit", 12, 2, 4), ("circuit", 12, 3, 5)],
    "medium": [("ptf", 16, 1, 0), ("ptf", 18, 1, 1), ("ptf", 20, 1, 2),
               ("circuit", 14, 2, 3), ("circuit", 14, 2, 4), ("circuit", 14, 3, 5)],
}


def _emit(record: dict) -> None:
    print(json.dumps(record, sort_keys=True), flush=True)


def _solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=["brute", "ptf", "circuit"],
                   help="solver (default: ptf for a single PTF, circuit otherwise)")
    p.add_argument("--seed", type=int, default=0, help="master seed (64-bit)")
    p.add_argument("--m", type=int, help="block size for the single-PTF counter")
    p.add_argument("--A", type=float, default=4.0, help="circuit counter constant A")
    p.add_argument("--B", type=float, default=1.0, help="circuit counter constant B")
    p.add_argument("--c0", type=float, default=2.0, help="tree sample-size constant")
    p.add_argument("--c1", type=float, default=8.0, help="tree depth-budget constant")
    p.add_argument("--trees", type=int, help="independent trees / retries (default 10n)")
    p.add_argument("--brute-limit", type=int, default=DEFAULT_BRUTE_LIMIT,
                   help="largest variable count enumerated exhaustively")
    p.add_argument("--workers", type=int, default=1, help="threads for the single-PTF counter")
    p.add_argument("--stats-out", help="also write the stats record to this file")
    p.add_argument("--timing", action="store_true", help="include wall time in stats")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ptfcount", description="Exact #SAT for PTFs and PTF circuits.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="count satisfying assignments of an instance file")
    p.add_argument("file", help="ptfc v1 instance ('-' for stdin)")
    p.add_argument("--strict", action="store_true", help="reject polynomials with an even coefficient sum")
    _solver_flags(p)

    p = sub.add_parser("brute", help="exhaustive count of an instance file")
    p.add_argument("file")
    p.add_argument("--strict", action="store_true")
    p.add_argument("--brute-limit", type=int, default=DEFAULT_BRUTE_LIMIT)

    p = sub.add_parser("gen", help="write a random instance in ptfc v1 format")
    p.add_argument("--kind", choices=["ptf", "circuit"], default="ptf")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--size", type=int, help="wire budget (default floor(n^1.1))")
    p.add_argument("--bits", type=int, help="coefficient bit width (default 8 for ptf, 4 for circuits)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", help="write here instead of stdout")

    p = sub.add_parser("bench", help="run a fixed suite, one record per instance")
    p.add_argument("--suite", choices=sorted(SUITES), default="small")
    p.add_argument("--no-check", action="store_true", help="skip the brute-force cross-check")
    _solver_flags(p)

    p = sub.add_parser("selftest", help="run the acceptance checks")
    p.add_argument("--only", help="comma-separated check ids, e.g. C1,C3")
    return parser


def _read(path: str, strict: bool) -> Polynomial | Circuit:
    if path == "-":
        return parse_instance(sys.stdin.read(), strict)
    return read_instance(path, strict)


def solve(obj: Polynomial | Circuit, args: argparse.Namespace) -> tuple[int | None, RunStats]:
    mode = args.mode or ("ptf" if isinstance(obj, Polynomial) else "circuit")
    if mode == "brute":
        stats = RunStats(seed=args.seed, config={"mode": "brute", "n": obj.n})
        if isinstance(obj, Polynomial):
            value = count_satisfying(obj.n, [obj], limit=args.brute_limit, stats=stats)
        else:
            value = count_satisfying(obj.n, circuit=obj, limit=args.brute_limit, stats=stats)
        return value, stats
    if mode == "ptf":
        if isinstance(obj, Circuit):
            if obj.depth != 1:
                raise PtfError(f"ptf mode needs a single threshold function, got depth {obj.depth}")
            obj = obj.output_polynomial()
        cfg = PtfSatConfig(seed=args.seed, m=args.m, n_trees=args.trees, c0=args.c0,
                           c1=args.c1, workers=args.workers)
        return count_ptf(obj, cfg)
    circuit = Circuit.single(obj) if isinstance(obj, Polynomial) else obj
    cfg = ParamConfig(k=max(1, circuit.k), d=circuit.depth, A=args.A, B=args.B,
                      brute_limit=args.brute_limit, c0=args.c0, c1=args.c1)
    return count_circuit(circuit, cfg, seed=args.seed, n_trees=args.trees)


def _record(value: int | None, stats: RunStats, args, **extra) -> dict:
    rec = {"result": "abstain" if value is None else "count", "value": value,
           "stats": stats.to_record(include_timing=getattr(args, "timing", False))}
    rec.update(extra)
    return rec


def _cmd_count(args) -> int:
    obj = _read(args.file, args.strict)
    value, stats = solve(obj, args)
    rec = _record(value, stats, args)
    if args.stats_out:
        with open(args.stats_out, "w") as fh:
            fh.write(json.dumps(rec["stats"], sort_keys=True) + "\n")
    _emit(rec)
    return EXIT_ABSTAIN if value is None else EXIT_COUNT


def _cmd_brute(args) -> int:
    obj = _read(args.file, args.strict)
    args.mode, args.seed, args.timing = "brute", 0, False
    value, stats = solve(obj, args)
    _emit(_record(value, stats, args))
    return EXIT_COUNT


def _cmd_gen(args) -> int:
    bits = args.bits if args.bits is not None else (8 if args.kind == "ptf" else 4)
    depth = 1 if args.kind == "ptf" else args.depth
    obj = gen_instance(args.kind, args.n, args.k, depth, args.size, bits, args.seed)
    text = serialize(obj)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_COUNT


def _cmd_bench(args) -> int:
    status = EXIT_COUNT
    for idx, (kind, n, depth, seed) in enumerate(SUITES[args.suite]):
        obj = gen_instance(kind, n, 2, depth, default_budget(n), 8 if kind == "ptf" else 4, seed)
        run_args = argparse.Namespace(**vars(args))
        if run_args.mode == "ptf" and isinstance(obj, Circuit):
            run_args.mode = None
        value, stats = solve(obj, run_args)
        extra = {"instance": idx, "suite": args.suite, "kind": kind, "n": n, "depth": depth,
                 "gen_seed": seed}
        if not args.no_check:
            truth = brute_count_circuit(obj) if isinstance(obj, Circuit) else count_satisfying(n, [obj])
            extra["brute"] = truth
            extra["agrees"] = value is None or value == truth
            if not extra["agrees"]:
                status = EXIT_ERROR
        if value is None and status == EXIT_COUNT:
            status = EXIT_ABSTAIN
        _emit(_record(value, stats, run_args, **extra))
    return status


def _cmd_selftest(args) -> int:
    keys = args.only.split(",") if args.only else list(CHECKS)
    unknown = [k for k in keys if k not in CHECKS]
    if unknown:
        raise PtfError(f"unknown check id(s): {', '.join(unknown)}")
    failed = 0
    for key in keys:
        res = CHECKS[key]()
        failed += not res.passed
        _emit({"check": res.key, "title": res.title, "passed": res.passed,
               "detail": res.detail, "seconds": round(res.seconds, 2)})
    return EXIT_ERROR if failed else EXIT_COUNT


COMMANDS = {"count": _cmd_count, "brute": _cmd_brute, "gen": _cmd_gen,
            "bench": _cmd_bench, "selftest": _cmd_selftest}


def run_command(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (PtfError, OSError, ValueError) as exc:
        _emit({"result": "error", "error": f"{type(exc).__name__}: {exc}"})
        print(f"ptfcount: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run_command())
