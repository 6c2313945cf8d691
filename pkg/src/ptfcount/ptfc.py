"""Reader and writer for the line-oriented ``ptfc v1`` instance format.

A single threshold function::

    ptfc v1
    nvars 2
    ptf k=2
    term 1 : 0 1
    term 1 : 0
    term -1 :

A circuit lists gates in order; term indices refer to a gate's own input
positions and the output must be the last gate::

    ptfc v1
    nvars 2
    gate g0 inputs x0 k=1
    term -1 : 0
    gate g1 inputs x1 g0 k=1
    term 1 : 0
    term 1 : 1
    term 1 :
    output g1

Blank lines and ``#`` comments are ignored. Coefficients are exact
decimal integers. Writing a parsed instance gives the canonical form:
like terms merged, zero terms dropped, terms in degree-then-lexicographic
order.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .circuit import Circuit, Gate
from .errors import DegreeExceeded, ParseError, TooManyVariables
from .polynomial import Polynomial

HEADER = "ptfc v1"

_INT = re.compile(r"[+-]?\d+\Z")
_K = re.compile(r"k=(\d+)\Z")


@dataclass
class _Token:
    text: str
    column: int


def _tokens(line: str) -> list[_Token]:
    return [_Token(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]


@dataclass
class _Block:
    line: int
    fan_in: int
    k: int
    inputs: tuple = ()
    terms: dict = field(default_factory=dict)


def _int(tok: _Token, line: int, what: str) -> int:
    if not _INT.match(tok.text):
        raise ParseError(f"expected an integer {what}, got {tok.text!r}", line, tok.column)
    return int(tok.text)


def _k(tok: _Token, line: int) -> int:
    m = _K.match(tok.text)
    if not m:
        raise ParseError(f"expected k=<degree>, got {tok.text!r}", line, tok.column)
    return int(m.group(1))


def _wire(tok: _Token, line: int, nvars: int, n_gates: int) -> tuple[str, int]:
    m = re.fullmatch(r"([xg])(\d+)", tok.text)
    if not m:
        raise ParseError(f"expected a wire x<i> or g<j>, got {tok.text!r}", line, tok.column)
    kind, idx = m.group(1), int(m.group(2))
    if kind == "x" and idx >= nvars:
        raise ParseError(f"input x{idx} is out of range for nvars {nvars}", line, tok.column)
    if kind == "g" and idx >= n_gates:
        raise ParseError(f"wire g{idx} does not refer to an earlier gate", line, tok.column)
    return kind, idx


def _add_term(block: _Block, toks: list[_Token], line: int) -> None:
    if len(toks) < 3 or toks[2].text != ":":
        col = toks[2].column if len(toks) > 2 else len(" ".join(t.text for t in toks)) + 1
        raise ParseError("expected 'term <coeff> : <indices>'", line, col)
    c = _int(toks[1], line, "coefficient")
    idx = [_int(t, line, "index") for t in toks[3:]]
    for t, i in zip(toks[3:], idx):
        if not 0 <= i < block.fan_in:
            raise ParseError(f"index {i} is outside [0, {block.fan_in})", line, t.column)
    mono = tuple(sorted(idx))
    if len(set(mono)) != len(mono):
        raise ParseError("repeated index in a term", line, toks[3].column)
    if len(mono) > block.k:
        raise DegreeExceeded(f"line {line}: term of degree {len(mono)} exceeds k={block.k}")
    block.terms[mono] = block.terms.get(mono, 0) + c


def _finish(block: _Block, strict: bool) -> Polynomial:
    try:
        p = Polynomial(block.fan_in, block.k, block.terms)
    except TooManyVariables as exc:
        raise ParseError(str(exc), block.line) from exc
    if strict and p.coefficient_sum() % 2 == 0:
        raise ParseError("coefficient sum is even, so the polynomial may vanish on the cube", block.line)
    return p


def parse_instance(text: str, strict: bool = False) -> Polynomial | Circuit:
    """Parse ``ptfc v1`` text into a Polynomial or a Circuit.

    With ``strict`` every polynomial must have an odd coefficient sum,
    which guarantees it never evaluates to zero.
    """
    lines = [(i + 1, raw.split("#", 1)[0]) for i, raw in enumerate(text.splitlines())]
    lines = [(no, ln) for no, ln in lines if ln.strip()]
    if not lines or lines[0][1].split() != HEADER.split():
        raise ParseError(f"missing '{HEADER}' header", lines[0][0] if lines else 1)
    if len(lines) < 2:
        raise ParseError("missing 'nvars' line", lines[0][0] + 1)
    no, ln = lines[1]
    toks = _tokens(ln)
    if toks[0].text != "nvars" or len(toks) != 2:
        raise ParseError("expected 'nvars <n>'", no, toks[0].column)
    nvars = _int(toks[1], no, "variable count")
    if nvars < 0:
        raise ParseError("nvars must be non-negative", no, toks[1].column)

    ptf: _Block | None = None
    gates: list[Gate] = []
    current: _Block | None = None
    output: int | None = None
    mode = None
    for no, ln in lines[2:]:
        toks = _tokens(ln)
        head = toks[0].text
        if output is not None:
            raise ParseError("nothing may follow the output line", no, toks[0].column)
        if head == "ptf":
            if mode is not None:
                raise ParseError("'ptf' must be the only block", no, toks[0].column)
            if len(toks) != 2:
                raise ParseError("expected 'ptf k=<degree>'", no, toks[0].column)
            mode = "ptf"
            ptf = current = _Block(no, nvars, _k(toks[1], no))
        elif head == "gate":
            if mode == "ptf":
                raise ParseError("gates cannot follow a 'ptf' block", no, toks[0].column)
            mode = "circuit"
            if current is not None:
                gates.append(Gate(current.inputs, _finish(current, strict)))
            if len(toks) < 4 or toks[2].text != "inputs":
                raise ParseError("expected 'gate g<i> inputs <wires> k=<degree>'", no, toks[0].column)
            if toks[1].text != f"g{len(gates)}":
                raise ParseError(f"expected gate name g{len(gates)}, got {toks[1].text!r}", no, toks[1].column)
            inputs = tuple(_wire(t, no, nvars, len(gates)) for t in toks[3:-1])
            current = _Block(no, len(inputs), _k(toks[-1], no), inputs)
        elif head == "term":
            if current is None:
                raise ParseError("term outside a 'ptf' or 'gate' block", no, toks[0].column)
            _add_term(current, toks, no)
        elif head == "output":
            if mode != "circuit" or len(toks) != 2:
                raise ParseError("expected 'output g<i>' after gates", no, toks[0].column)
            gates.append(Gate(current.inputs, _finish(current, strict)))
            current = None
            if toks[1].text != f"g{len(gates) - 1}":
                raise ParseError("the output must be the last gate", no, toks[1].column)
            output = len(gates) - 1
        else:
            raise ParseError(f"unknown directive {head!r}", no, toks[0].column)

    if mode == "ptf":
        return _finish(ptf, strict)
    if mode == "circuit":
        if output is None:
            raise ParseError("missing 'output' line", lines[-1][0] + 1)
        return Circuit(nvars, gates)
    raise ParseError("no 'ptf' or 'gate' block", lines[-1][0] + 1)


def _term_lines(p: Polynomial) -> list[str]:
    return [f"term {c} :" + "".join(f" {i}" for i in mono) for mono, c in p.items()]


def serialize(obj: Polynomial | Circuit) -> str:
    """Canonical ``ptfc v1`` text."""
    out = [HEADER]
    if isinstance(obj, Polynomial):
        out += [f"nvars {obj.n}", f"ptf k={obj.k}", *_term_lines(obj)]
    else:
        out.append(f"nvars {obj.n}")
        for j, g in enumerate(obj.gates):
            wires = " ".join(f"{kind}{i}" for kind, i in g.inputs)
            out.append(f"gate g{j} inputs {wires} k={g.poly.k}".replace("inputs  ", "inputs "))
            out += _term_lines(g.poly)
        out.append(f"output g{obj.output}")
    return "\n".join(out) + "\n"


def read_instance(path: str, strict: bool = False) -> Polynomial | Circuit:
    with open(path) as fh:
        return parse_instance(fh.read(), strict)


def write_instance(obj: Polynomial | Circuit, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(serialize(obj))
