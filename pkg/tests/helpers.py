from __future__ import annotations

from ptfcount.circuit import Circuit, Gate
from ptfcount.polynomial import Polynomial


def depth2_example() -> Circuit:
    """sgn(y0 + y1 + 1) over y0 = sgn(-x0), y1 = sgn(-x1); satisfied only at (1, 1)."""
    g0 = Gate((("x", 0),), Polynomial(1, 1, {(0,): -1}))
    g1 = Gate((("x", 1),), Polynomial(1, 1, {(0,): -1}))
    top = Gate((("g", 0), ("g", 1)), Polynomial(2, 1, {(0,): 1, (1,): 1, (): 1}))
    return Circuit(2, [g0, g1, top])


# filled by test_acceptance, printed at the end of the session by conftest
ACCEPTANCE_LINES: list[str] = []
