"""Vector (block) linear codes and rational rates."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..errors import DimensionMismatch
from ..graph import Network
from ..transfer import evaluated_block_transfer
from .scalar import CodeAssignment


def as_rate(x) -> Fraction:
    r = Fraction(x) if not isinstance(x, str) else Fraction(x.strip())
    if r < 0:
        raise ValueError("rates must be nonnegative")
    return r


def message_dims(net: Network, v: int, R1, R2) -> tuple:
    """Number of message coordinates per session, checking edge counts."""
    R1, R2 = as_rate(R1), as_rate(R2)
    n1, n2 = R1 * v, R2 * v
    if n1.denominator != 1 or n2.denominator != 1:
        raise DimensionMismatch(f"v={v} does not make rate ({R1},{R2}) integral")
    for name, r, S, T in (("1", R1, net.s1, net.t1), ("2", R2, net.s2, net.t2)):
        need = math.ceil(r)
        if not (len(S) == len(T) == need):
            raise DimensionMismatch(
                f"session {name} at rate {r} needs {need} source and destination edges, "
                f"got {len(S)} and {len(T)}"
            )
    return int(n1), int(n2)


@dataclass(frozen=True)
class VectorCheck:
    ok: bool
    det_g11: int
    det_g22: int
    g21_zero: bool
    G11: tuple
    G21: tuple
    G22: tuple

    def __bool__(self):
        return self.ok


def _coords(edges, v, count):
    return [(e, c) for e in edges for c in range(v)][:count]


def check_vector_code(net: Network, code: CodeAssignment, R1, R2) -> VectorCheck:
    v = code.v
    n1, n2 = message_dims(net, v, R1, R2)
    fld = code.field
    rows = net.s1 + net.s2
    cols = net.t1 + net.t2
    H = evaluated_block_transfer(net, code.values, fld, v, rows, cols)

    def entry(rc, cc):
        (r, i), (c, j) = rc, cc
        return int(H.entry(r, c).rows[i][j])

    in1, in2 = _coords(net.s1, v, n1), _coords(net.s2, v, n2)
    out1, out2 = _coords(net.t1, v, n1), _coords(net.t2, v, n2)
    g11 = [[entry(r, c) for c in out1] for r in in1]
    g21 = [[entry(r, c) for c in out1] for r in in2]
    g22 = [[entry(r, c) for c in out2] for r in in2]
    d11 = fld.det(g11) if n1 else 1
    d22 = fld.det(g22) if n2 else 1
    z = not any(x for row in g21 for x in row)
    return VectorCheck(
        bool(d11 and d22 and z), d11, d22, z,
        tuple(map(tuple, g11)), tuple(map(tuple, g21)), tuple(map(tuple, g22)),
    )


def verify_vector_code(net: Network, code: CodeAssignment, R1, R2) -> bool:
    """Block form of the decodability conditions at rational rates.

    Session i sends its ``v*R_i`` message coordinates on the first
    coordinates of its source edges (in list order); destination i decodes
    from the first ``v*R_i`` coordinates of its destination edges.
    """
    return check_vector_code(net, code, R1, R2).ok


def diagonal_lift(code: CodeAssignment, v: int) -> CodeAssignment:
    """Replace each scalar coefficient b by b * I_v."""
    if code.v != 1:
        raise DimensionMismatch("diagonal_lift expects a scalar code")
    vals = {
        p: tuple(tuple(x if i == j else 0 for j in range(v)) for i in range(v))
        for p, x in code.values.items()
    }
    return CodeAssignment(code.field_degree, vals, v)
