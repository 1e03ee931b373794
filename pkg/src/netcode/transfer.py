"""Transfer matrices: symbolic, evaluated and block (vector) versions.

Everything is built by one recursion over the topological edge order: the
value at edge f is the sum over in-edges e of value(e) * coeff(e, f).  The
coefficient ring is whatever ``coeff`` returns (Poly, FieldElem, Block).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from itertools import permutations
from typing import Callable, Iterable, Mapping, Sequence

from .errors import NotTopologicallySorted, UnknownEdge
from .field import GF, FieldElem, field
from .graph import Network
from .poly import Poly, Var

ONE = Poly.one()
ZERO = Poly.zero()


def propagate(net: Network, source: str, coeff: Callable, one, avoid=frozenset()) -> dict:
    """Path sums from ``source`` to every edge, skipping paths through ``avoid``.

    Edges with no qualifying path are absent from the result.
    """
    if source in avoid:
        return {}
    order = net.order
    vals = {source: one}
    for e in order[net.position[source] + 1:]:
        if e in avoid:
            continue
        acc = None
        for d in net.in_edges(e):
            v = vals.get(d)
            if v is None:
                continue
            term = v * coeff(d, e)
            acc = term if acc is None else acc + term
        if acc is not None:
            vals[e] = acc
    return vals


@functools.lru_cache(maxsize=None)
def _var_poly(tail, head):
    return Poly.var(Var(tail, head))


def _sym_coeff(d, e):
    return _var_poly(d, e)


@functools.lru_cache(maxsize=8192)
def _symbolic_sums(net: Network, source: str, avoid: frozenset) -> dict:
    return propagate(net, source, _sym_coeff, ONE, avoid)


def path_sum(net: Network, s: str, t: str, avoid: Iterable[str] = (), via: Iterable[str] = ()) -> Poly:
    """Sum of path weights over s->t paths avoiding ``avoid`` (through ``via`` if given)."""
    net.check_edges((s, t))
    avoid = frozenset(avoid)
    total = _symbolic_sums(net, s, avoid).get(t, ZERO)
    via = frozenset(via)
    if via:
        # paths through via = all paths minus those that miss via entirely
        total = total + _symbolic_sums(net, s, avoid | via).get(t, ZERO)
    return total


def variables_of(net: Network) -> list:
    return [Var(e, f) for e, f in net.adjacent_pairs]


# -- matrices ---------------------------------------------------------------------

def _ring_zero(x):
    if isinstance(x, Poly):
        return Poly.zero(x.field)
    if isinstance(x, FieldElem):
        return FieldElem(0, x.field)
    if isinstance(x, Block):
        return x.zero_like()
    return 0


def _det(entries):
    """Determinant by cofactor expansion; signs vanish in characteristic 2."""
    n = len(entries)
    if n == 0:
        return None
    if n == 1:
        return entries[0][0]
    if n == 2:
        return entries[0][0] * entries[1][1] + entries[0][1] * entries[1][0]
    total = None
    for j in range(n):
        a = entries[0][j]
        if isinstance(a, (Poly, FieldElem)) and not a:
            continue
        minor = [row[:j] + row[j + 1:] for row in entries[1:]]
        term = a * _det(minor)
        total = term if total is None else total + term
    return total if total is not None else _ring_zero(entries[0][0])


@dataclass(frozen=True)
class TransferMatrix:
    """Matrix with rows and columns labelled by edge ids."""

    rows: tuple
    cols: tuple
    entries: tuple

    @classmethod
    def build(cls, rows, cols, fn):
        rows, cols = tuple(rows), tuple(cols)
        return cls(rows, cols, tuple(tuple(fn(r, c) for c in cols) for r in rows))

    @property
    def shape(self):
        return (len(self.rows), len(self.cols))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def entry(self, r: str, c: str):
        return self.entries[self.rows.index(r)][self.cols.index(c)]

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        if len(self.cols) != len(other.rows):
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = []
        for i in range(len(self.rows)):
            row = []
            for j in range(len(other.cols)):
                acc = None
                for k in range(len(self.cols)):
                    t = self.entries[i][k] * other.entries[k][j]
                    acc = t if acc is None else acc + t
                row.append(acc if acc is not None else _ring_zero(self.entries[i][0]))
            out.append(tuple(row))
        return TransferMatrix(self.rows, other.cols, tuple(out))

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return TransferMatrix(
            self.rows,
            self.cols,
            tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.entries, other.entries)),
        )

    def det(self):
        if len(self.rows) != len(self.cols):
            raise ValueError("det of a non-square matrix")
        if not self.rows:
            return ONE
        return _det([list(r) for r in self.entries])

    def variables(self) -> frozenset:
        out = set()
        for row in self.entries:
            for p in row:
                out |= p.variables()
        return frozenset(out)

    def is_zero(self) -> bool:
        return all(not p for row in self.entries for p in row)

    def map(self, fn) -> "TransferMatrix":
        return TransferMatrix(self.rows, self.cols, tuple(tuple(fn(x) for x in r) for r in self.entries))

    def evaluate(self, assignment: Mapping, fld: GF) -> list:
        return [[int(p.evaluate(assignment, fld)) for p in row] for row in self.entries]

    def submatrix(self, rows: Sequence[str], cols: Sequence[str]) -> "TransferMatrix":
        return TransferMatrix.build(rows, cols, self.entry)

    def render(self) -> str:
        lines = []
        for r, row in zip(self.rows, self.entries):
            for c, p in zip(self.cols, row):
                lines.append(f"  [{r}, {c}] = {p.render() if hasattr(p, 'render') else p}")
        return "\n".join(lines)


def _check_sorted(net: Network, edges: Sequence[str]):
    net.check_edges(edges)
    pos = [net.position[e] for e in edges]
    if any(a >= b for a, b in zip(pos, pos[1:])):
        raise NotTopologicallySorted(f"{list(edges)} is not in topological order")


def extended_transfer_matrix(net: Network) -> TransferMatrix:
    """H = (I - F)^-1, rows and columns in topological order."""
    order = net.order
    return TransferMatrix.build(order, order, lambda r, c: path_sum(net, r, c))


def local_coding_matrix(net: Network) -> TransferMatrix:
    """F with F[e, f] = beta[e->f] for adjacent pairs, zero elsewhere."""
    adj = set(net.adjacent_pairs)
    order = net.order
    return TransferMatrix.build(order, order, lambda r, c: _var_poly(r, c) if (r, c) in adj else ZERO)


def identity_matrix(labels) -> TransferMatrix:
    labels = tuple(labels)
    return TransferMatrix.build(labels, labels, lambda r, c: ONE if r == c else ZERO)


def transfer_matrix(net: Network, rows: Sequence[str], cols: Sequence[str]) -> TransferMatrix:
    net.check_edges(rows)
    net.check_edges(cols)
    return TransferMatrix.build(rows, cols, lambda r, c: path_sum(net, r, c))


def session_matrices(net: Network) -> dict:
    """G_ij = transfer from S_i to T_j."""
    S = {1: net.s1, 2: net.s2}
    T = {1: net.t1, 2: net.t2}
    return {(i, j): transfer_matrix(net, S[i], T[j]) for i in (1, 2) for j in (1, 2)}


def coupling_matrix(net: Network, U: Sequence[str]) -> TransferMatrix:
    """Unitriangular matrix of path sums between the (sorted) edges of U."""
    U = tuple(U)
    _check_sorted(net, U)
    idx = {u: i for i, u in enumerate(U)}

    def entry(r, c):
        if r == c:
            return ONE
        if idx[r] > idx[c]:
            return ZERO
        return path_sum(net, r, c)

    return TransferMatrix.build(U, U, entry)


def destinations_excluded_matrix(net: Network, S: Sequence[str], T: Sequence[str]) -> TransferMatrix:
    """Entry (i, j) sums s_i->t_j paths that avoid t_k for every k < j."""
    T = tuple(T)
    _check_sorted(net, T)
    net.check_edges(S)
    return TransferMatrix.build(
        S, T, lambda r, c: path_sum(net, r, c, avoid=T[: T.index(c)])
    )


def sources_excluded_matrix(net: Network, S: Sequence[str], T: Sequence[str]) -> TransferMatrix:
    """Entry (i, j) sums s_i->t_j paths that avoid s_k for every k > i."""
    S = tuple(S)
    _check_sorted(net, S)
    net.check_edges(T)
    return TransferMatrix.build(
        S, T, lambda r, c: path_sum(net, r, c, avoid=S[S.index(r) + 1:])
    )


def restricted_network_transfer_matrix(
    net: Network, U: Iterable[str], rows: Sequence[str] | None = None, cols: Sequence[str] | None = None
) -> TransferMatrix:
    """Source->destination path sums over paths that meet U."""
    U = frozenset(U)
    net.check_edges(U)
    rows = net.s1 + net.s2 if rows is None else tuple(rows)
    cols = net.t1 + net.t2 if cols is None else tuple(cols)
    return TransferMatrix.build(rows, cols, lambda r, c: path_sum(net, r, c, via=U) if U else ZERO)


def network_transfer_matrix(net: Network) -> TransferMatrix:
    return transfer_matrix(net, net.s1 + net.s2, net.t1 + net.t2)


# -- evaluated mode -------------------------------------------------------------

def evaluated_transfer_matrix(
    net: Network, values: Mapping, fld: GF, rows: Sequence[str], cols: Sequence[str]
) -> list:
    """Transfer matrix under concrete scalar coefficients ``values[(tail, head)]``."""
    one = FieldElem(1, fld)
    cache = {}

    def coeff(d, e):
        c = cache.get((d, e))
        if c is None:
            c = cache[(d, e)] = FieldElem(int(values.get((d, e), 0)), fld)
        return c

    out = []
    for r in rows:
        sums = propagate(net, r, coeff, one)
        out.append([int(sums.get(c, 0)) for c in cols])
    return out


# -- vector mode --------------------------------------------------------------------

class Block:
    """A small square matrix over a commutative ring (Poly or FieldElem entries)."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        self.rows = tuple(tuple(r) for r in rows)

    @property
    def v(self):
        return len(self.rows)

    def __add__(self, other):
        return Block([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __mul__(self, other):
        v = self.v
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = None
                for a, b in zip(r, c):
                    if not a or not b:
                        continue
                    t = a * b
                    acc = t if acc is None else acc + t
                row.append(acc if acc is not None else _ring_zero(r[0]))
            out.append(row)
        return Block(out)

    def zero_like(self):
        z = _ring_zero(self.rows[0][0])
        return Block([[z] * self.v for _ in range(self.v)])

    def __eq__(self, other):
        return isinstance(other, Block) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __bool__(self):
        return any(bool(x) for r in self.rows for x in r)

    def __iter__(self):
        return iter(self.rows)

    def __repr__(self):
        return f"Block({[[str(x) for x in r] for r in self.rows]})"


@functools.lru_cache(maxsize=None)
def _block_var(tail, head, v):
    return Block([[Poly.var(Var(tail, head, k, l)) for l in range(v)] for k in range(v)])


def _identity_block(v, one, zero):
    return Block([[one if i == j else zero for j in range(v)] for i in range(v)])


@dataclass(frozen=True)
class BlockTransferMatrix:
    rows: tuple
    cols: tuple
    v: int
    blocks: tuple

    def __getitem__(self, ij):
        i, j = ij
        return self.blocks[i][j]

    def entry(self, r, c):
        return self.blocks[self.rows.index(r)][self.cols.index(c)]

    def flatten(self) -> TransferMatrix:
        """Scalar matrix with rows/cols labelled (edge, coordinate)."""
        rows = tuple((r, k) for r in self.rows for k in range(self.v))
        cols = tuple((c, k) for c in self.cols for k in range(self.v))
        ents = []
        for bi, _ in enumerate(self.rows):
            for k in range(self.v):
                ents.append(tuple(self.blocks[bi][bj].rows[k][l] for bj in range(len(self.cols)) for l in range(self.v)))
        return TransferMatrix(rows, cols, tuple(ents))


def _block_sums(net, rows, cols, v, coeff, one_block, zero_block):
    out = []
    for r in rows:
        sums = propagate(net, r, coeff, one_block)
        out.append(tuple(sums.get(c, zero_block) for c in cols))
    return tuple(out)


def vector_extended_transfer_matrix(net: Network, v: int, rows=None, cols=None) -> BlockTransferMatrix:
    """Block H whose (i, j) block sums ordered block products along e_i->e_j paths."""
    if v < 1:
        raise ValueError("block dimension must be >= 1")
    rows = net.order if rows is None else tuple(rows)
    cols = net.order if cols is None else tuple(cols)
    one = _identity_block(v, ONE, ZERO)
    zero = one.zero_like()
    blocks = _block_sums(net, rows, cols, v, lambda d, e: _block_var(d, e, v), one, zero)
    return BlockTransferMatrix(tuple(rows), tuple(cols), v, blocks)


def evaluated_block_transfer(
    net: Network, blocks: Mapping, fld: GF, v: int, rows: Sequence[str], cols: Sequence[str]
) -> BlockTransferMatrix:
    """Block transfer matrix under concrete v x v blocks ``blocks[(tail, head)]`` (int entries)."""
    zero_e, one_e = FieldElem(0, fld), FieldElem(1, fld)
    one = _identity_block(v, one_e, zero_e)
    zero = one.zero_like()
    cache = {}

    def coeff(d, e):
        b = cache.get((d, e))
        if b is None:
            raw = blocks.get((d, e))
            b = zero if raw is None else Block([[FieldElem(int(x), fld) for x in r] for r in raw])
            cache[(d, e)] = b
        return b

    res = _block_sums(net, rows, cols, v, coeff, one, zero)
    return BlockTransferMatrix(tuple(rows), tuple(cols), v, res)
