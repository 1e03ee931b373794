"""Multi-unicast networks, the Z-network embedding, and table (nonlinear) codes."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Callable, Mapping, Sequence

from ..errors import DimensionMismatch, InvalidNetwork, PreconditionViolated, StateSpaceTooLarge
from ..graph import Edge, Network
from .scalar import CodeAssignment

STATE_LIMIT = 1_000_000


@dataclass(frozen=True)
class MUnicastNetwork:
    """A DAG with m (source edges, destination edges) sessions."""

    edges: tuple
    sessions: tuple
    name: str = dc_field(default="", compare=False)

    def __post_init__(self):
        sess = tuple((tuple(map(str, S)), tuple(map(str, T))) for S, T in self.sessions)
        object.__setattr__(self, "sessions", sess)
        g = Network(tuple(self.edges), (), (), (), ())
        object.__setattr__(self, "edges", g.edges)
        object.__setattr__(self, "graph", g)
        seen = {}
        for i, (S, T) in enumerate(sess):
            for e in S + T:
                if e not in g.edge:
                    raise InvalidNetwork(f"session {i + 1} refers to unknown edge {e!r}")
                if e in seen:
                    raise InvalidNetwork(f"edge {e!r} appears in two session lists")
                seen[e] = i

    @property
    def m(self):
        return len(self.sessions)

    @property
    def order(self):
        return self.graph.order

    def in_edges(self, e):
        return self.graph.in_edges(e)

    @property
    def vertices(self):
        return self.graph.vertices

    def session_list(self):
        return list(self.sessions)


def session_list(net) -> list:
    if isinstance(net, MUnicastNetwork):
        return net.session_list()
    return [(net.s1, net.t1), (net.s2, net.t2)]


def build_z_from_m_unicast(B: MUnicastNetwork) -> Network:
    """Two-unicast-Z network in which rate (m, m) mirrors rate (1, ..., 1) on B.

    For session i: ``x1_i`` (source 1) feeds an adder; ``x2_i`` (source 2)
    forks into ``x2a_i`` (to the adder) and ``x2b_i`` (to a subtractor).  The
    adder drives B's i-th source edge.  B's i-th destination edge ends at a
    node emitting ``za_i`` (to the subtractor) and ``z_i`` (destination 2).
    The subtractor emits ``v_i`` to destination 1.  B's edges and vertices
    get a ``B.`` prefix.
    """
    for i, (S, T) in enumerate(B.sessions, start=1):
        if len(S) != 1 or len(T) != 1:
            raise PreconditionViolated(f"session {i} must have exactly one source and one destination edge")
        s, t = B.graph.edge[S[0]], B.graph.edge[T[0]]
        if B.graph.into_vertex(s.tail):
            raise PreconditionViolated(f"source edge {s.id!r} must not have incoming edges")
        if B.graph.out_of_vertex(t.head):
            raise PreconditionViolated(f"destination edge {t.id!r} must not have outgoing edges")
    src_of = {S[0]: i for i, (S, _) in enumerate(B.sessions, start=1)}
    dst_of = {T[0]: i for i, (_, T) in enumerate(B.sessions, start=1)}
    edges = []
    for e in B.edges:
        tail = f"add{src_of[e.id]}" if e.id in src_of else f"B.{e.tail}"
        head = f"zout{dst_of[e.id]}" if e.id in dst_of else f"B.{e.head}"
        edges.append(Edge(f"B.{e.id}", tail, head))
    s1, t1, s2, t2 = [], [], [], []
    for i in range(1, B.m + 1):
        edges += [
            Edge(f"x1_{i}", "src1", f"add{i}"),
            Edge(f"x2_{i}", "src2", f"fork{i}"),
            Edge(f"x2a_{i}", f"fork{i}", f"add{i}"),
            Edge(f"x2b_{i}", f"fork{i}", f"sub{i}"),
            Edge(f"za_{i}", f"zout{i}", f"sub{i}"),
            Edge(f"z_{i}", f"zout{i}", "dst2"),
            Edge(f"v_{i}", f"sub{i}", "dst1"),
        ]
        s1.append(f"x1_{i}")
        s2.append(f"x2_{i}")
        t1.append(f"v_{i}")
        t2.append(f"z_{i}")
    name = f"Z({B.name})" if B.name else "Z"
    return Network(tuple(edges), tuple(s1), tuple(t1), tuple(s2), tuple(t2), name=name)


# -- table codes ------------------------------------------------------------------

@dataclass(frozen=True)
class Group:
    """Abelian group on symbols 0..q^n-1: XOR, or digitwise addition mod q."""

    q: int
    n: int
    kind: str = "xor"

    def __post_init__(self):
        if self.kind == "xor" and self.q & (self.q - 1):
            raise ValueError("XOR needs an alphabet whose size is a power of 2")
        if self.kind not in ("xor", "mod"):
            raise ValueError(f"unknown group {self.kind!r}")

    def _digits(self, a):
        out = []
        for _ in range(self.n):
            a, d = divmod(a, self.q)
            out.append(d)
        return out

    def _pack(self, ds):
        a = 0
        for d in reversed(ds):
            a = a * self.q + d
        return a

    def add(self, a, b):
        if self.kind == "xor":
            return a ^ b
        return self._pack([(x + y) % self.q for x, y in zip(self._digits(a), self._digits(b))])

    def sub(self, a, b):
        if self.kind == "xor":
            return a ^ b
        return self._pack([(x - y) % self.q for x, y in zip(self._digits(a), self._digits(b))])


@dataclass
class LiftInfo:
    m: int
    base: "TableCode"
    group: Group


@dataclass
class TableCode:
    """Explicit function tables.

    ``relay[e]`` maps the tuple of symbols on ``in_edges(e)`` (sorted ids) to
    the symbol on e, for every edge that is not a source edge.  Source edges
    carry one message symbol each.  For a two-unicast-Z network
    ``decoders[1]`` maps T1 symbols to the S1 messages and ``decoders[2]``
    maps (T2 symbols, S1 messages) to the S2 messages; for an m-unicast
    network ``decoders[i]`` maps T_i symbols to session i's messages.
    """

    net: object
    q: int
    n: int
    relay: dict
    decoders: dict
    lift: LiftInfo | None = None

    @property
    def symbols(self) -> int:
        return self.q ** self.n

    @property
    def side_info(self) -> bool:
        return isinstance(self.net, Network)

    def source_edges(self) -> list:
        return [e for S, _ in session_list(self.net) for e in S]

    def simulate(self, messages: Mapping) -> dict:
        vals = dict(messages)
        sources = set(self.source_edges())
        for e in self.net.order:
            if e in sources:
                continue
            key = tuple(vals[d] for d in self.net.in_edges(e))
            vals[e] = self.relay[e][key]
        return vals

    def decode(self, vals: Mapping, messages: Mapping) -> list:
        """Per-session decoded message tuples (None where a table has no entry)."""
        sess = session_list(self.net)
        out = []
        for i, (S, T) in enumerate(sess, start=1):
            key = tuple(vals[t] for t in T)
            if self.side_info and i == 2:
                key = (key, tuple(messages[s] for s in sess[0][0]))
            out.append(self.decoders[i].get(key))
        return out


def tabulate(fn: Callable, arity: int, Q: int) -> dict:
    return {args: fn(*args) for args in itertools.product(range(Q), repeat=arity)}


def forwarding_code(B: MUnicastNetwork, q: int = 2, n: int = 1) -> TableCode:
    """Every relay edge copies its single input; each destination reads its edge."""
    Q = q ** n
    sources = {e for S, _ in B.sessions for e in S}
    relay = {}
    for e in B.order:
        if e in sources:
            continue
        ins = B.in_edges(e)
        if len(ins) != 1:
            raise PreconditionViolated(f"edge {e!r} has {len(ins)} inputs; forwarding needs exactly one")
        relay[e] = tabulate(lambda x: x, 1, Q)
    decoders = {}
    for i, (S, T) in enumerate(B.sessions, start=1):
        if len(S) != len(T):
            raise DimensionMismatch("forwarding needs |S_i| = |T_i|")
        decoders[i] = {k: k for k in itertools.product(range(Q), repeat=len(T))}
    return TableCode(B, q, n, relay, decoders)


def linear_table_code(net, code: CodeAssignment) -> TableCode:
    """Table form of a scalar linear code over GF(2^k) (alphabet 2^k, n = 1).

    Decoders are fitted by :func:`fit_decoders`.
    """
    fld = code.field
    Q = fld.order
    sources = {e for S, _ in session_list(net) for e in S}
    relay = {}
    for e in net.order:
        if e in sources:
            continue
        ins = net.in_edges(e)
        coeffs = [int(code.values.get((d, e), 0)) for d in ins]

        def fn(*xs, coeffs=coeffs):
            acc = 0
            for c, x in zip(coeffs, xs):
                acc ^= fld.mul(c, x)
            return acc

        relay[e] = tabulate(fn, len(ins), Q)
    tc = TableCode(net, Q, 1, relay, {})
    tc.decoders = fit_decoders(tc)
    return tc


def fit_decoders(code: TableCode) -> dict:
    """Decoder tables built by running every message tuple through the relays.

    An observation seen with two different messages keeps the first one, so
    a non-decodable code still fails :func:`verify_zero_error`.
    """
    sess = session_list(code.net)
    srcs = code.source_edges()
    _check_state_space(code.symbols, len(srcs))
    dec = {i: {} for i in range(1, len(sess) + 1)}
    for msg in itertools.product(range(code.symbols), repeat=len(srcs)):
        messages = dict(zip(srcs, msg))
        vals = code.simulate(messages)
        for i, (S, T) in enumerate(sess, start=1):
            key = tuple(vals[t] for t in T)
            if code.side_info and i == 2:
                key = (key, tuple(messages[s] for s in sess[0][0]))
            dec[i].setdefault(key, tuple(messages[s] for s in S))
    return dec


def _check_state_space(Q, count):
    if Q ** count > STATE_LIMIT:
        raise StateSpaceTooLarge(f"{Q}^{count} message tuples exceed {STATE_LIMIT}")


@dataclass
class ZeroErrorReport:
    ok: bool
    checked: int
    counterexample: dict | None = None
    properties: dict = dc_field(default_factory=dict)

    def __bool__(self):
        return self.ok


def verify_zero_error(code: TableCode, rates: Sequence[int] | None = None) -> ZeroErrorReport:
    """Simulate every message tuple and check exact decoding at all destinations.

    For lifted codes the four bijectivity properties of the adder/subtractor
    construction are checked too and reported under ``properties``.
    """
    sess = session_list(code.net)
    if rates is not None:
        if len(rates) != len(sess) or any(r != len(S) for r, (S, _) in zip(rates, sess)):
            raise DimensionMismatch(f"rates {tuple(rates)} do not match the session sizes")
    srcs = code.source_edges()
    _check_state_space(code.symbols, len(srcs))
    checked = 0
    bad = None
    for msg in itertools.product(range(code.symbols), repeat=len(srcs)):
        messages = dict(zip(srcs, msg))
        checked += 1
        try:
            vals = code.simulate(messages)
        except KeyError as exc:
            bad = {"messages": messages, "missing_table_entry": str(exc)}
            break
        decoded = code.decode(vals, messages)
        want = [tuple(messages[s] for s in S) for S, _ in sess]
        if decoded != want:
            bad = {"messages": messages, "decoded": decoded}
            break
    props = lift_properties(code) if code.lift is not None else {}
    ok = bad is None and all(props.values())
    return ZeroErrorReport(ok, checked, bad, props)


# -- lifting ------------------------------------------------------------------------

def lift_code(codeB: TableCode, group: str = "xor") -> TableCode:
    """Z-network code from a zero-error rate-(1,...,1) code on B.

    The adder sends Y_i = X1_i + X2_i into B, B's decoder output Z_i goes to
    destination 2 directly and to the subtractor, which sends V_i = Z_i - X2_i
    to destination 1.
    """
    B = codeB.net
    if not isinstance(B, MUnicastNetwork):
        raise PreconditionViolated("lift_code needs a code on an m-unicast network")
    Z = build_z_from_m_unicast(B)
    G = Group(codeB.q, codeB.n, group)
    Q = codeB.symbols
    m = B.m
    src_of = {S[0]: i for i, (S, _) in enumerate(B.sessions, start=1)}
    relay = {}
    for e in Z.order:
        if e in Z.s1 or e in Z.s2:
            continue
        ins = Z.in_edges(e)
        kind, _, idx = e.partition("_")
        if e.startswith("B."):
            bid = e[2:]
            if bid in src_of:
                # adder: inputs are x1_i and x2a_i in sorted order
                relay[e] = tabulate(lambda a, b: G.add(a, b), 2, Q)
            else:
                base = codeB.relay[bid]
                relay[e] = {k: base[k] for k in itertools.product(range(Q), repeat=len(ins))}
        elif kind in ("x2a", "x2b"):
            relay[e] = tabulate(lambda x: x, 1, Q)
        elif kind in ("za", "z"):
            i = int(idx)
            dec = codeB.decoders[i]
            relay[e] = {(x,): dec[(x,)][0] for x in range(Q)}
        elif kind == "v":
            # inputs sorted: x2b_i before za_i
            assert ins == (f"x2b_{idx}", f"za_{idx}"), ins
            relay[e] = tabulate(lambda x2, z: G.sub(z, x2), 2, Q)
        else:
            raise AssertionError(f"unexpected edge {e!r}")
    dec1 = {k: k for k in itertools.product(range(Q), repeat=m)}
    dec2 = {}
    for zs in itertools.product(range(Q), repeat=m):
        for x1 in itertools.product(range(Q), repeat=m):
            dec2[(zs, x1)] = tuple(G.sub(z, x) for z, x in zip(zs, x1))
    return TableCode(Z, codeB.q, codeB.n, relay, {1: dec1, 2: dec2}, LiftInfo(m, codeB, G))


def _lift_maps(code: TableCode):
    """Adder f_i, subtractor g_i and B's end-to-end map h, read off the tables."""
    info = code.lift
    B = info.base.net
    Z = code.net

    def f(i, x1, x2):
        s = B.sessions[i - 1][0][0]
        ins = Z.in_edges(f"B.{s}")
        fork = code.relay[f"x2a_{i}"][(x2,)]
        key = tuple(x1 if d == f"x1_{i}" else fork for d in ins)
        return code.relay[f"B.{s}"][key]

    def g(i, z, x2):
        za = code.relay[f"za_{i}"]
        # z is the symbol on B's destination edge; za applies B's decoder
        key = tuple(code.relay[f"x2b_{i}"][(x2,)] if d.startswith("x2b") else za[(z,)] for d in Z.in_edges(f"v_{i}"))
        return code.relay[f"v_{i}"][key]

    def h(ys):
        base = info.base
        msgs = {S[0]: y for (S, _), y in zip(B.sessions, ys)}
        vals = base.simulate(msgs)
        return tuple(vals[T[0]] for _, T in B.sessions)

    return f, g, h


def _bijective(fn, Q, m):
    images = {fn(x) for x in itertools.product(range(Q), repeat=m)}
    return len(images) == Q ** m


def lift_properties(code: TableCode) -> dict:
    """The four structural facts behind the equivalence, checked exhaustively.

    (1) for fixed X2, Z -> (g_i(Z_i, X2_i))_i is a bijection;
    (2) for fixed X2, X1 -> (f_i(X1_i, X2_i))_i is a bijection;
    (3) for fixed X1, X2 -> f(X1, X2) and X2 -> h(f(X1, X2)) are bijections;
    (4) for coordinates i != j, any y_i, and any y_j != y_j', some x1_j and
        two distinct x2_j, x2_j' give f_j = y_j and y_j', while some pair
        gives f_i = y_i.
    """
    info = code.lift
    m, Q = info.m, code.symbols
    f, g, h = _lift_maps(code)
    tuples = list(itertools.product(range(Q), repeat=m))
    # Z as seen by the subtractor is the raw symbol on B's destination edge
    # pushed through B's decoder; g composes both.
    p1 = all(_bijective(lambda z: tuple(g(i + 1, z[i], x2[i]) for i in range(m)), Q, m) for x2 in tuples)
    p2 = all(_bijective(lambda x1: tuple(f(i + 1, x1[i], x2[i]) for i in range(m)), Q, m) for x2 in tuples)

    def dec_h(ys):
        raw = h(ys)
        return tuple(info.base.decoders[i + 1][(raw[i],)][0] for i in range(m))

    p3 = all(
        _bijective(lambda x2: tuple(f(i + 1, x1[i], x2[i]) for i in range(m)), Q, m)
        and _bijective(lambda x2: dec_h(tuple(f(i + 1, x1[i], x2[i]) for i in range(m))), Q, m)
        for x1 in tuples
    )
    p4 = True
    coords = list(range(1, m + 1))
    pairs = [(i, j) for i in coords for j in coords if i != j] or [(None, 1)]
    for i, j in pairs:
        reach_i = {f(i, a, b) for a in range(Q) for b in range(Q)} if i else set(range(Q))
        if len(reach_i) != Q:
            p4 = False
            break
        for yj in range(Q):
            for yj2 in range(Q):
                if yj2 == yj:
                    continue
                if not any(
                    any(f(j, x1, a) == yj and f(j, x1, b) == yj2 for a in range(Q) for b in range(Q) if a != b)
                    for x1 in range(Q)
                ):
                    p4 = False
    return {"(1)": p1, "(2)": p2, "(3)": p3, "(4)": p4}
