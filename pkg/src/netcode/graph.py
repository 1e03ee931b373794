"""Directed acyclic networks whose sources and destinations are edges.

A :class:`Network` carries four ordered edge lists ``s1, t1, s2, t2``.
Everything here is exact and deterministic; whenever a choice has to be
made, the lexicographically smallest edge id wins.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import networkx as nx

from .errors import (
    CycleDetected,
    InvalidNetwork,
    PathCapExceeded,
    PreconditionViolated,
    UnknownEdge,
)

DEFAULT_PATH_CAP = 1_000_000
DEFAULT_GNS_MAX = 4

Path = tuple  # tuple of edge ids, consecutive edges adjacent


class Edge(NamedTuple):
    id: str
    tail: str
    head: str


@dataclass(frozen=True)
class EdgeCut:
    """A set of edges plus which path families it is claimed to separate.

    ``kind`` is ``"gns"`` or ``"source-dest"``; for the latter ``sessions``
    records the (from, to) labels used to build it.
    """

    edges: frozenset
    kind: str = "gns"
    sessions: tuple = ()

    def __len__(self):
        return len(self.edges)

    def __iter__(self):
        return iter(sorted(self.edges))

    def sorted(self):
        return sorted(self.edges)


@dataclass(frozen=True, eq=True)
class Network:
    edges: tuple
    s1: tuple
    t1: tuple
    s2: tuple
    t2: tuple
    vertices: tuple = ()
    name: str = dc_field(default="", compare=False)

    def __post_init__(self):
        edges = tuple(Edge(*map(str, e)) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        for attr in ("s1", "t1", "s2", "t2"):
            object.__setattr__(self, attr, tuple(str(x) for x in getattr(self, attr)))
        verts = list(dict.fromkeys(self.vertices))
        seen_v = set(verts)
        for e in edges:
            for v in (e.tail, e.head):
                if v not in seen_v:
                    seen_v.add(v)
                    verts.append(v)
        object.__setattr__(self, "vertices", tuple(verts))

        ids = [e.id for e in edges]
        if len(set(ids)) != len(ids):
            dup = sorted({i for i in ids if ids.count(i) > 1})
            raise InvalidNetwork(f"duplicate edge ids: {dup}")
        known = set(ids)
        used = {}
        for attr in ("s1", "t1", "s2", "t2"):
            lst = getattr(self, attr)
            if len(set(lst)) != len(lst):
                raise InvalidNetwork(f"{attr} lists an edge twice")
            for x in lst:
                if x not in known:
                    raise UnknownEdge(f"{attr} refers to unknown edge {x!r}")
                if x in used:
                    raise InvalidNetwork(f"edge {x!r} is in both {used[x]} and {attr}")
                used[x] = attr
        self.order  # raises CycleDetected

    # -- structure ------------------------------------------------------------
    @cached_property
    def edge(self) -> dict:
        return {e.id: e for e in self.edges}

    @cached_property
    def edge_ids(self) -> tuple:
        return tuple(sorted(self.edge))

    @cached_property
    def _out_by_vertex(self):
        d = {v: [] for v in self.vertices}
        for e in self.edges:
            d[e.tail].append(e.id)
        return {v: tuple(sorted(x)) for v, x in d.items()}

    @cached_property
    def _in_by_vertex(self):
        d = {v: [] for v in self.vertices}
        for e in self.edges:
            d[e.head].append(e.id)
        return {v: tuple(sorted(x)) for v, x in d.items()}

    def out_edges(self, e: str) -> tuple:
        """Edges leaving the head of e."""
        return self._out_by_vertex[self._get(e).head]

    def in_edges(self, e: str) -> tuple:
        """Edges entering the tail of e."""
        return self._in_by_vertex[self._get(e).tail]

    def out_of_vertex(self, v: str) -> tuple:
        return self._out_by_vertex.get(v, ())

    def into_vertex(self, v: str) -> tuple:
        return self._in_by_vertex.get(v, ())

    def _get(self, e):
        try:
            return self.edge[e]
        except KeyError:
            raise UnknownEdge(f"unknown edge {e!r}") from None

    def check_edges(self, ids: Iterable[str]):
        for e in ids:
            self._get(e)

    @cached_property
    def adjacent_pairs(self) -> tuple:
        """All (e, f) with head(e) = tail(f), sorted."""
        out = []
        for e in self.edge_ids:
            for f in self.out_edges(e):
                out.append((e, f))
        return tuple(sorted(out))

    @cached_property
    def order(self) -> tuple:
        return _topological_order(self)

    @cached_property
    def position(self) -> dict:
        return {e: i for i, e in enumerate(self.order)}

    @cached_property
    def _idx(self):
        # adjacency in topological index space
        pos = self.position
        outs = [tuple(pos[f] for f in self.out_edges(e)) for e in self.order]
        ins = [tuple(pos[d] for d in self.in_edges(e)) for e in self.order]
        return outs, ins

    @cached_property
    def _descendants(self) -> dict:
        """Bitset (over topological index) of edges reachable from each edge, itself included."""
        outs, _ = self._idx
        n = len(self.order)
        bits = [0] * n
        for i in range(n - 1, -1, -1):
            b = 1 << i
            for j in outs[i]:
                b |= bits[j]
            bits[i] = b
        return bits

    def reaches(self, e: str, f: str) -> bool:
        """True when a path starts at e and ends at f (e == f counts)."""
        pos = self.position
        return bool(self._descendants[pos[self._get(e).id]] >> pos[self._get(f).id] & 1)

    @property
    def sessions(self):
        return {"s1": self.s1, "t1": self.t1, "s2": self.s2, "t2": self.t2}

    @property
    def session_edges(self) -> frozenset:
        return frozenset(self.s1 + self.t1 + self.s2 + self.t2)

    def without(self, removed: Iterable[str]) -> "Network":
        removed = set(removed)
        self.check_edges(removed)
        keep = tuple(e for e in self.edges if e.id not in removed)
        def f(lst):
            return tuple(x for x in lst if x not in removed)
        return Network(keep, f(self.s1), f(self.t1), f(self.s2), f(self.t2), name=self.name)

    def restricted_to(self, kept: Iterable[str], s1=None, t1=None, s2=None, t2=None) -> "Network":
        kept = set(kept)
        keep = tuple(e for e in self.edges if e.id in kept)
        def f(lst, default):
            lst = default if lst is None else lst
            return tuple(x for x in lst if x in kept)
        return Network(
            keep, f(s1, self.s1), f(t1, self.t1), f(s2, self.s2), f(t2, self.t2), name=self.name
        )

    def with_sessions(self, s1=None, t1=None, s2=None, t2=None) -> "Network":
        return Network(
            self.edges,
            self.s1 if s1 is None else tuple(s1),
            self.t1 if t1 is None else tuple(t1),
            self.s2 if s2 is None else tuple(s2),
            self.t2 if t2 is None else tuple(t2),
            vertices=self.vertices,
            name=self.name,
        )

    def is_single_session(self) -> bool:
        return len(self.s1) == len(self.t1) == len(self.s2) == len(self.t2) == 1

    def __repr__(self):
        label = f"{self.name!r}, " if self.name else ""
        return f"Network({label}{len(self.edges)} edges, {len(self.vertices)} vertices)"


def _topological_order(net: Network) -> tuple:
    """Kahn's algorithm on the edge adjacency, smallest id first on ties."""
    out_by_v: dict = {}
    indeg = {}
    in_count_v: dict = {}
    for e in net.edges:
        out_by_v.setdefault(e.tail, []).append(e.id)
        in_count_v[e.head] = in_count_v.get(e.head, 0) + 1
    for e in net.edges:
        indeg[e.id] = in_count_v.get(e.tail, 0)
    heap = [e for e, d in indeg.items() if d == 0]
    heapq.heapify(heap)
    head = {e.id: e.head for e in net.edges}
    order = []
    while heap:
        e = heapq.heappop(heap)
        order.append(e)
        for f in out_by_v.get(head[e], ()):
            indeg[f] -= 1
            if indeg[f] == 0:
                heapq.heappush(heap, f)
    if len(order) != len(net.edges):
        stuck = sorted(e for e in indeg if indeg[e] > 0)
        raise CycleDetected(f"edge adjacency has a cycle through {stuck[:5]}")
    return tuple(order)


def topological_edge_order(net: Network) -> list:
    return list(net.order)


# -- reachability ---------------------------------------------------------------

def _reach_mask(net: Network, starts: Iterable[str], removed=frozenset()) -> list:
    """Boolean list over topological index: reachable from ``starts`` avoiding ``removed``."""
    pos = net.position
    order = net.order
    _, ins = net._idx
    n = len(order)
    mark = [False] * n
    for s in starts:
        if s not in removed:
            mark[pos[s]] = True
    lo = min((pos[s] for s in starts if s not in removed), default=n)
    for i in range(lo, n):
        if mark[i] or order[i] in removed:
            continue
        for j in ins[i]:
            if mark[j]:
                mark[i] = True
                break
    return mark


def reachable(net: Network, starts: Iterable[str], removed: Iterable[str] = ()) -> frozenset:
    removed = frozenset(removed)
    mark = _reach_mask(net, list(starts), removed)
    return frozenset(e for e, m in zip(net.order, mark) if m)


def has_path(net: Network, from_: Iterable[str], to: Iterable[str], removed: Iterable[str] = ()) -> bool:
    from_ = list(from_)
    to = list(to)
    if not from_ or not to:
        return False
    removed = frozenset(removed)
    mark = _reach_mask(net, from_, removed)
    pos = net.position
    return any(mark[pos[t]] for t in to)


def coreaching(net: Network, targets: Iterable[str], avoid: Iterable[str] = ()) -> frozenset:
    """Edges with a path to some target that avoids ``avoid``."""
    avoid = frozenset(avoid)
    targets = set(targets) - avoid
    outs, _ = net._idx
    order = net.order
    pos = net.position
    n = len(order)
    good = [False] * n
    for t in targets:
        good[pos[t]] = True
    for i in range(n - 1, -1, -1):
        if good[i] or order[i] in avoid:
            continue
        if any(good[j] for j in outs[i]):
            good[i] = True
    return frozenset(e for e, g in zip(order, good) if g)


def enumerate_paths(
    net: Network,
    from_: Iterable[str],
    to: Iterable[str],
    via: Iterable[str] = (),
    avoid: Iterable[str] = (),
    cap: int = DEFAULT_PATH_CAP,
) -> list:
    """All paths from ``from_`` to ``to`` through some ``via`` edge and no ``avoid`` edge.

    Paths come out in lexicographic order of their edge sequences.
    """
    from_, to = list(from_), set(to)
    if not from_ or not to:
        raise ValueError("from and to must be nonempty")
    net.check_edges(from_)
    net.check_edges(to)
    via, avoid = frozenset(via), frozenset(avoid)
    live = coreaching(net, to, avoid)
    out: list = []
    path: list = []

    def visit(e, hits):
        path.append(e)
        hits += e in via
        if e in to and (hits or not via):
            out.append(tuple(path))
            if len(out) > cap:
                raise PathCapExceeded(f"more than {cap} paths")
        for f in net.out_edges(e):
            if f in live:
                visit(f, hits)
        path.pop()

    for s in sorted(set(from_)):
        if s in live:
            visit(s, 0)
    return out


def count_paths(
    net: Network,
    from_: Iterable[str],
    to: Iterable[str],
    via: Iterable[str] = (),
    avoid: Iterable[str] = (),
) -> int:
    """Number of paths :func:`enumerate_paths` would return, by dynamic programming."""
    via, avoid = frozenset(via), frozenset(avoid)

    def count(avoid_set):
        from_set = set(from_) - avoid_set
        to_set = set(to) - avoid_set
        order = net.order
        _, ins = net._idx
        n = len(order)
        ways = [0] * n
        total = 0
        for i, e in enumerate(order):
            if e in avoid_set:
                continue
            w = 1 if e in from_set else 0
            for j in ins[i]:
                w += ways[j]
            ways[i] = w
            if e in to_set:
                total += w
        return total

    if via:
        return count(avoid) - count(avoid | via)
    return count(avoid)


def find_path(net: Network, from_: Iterable[str], to: Iterable[str], avoid: Iterable[str] = ()):
    """Lexicographically smallest path, or None."""
    avoid = frozenset(avoid)
    to = set(to)
    live = coreaching(net, to, avoid)
    for s in sorted(set(from_)):
        if s not in live:
            continue
        path = [s]
        while path[-1] not in to:
            path.append(next(f for f in net.out_edges(path[-1]) if f in live))
        return tuple(path)
    return None


# -- cuts -------------------------------------------------------------------------

def min_edge_cut(net: Network, from_: Iterable[str], to: Iterable[str]) -> EdgeCut:
    """Minimum edge set separating ``from_`` from ``to`` (unit-capacity max-flow)."""
    from_, to = sorted(set(from_)), sorted(set(to))
    net.check_edges(from_)
    net.check_edges(to)
    if set(from_) & set(to):
        raise PreconditionViolated("from and to must be disjoint")
    g = nx.DiGraph()
    g.add_node("_S")
    g.add_node("_T")
    for e in net.order:
        g.add_edge(("in", e), ("out", e), capacity=1)
    for e in net.order:
        for f in net.out_edges(e):
            g.add_edge(("out", e), ("in", f))
    for s in from_:
        g.add_edge("_S", ("in", s))
    for t in to:
        g.add_edge(("out", t), "_T")
    value, (side, _) = nx.minimum_cut(g, "_S", "_T")
    cut = frozenset(e for e in net.order if ("in", e) in side and ("out", e) not in side)
    assert len(cut) == value
    return EdgeCut(cut, "source-dest", (tuple(from_), tuple(to)))


def is_gns_cut(net: Network, cut: Iterable[str]) -> bool:
    cut = frozenset(cut)
    net.check_edges(cut)
    if has_path(net, net.s1, net.t1, cut):
        return False
    return not has_path(net, net.s2, net.t1 + net.t2, cut)


def gns_relevant_edges(net: Network) -> list:
    """Edges lying on an S1->T1, S2->T2 or S2->T1 path (the only useful cut members)."""
    fwd1 = reachable(net, net.s1)
    fwd2 = reachable(net, net.s2)
    back1 = coreaching(net, net.t1)
    back12 = coreaching(net, net.t1 + net.t2)
    return sorted((fwd1 & back1) | (fwd2 & back12))


def min_gns_cut(net: Network, max_size: int = DEFAULT_GNS_MAX):
    """Smallest GNS cut with at most ``max_size`` edges, or None."""
    if max_size < 1:
        raise ValueError("max_size must be >= 1")
    if is_gns_cut(net, ()):
        return EdgeCut(frozenset(), "gns")
    cand = gns_relevant_edges(net)
    for size in range(1, max_size + 1):
        for combo in itertools.combinations(cand, size):
            if is_gns_cut(net, combo):
                return EdgeCut(frozenset(combo), "gns")
    return None


def gns_cuts_of_size(net: Network, size: int) -> list:
    """Every GNS cut of exactly ``size`` relevant edges, in lexicographic order."""
    cand = gns_relevant_edges(net)
    return [
        EdgeCut(frozenset(c), "gns")
        for c in itertools.combinations(cand, size)
        if is_gns_cut(net, c)
    ]


def _has_small_gns_cut(net: Network) -> bool:
    """Is there a GNS cut with at most one edge?"""
    if is_gns_cut(net, ()):
        return True
    return any(is_gns_cut(net, (e,)) for e in gns_relevant_edges(net))


def _connected(net: Network) -> bool:
    return has_path(net, net.s1, net.t1) and has_path(net, net.s2, net.t2)


def criticalize(net: Network) -> Network:
    """Delete edges until each one sits in some size-2 GNS cut.

    Session edges are never deleted.  An edge is removable when the smaller
    network still has S1->T1 and S2->T2 paths and no GNS cut of size <= 1.
    """
    if not _connected(net):
        raise PreconditionViolated("criticalize needs S1->T1 and S2->T2 paths")
    if _has_small_gns_cut(net) or min_gns_cut(net, 2) is None:
        raise PreconditionViolated("criticalize needs a minimum GNS cut of size exactly 2")
    protected = net.session_edges
    changed = True
    while changed:
        changed = False
        for e in net.edge_ids:
            if e in protected:
                continue
            smaller = net.without((e,))
            if _connected(smaller) and not _has_small_gns_cut(smaller):
                net = smaller
                changed = True
                break
    return net


def is_critical(net: Network) -> bool:
    """No non-session edge can be deleted without losing a session path or
    creating a GNS cut of size <= 1 (the fixpoint of :func:`criticalize`)."""
    protected = net.session_edges
    for e in net.edge_ids:
        if e in protected:
            continue
        smaller = net.without((e,))
        if _connected(smaller) and not _has_small_gns_cut(smaller):
            return False
    return True


def max_edge_disjoint_paths(net: Network, from_, to) -> int:
    """Brute-force Menger oracle: largest family of pairwise edge-disjoint paths."""
    paths = enumerate_paths(net, from_, to)
    sets = [frozenset(p) for p in paths]
    best = 0

    def grow(start, used, k):
        nonlocal best
        best = max(best, k)
        for i in range(start, len(sets)):
            if not (sets[i] & used):
                grow(i + 1, used | sets[i], k + 1)

    grow(0, frozenset(), 0)
    return best


def build_network(
    edges: Sequence,
    s1: Sequence,
    t1: Sequence,
    s2: Sequence,
    t2: Sequence,
    name: str = "",
) -> Network:
    return Network(tuple(tuple(e) for e in edges), tuple(s1), tuple(t1), tuple(s2), tuple(t2), name=name)
