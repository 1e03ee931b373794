"""Random and exhaustive instance families for testing."""

from __future__ import annotations

import itertools
import random
from typing import Iterator

from .graph import Network, has_path, min_gns_cut


def _rng(seed):
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_dag(seed, n_vertices: int = 6, n_edges: int = 10, parallel: bool = True) -> Network:
    """Random multigraph on vertices v0..v{n-1} with edges pointing forward.

    Sessions are single edges picked among the generated ones when possible
    (s1 != s2, t1 != t2, all four distinct), otherwise left empty.
    """
    rng = _rng(seed)
    pairs = [(a, b) for a in range(n_vertices) for b in range(a + 1, n_vertices)]
    chosen = []
    while len(chosen) < n_edges:
        p = rng.choice(pairs)
        if not parallel and p in chosen:
            if len(chosen) >= len(pairs):
                break
            continue
        chosen.append(p)
    edges = tuple((f"e{i}", f"v{a}", f"v{b}") for i, (a, b) in enumerate(chosen))
    ids = [e[0] for e in edges]
    if len(ids) >= 4:
        s1, s2, t1, t2 = rng.sample(ids, 4)
        return Network(edges, (s1,), (t1,), (s2,), (t2,), name=f"dag{n_vertices}x{len(edges)}")
    return Network(edges, (), (), (), (), name=f"dag{n_vertices}x{len(edges)}")


def random_z_network(seed, n_internal: int = 4, n_internal_edges: int = 5) -> Network:
    """Single-edge sessions out of dedicated source vertices and into dedicated sinks."""
    rng = _rng(seed)
    n = n_internal
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    inner = [rng.choice(pairs) for _ in range(n_internal_edges)] if pairs else []
    h1, h2 = rng.randrange(n), rng.randrange(n)
    g1, g2 = rng.randrange(n), rng.randrange(n)
    return _assemble(inner, h1, h2, g1, g2, name=f"z{n}x{n_internal_edges}")


def _assemble(inner, h1, h2, g1, g2, name=""):
    edges = [("s1", "S1", f"v{h1}"), ("s2", "S2", f"v{h2}"), ("t1", f"v{g1}", "T1"), ("t2", f"v{g2}", "T2")]
    edges += [(f"e{i}", f"v{a}", f"v{b}") for i, (a, b) in enumerate(sorted(inner))]
    return Network(tuple(edges), ("s1",), ("t1",), ("s2",), ("t2",), name=name)


def gns_value(net: Network, max_size: int = 4):
    c = min_gns_cut(net, max_size)
    return None if c is None else len(c.edges)


def random_gns2_instance(seed, max_edges: int = 14, max_tries: int = 10_000) -> Network:
    """Random single-session network whose minimum GNS cut has size exactly 2."""
    rng = _rng(seed)
    for _ in range(max_tries):
        m = rng.randint(3, max_edges - 4)
        n = rng.randint(3, min(7, m + 1))
        net = random_z_network(rng, n, m)
        if not (has_path(net, net.s1, net.t1) and has_path(net, net.s2, net.t2)):
            continue
        if gns_value(net, 2) == 2:
            return net
    raise RuntimeError("no GNS-2 instance found")


def random_connected_z_network(seed, min_edges: int = 9, max_edges: int = 14) -> Network:
    """Random single-session network with both session paths present."""
    rng = _rng(seed)
    while True:
        m = rng.randint(min_edges - 4, max_edges - 4)
        n = rng.randint(3, min(7, m + 1))
        net = random_z_network(rng, n, m)
        if has_path(net, net.s1, net.t1) and has_path(net, net.s2, net.t2):
            return net


# -- exhaustive small family ------------------------------------------------------

def _canonical(n, inner, att):
    """Smallest relabelled description over all vertex permutations."""
    best = None
    for perm in itertools.permutations(range(n)):
        e = tuple(sorted((perm[a], perm[b]) for a, b in inner))
        key = (e, tuple(perm[x] for x in att))
        if best is None or key < best:
            best = key
    return best


def _connected(n, inner, att):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in inner:
        parent[find(a)] = find(b)
    used = {x for e in inner for x in e} | set(att)
    if used != set(range(n)):
        return False
    return len({find(x) for x in range(n)}) == 1


def small_family(max_edges: int = 8) -> Iterator[Network]:
    """All single-session two-unicast-Z networks with at most ``max_edges`` edges.

    The four session edges leave dedicated source vertices and enter
    dedicated sink vertices; the remaining edges form a DAG (parallel edges
    allowed) on internal vertices, and the whole graph is connected.  Each
    isomorphism class appears once.
    """
    m_max = max_edges - 4
    seen = set()
    for m in range(0, m_max + 1):
        for n in range(1, m + 2):
            pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
            for inner in itertools.combinations_with_replacement(pairs, m):
                for att in itertools.product(range(n), repeat=4):
                    if not _connected(n, inner, att):
                        continue
                    key = (n, _canonical(n, inner, att))
                    if key in seen:
                        continue
                    seen.add(key)
                    yield _assemble(inner, *att, name=f"small{len(seen)}")
