import pytest
from hypothesis import given, strategies as st

from netcode import instances
from netcode.errors import CycleDetected, InvalidNetwork, PathCapExceeded, PreconditionViolated, UnknownEdge
from netcode.generators import random_dag, random_gns2_instance, random_z_network
from netcode.graph import (
    Network,
    build_network,
    count_paths,
    criticalize,
    enumerate_paths,
    find_path,
    gns_cuts_of_size,
    has_path,
    is_critical,
    is_gns_cut,
    max_edge_disjoint_paths,
    min_edge_cut,
    min_gns_cut,
    topological_edge_order,
)
from oracles import all_paths, brute_is_gns, brute_min_cut, brute_min_gns

seeds = st.integers(0, 10**6)


def small_dag(seed):
    return random_dag(seed, n_vertices=5, n_edges=7)


def raw(net):
    return [tuple(e) for e in net.edges]


def test_rejects_cycles_and_bad_sessions():
    with pytest.raises(CycleDetected):
        build_network([("a", "u", "v"), ("b", "v", "u")], [], [], [], [])
    with pytest.raises(InvalidNetwork):
        build_network([("a", "u", "v"), ("a", "v", "w")], [], [], [], [])
    with pytest.raises(UnknownEdge):
        build_network([("a", "u", "v")], ["zz"], [], [], [])
    with pytest.raises(InvalidNetwork):
        build_network([("a", "u", "v"), ("b", "v", "w")], ["a"], ["b"], ["a"], [])


def test_self_loop_is_a_cycle():
    with pytest.raises(CycleDetected):
        build_network([("a", "u", "u")], [], [], [], [])


@given(seeds)
def test_topological_order(seed):
    net = small_dag(seed)
    pos = {e: i for i, e in enumerate(topological_edge_order(net))}
    for e, f in net.adjacent_pairs:
        assert pos[e] < pos[f]


@given(seeds)
def test_paths_match_plain_recursion(seed):
    net = small_dag(seed)
    for a in net.edge_ids[:3]:
        for b in net.edge_ids:
            if a == b:
                continue
            want = sorted(all_paths(raw(net), a, b))
            got = enumerate_paths(net, [a], [b])
            assert got == want
            assert count_paths(net, [a], [b]) == len(want)
            assert has_path(net, [a], [b]) == bool(want)
            assert net.reaches(a, b) == bool(want)
            if want:
                assert find_path(net, [a], [b]) == want[0]
            else:
                assert find_path(net, [a], [b]) is None


@given(seeds)
def test_via_and_avoid(seed):
    net = small_dag(seed)
    ids = net.edge_ids
    a, b, x, y = ids[0], ids[-1], ids[len(ids) // 2], ids[1]
    if len({a, b, x, y}) < 4:
        return
    every = all_paths(raw(net), a, b)
    want = [p for p in every if x in p and y not in p]
    assert enumerate_paths(net, [a], [b], via=[x], avoid=[y]) == sorted(want)
    assert count_paths(net, [a], [b], via=[x], avoid=[y]) == len(want)


def test_path_cap():
    # a chain of 12 diamonds has 4096 paths
    edges = []
    for i in range(12):
        edges += [(f"u{i}", f"v{i}", f"v{i + 1}"), (f"d{i}", f"v{i}", f"v{i + 1}")]
    edges = [("s", "S", "v0")] + edges + [("t", "v12", "T")]
    net = build_network(edges, ["s"], ["t"], [], [])
    with pytest.raises(PathCapExceeded):
        enumerate_paths(net, ["s"], ["t"], cap=1000)
    assert count_paths(net, ["s"], ["t"]) == 4096


@given(seeds)
def test_min_cut_matches_menger_and_subsets(seed):
    net = small_dag(seed)
    s1, t1 = net.s1, net.t1
    cut = min_edge_cut(net, s1, t1)
    assert len(cut) == brute_min_cut(raw(net), s1, t1)
    assert len(cut) == max_edge_disjoint_paths(net, s1, t1)
    assert not has_path(net, s1, t1, removed=cut.edges)


def test_min_cut_disjoint_precondition():
    net = instances.load("disjoint_chains")
    with pytest.raises(PreconditionViolated):
        min_edge_cut(net, ["s1"], ["s1"])


@given(seeds)
def test_min_gns_matches_full_subset_search(seed):
    net = random_z_network(seed, 4, 5)
    cut = min_gns_cut(net, 4)
    want = brute_min_gns(raw(net), net.sessions, 4)
    if want is None:
        assert cut is None
    else:
        assert len(cut) == want
        assert is_gns_cut(net, cut.edges)
        assert brute_is_gns(raw(net), net.sessions, cut.edges)


def test_gns_values_on_corpus():
    assert len(min_gns_cut(instances.gap_instance())) == 3
    assert min_gns_cut(instances.load("shared_edge")).edges == frozenset({"e"})
    assert len(min_gns_cut(instances.load("crossing_routes"))) == 2
    # single-edge sessions: {s1, s2} always separates everything
    assert is_gns_cut(instances.load("butterfly"), ["s1", "s2"])


def test_no_paths_gives_empty_cut():
    net = build_network([("s1", "A", "B"), ("t1", "C", "D"), ("s2", "E", "F"), ("t2", "G", "H")],
                        ["s1"], ["t1"], ["s2"], ["t2"])
    assert min_gns_cut(net).edges == frozenset()


@given(seeds)
def test_criticalize(seed):
    net = random_gns2_instance(seed, max_edges=11)
    crit = criticalize(net)
    assert set(crit.edge_ids) <= set(net.edge_ids)
    assert crit.session_edges == net.session_edges
    assert len(min_gns_cut(crit, 2)) == 2
    assert is_critical(crit)
    # every removable-looking edge sits in a size-2 GNS cut or is needed for a session path
    members = set().union(*(c.edges for c in gns_cuts_of_size(crit, 2)))
    for e in set(crit.edge_ids) - crit.session_edges - members:
        smaller = crit.without([e])
        assert not (has_path(smaller, smaller.s1, smaller.t1) and has_path(smaller, smaller.s2, smaller.t2))


def test_criticalize_preconditions():
    with pytest.raises(PreconditionViolated):
        criticalize(instances.load("shared_edge"))


def test_network_helpers():
    net = instances.load("crossing_routes")
    assert net.out_edges("s2") == ("c", "d")
    assert net.in_edges("t1") == ("c", "s1")
    assert ("s2", "c") in net.adjacent_pairs
    smaller = net.without(["c"])
    assert "c" not in smaller.edge
    assert net.is_single_session()
    sub = net.restricted_to(["s1", "t1"])
    assert sub.s2 == () and sub.s1 == ("s1",)
    swapped = net.with_sessions(t1=["t2"], t2=["t1"])
    assert swapped.t1 == ("t2",)
    assert isinstance(net, Network) and "crossing_routes" in repr(net)
