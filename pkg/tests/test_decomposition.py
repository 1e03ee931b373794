import random

import pytest
from hypothesis import given, settings, strategies as st

from netcode import instances
from netcode.decomposition import (
    GnsPair,
    decompose,
    general_decompose,
    gns_pair,
    incoming_group,
    interference_expansion,
    left_side_network,
    right_side_network,
)
from netcode.errors import NotAGnsCut, PreconditionViolated
from netcode.generators import random_dag, random_gns2_instance
from netcode.graph import gns_cuts_of_size, has_path
from netcode.poly import Poly, is_homogeneous, sumdeg
from netcode.transfer import coupling_matrix, path_sum

seeds = st.integers(0, 10**6)


def first_pair(net, internal=False):
    for c in gns_cuts_of_size(net, 2):
        if internal and not all(net.in_edges(e) for e in c.edges):
            continue
        return gns_pair(net, *sorted(c.edges))
    return None


@given(seeds)
def test_identity_on_random_gns2(seed):
    net = random_gns2_instance(seed, max_edges=12)
    pair = first_pair(net)
    d = decompose(net, pair)
    assert d.method == "symbolic"
    assert all(d.checks.values())
    assert d.M1 @ d.Lambda @ d.M2 == d.M
    assert d.M.det() == d.M1.det() * d.M2.det()


@pytest.mark.parametrize("name", ["crossing_routes", "two_class_interference", "butterfly", "single_cut_chain"])
def test_identity_on_corpus(name):
    net = instances.load(name)
    for c in gns_cuts_of_size(net, 2):
        d = decompose(net, gns_pair(net, *sorted(c.edges)))
        assert all(d.checks.values()), d.checks


def test_lambda_is_identity_without_coupling():
    net = instances.load("two_class_interference")
    pair = gns_pair(net, "a", "b2")
    d = decompose(net, pair)
    if not net.reaches(pair.e1, pair.e2):
        assert d.Lambda.entry(pair.e1, pair.e2) == Poly.zero()
        assert "M1_vs_M2" in d.checks


def test_not_a_gns_pair():
    net = instances.load("crossing_routes")
    with pytest.raises(NotAGnsCut):
        gns_pair(net, "s1", "t1")
    with pytest.raises(NotAGnsCut):
        gns_pair(net, "s1", "s1")
    z = instances.load("two_class_interference")
    a, b = gns_pair(z, "a", "b2")
    with pytest.raises(NotAGnsCut):
        decompose(z, GnsPair(b, a))


def test_decompose_needs_single_sessions():
    net = instances.gap_instance()
    with pytest.raises(PreconditionViolated):
        decompose(net, GnsPair("b1", "e3"))


def test_randomized_fallback(monkeypatch):
    monkeypatch.setenv("NETCODE_MONOMIAL_CAP", "2")
    net = random_gns2_instance(7, max_edges=14)
    pair = first_pair(net)
    d = decompose(net, pair, seed=3)
    assert d.method == "randomized"
    assert all(d.checks.values())
    assert 0 < d.error_bound < 1e-6


@given(seeds)
def test_side_networks(seed):
    net = random_gns2_instance(seed, max_edges=12)
    pair = first_pair(net)
    left, right = left_side_network(net, pair), right_side_network(net, pair)
    assert set(left.edge_ids) <= set(net.edge_ids)
    assert set(right.edge_ids) <= set(net.edge_ids)
    for e in pair:
        assert e in left.edge_ids and e in right.edge_ids


@given(seeds, st.integers(1, 3))
def test_general_identity(seed, size):
    net = random_dag(seed, n_vertices=5, n_edges=9)
    rng = random.Random(seed)
    U = sorted(rng.sample(net.edge_ids, size), key=net.position.__getitem__)
    g = general_decompose(net, U)
    assert g.method == "symbolic"
    assert g.M_prime @ g.Lambda @ g.M_double_prime == g.MU


@given(seeds)
def test_single_edge_general_matches_pair_factors(seed):
    net = random_gns2_instance(seed, max_edges=12)
    pair = first_pair(net)
    e = pair.e1
    g = general_decompose(net, [e])
    for s in net.s1 + net.s2:
        for t in net.t1 + net.t2:
            assert g.M_prime.entry(s, e) == path_sum(net, s, e)
            assert g.M_double_prime.entry(e, t) == path_sum(net, e, t)
            assert g.MU.entry(s, t) == path_sum(net, s, e) * path_sum(net, e, t)
    assert g.Lambda.det() == Poly.one()


@given(seeds)
def test_interference_expansion(seed):
    net = random_gns2_instance(seed, max_edges=12)
    pair = first_pair(net)
    x = interference_expansion(net, pair)
    assert x.reassembled() == x.total
    assert x.lambda12u2 == coupling_matrix(net, tuple(pair)).entry(pair.e1, pair.e2)


def test_expansion_branch_vanishes_without_paths():
    net = instances.load("two_class_interference")
    pair = gns_pair(net, "a", "b2")
    x = interference_expansion(net, pair)
    if not has_path(net, net.s2, [pair.e1]):
        assert not x.b1u1


@given(seeds, st.integers(1, 3))
@settings(max_examples=30)
def test_det_powers_homogeneous(seed, L):
    net = random_gns2_instance(seed, max_edges=12)
    pair = first_pair(net, internal=True)
    D = decompose(net, pair).M.det() ** L
    for e in pair:
        g = incoming_group(net, e)
        assert is_homogeneous(D, g)
        assert sumdeg(D, g) == L
