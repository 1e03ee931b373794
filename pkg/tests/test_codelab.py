from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from netcode import instances
from netcode.codelab import (
    CodeAssignment,
    build_z_from_m_unicast,
    check_vector_code,
    diagonal_lift,
    exhaustive_search,
    find_scalar_code,
    forwarding_code,
    lift_code,
    lift_properties,
    linear_table_code,
    random_search,
    routing_code,
    verify_scalar_code,
    verify_vector_code,
    verify_zero_error,
)
from netcode.codelab import embedding
from netcode.errors import DimensionMismatch, PreconditionViolated, SearchSpaceTooLarge, StateSpaceTooLarge
from netcode.field import field
from netcode.generators import random_connected_z_network, random_z_network
from oracles import brute_rate11, numeric_session_matrix

seeds = st.integers(0, 10**6)


def raw(net):
    return [tuple(e) for e in net.edges]


def oracle_ok(net, code):
    """Decodability checked by summing over enumerated paths."""
    k = code.field_degree
    m = numeric_session_matrix(raw(net), None, code.values, k, field(k).modulus,
                               [net.s1[0], net.s2[0]], [net.t1[0], net.t2[0]])
    return bool(m[0][0] and m[1][1] and not m[1][0])


@given(seeds, st.sampled_from([1, 2]))
@settings(max_examples=30)
def test_exhaustive_agrees_with_full_scan(seed, k):
    net = random_z_network(seed, 3, 3 if k == 2 else 4)
    code, _ = exhaustive_search(net, k)
    want = brute_rate11(raw(net), net.sessions, k, field(k).modulus)
    assert (code is not None) == want
    if code is not None:
        assert oracle_ok(net, code)


@given(seeds)
@settings(max_examples=20)
def test_gauge_does_not_change_the_answer(seed):
    net = random_connected_z_network(seed, 6, 9)
    a, n_gauge = exhaustive_search(net, 1, gauge=True)
    b, n_full = exhaustive_search(net, 1, gauge=False)
    assert (a is None) == (b is None)
    assert n_gauge <= n_full


def test_limit_is_enforced():
    net, _ = instances.gap_instance_vector_code()
    with pytest.raises(SearchSpaceTooLarge):
        exhaustive_search(instances.gap_instance_rates(2, 1), 2, limit=1000)


@given(seeds)
@settings(max_examples=15)
def test_random_search_is_seed_deterministic(seed):
    net = instances.load("butterfly")
    a, ta = random_search(net, 3, trials=50, seed=seed)
    b, tb = random_search(net, 3, trials=50, seed=seed)
    assert a == b and ta == tb
    if a is not None:
        assert verify_scalar_code(net, a, 1, 1) and oracle_ok(net, a)


def test_random_search_same_answer_with_workers():
    net = instances.load("butterfly")
    a, _ = random_search(net, 4, trials=40, seed=5, jobs=1)
    b, _ = random_search(net, 4, trials=40, seed=5, jobs=2)
    assert a == b


def test_find_scalar_code_modes():
    net = instances.load("butterfly")
    c = find_scalar_code(net, 1, 1, k=1)
    assert c is not None and c.meta["mode"] == "exhaustive"
    r = find_scalar_code(net, 1, 1, k=3, mode="random", seed=1)
    assert r is not None and r.meta["mode"] == "random"
    with pytest.raises(ValueError):
        find_scalar_code(net, 1, 1, mode="other")
    with pytest.raises(DimensionMismatch):
        find_scalar_code(net, 2, 1)


def test_routing_code():
    net = instances.load("disjoint_chains")
    c = routing_code(net, [("s1", "m1", "t1"), ("s2", "m2", "t2")])
    assert verify_scalar_code(net, c, 1, 1) and oracle_ok(net, c)


def test_gap_instance_vector_scheme():
    net, code = instances.gap_instance_vector_code()
    chk = check_vector_code(net, code, Fraction(3, 2), 1)
    assert chk.ok and chk.g21_zero
    assert len(chk.G11) == 3 and len(chk.G22) == 2


def test_perturbed_vector_scheme_fails():
    net, code = instances.gap_instance_vector_code()
    vals = dict(code.values)
    vals[("s12", "p")] = ((0, 0), (0, 0))
    broken = CodeAssignment(code.field_degree, vals, code.v)
    assert not verify_vector_code(net, broken, Fraction(3, 2), 1)


def test_rate_dimension_checks():
    net, code = instances.gap_instance_vector_code()
    with pytest.raises(DimensionMismatch):
        check_vector_code(net, code, Fraction(4, 3), 1)
    with pytest.raises(DimensionMismatch):
        check_vector_code(net, code, 1, 2)


@pytest.mark.parametrize("v", [1, 2, 3])
def test_diagonal_lift_keeps_validity(v):
    net = instances.load("butterfly")
    c = find_scalar_code(net, 1, 1, k=2)
    lifted = diagonal_lift(c, v)
    assert verify_vector_code(net, lifted, 1, 1)
    if v > 1:
        with pytest.raises(DimensionMismatch):
            diagonal_lift(lifted, 2)


def _xor_butterfly():
    B = instances.load("butterfly_municast")
    ones = ["a:a1", "b:b1", "a1:c", "b1:c", "c:n1", "c:n2", "a:a2", "b:b2",
            "n1:ta", "b2:ta", "n2:tb", "a2:tb"]
    vals = {tuple(x.split(":")): 1 for x in ones}
    return B, CodeAssignment(1, {p: vals.get(p, 0) for p in B.graph.adjacent_pairs})


def test_linear_table_code_on_butterfly():
    B, code = _xor_butterfly()
    rep = verify_zero_error(linear_table_code(B, code), rates=[1, 1])
    assert rep.ok and rep.checked == 4


def test_two_chain_lift():
    B = instances.load("two_chains_municast")
    base = forwarding_code(B)
    assert verify_zero_error(base, [1, 1]).ok
    lifted = lift_code(base)
    rep = verify_zero_error(lifted, rates=[2, 2])
    assert rep.ok and rep.checked == 16
    assert rep.properties == {"(1)": True, "(2)": True, "(3)": True, "(4)": True}


def test_lift_of_coded_butterfly():
    B, code = _xor_butterfly()
    lifted = lift_code(linear_table_code(B, code))
    rep = verify_zero_error(lifted, rates=[2, 2])
    assert rep.ok and all(lift_properties(lifted).values())


def test_broken_base_is_caught():
    B = instances.load("two_chains_municast")
    base = forwarding_code(B)
    base.relay["u1"] = {(0,): 0, (1,): 0}
    assert not verify_zero_error(base).ok
    base.decoders = embedding.fit_decoders(base)
    assert not verify_zero_error(base).ok


def test_construction_shape():
    Z = build_z_from_m_unicast(instances.load("two_chains_municast"))
    assert Z.s1 == ("x1_1", "x1_2") and Z.t2 == ("z_1", "z_2")
    assert len(Z.edges) == 6 + 7 * 2


def test_forwarding_needs_single_inputs():
    B, _ = _xor_butterfly()
    with pytest.raises(PreconditionViolated):
        forwarding_code(B)


def test_state_space_guard(monkeypatch):
    monkeypatch.setattr(embedding, "STATE_LIMIT", 3)
    B = instances.load("two_chains_municast")
    with pytest.raises(StateSpaceTooLarge):
        verify_zero_error(forwarding_code(B))


def test_rates_must_match_sessions():
    B = instances.load("two_chains_municast")
    with pytest.raises(DimensionMismatch):
        verify_zero_error(forwarding_code(B), rates=[2, 1])
