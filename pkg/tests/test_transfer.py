import pytest
from hypothesis import given, strategies as st

from netcode import instances
from netcode.errors import NotTopologicallySorted, UnknownEdge
from netcode.field import field
from netcode.generators import random_dag
from netcode.poly import Poly, Var
from netcode.transfer import (
    coupling_matrix,
    destinations_excluded_matrix,
    evaluated_block_transfer,
    evaluated_transfer_matrix,
    extended_transfer_matrix,
    identity_matrix,
    local_coding_matrix,
    network_transfer_matrix,
    path_sum,
    restricted_network_transfer_matrix,
    session_matrices,
    sources_excluded_matrix,
    transfer_matrix,
    vector_extended_transfer_matrix,
)
from oracles import all_paths, brute_path_sum, gf_mul, numeric_session_matrix, path_monomial

seeds = st.integers(0, 10**6)


def raw(net):
    return [tuple(e) for e in net.edges]


def dag(seed, n_edges=8):
    return random_dag(seed, n_vertices=5, n_edges=n_edges)


@given(seeds)
def test_extended_matrix_matches_path_enumeration(seed):
    net = dag(seed)
    H = extended_transfer_matrix(net)
    edges = raw(net)
    for r in H.rows:
        for c in H.cols:
            want = Poly.one() if r == c else brute_path_sum(edges, r, c)
            assert H.entry(r, c) == want


@given(seeds)
def test_inverse_identity(seed):
    net = dag(seed, 7)
    H = extended_transfer_matrix(net)
    F = local_coding_matrix(net)
    I = identity_matrix(net.order)
    # characteristic 2: I - F = I + F
    assert (I + F) @ H == I
    assert H @ (I + F) == I


def test_diamond_and_chain():
    net = instances.load("disjoint_chains")
    H = extended_transfer_matrix(net)
    for r in H.rows:
        assert H.entry(r, r) == Poly.one()
    x = path_sum(net, "s1", "t1")
    assert len(x) == 1


@given(seeds)
def test_avoid_and_via(seed):
    net = dag(seed)
    ids = net.edge_ids
    a, b, x = ids[0], ids[-1], ids[len(ids) // 2]
    if len({a, b, x}) < 3:
        return
    edges = raw(net)
    paths = all_paths(edges, a, b)

    def poly_of(ps):
        acc = {}
        for p in ps:
            m = path_monomial(p)
            acc[m] = acc.get(m, 0) ^ 1
        return Poly({m: 1 for m, c in acc.items() if c})

    assert path_sum(net, a, b, avoid=[x]) == poly_of([p for p in paths if x not in p])
    assert path_sum(net, a, b, via=[x]) == poly_of([p for p in paths if x in p])


@given(seeds, st.integers(1, 4))
def test_evaluated_matches_numeric_enumeration(seed, k):
    import random

    net = dag(seed)
    fld = field(k)
    rng = random.Random(seed)
    values = {p: rng.randrange(fld.order) for p in net.adjacent_pairs}
    rows, cols = net.order[:3], net.order[-3:]
    got = evaluated_transfer_matrix(net, values, fld, rows, cols)
    want = numeric_session_matrix(raw(net), None, values, k, fld.modulus, rows, cols)
    assert got == want
    # symbolic then evaluate agrees too
    sym = transfer_matrix(net, rows, cols)
    point = {Var(a, b): x for (a, b), x in values.items()}
    assert sym.evaluate(point, fld) == got


def test_session_and_network_matrices():
    net = instances.load("crossing_routes")
    G = session_matrices(net)
    N = network_transfer_matrix(net)
    assert G[(1, 1)].entry("s1", "t1") == N.entry("s1", "t1")
    assert G[(2, 1)].entry("s2", "t1") == N.entry("s2", "t1")
    assert not G[(2, 1)].is_zero()


def test_coupling_matrix_shape():
    net = instances.gap_instance()
    U = ["b1", "e2", "t11"]
    L = coupling_matrix(net, U)
    assert L[0, 1] and L[1, 2] and L[0, 2]
    for i in range(3):
        assert L[i, i] == Poly.one()
        for j in range(i):
            assert not L[i, j]
    assert L.det() == Poly.one()
    with pytest.raises(NotTopologicallySorted):
        coupling_matrix(net, list(reversed(U)))


@given(seeds)
def test_excluded_matrices(seed):
    net = dag(seed, 9)
    edges = raw(net)
    order = net.order
    S, T = order[:2], order[-2:]
    D = destinations_excluded_matrix(net, S, T)
    E = sources_excluded_matrix(net, S, T)
    for i, s in enumerate(S):
        for j, t in enumerate(T):
            d = [p for p in all_paths(edges, s, t) if not set(p) & set(T[:j])]
            e = [p for p in all_paths(edges, s, t) if not set(p) & set(S[i + 1:])]
            assert D[i, j] == _sum(d)
            assert E[i, j] == _sum(e)


def _sum(paths):
    acc = {}
    for p in paths:
        m = path_monomial(p)
        acc[m] = acc.get(m, 0) ^ 1
    return Poly({m: 1 for m, c in acc.items() if c})


def test_restricted_with_empty_set_is_zero():
    net = instances.load("crossing_routes")
    assert restricted_network_transfer_matrix(net, []).is_zero()
    full = restricted_network_transfer_matrix(net, net.edge_ids)
    assert full == network_transfer_matrix(net)


def test_unknown_edge():
    net = instances.load("crossing_routes")
    with pytest.raises(UnknownEdge):
        path_sum(net, "nope", "t1")


@given(seeds)
def test_block_v1_matches_scalar(seed):
    net = dag(seed, 7)
    B = vector_extended_transfer_matrix(net, 1)
    H = extended_transfer_matrix(net)
    rename = {}
    for a, b in net.adjacent_pairs:
        rename[Var(a, b, 0, 0)] = Var(a, b)
    for i in range(len(H.rows)):
        for j in range(len(H.cols)):
            blk = B[i, j].rows[0][0]
            assert _rename(blk, rename) == H[i, j]


def _rename(p, table):
    return Poly({tuple(sorted((table[v], e) for v, e in m)): c for m, c in p.terms.items()})


def test_block_products_keep_order():
    # chain a -> b -> c: block entry a->c is beta_ab @ beta_bc, not the reverse
    from netcode.graph import build_network

    net = build_network([("a", "x", "y"), ("b", "y", "z"), ("c", "z", "w")], [], [], [], [])
    fld = field(1)
    A = [[0, 1], [0, 0]]
    Bm = [[0, 0], [1, 0]]
    blocks = {("a", "b"): A, ("b", "c"): Bm}
    T = evaluated_block_transfer(net, blocks, fld, 2, ["a"], ["c"])
    got = [[int(x) for x in r] for r in T[0, 0].rows]
    want = [[sum(gf_mul(A[i][k], Bm[k][j], 1, fld.modulus) for k in range(2)) % 2 for j in range(2)] for i in range(2)]
    assert got == want == [[1, 0], [0, 0]]


def test_flatten_shape():
    net = instances.load("crossing_routes")
    B = vector_extended_transfer_matrix(net, 2, rows=net.s1 + net.s2, cols=net.t1 + net.t2)
    F = B.flatten()
    assert F.shape == (4, 4)
