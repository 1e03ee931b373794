"""Independent reference implementations used to check the library.

Nothing here calls the library's path, cut or field routines; only the
result containers (Poly, Var) are shared so that values can be compared.
"""

from __future__ import annotations

import itertools
from collections import defaultdict

from netcode.poly import Poly, Var


def successors(edges):
    by_tail = defaultdict(list)
    for eid, tail, head in edges:
        by_tail[tail].append(eid)
    heads = {eid: head for eid, _, head in edges}
    return {eid: sorted(by_tail[heads[eid]]) for eid, _, _ in edges}


def all_paths(edges, a, b, removed=frozenset()):
    """Every a->b edge sequence, by plain recursion."""
    nxt = successors(edges)
    out = []

    def walk(path):
        e = path[-1]
        if e == b:
            out.append(tuple(path))
            return
        for f in nxt[e]:
            if f not in removed:
                walk(path + [f])

    if a not in removed:
        walk([a])
    return out


def path_monomial(path):
    return tuple(sorted((Var(x, y), 1) for x, y in zip(path, path[1:])))


def brute_path_sum(edges, a, b):
    counts = defaultdict(int)
    for p in all_paths(edges, a, b):
        counts[path_monomial(p)] ^= 1
    return Poly({m: 1 for m, c in counts.items() if c})


def connected(edges, S, T, removed=frozenset()):
    return any(all_paths(edges, s, t, removed) for s in S for t in T)


def brute_is_gns(edges, sess, cut):
    cut = frozenset(cut)
    return not (
        connected(edges, sess["s1"], sess["t1"], cut)
        or connected(edges, sess["s2"], sess["t2"], cut)
        or connected(edges, sess["s2"], sess["t1"], cut)
    )


def brute_min_gns(edges, sess, max_size=4):
    ids = sorted(e for e, _, _ in edges)
    for k in range(0, max_size + 1):
        for cut in itertools.combinations(ids, k):
            if brute_is_gns(edges, sess, cut):
                return k
    return None


def brute_min_cut(edges, S, T):
    ids = sorted(e for e, _, _ in edges)
    for k in range(len(ids) + 1):
        for cut in itertools.combinations(ids, k):
            if not connected(edges, S, T, frozenset(cut)):
                return k
    return len(ids)


# -- GF(2^k) by shift-and-add ----------------------------------------------------

def gf_mul(a, b, k, modulus):
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a >> k:
            a ^= modulus
    return r


def gf_pow(a, e, k, modulus):
    r = 1
    for _ in range(e):
        r = gf_mul(r, a, k, modulus)
    return r


def leibniz_det(m, mul, add, zero, one):
    """Permutation expansion; in characteristic 2 every sign is +1."""
    n = len(m)
    total = zero
    for perm in itertools.permutations(range(n)):
        term = one
        for i, j in enumerate(perm):
            term = mul(term, m[i][j])
        total = add(total, term)
    return total


def poly_by_bits(m):
    """Irreducibility of a GF(2) polynomial (bitmask) by trial division."""
    deg = m.bit_length() - 1

    def pmod(a, b):
        db = b.bit_length() - 1
        while a and a.bit_length() - 1 >= db:
            a ^= b << (a.bit_length() - 1 - db)
        return a

    for d in range(2, 1 << (deg // 2 + 1)):
        if d.bit_length() - 1 >= 1 and d.bit_length() - 1 <= deg // 2 and pmod(m, d) == 0:
            return False
    return True


# -- brute-force scalar code search ---------------------------------------------

def numeric_session_matrix(edges, sess, values, k, modulus, rows, cols):
    """Sum over enumerated paths of the product of coefficients."""
    out = []
    for r in rows:
        row = []
        for c in cols:
            acc = 0
            for p in all_paths(edges, r, c):
                w = 1
                for x, y in zip(p, p[1:]):
                    w = gf_mul(w, values.get((x, y), 0), k, modulus)
                acc ^= w
            row.append(acc)
        out.append(row)
    return out


def brute_rate11(edges, sess, k, modulus):
    """Is there any scalar assignment over GF(2^k) decoding both sessions?"""
    nxt = successors(edges)
    pairs = sorted((e, f) for e in nxt for f in nxt[e])
    s1, t1, s2, t2 = sess["s1"][0], sess["t1"][0], sess["s2"][0], sess["t2"][0]
    for vals in itertools.product(range(1 << k), repeat=len(pairs)):
        values = dict(zip(pairs, vals))
        m = numeric_session_matrix(edges, sess, values, k, modulus, [s1, s2], [t1, t2])
        if m[0][0] and m[1][1] and not m[1][0]:
            return True
    return False
