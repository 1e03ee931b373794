import itertools

import pytest
import sympy
from hypothesis import given, strategies as st

from netcode.errors import FieldMismatch, SymbolicOverflow, UnboundVariable, ZeroPolynomial
from netcode.field import field
from netcode.poly import (
    Poly,
    Var,
    evaluate,
    homogeneous_parts,
    is_homogeneous,
    random_identity_test,
    substitute,
    sumdeg,
)

VARS = [Var("a", "b"), Var("b", "c"), Var("a", "c"), Var("c", "d")]
SYM = sympy.symbols("x0:4")


@st.composite
def polys(draw, k=1, max_terms=5):
    fld = field(k)
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        exps = draw(st.lists(st.integers(0, 2), min_size=len(VARS), max_size=len(VARS)))
        mono = tuple((v, e) for v, e in zip(VARS, exps) if e)
        terms[mono] = terms.get(mono, 0) ^ draw(st.integers(1, fld.order - 1))
    return Poly(terms, fld)


def to_sympy(p):
    expr = 0
    for m, c in p.terms.items():
        t = c
        for v, e in m:
            t *= SYM[VARS.index(v)] ** e
        expr += t
    return sympy.Poly(expr, *SYM, modulus=2)


def all_points(k, vs=VARS):
    for vals in itertools.product(range(1 << k), repeat=len(vs)):
        yield dict(zip(vs, vals))


@given(polys(), polys())
def test_gf2_product_matches_sympy(p, q):
    assert (to_sympy(p * q) - to_sympy(p) * to_sympy(q)).as_expr() == 0
    assert (to_sympy(p + q) - (to_sympy(p) + to_sympy(q))).as_expr() == 0


@given(polys(k=2), polys(k=2), polys(k=2))
def test_ring_laws_gf4(p, q, r):
    assert p * (q + r) == p * q + p * r
    assert (p * q) * r == p * (q * r)
    assert p + p == Poly.zero(field(2))
    assert p * Poly.one(field(2)) == p


@given(polys(k=2, max_terms=3), polys(k=2, max_terms=3))
def test_evaluation_is_a_homomorphism(p, q):
    f = field(2)
    for pt in itertools.islice(all_points(2), 0, 256, 17):
        assert (p * q).evaluate(pt, f) == p.evaluate(pt, f) * q.evaluate(pt, f)
        assert (p + q).evaluate(pt, f) == p.evaluate(pt, f) + q.evaluate(pt, f)


@given(polys(k=2), st.integers(0, 7))
def test_pow_matches_repeated_product(p, e):
    want = Poly.one(field(2))
    for _ in range(e):
        want = want * p
    assert p ** e == want


@given(polys(k=3))
def test_square_is_frobenius(p):
    assert p.square() == p * p


def test_gf2_poly_identically_zero_function_but_nonzero():
    x = Poly.var(VARS[0])
    p = x * x + x
    assert p
    for v in (0, 1):
        assert not p.evaluate({VARS[0]: v}, field(1))
    # over GF(4) the difference shows
    assert p.coerce(field(2)).evaluate({VARS[0]: 2}, field(2))


def test_sumdeg_and_homogeneity():
    a, b, c = (Poly.var(v) for v in VARS[:3])
    g = [VARS[0], VARS[1]]
    p = a * b + a * c
    assert sumdeg(p, g) == 2
    assert not is_homogeneous(p, g)
    assert is_homogeneous(a * c + b * c, g)
    parts = homogeneous_parts(p, g)
    assert set(parts) == {1, 2}
    assert parts[1] + parts[2] == p
    with pytest.raises(ZeroPolynomial):
        sumdeg(Poly.zero(), g)
    with pytest.raises(ZeroPolynomial):
        is_homogeneous(Poly.zero(), g)


@given(polys(k=2), polys(k=2))
def test_product_of_homogeneous_is_homogeneous(p, q):
    g = VARS[:2]
    if p and q and is_homogeneous(p, g) and is_homogeneous(q, g):
        pq = p * q
        assert pq and is_homogeneous(pq, g)
        assert sumdeg(pq, g) == sumdeg(p, g) + sumdeg(q, g)


def test_homogeneous_factors_of_homogeneous_product():
    # converse direction on small products: if p*q is homogeneous, so are p and q
    a, b, c = (Poly.var(v) for v in VARS[:3])
    g = VARS[:2]
    cands = [a, b, c, a + b, a + c, a * b + c, b * c + a, a + Poly.one()]
    for p, q in itertools.product(cands, repeat=2):
        if is_homogeneous(p * q, g):
            assert is_homogeneous(p, g) and is_homogeneous(q, g)


def test_substitute_then_evaluate():
    f = field(2)
    a, b, c = (Poly.var(v, f) for v in VARS[:3])
    p = a * b + c * c + Poly.const(3, f)
    part = substitute(p, {VARS[0]: 2}, f)
    assert VARS[0] not in part.variables()
    for pt in itertools.islice(all_points(2, VARS[:3]), 64):
        full = dict(pt)
        full[VARS[0]] = 2
        assert part.evaluate(pt, f) == p.evaluate(full, f)


def test_unbound_variable():
    with pytest.raises(UnboundVariable):
        evaluate(Poly.var(VARS[0]), {}, field(1))


def test_field_mismatch():
    with pytest.raises(FieldMismatch):
        Poly.one(field(2)) + Poly.one(field(3))
    with pytest.raises(FieldMismatch):
        Poly.var(VARS[0], field(2)).evaluate({VARS[0]: 1}, field(3))


def test_monomial_cap(monkeypatch):
    monkeypatch.setenv("NETCODE_MONOMIAL_CAP", "10")
    s = Poly.zero()
    for v in VARS[:4]:
        s = s + Poly.var(v)
    with pytest.raises(SymbolicOverflow):
        _ = s * s * s


def test_render():
    p = Poly.var(Var("e", "f")) * Poly.var(Var("e", "f")) + Poly.one()
    assert p.render() == "1 + b[e->f]^2"
    assert Poly.var(Var("e", "f", 0, 1)).render() == "b[e->f;0,1]"
    assert Poly.zero().render() == "0"


def test_identity_test():
    a, b = Poly.var(VARS[0]), Poly.var(VARS[1])
    r = random_identity_test((a + b) ** 2, a * a + b * b, seed=3)
    assert r.equal and r.error_bound < 1e-100
    r = random_identity_test((a + b) ** 2, a * a + b, seed=3)
    assert not r.equal and r.counterexample is not None
    f = field(32)
    r = random_identity_test(
        lambda pt: f.mul(pt[VARS[0]], pt[VARS[0]]),
        lambda pt: f.pow(pt[VARS[0]], 2),
        variables=[VARS[0]], degree=2,
    )
    assert r
    with pytest.raises(ValueError):
        random_identity_test(lambda pt: 0, a)
