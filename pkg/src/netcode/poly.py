"""Sparse multivariate polynomials over GF(2^k).

Variables are local coding coefficients named by the pair of edges they
connect.  A monomial is a tuple of ``(Var, exponent)`` pairs sorted by
``Var``; a polynomial maps monomials to nonzero int coefficients.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, NamedTuple, Union

from .errors import FieldMismatch, SymbolicOverflow, UnboundVariable, ZeroPolynomial
from .field import GF, FieldElem, field

DEFAULT_MONOMIAL_CAP = 100_000


def monomial_cap() -> int:
    raw = os.environ.get("NETCODE_MONOMIAL_CAP")
    if raw:
        return int(raw)
    return DEFAULT_MONOMIAL_CAP


class Var(NamedTuple):
    """beta[tail -> head]; ``row``/``col`` are block coordinates (-1 for scalar)."""

    tail: str
    head: str
    row: int = -1
    col: int = -1

    @property
    def pair(self):
        return (self.tail, self.head)

    def render(self):
        if self.row < 0:
            return f"b[{self.tail}->{self.head}]"
        return f"b[{self.tail}->{self.head};{self.row},{self.col}]"

    def __str__(self):
        return self.render()


Monomial = tuple  # tuple[tuple[Var, int], ...]
ONE_MONO: Monomial = ()


def _mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for v, e in m2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


class Poly:
    """Immutable sparse polynomial."""

    __slots__ = ("terms", "field", "_hash")

    def __init__(self, terms: Mapping | None = None, fld: GF | None = None):
        self.field = fld if fld is not None else field(1)
        t = {}
        if terms:
            for m, c in terms.items():
                c = int(c)
                if not 0 <= c < self.field.order:
                    raise ValueError(f"coefficient {c} not in {self.field}")
                exps: dict = {}
                for v, e in m:
                    exps[v] = exps.get(v, 0) + int(e)
                key = tuple(sorted((v, e) for v, e in exps.items() if e))
                r = t.get(key, 0) ^ c
                if r:
                    t[key] = r
                else:
                    t.pop(key, None)
        self.terms = t
        self._hash = None

    @classmethod
    def _raw(cls, terms, fld):
        p = cls.__new__(cls)
        p.terms = terms
        p.field = fld
        p._hash = None
        return p

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, fld: GF | None = None):
        return cls._raw({}, fld or field(1))

    @classmethod
    def one(cls, fld: GF | None = None):
        return cls._raw({ONE_MONO: 1}, fld or field(1))

    @classmethod
    def const(cls, c, fld: GF | None = None):
        fld = fld or field(1)
        c = int(c)
        if not 0 <= c < fld.order:
            raise ValueError(f"{c} not in {fld}")
        return cls._raw({ONE_MONO: c} if c else {}, fld)

    @classmethod
    def var(cls, v: Var, fld: GF | None = None):
        return cls._raw({((v, 1),): 1}, fld or field(1))

    # -- queries ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and ONE_MONO in self.terms)

    def constant_term(self) -> int:
        return self.terms.get(ONE_MONO, 0)

    def __len__(self):
        return len(self.terms)

    def variables(self) -> frozenset:
        out = set()
        for m in self.terms:
            for v, _ in m:
                out.add(v)
        return frozenset(out)

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(e for _, e in m) for m in self.terms)

    def degree_in(self, v: Var) -> int:
        best = 0
        for m in self.terms:
            for w, e in m:
                if w == v and e > best:
                    best = e
        return best

    def monomials(self):
        """(monomial, coefficient) pairs in canonical order."""
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    # -- arithmetic -----------------------------------------------------------
    def _check(self, other):
        if isinstance(other, int):
            return Poly.const(other, self.field)
        if not isinstance(other, Poly):
            return None
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        t = dict(self.terms)
        for m, c in other.terms.items():
            r = t.get(m, 0) ^ c
            if r:
                t[m] = r
            else:
                del t[m]
        if len(t) > monomial_cap():
            raise SymbolicOverflow(f"sum has {len(t)} monomials")
        return Poly._raw(t, self.field)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, other):
        other = self._check(other)
        if other is None:
            return NotImplemented
        a, b = self.terms, other.terms
        if not a or not b:
            return Poly._raw({}, self.field)
        if len(a) < len(b):
            a, b = b, a
        cap = monomial_cap()
        fmul = self.field.mul
        t = {}
        if len(b) == 1:
            ((mb, cb),) = b.items()
            if mb == ONE_MONO and cb == 1:
                return Poly._raw(dict(a), self.field)
        for mb, cb in b.items():
            for ma, ca in a.items():
                m = _mono_mul(ma, mb)
                c = ca if cb == 1 else (cb if ca == 1 else fmul(ca, cb))
                r = t.get(m, 0) ^ c
                if r:
                    t[m] = r
                else:
                    del t[m]
            if len(t) > cap:
                raise SymbolicOverflow(f"product exceeds {cap} monomials")
        if len(t) > cap:
            raise SymbolicOverflow(f"product has {len(t)} monomials")
        return Poly._raw(t, self.field)

    __rmul__ = __mul__

    def square(self):
        # characteristic 2: cross terms cancel, so only the diagonal survives
        fmul = self.field.mul
        t = {}
        for m, c in self.terms.items():
            t[tuple((v, 2 * e) for v, e in m)] = fmul(c, c)
        return Poly._raw(t, self.field)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result = Poly.one(self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base.square()
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = Poly.const(other, self.field)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.field == other.field and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.k, frozenset(self.terms.items())))
        return self._hash

    # -- evaluation -----------------------------------------------------------
    def _target_field(self, fld: GF):
        if self.field.k != 1 and self.field != fld:
            raise FieldMismatch(f"cannot evaluate a {self.field} polynomial in {fld}")

    def evaluate(self, assignment: Mapping, fld: GF | None = None) -> FieldElem:
        """Evaluate under ``assignment`` (Var -> int or FieldElem)."""
        fld = fld or _infer_field(assignment, self.field)
        self._target_field(fld)
        mul, pw = fld.mul, fld.pow
        vals = {}
        total = 0
        for m, c in self.terms.items():
            acc = c
            for v, e in m:
                x = vals.get(v)
                if x is None:
                    try:
                        x = int(assignment[v])
                    except KeyError:
                        raise UnboundVariable(f"no value for {v.render()}") from None
                    vals[v] = x
                acc = mul(acc, x if e == 1 else pw(x, e))
                if not acc:
                    break
            total ^= acc
        return FieldElem(total, fld)

    def substitute(self, partial: Mapping, fld: GF | None = None) -> "Poly":
        """Plug values in for some variables; the rest stay symbolic."""
        if not partial:
            return self
        fld = fld or _infer_field(partial, self.field)
        self._target_field(fld)
        mul, pw = fld.mul, fld.pow
        t = {}
        for m, c in self.terms.items():
            rest = []
            acc = c
            for v, e in m:
                if v in partial:
                    x = int(partial[v])
                    acc = mul(acc, x if e == 1 else pw(x, e))
                    if not acc:
                        break
                else:
                    rest.append((v, e))
            if not acc:
                continue
            key = tuple(rest)
            r = t.get(key, 0) ^ acc
            if r:
                t[key] = r
            else:
                del t[key]
        return Poly._raw(t, fld)

    def coerce(self, fld: GF) -> "Poly":
        """View a polynomial with GF(2) coefficients over a bigger field."""
        if fld == self.field:
            return self
        self._target_field(fld)
        return Poly._raw(dict(self.terms), fld)

    # -- grading ----------------------------------------------------------------
    def sumdeg(self, group: Iterable[Var]) -> int:
        return sumdeg(self, group)

    def is_homogeneous(self, group: Iterable[Var]) -> bool:
        return is_homogeneous(self, group)

    # -- text -------------------------------------------------------------------
    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.monomials():
            factors = []
            if c != 1 or not m:
                factors.append(format(c, "x") if c > 9 else str(c))
            for v, e in m:
                factors.append(v.render() + (f"^{e}" if e > 1 else ""))
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"Poly({self.render()!r}, {self.field!r})"


def _infer_field(assignment, default):
    for x in assignment.values():
        if isinstance(x, FieldElem):
            return x.field
        break
    return default


def _group_set(group):
    return group if isinstance(group, (set, frozenset)) else frozenset(group)


def _group_degrees(p: Poly, group):
    g = _group_set(group)
    return {sum(e for v, e in m if v in g) for m in p.terms}


def sumdeg(p: Poly, group: Iterable[Var]) -> int:
    """Largest total exponent over ``group`` among the monomials of p."""
    if p.is_zero():
        raise ZeroPolynomial("sumdeg of the zero polynomial")
    return max(_group_degrees(p, group))


def is_homogeneous(p: Poly, group: Iterable[Var]) -> bool:
    if p.is_zero():
        raise ZeroPolynomial("homogeneity of the zero polynomial")
    return len(_group_degrees(p, group)) == 1


def homogeneous_parts(p: Poly, group: Iterable[Var]) -> dict:
    """Split p by its sum-degree over ``group``."""
    g = _group_set(group)
    parts: dict = {}
    for m, c in p.terms.items():
        d = sum(e for v, e in m if v in g)
        parts.setdefault(d, {})[m] = c
    return {d: Poly._raw(t, p.field) for d, t in sorted(parts.items())}


def poly_add(a: Poly, b: Poly) -> Poly:
    return a + b


def poly_mul(a: Poly, b: Poly) -> Poly:
    return a * b


def evaluate(p: Poly, assignment: Mapping, fld: GF | None = None) -> FieldElem:
    return p.evaluate(assignment, fld)


def substitute(p: Poly, partial: Mapping, fld: GF | None = None) -> Poly:
    return p.substitute(partial, fld)


# -- randomized identity testing ---------------------------------------------

Expression = Union[Poly, Callable[[Mapping], object]]


@dataclass(frozen=True)
class IdentityTestResult:
    equal: bool
    trials: int
    field_degree: int
    degree: int
    error_bound: float
    counterexample: dict | None = None

    def __bool__(self):
        return self.equal


def _as_callable(expr: Expression, fld: GF):
    if isinstance(expr, Poly):
        return lambda a: int(expr.evaluate(a, fld))
    return lambda a: int(expr(a))


def random_identity_test(
    a: Expression,
    b: Expression,
    trials: int = 20,
    k: int = 32,
    seed: int = 0,
    variables: Iterable[Var] | None = None,
    degree: int | None = None,
) -> IdentityTestResult:
    """Schwartz-Zippel test of a == b.

    Callables receive a ``{Var: int}`` assignment in GF(2^k) and must return
    a field value; for them ``variables`` and ``degree`` (an upper bound on
    the total degree of a - b) have to be supplied.  A "not equal" answer is
    always right; "equal" is wrong with probability at most the reported
    ``error_bound``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    fld = field(k)
    if variables is None or degree is None:
        if not (isinstance(a, Poly) and isinstance(b, Poly)):
            raise ValueError("variables and degree are required for callable expressions")
    if variables is None:
        variables = a.variables() | b.variables()
    if degree is None:
        degree = max(a.total_degree(), b.total_degree())
    variables = sorted(set(variables))
    fa, fb = _as_callable(a, fld), _as_callable(b, fld)
    rng = random.Random(seed)
    bound = min(1.0, degree / fld.order) ** trials if degree else 0.0
    for i in range(trials):
        point = {v: rng.randrange(fld.order) for v in variables}
        if fa(point) != fb(point):
            return IdentityTestResult(False, i + 1, k, degree, 0.0, point)
    return IdentityTestResult(True, trials, k, degree, bound)
