"""Binary extension fields GF(2^k) for 1 <= k <= 32.

Elements are plain ints in ``range(2**k)``; bit i is the coefficient of
x^i in the polynomial basis.  Every k uses one fixed irreducible modulus
(see ``MODULI``) so results are reproducible bit for bit.
"""

from __future__ import annotations

import functools

import numpy as np

from .errors import FieldMismatch

# x^k + (low terms), written with the leading bit included.  Low-weight
# irreducible (mostly primitive) trinomials/pentanomials from the standard
# tables of Lidl and Niederreiter / Seroussi.
MODULI = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10000011,
    8: 0x11D,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
    17: 0x20009,
    18: 0x40081,
    19: 0x80027,
    20: 0x100009,
    21: 0x200005,
    22: 0x400003,
    23: 0x800021,
    24: 0x1000087,
    25: 0x2000009,
    26: 0x4000047,
    27: 0x8000027,
    28: 0x10000009,
    29: 0x20000005,
    30: 0x40800007,
    31: 0x80000009,
    32: 0x100400007,
}

TABLE_MAX_DEGREE = 16


def clmul(a: int, b: int) -> int:
    """Carry-less product of two bit-polynomials."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_mod(a: int, m: int) -> int:
    dm = m.bit_length() - 1
    while a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


class GF:
    """The field GF(2^k) with the table modulus for k."""

    __slots__ = ("k", "modulus", "order", "_exp", "_log", "__weakref__")

    def __init__(self, k: int):
        if not 1 <= k <= 32:
            raise ValueError(f"field degree must be in 1..32, got {k}")
        self.k = k
        self.modulus = MODULI[k]
        self.order = 1 << k
        self._exp = None
        self._log = None
        if k <= TABLE_MAX_DEGREE:
            self._build_tables()

    def _build_tables(self):
        q = self.order
        n = q - 1
        g = self._find_generator()
        exp = [0] * (2 * n + 1)
        log = [0] * q
        x = 1
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = self._slow_mul(x, g)
        for i in range(n, 2 * n + 1):
            exp[i] = exp[i - n]
        self._exp = exp
        self._log = log

    def _slow_mul(self, a, b):
        return poly_mod(clmul(a, b), self.modulus)

    def _find_generator(self):
        n = self.order - 1
        if n == 1:
            return 1
        primes = _prime_factors(n)
        for g in range(2, self.order):
            if all(self._slow_pow(g, n // p) != 1 for p in primes):
                return g
        raise AssertionError("no generator found; modulus is not irreducible")

    def _slow_pow(self, a, e):
        r = 1
        while e:
            if e & 1:
                r = self._slow_mul(r, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return r

    # -- arithmetic on ints -------------------------------------------------
    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if not a or not b:
            return 0
        if self._log is not None:
            return self._exp[self._log[a] + self._log[b]]
        return self._slow_mul(a, b)

    def inv(self, a: int) -> int:
        if not a:
            raise ZeroDivisionError("inverse of zero in GF(2^k)")
        if self._log is not None:
            return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]
        return self._slow_pow(a, self.order - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if e == 0:
            return 1
        if not a:
            return 0
        if self._log is not None:
            return self._exp[(self._log[a] * e) % (self.order - 1)]
        return self._slow_pow(a, e)

    def det(self, rows) -> int:
        """Determinant of a square matrix given as a list of int rows."""
        a = [list(r) for r in rows]
        n = len(a)
        d = 1
        for c in range(n):
            piv = next((r for r in range(c, n) if a[r][c]), None)
            if piv is None:
                return 0
            if piv != c:
                a[c], a[piv] = a[piv], a[c]
            p = a[c][c]
            d = self.mul(d, p)
            pinv = self.inv(p)
            for r in range(c + 1, n):
                if a[r][c]:
                    f = self.mul(a[r][c], pinv)
                    row_r, row_c = a[r], a[c]
                    for j in range(c, n):
                        row_r[j] ^= self.mul(f, row_c[j])
        return d

    def rank(self, rows) -> int:
        a = [list(r) for r in rows]
        if not a:
            return 0
        m, n = len(a), len(a[0])
        rank = 0
        for c in range(n):
            piv = next((r for r in range(rank, m) if a[r][c]), None)
            if piv is None:
                continue
            a[rank], a[piv] = a[piv], a[rank]
            pinv = self.inv(a[rank][c])
            for r in range(m):
                if r != rank and a[r][c]:
                    f = self.mul(a[r][c], pinv)
                    for j in range(c, n):
                        a[r][j] ^= self.mul(f, a[rank][j])
            rank += 1
        return rank

    def matmul(self, a, b):
        n, m, p = len(a), len(b), len(b[0]) if b else 0
        out = []
        for i in range(n):
            row = [0] * p
            ai = a[i]
            for t in range(m):
                x = ai[t]
                if x:
                    bt = b[t]
                    for j in range(p):
                        if bt[j]:
                            row[j] ^= self.mul(x, bt[j])
            out.append(row)
        return out

    def tables(self):
        """(exp, log) as int64 arrays, or (None, None) when k is too big."""
        if self._log is None:
            return None, None
        return _np_tables(self.k)

    def __call__(self, value: int) -> "FieldElem":
        return FieldElem(value, self)

    def __eq__(self, other):
        return isinstance(other, GF) and other.k == self.k

    def __hash__(self):
        return hash(("GF", self.k))

    def __repr__(self):
        return f"GF(2^{self.k})"

    def __reduce__(self):
        return (field, (self.k,))


@functools.lru_cache(maxsize=None)
def field(k: int) -> GF:
    """Cached field instance for degree k."""
    return GF(k)


@functools.lru_cache(maxsize=None)
def _np_tables(k):
    f = field(k)
    exp = np.asarray(f._exp, dtype=np.int64)
    log = np.asarray(f._log, dtype=np.int64)
    exp.setflags(write=False)
    log.setflags(write=False)
    return exp, log


def _prime_factors(n):
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(m: int) -> bool:
    """Rabin's irreducibility test for a binary polynomial given as an int."""
    n = m.bit_length() - 1
    if n < 1:
        return False

    def sq_pow(e):
        # x^(2^e) mod m
        r = 0b10
        for _ in range(e):
            r = poly_mod(clmul(r, r), m)
        return r

    def gcd(a, b):
        while b:
            a, b = b, poly_mod(a, b)
        return a

    if sq_pow(n) != poly_mod(0b10, m):
        return False
    for p in _prime_factors(n):
        h = sq_pow(n // p) ^ 0b10
        if gcd(m, h) != 1:
            return False
    return True


class FieldElem:
    """An element of GF(2^k) with operator support."""

    __slots__ = ("value", "field")

    def __init__(self, value: int, fld: GF):
        value = int(value)
        if not 0 <= value < fld.order:
            raise ValueError(f"{value} is not an element of {fld}")
        self.value = value
        self.field = fld

    def _other(self, other):
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.value
        if isinstance(other, int):
            return FieldElem(other, self.field).value
        return NotImplemented

    def __add__(self, other):
        v = self._other(other)
        if v is NotImplemented:
            return v
        return FieldElem(self.value ^ v, self.field)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, other):
        v = self._other(other)
        if v is NotImplemented:
            return v
        return FieldElem(self.field.mul(self.value, v), self.field)

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._other(other)
        if v is NotImplemented:
            return v
        return FieldElem(self.field.div(self.value, v), self.field)

    def __pow__(self, e: int):
        return FieldElem(self.field.pow(self.value, e), self.field)

    def inverse(self):
        return FieldElem(self.field.inv(self.value), self.field)

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.field.k))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    __index__ = __int__

    def hex(self) -> str:
        return format(self.value, "x")

    def __repr__(self):
        return f"FieldElem(0x{self.hex()}, {self.field!r})"
