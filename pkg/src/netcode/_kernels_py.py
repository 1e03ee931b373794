"""Pure-Python versions of the compiled kernels (same signatures, same results)."""

import numpy as np


class _Field:
    __slots__ = ("k", "modulus", "exp", "log", "order_m1")

    def __init__(self, fld):
        k, modulus, exp, log = fld
        self.k = k
        self.modulus = modulus
        self.order_m1 = (1 << k) - 1
        self.exp = None if exp is None else [int(x) for x in exp]
        self.log = None if log is None else [int(x) for x in log]

    def mul(self, a, b):
        if not a or not b:
            return 0
        if self.exp is not None:
            return self.exp[self.log[a] + self.log[b]]
        r = 0
        while b:
            if b & 1:
                r ^= a
            a <<= 1
            b >>= 1
        k, m = self.k, self.modulus
        for i in range(2 * k - 2, k - 1, -1):
            if (r >> i) & 1:
                r ^= m << (i - k)
        return r

    def inv(self, a):
        if self.exp is not None:
            return self.exp[(self.order_m1 - self.log[a]) % self.order_m1]
        r, base, e = 1, a, (1 << self.k) - 2
        while e:
            if e & 1:
                r = self.mul(r, base)
            base = self.mul(base, base)
            e >>= 1
        return r

    def det(self, m, n):
        m = [row[:] for row in m]
        d = 1
        for c in range(n):
            piv = next((r for r in range(c, n) if m[r][c]), -1)
            if piv < 0:
                return 0
            m[c], m[piv] = m[piv], m[c]
            d = self.mul(d, m[c][c])
            pinv = self.inv(m[c][c])
            for r in range(c + 1, n):
                if m[r][c]:
                    fac = self.mul(m[r][c], pinv)
                    for j in range(c, n):
                        m[r][j] ^= self.mul(fac, m[c][j])
        return d


class _Problem:
    def __init__(self, prob, fld):
        in_ptr, in_src, in_var, sources, n_s1, sinks, n_t1 = prob
        self.in_ptr = [int(x) for x in in_ptr]
        self.in_src = [int(x) for x in in_src]
        self.in_var = [int(x) for x in in_var]
        self.sources = [int(x) for x in sources]
        self.sinks = [int(x) for x in sinks]
        self.n_s1, self.n_t1 = n_s1, n_t1
        self.n_edges = len(self.in_ptr) - 1
        self.f = _Field(fld)

    def row(self, s, a):
        h = [0] * self.n_edges
        h[s] = 1
        ptr, src, var, mul = self.in_ptr, self.in_src, self.in_var, self.f.mul
        for j in range(s + 1, self.n_edges):
            acc = 0
            for p in range(ptr[j], ptr[j + 1]):
                x = h[src[p]]
                if x:
                    acc ^= mul(x, a[var[p]])
            h[j] = acc
        return h

    def ok(self, a):
        n_s1, n_t1 = self.n_s1, self.n_t1
        src2 = self.sources[n_s1:]
        t1, t2 = self.sinks[:n_t1], self.sinks[n_t1:]
        g = []
        for s in src2:
            h = self.row(s, a)
            if any(h[c] for c in t1):
                return False
            g.append([h[c] for c in t2])
        if src2 and self.f.det(g, len(src2)) == 0:
            return False
        g = [[h[c] for c in t1] for h in (self.row(s, a) for s in self.sources[:n_s1])]
        if n_s1 and self.f.det(g, n_s1) == 0:
            return False
        return True


def eval_session(prob, fld, assignment):
    P = _Problem(prob, fld)
    a = [int(x) for x in assignment]
    out = np.zeros((len(P.sources), len(P.sinks)), dtype=np.uint32)
    for i, s in enumerate(P.sources):
        h = P.row(s, a)
        for c, t in enumerate(P.sinks):
            out[i, c] = h[t]
    return out


def check_batch(prob, fld, assignments):
    P = _Problem(prob, fld)
    for r, row in enumerate(np.asarray(assignments, dtype=np.uint32).tolist()):
        if P.ok(row):
            return r
    return -1


def search_product(prob, fld, n_vars, group_ptr, group_vars, tab_ptr, radix, tables, start, stop):
    P = _Problem(prob, fld)
    gp = [int(x) for x in group_ptr]
    gv = [int(x) for x in group_vars]
    tp = [int(x) for x in tab_ptr]
    rx = [int(x) for x in radix]
    tb = [int(x) for x in tables]
    a = [0] * max(int(n_vars), 1)
    for idx in range(start, stop):
        rest = idx
        for gi, r in enumerate(rx):
            rest, digit = divmod(rest, r)
            ln = gp[gi + 1] - gp[gi]
            off = tp[gi] + digit * ln
            for j in range(ln):
                a[gv[gp[gi] + j]] = tb[off + j]
        if P.ok(a):
            return idx
    return -1


def gf_mul_vec(fld, a, b):
    f = _Field(fld)
    return np.asarray([f.mul(int(x), int(y)) for x, y in zip(a, b)], dtype=np.uint32)
