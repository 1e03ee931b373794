# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops for scalar code evaluation and search over GF(2^k).

A problem is the tuple ``(in_ptr, in_src, in_var, sources, n_s1, sinks, n_t1)``
describing the relevant adjacencies in topological index space; a field is
``(k, modulus, exp, log)`` where the tables are empty for k > 16.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint32_t, uint64_t, int64_t

DEF MAXDIM = 32
DEF MAXEDGES = 4096

cnp.import_array()


cdef struct Field:
    int k
    uint64_t modulus
    uint32_t order_m1
    const int64_t* exp
    const int64_t* log
    bint tables


cdef inline uint32_t gmul(Field* f, uint32_t a, uint32_t b) noexcept nogil:
    cdef uint64_t r = 0, aa
    cdef int i
    if a == 0 or b == 0:
        return 0
    if f.tables:
        return <uint32_t> f.exp[f.log[a] + f.log[b]]
    aa = a
    while b:
        if b & 1:
            r ^= aa
        aa <<= 1
        b >>= 1
    for i in range(2 * f.k - 2, f.k - 1, -1):
        if (r >> i) & 1:
            r ^= f.modulus << (i - f.k)
    return <uint32_t> r


cdef inline uint32_t ginv(Field* f, uint32_t a) noexcept nogil:
    cdef uint32_t r = 1, base = a
    cdef uint64_t e
    if f.tables:
        return <uint32_t> f.exp[(f.order_m1 - f.log[a]) % f.order_m1]
    e = (<uint64_t> 1 << f.k) - 2
    while e:
        if e & 1:
            r = gmul(f, r, base)
        base = gmul(f, base, base)
        e >>= 1
    return r


cdef uint32_t gdet(Field* f, uint32_t* m, int n) noexcept nogil:
    """Determinant of the n x n row-major matrix m (destroyed)."""
    cdef int c, r, j, piv
    cdef uint32_t d = 1, pinv, fac, t
    for c in range(n):
        piv = -1
        for r in range(c, n):
            if m[r * n + c]:
                piv = r
                break
        if piv < 0:
            return 0
        if piv != c:
            for j in range(n):
                t = m[c * n + j]
                m[c * n + j] = m[piv * n + j]
                m[piv * n + j] = t
        d = gmul(f, d, m[c * n + c])
        pinv = ginv(f, m[c * n + c])
        for r in range(c + 1, n):
            if m[r * n + c]:
                fac = gmul(f, m[r * n + c], pinv)
                for j in range(c, n):
                    m[r * n + j] ^= gmul(f, fac, m[c * n + j])
    return d


cdef class _Problem:
    cdef const int64_t[:] in_ptr
    cdef const int64_t[:] in_src
    cdef const int64_t[:] in_var
    cdef const int64_t[:] sources
    cdef const int64_t[:] sinks
    cdef int n_s1, n_t1, n_src, n_snk, n_edges
    cdef Field f
    cdef object _keep

    def __init__(self, prob, fld):
        in_ptr, in_src, in_var, sources, n_s1, sinks, n_t1 = prob
        k, modulus, exp, log = fld
        self.in_ptr = np.ascontiguousarray(in_ptr, dtype=np.int64)
        self.in_src = np.ascontiguousarray(in_src, dtype=np.int64)
        self.in_var = np.ascontiguousarray(in_var, dtype=np.int64)
        self.sources = np.ascontiguousarray(sources, dtype=np.int64)
        self.sinks = np.ascontiguousarray(sinks, dtype=np.int64)
        self.n_s1 = n_s1
        self.n_t1 = n_t1
        self.n_src = len(sources)
        self.n_snk = len(sinks)
        self.n_edges = len(in_ptr) - 1
        if self.n_src > MAXDIM or self.n_snk > MAXDIM or self.n_edges > MAXEDGES:
            raise ValueError("problem too large for the compiled kernel")
        exp_a = np.ascontiguousarray(exp if exp is not None else np.zeros(1, np.int64), dtype=np.int64)
        log_a = np.ascontiguousarray(log if log is not None else np.zeros(1, np.int64), dtype=np.int64)
        self._keep = (exp_a, log_a)
        cdef const int64_t[:] ev = exp_a
        cdef const int64_t[:] lv = log_a
        self.f.k = k
        self.f.modulus = modulus
        self.f.order_m1 = <uint32_t> ((<uint64_t> 1 << k) - 1)
        self.f.exp = &ev[0]
        self.f.log = &lv[0]
        self.f.tables = exp is not None

    cdef void row(self, int s, const uint32_t* a, uint32_t* h) noexcept nogil:
        cdef int j, p
        cdef uint32_t acc, x
        for j in range(self.n_edges):
            h[j] = 0
        h[s] = 1
        for j in range(s + 1, self.n_edges):
            acc = 0
            for p in range(self.in_ptr[j], self.in_ptr[j + 1]):
                x = h[self.in_src[p]]
                if x:
                    acc ^= gmul(&self.f, x, a[self.in_var[p]])
            h[j] = acc

    cdef bint ok(self, const uint32_t* a, uint32_t* h, uint32_t* g) noexcept nogil:
        """Zero interference, invertible G11 and G22."""
        cdef int i, c, r
        cdef int n2 = self.n_src - self.n_s1
        cdef int m2 = self.n_snk - self.n_t1
        # interference and G22 first: session-2 rows
        for i in range(n2):
            self.row(<int> self.sources[self.n_s1 + i], a, h)
            for c in range(self.n_t1):
                if h[self.sinks[c]]:
                    return False
            for c in range(m2):
                g[i * m2 + c] = h[self.sinks[self.n_t1 + c]]
        if n2 and gdet(&self.f, g, n2) == 0:
            return False
        for i in range(self.n_s1):
            self.row(<int> self.sources[i], a, h)
            for c in range(self.n_t1):
                g[i * self.n_t1 + c] = h[self.sinks[c]]
        if self.n_s1 and gdet(&self.f, g, self.n_s1) == 0:
            return False
        return True


def eval_session(prob, fld, assignment):
    """Evaluated (|S1|+|S2|) x (|T1|+|T2|) session matrix."""
    cdef _Problem P = _Problem(prob, fld)
    cdef cnp.ndarray[uint32_t, ndim=1] a = np.ascontiguousarray(assignment, dtype=np.uint32)
    cdef cnp.ndarray[uint32_t, ndim=2] out = np.zeros((P.n_src, P.n_snk), dtype=np.uint32)
    cdef uint32_t h[MAXEDGES]
    cdef int i, c
    cdef uint32_t* ap = <uint32_t*> a.data if a.shape[0] else h
    for i in range(P.n_src):
        P.row(<int> P.sources[i], ap, h)
        for c in range(P.n_snk):
            out[i, c] = h[P.sinks[c]]
    return out


def check_batch(prob, fld, assignments):
    """Index of the first row of ``assignments`` that is a valid code, else -1."""
    cdef _Problem P = _Problem(prob, fld)
    cdef cnp.ndarray[uint32_t, ndim=2] A = np.ascontiguousarray(assignments, dtype=np.uint32)
    cdef uint32_t h[MAXEDGES]
    cdef uint32_t g[MAXDIM * MAXDIM]
    cdef Py_ssize_t r, n = A.shape[0], nv = A.shape[1]
    cdef uint32_t dummy = 0
    cdef uint32_t* base = <uint32_t*> A.data if nv else &dummy
    cdef Py_ssize_t found = -1
    with nogil:
        for r in range(n):
            if P.ok(base + r * nv, h, g):
                found = r
                break
    return found


def search_product(prob, fld, n_vars, group_ptr, group_vars, tab_ptr, radix, tables, long long start, long long stop):
    """Scan a mixed-radix product of per-group choice tables.

    Group g owns the variables ``group_vars[group_ptr[g]:group_ptr[g+1]]``;
    its j-th choice is ``tables[tab_ptr[g] + j*len_g : ... + len_g]``.
    Index 0 of the scan gives digit 0 to every group; group 0 varies fastest.
    Returns the first index in [start, stop) that yields a valid code, or -1.
    """
    cdef _Problem P = _Problem(prob, fld)
    cdef const int64_t[:] gp = np.ascontiguousarray(group_ptr, dtype=np.int64)
    cdef const int64_t[:] gv = np.ascontiguousarray(group_vars, dtype=np.int64)
    cdef const int64_t[:] tp = np.ascontiguousarray(tab_ptr, dtype=np.int64)
    cdef const int64_t[:] rx = np.ascontiguousarray(radix, dtype=np.int64)
    cdef const uint32_t[:] tb = np.ascontiguousarray(tables, dtype=np.uint32)
    cdef int G = rx.shape[0]
    cdef cnp.ndarray[uint32_t, ndim=1] a = np.zeros(max(int(n_vars), 1), dtype=np.uint32)
    cdef uint32_t* ap = <uint32_t*> a.data
    cdef uint32_t h[MAXEDGES]
    cdef uint32_t g[MAXDIM * MAXDIM]
    cdef long long idx, rest
    cdef int gi, ln, j
    cdef int64_t digit, off
    cdef long long found = -1
    with nogil:
        for idx in range(start, stop):
            rest = idx
            for gi in range(G):
                digit = rest % rx[gi]
                rest = rest // rx[gi]
                ln = <int> (gp[gi + 1] - gp[gi])
                off = tp[gi] + digit * ln
                for j in range(ln):
                    ap[gv[gp[gi] + j]] = tb[off + j]
            if P.ok(ap, h, g):
                found = idx
                break
    return found


def gf_mul_vec(fld, a, b):
    """Elementwise product of two uint32 arrays in GF(2^k)."""
    cdef _Problem P = _Problem((np.zeros(1, np.int64), (), (), (), 0, (), 0), fld)
    cdef const uint32_t[:] av = np.ascontiguousarray(a, dtype=np.uint32)
    cdef const uint32_t[:] bv = np.ascontiguousarray(b, dtype=np.uint32)
    cdef cnp.ndarray[uint32_t, ndim=1] out = np.empty(av.shape[0], dtype=np.uint32)
    cdef Py_ssize_t i
    for i in range(av.shape[0]):
        out[i] = gmul(&P.f, av[i], bv[i])
    return out
