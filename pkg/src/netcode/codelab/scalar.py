"""Scalar linear codes: assignment container, verification and search."""

from __future__ import annotations

import concurrent.futures as cf
import math
from dataclasses import dataclass, field as dc_field
from typing import Mapping

import numpy as np

from ..errors import DimensionMismatch, SearchSpaceTooLarge
from ..field import GF, field
from ..graph import Network, coreaching, reachable
from ..kernels import backend
from ..poly import Var

EXHAUSTIVE_LIMIT = 1 << 20
CHUNK = 1 << 16


@dataclass(frozen=True)
class CodeAssignment:
    """Local coding coefficients keyed by edge pair ``(tail, head)``.

    Scalar codes (``v == 1``) hold ints in GF(2^k); vector codes hold v x v
    tuples of ints.  ``meta`` carries search bookkeeping and is not compared.
    """

    field_degree: int
    values: Mapping
    v: int = 1
    meta: Mapping = dc_field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "values", dict(sorted(self.values.items())))

    @property
    def field(self) -> GF:
        return field(self.field_degree)

    def __getitem__(self, pair):
        return self.values[tuple(pair)]

    def get(self, pair, default=None):
        return self.values.get(tuple(pair), default)

    def as_var_assignment(self) -> dict:
        if self.v == 1:
            return {Var(a, b): x for (a, b), x in self.values.items()}
        out = {}
        for (a, b), blk in self.values.items():
            for k, row in enumerate(blk):
                for l, x in enumerate(row):
                    out[Var(a, b, k, l)] = x
        return out

    def covers(self, net: Network) -> bool:
        return set(self.values) == set(net.adjacent_pairs)

    def with_network(self, net: Network) -> "CodeAssignment":
        """Restrict/extend to exactly the adjacent pairs of ``net`` (missing -> 0)."""
        zero = 0 if self.v == 1 else tuple((0,) * self.v for _ in range(self.v))
        vals = {p: self.values.get(p, zero) for p in net.adjacent_pairs}
        return CodeAssignment(self.field_degree, vals, self.v, dict(self.meta))


def zero_code(net: Network, k: int = 1) -> CodeAssignment:
    return CodeAssignment(k, {p: 0 for p in net.adjacent_pairs})


def routing_code(net: Network, paths, k: int = 1) -> CodeAssignment:
    """Coefficient 1 on consecutive pairs of the given paths, 0 elsewhere."""
    vals = {p: 0 for p in net.adjacent_pairs}
    for path in paths:
        for a, b in zip(path, path[1:]):
            vals[(a, b)] = 1
    return CodeAssignment(k, vals, meta={"construction": "routing"})


# -- compiled problem ----------------------------------------------------------

def relevant_pairs(net: Network) -> list:
    """Adjacent pairs that can influence some session matrix entry."""
    fwd = reachable(net, net.s1 + net.s2)
    back = coreaching(net, net.t1 + net.t2)
    return [(a, b) for a, b in net.adjacent_pairs if a in fwd and b in back]


@dataclass(frozen=True)
class Problem:
    net: Network
    pairs: tuple
    prob: tuple

    @property
    def n_vars(self):
        return len(self.pairs)


def compile_problem(net: Network, pairs=None) -> Problem:
    pairs = tuple(relevant_pairs(net) if pairs is None else pairs)
    var_of = {p: i for i, p in enumerate(pairs)}
    pos = net.position
    in_ptr, in_src, in_var = [0], [], []
    for e in net.order:
        for d in net.in_edges(e):
            i = var_of.get((d, e))
            if i is not None:
                in_src.append(pos[d])
                in_var.append(i)
        in_ptr.append(len(in_src))
    sources = [pos[e] for e in net.s1 + net.s2]
    sinks = [pos[e] for e in net.t1 + net.t2]
    prob = (
        np.asarray(in_ptr, dtype=np.int64),
        np.asarray(in_src, dtype=np.int64),
        np.asarray(in_var, dtype=np.int64),
        np.asarray(sources, dtype=np.int64),
        len(net.s1),
        np.asarray(sinks, dtype=np.int64),
        len(net.t1),
    )
    return Problem(net, pairs, prob)


def field_params(fld: GF) -> tuple:
    exp, log = fld.tables()
    return (fld.k, fld.modulus, exp, log)


def session_values(net: Network, code: CodeAssignment, kernel=None) -> np.ndarray:
    """Evaluated (S1+S2) x (T1+T2) matrix of the code."""
    kernel = kernel or backend
    problem = compile_problem(net, net.adjacent_pairs)
    a = np.asarray([int(code.values.get(p, 0)) for p in problem.pairs], dtype=np.uint32)
    return kernel.eval_session(problem.prob, field_params(code.field), a)


def _check_dims(net: Network, R1, R2):
    if R1 is None:
        R1 = len(net.s1)
    if R2 is None:
        R2 = len(net.s2)
    if not (len(net.s1) == len(net.t1) == R1 and len(net.s2) == len(net.t2) == R2):
        raise DimensionMismatch(
            f"rate ({R1},{R2}) needs |S1|=|T1|={R1} and |S2|=|T2|={R2}; "
            f"got {len(net.s1)},{len(net.t1)},{len(net.s2)},{len(net.t2)}"
        )
    return R1, R2


@dataclass(frozen=True)
class ScalarCheck:
    ok: bool
    det_g11: int
    det_g22: int
    g21_zero: bool
    G: tuple

    def __bool__(self):
        return self.ok


def check_scalar_code(net: Network, code: CodeAssignment, R1=None, R2=None) -> ScalarCheck:
    R1, R2 = _check_dims(net, R1, R2)
    if code.v != 1:
        raise DimensionMismatch("scalar verification needs v = 1")
    fld = code.field
    G = session_values(net, code).tolist()
    g11 = [row[:R1] for row in G[:R1]]
    g21 = [row[:R1] for row in G[R1:]]
    g22 = [row[R1:] for row in G[R1:]]
    d11 = fld.det(g11) if R1 else 1
    d22 = fld.det(g22) if R2 else 1
    z = not any(x for row in g21 for x in row)
    return ScalarCheck(bool(d11 and d22 and z), d11, d22, z, tuple(map(tuple, G)))


def verify_scalar_code(net: Network, code: CodeAssignment, R1=None, R2=None) -> bool:
    """det G11 != 0, det G22 != 0 and G21 = 0 under the code."""
    return check_scalar_code(net, code, R1, R2).ok


# -- search -------------------------------------------------------------------

def _canonical_vectors(d: int, q: int) -> list:
    """Zero plus every nonzero vector whose first nonzero entry is 1."""
    out = [(0,) * d]
    for lead in range(d):
        for tail in np.ndindex(*([q] * (d - lead - 1))):
            out.append((0,) * lead + (1,) + tuple(int(t) for t in tail))
    return out


@dataclass(frozen=True)
class SearchSpace:
    group_ptr: np.ndarray
    group_vars: np.ndarray
    tab_ptr: np.ndarray
    radix: np.ndarray
    tables: np.ndarray
    size: int

    def decode(self, idx: int, n_vars: int) -> list:
        a = [0] * n_vars
        for g in range(len(self.radix)):
            idx, digit = divmod(idx, int(self.radix[g]))
            lo, hi = int(self.group_ptr[g]), int(self.group_ptr[g + 1])
            ln = hi - lo
            off = int(self.tab_ptr[g]) + digit * ln
            for j in range(ln):
                a[int(self.group_vars[lo + j])] = int(self.tables[off + j])
        return a


def search_space(problem: Problem, q: int, gauge: bool = True) -> SearchSpace:
    """Mixed-radix description of the assignments to scan.

    With ``gauge`` the coefficients into each edge are enumerated only up to
    a common nonzero scale (first nonzero entry fixed to 1).  Rescaling the
    symbol on an edge and inversely rescaling its outgoing coefficients
    leaves every path weight through the edge unchanged and multiplies rows
    or columns of the session matrix by units, so no valid code is lost.
    """
    groups: dict = {}
    for i, (a, b) in enumerate(problem.pairs):
        groups.setdefault(b, []).append(i)
    gp, gv, tp, rx, tb = [0], [], [], [], []
    for b in sorted(groups, key=lambda e: problem.net.position[e]):
        idxs = groups[b]
        if gauge:
            choices = _canonical_vectors(len(idxs), q)
            members = [idxs]
        else:
            choices = [(x,) for x in range(q)]
            members = [[i] for i in idxs]
        for mem in members:
            gv.extend(mem)
            gp.append(len(gv))
            tp.append(len(tb))
            rx.append(len(choices))
            for c in choices:
                tb.extend(c)
    if not rx:
        # one empty group with a single (empty) choice
        gp, tp, rx = [0, 0], [0], [1]
    return SearchSpace(
        np.asarray(gp, np.int64),
        np.asarray(gv, np.int64),
        np.asarray(tp, np.int64),
        np.asarray(rx, np.int64),
        np.asarray(tb if tb else [0], np.uint32),
        math.prod(rx),
    )


def _scan(args):
    prob, fparams, n_vars, space, start, stop, kernel_name = args
    from ..kernels import available_backends

    kernel = available_backends()[kernel_name]
    return kernel.search_product(
        prob, fparams, n_vars, space.group_ptr, space.group_vars, space.tab_ptr,
        space.radix, space.tables, start, stop,
    )


def _kernel_name(kernel):
    from ..kernels import _kernels_py

    return "python" if kernel is _kernels_py else "compiled"


def _to_code(net, problem, values, k, meta):
    full = {p: 0 for p in net.adjacent_pairs}
    for p, x in zip(problem.pairs, values):
        full[p] = int(x)
    return CodeAssignment(k, full, meta=meta)


def exhaustive_search(
    net: Network,
    k: int,
    gauge: bool = True,
    limit: int = EXHAUSTIVE_LIMIT,
    jobs: int = 1,
    kernel=None,
):
    """Complete search over GF(2^k); returns (code or None, space size)."""
    kernel = kernel or backend
    fld = field(k)
    problem = compile_problem(net)
    space = search_space(problem, fld.order, gauge)
    if space.size > limit:
        raise SearchSpaceTooLarge(
            f"{space.size} assignments over GF(2^{k}) exceeds the limit {limit}"
        )
    fparams = field_params(fld)
    name = _kernel_name(kernel)
    chunks = [(s, min(s + CHUNK, space.size)) for s in range(0, space.size, CHUNK)] or [(0, 1)]
    args = [(problem.prob, fparams, problem.n_vars, space, a, b, name) for a, b in chunks]
    found = -1
    if jobs > 1 and len(chunks) > 1:
        with cf.ProcessPoolExecutor(max_workers=jobs) as ex:
            futures = [ex.submit(_scan, x) for x in args]
            for fut in futures:
                r = fut.result()
                if r >= 0:
                    found = r
                    for other in futures:
                        other.cancel()
                    break
    else:
        for x in args:
            found = _scan(x)
            if found >= 0:
                break
    if found < 0:
        return None, space.size
    values = space.decode(found, problem.n_vars)
    meta = {"mode": "exhaustive", "index": found, "space": space.size, "gauge": gauge}
    return _to_code(net, problem, values, k, meta), space.size


def _entry_supports(problem: Problem):
    """For each interference entry (i, j): indices of variables it can depend on."""
    net = problem.net
    out = {}
    for i, s in enumerate(net.s2):
        fwd = reachable(net, (s,))
        for j, t in enumerate(net.t1):
            back = coreaching(net, (t,))
            out[(i, j)] = [
                n for n, (a, b) in enumerate(problem.pairs) if a in fwd and b in back
            ]
    return out


def _random_trials(args):
    prob_obj, k, seed, lo, hi, kernel_name = args
    from ..kernels import available_backends

    kernel = available_backends()[kernel_name]
    fld = field(k)
    fparams = field_params(fld)
    prob = prob_obj.prob
    nv = prob_obj.n_vars
    n_s1, n_t1 = len(prob_obj.net.s1), len(prob_obj.net.t1)
    supports = _entry_supports(prob_obj)
    for t in range(lo, hi):
        rng = np.random.default_rng([seed, t])
        a = rng.integers(0, fld.order, size=nv, dtype=np.uint64).astype(np.uint32)
        # zero-force each interference entry by solving for one coefficient;
        # entries are affine in any single coefficient
        for (i, j), sup in supports.items():
            if not sup:
                continue
            G = kernel.eval_session(prob, fparams, a)
            cur = int(G[n_s1 + i, j])
            if not cur:
                continue
            x = sup[int(rng.integers(0, len(sup)))]
            a[x] = 0
            A = int(kernel.eval_session(prob, fparams, a)[n_s1 + i, j])
            a[x] = 1
            B = int(kernel.eval_session(prob, fparams, a)[n_s1 + i, j]) ^ A
            a[x] = fld.div(A, B) if B else rng.integers(0, fld.order)
        if kernel.check_batch(prob, fparams, a.reshape(1, -1)) == 0:
            return t, a.tolist()
    return -1, None


def random_search(
    net: Network,
    k: int,
    trials: int = 2000,
    seed: int = 0,
    jobs: int = 1,
    kernel=None,
):
    """Randomised search; trial t draws from a generator seeded by (seed, t).

    The first successful trial index is returned regardless of ``jobs``.
    """
    kernel = kernel or backend
    problem = compile_problem(net)
    name = _kernel_name(kernel)
    if jobs > 1 and trials > 1:
        step = math.ceil(trials / jobs)
        args = [(problem, k, seed, lo, min(lo + step, trials), name) for lo in range(0, trials, step)]
        with cf.ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_random_trials, args))
        hits = [r for r in results if r[0] >= 0]
        t, values = min(hits) if hits else (-1, None)
    else:
        t, values = _random_trials((problem, k, seed, 0, trials, name))
    if t < 0:
        return None, trials
    meta = {"mode": "random", "trial": t, "trials_used": t + 1, "seed": seed}
    return _to_code(net, problem, values, k, meta), t + 1


def find_scalar_code(
    net: Network,
    R1=None,
    R2=None,
    k: int = 1,
    mode: str = "exhaustive",
    trials: int = 2000,
    seed: int = 0,
    jobs: int = 1,
    gauge: bool = True,
    limit: int = EXHAUSTIVE_LIMIT,
    kernel=None,
):
    """Search for a scalar code at rate (R1, R2) over GF(2^k).

    ``mode="exhaustive"`` is complete: None means no code exists over this
    field.  ``mode="random"`` records the number of trials in ``code.meta``.
    """
    _check_dims(net, R1, R2)
    if mode == "exhaustive":
        code, _ = exhaustive_search(net, k, gauge=gauge, limit=limit, jobs=jobs, kernel=kernel)
    elif mode == "random":
        code, _ = random_search(net, k, trials=trials, seed=seed, jobs=jobs, kernel=kernel)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if code is not None and not verify_scalar_code(net, code, R1, R2):
        raise AssertionError("search produced a code that does not verify")
    return code
