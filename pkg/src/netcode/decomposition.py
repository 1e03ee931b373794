"""Factorisations of the network transfer matrix through an edge set.

For a GNS cut {e1, e2} the 2x2 source/destination matrix splits as
``M = M1 @ Lambda @ M2``, where ``M1`` collects source->cut sums, ``Lambda``
the e1->e2 coupling and ``M2`` cut->destination sums.  The same shape holds
for any topologically sorted edge list U (``general_decompose``).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .errors import DecompositionMismatch, NotAGnsCut, PreconditionViolated, SymbolicOverflow
from .field import FieldElem, field
from .graph import Network, coreaching, is_gns_cut, reachable
from .poly import Poly, Var
from .transfer import (
    ONE,
    TransferMatrix,
    coupling_matrix,
    destinations_excluded_matrix,
    path_sum,
    propagate,
    restricted_network_transfer_matrix,
    sources_excluded_matrix,
)

RANDOM_TRIALS = 8
RANDOM_FIELD = 32


@dataclass(frozen=True)
class GnsPair:
    e1: str
    e2: str

    def __iter__(self):
        return iter((self.e1, self.e2))


def gns_pair(net: Network, a: str, b: str) -> GnsPair:
    """Validate {a, b} as a GNS cut and order it topologically."""
    net.check_edges((a, b))
    if a == b:
        raise NotAGnsCut("a GNS pair needs two distinct edges")
    if not is_gns_cut(net, (a, b)):
        raise NotAGnsCut(f"{{{a}, {b}}} is not a GNS cut")
    if net.position[a] > net.position[b]:
        a, b = b, a
    return GnsPair(a, b)


def _check_pair(net: Network, pair: GnsPair) -> GnsPair:
    p = gns_pair(net, pair.e1, pair.e2)
    if p != pair:
        raise NotAGnsCut(f"pair ({pair.e1}, {pair.e2}) is not in topological order")
    return p


def _drop_conflicts(sessions: dict) -> dict:
    seen = set()
    out = {}
    for key in ("s1", "s2", "t1", "t2"):
        kept = tuple(x for x in sessions[key] if x not in seen)
        seen.update(kept)
        out[key] = kept
    return out


def left_side_network(net: Network, pair: GnsPair) -> Network:
    """Edges on some source -> cut path; the cut edges act as its destinations."""
    pair = _check_pair(net, pair)
    cut = (pair.e1, pair.e2)
    kept = reachable(net, net.s1 + net.s2) & coreaching(net, cut)
    sess = _drop_conflicts(
        {"s1": net.s1, "s2": net.s2, "t1": (pair.e1,), "t2": (pair.e2,)}
    )
    return net.restricted_to(kept, **sess)


def right_side_network(net: Network, pair: GnsPair) -> Network:
    """Edges on some cut -> destination path; the cut edges act as its sources."""
    pair = _check_pair(net, pair)
    cut = (pair.e1, pair.e2)
    kept = reachable(net, cut) & coreaching(net, net.t1 + net.t2)
    sess = _drop_conflicts(
        {"s1": (pair.e1,), "s2": (pair.e2,), "t1": net.t1, "t2": net.t2}
    )
    return net.restricted_to(kept, **sess)


# -- evaluated path sums, used when symbolic expansion overflows ----------------

class _Evaluator:
    def __init__(self, net: Network, values: dict, fld):
        self.net = net
        self.fld = fld
        self.one = FieldElem(1, fld)
        self.values = values
        self._cache = {}

    def _coeff(self, d, e):
        return FieldElem(self.values[Var(d, e)], self.fld)

    def ps(self, s, t, avoid=(), via=()):
        avoid = frozenset(avoid)
        total = self._sums(s, avoid).get(t, 0)
        if via:
            total = int(total) ^ int(self._sums(s, avoid | frozenset(via)).get(t, 0))
        return int(total)

    def _sums(self, s, avoid):
        key = (s, avoid)
        if key not in self._cache:
            self._cache[key] = propagate(self.net, s, self._coeff, self.one, avoid)
        return self._cache[key]


@dataclass(frozen=True)
class Decomposition:
    M: TransferMatrix | None
    M1: TransferMatrix | None
    Lambda: TransferMatrix | None
    M2: TransferMatrix | None
    left_net: Network
    right_net: Network
    pair: GnsPair
    method: str
    checks: dict = dc_field(default_factory=dict)
    error_bound: float = 0.0


def _symbolic_parts(net, pair):
    s1, t1, s2, t2 = net.s1[0], net.t1[0], net.s2[0], net.t2[0]
    e1, e2 = pair.e1, pair.e2
    cut = (e1, e2)
    M = TransferMatrix(
        (s1, s2),
        (t1, t2),
        (
            (path_sum(net, s1, t1), path_sum(net, s1, t2, via=cut)),
            (path_sum(net, s2, t1), path_sum(net, s2, t2)),
        ),
    )
    M1 = TransferMatrix(
        (s1, s2),
        (e1, e2),
        (
            (path_sum(net, s1, e1), path_sum(net, s1, e2, avoid=(e1,))),
            (path_sum(net, s2, e1), path_sum(net, s2, e2, avoid=(e1,))),
        ),
    )
    Lam = coupling_matrix(net, cut)
    M2 = TransferMatrix(
        (e1, e2),
        (t1, t2),
        (
            (path_sum(net, e1, t1, avoid=(e2,)), path_sum(net, e1, t2, avoid=(e2,))),
            (path_sum(net, e2, t1), path_sum(net, e2, t2)),
        ),
    )
    return M, M1, Lam, M2


def _numeric_parts(net, pair, ev):
    s1, t1, s2, t2 = net.s1[0], net.t1[0], net.s2[0], net.t2[0]
    e1, e2 = pair.e1, pair.e2
    M = [[ev.ps(s1, t1), ev.ps(s1, t2, via=(e1, e2))], [ev.ps(s2, t1), ev.ps(s2, t2)]]
    M1 = [[ev.ps(s1, e1), ev.ps(s1, e2, avoid=(e1,))], [ev.ps(s2, e1), ev.ps(s2, e2, avoid=(e1,))]]
    Lam = [[1, ev.ps(e1, e2)], [0, 1]]
    M2 = [[ev.ps(e1, t1, avoid=(e2,)), ev.ps(e1, t2, avoid=(e2,))], [ev.ps(e2, t1), ev.ps(e2, t2)]]
    return M, M1, Lam, M2


def _vars(*polys):
    out = set()
    for p in polys:
        out |= p.variables()
    return out


def _disjointness(net, pair, M1, M2):
    s1, t1, s2, t2 = net.s1[0], net.t1[0], net.s2[0], net.t2[0]
    e1, e2 = pair.e1, pair.e2
    vm1, vm2 = M1.variables(), M2.variables()
    into_e1 = _vars(M1.entry(s1, e1), M1.entry(s2, e1))
    out_e2 = _vars(M2.entry(e2, t1), M2.entry(e2, t2))
    checks = {
        "sources_to_e1_vs_M2": not (into_e1 & vm2),
        "M1_vs_e2_to_destinations": not (vm1 & out_e2),
    }
    if not net.reaches(e1, e2):
        checks["M1_vs_M2"] = not (vm1 & vm2)
    return checks


def decompose(net: Network, pair: GnsPair, seed: int = 0) -> Decomposition:
    """Build and check M = M1 Lambda M2 for a single-edge-session network."""
    if not net.is_single_session():
        raise PreconditionViolated("decompose needs single-edge sessions; use general_decompose")
    pair = _check_pair(net, pair)
    left, right = left_side_network(net, pair), right_side_network(net, pair)
    try:
        M, M1, Lam, M2 = _symbolic_parts(net, pair)
        product = M1 @ Lam @ M2
        checks = {
            "identity": product == M,
            "det_lambda_one": Lam.det() == ONE,
            "det_product": M.det() == M1.det() * M2.det(),
        }
        checks.update(_disjointness(net, pair, M1, M2))
        method, bound = "symbolic", 0.0
    except SymbolicOverflow:
        M = M1 = Lam = M2 = None
        checks, bound = _randomized_checks(net, pair, seed)
        method = "randomized"
    bad = [k for k, ok in checks.items() if not ok]
    if bad:
        raise DecompositionMismatch(f"decomposition checks failed: {bad}")
    return Decomposition(M, M1, Lam, M2, left, right, pair, method, checks, bound)


def _randomized_checks(net, pair, seed):
    fld = field(RANDOM_FIELD)
    rng = random.Random(seed)
    variables = [Var(e, f) for e, f in net.adjacent_pairs]
    ok_identity = ok_det = ok_lam = True
    for _ in range(RANDOM_TRIALS):
        ev = _Evaluator(net, {v: rng.randrange(fld.order) for v in variables}, fld)
        M, M1, Lam, M2 = _numeric_parts(net, pair, ev)
        prod = fld.matmul(fld.matmul(M1, Lam), M2)
        ok_identity &= prod == M
        ok_det &= fld.det(M) == fld.mul(fld.det(M1), fld.det(M2))
        ok_lam &= fld.det(Lam) == 1
    degree = 3 * len(net.edges)
    bound = min(1.0, degree / fld.order) ** RANDOM_TRIALS
    # variable supports follow from which edges the path families can touch
    checks = {"identity": ok_identity, "det_lambda_one": ok_lam, "det_product": ok_det}
    checks.update(_structural_disjointness(net, pair))
    return checks, bound


def _support(net, s, t, avoid=()):
    """Variables that can occur in the s->t path sum avoiding ``avoid``."""
    fwd = reachable(net, (s,), avoid)
    back = coreaching(net, (t,), avoid)
    live = fwd & back
    return {Var(a, b) for a, b in net.adjacent_pairs if a in live and b in live}


def _structural_disjointness(net, pair):
    s1, t1, s2, t2 = net.s1[0], net.t1[0], net.s2[0], net.t2[0]
    e1, e2 = pair.e1, pair.e2
    into_e1 = _support(net, s1, e1) | _support(net, s2, e1)
    m1 = into_e1 | _support(net, s1, e2, (e1,)) | _support(net, s2, e2, (e1,))
    out_e2 = _support(net, e2, t1) | _support(net, e2, t2)
    m2 = out_e2 | _support(net, e1, t1, (e2,)) | _support(net, e1, t2, (e2,))
    checks = {
        "sources_to_e1_vs_M2": not (into_e1 & m2),
        "M1_vs_e2_to_destinations": not (m1 & out_e2),
    }
    if not net.reaches(e1, e2):
        checks["M1_vs_M2"] = not (m1 & m2)
    return checks


@dataclass(frozen=True)
class GeneralDecomposition:
    MU: TransferMatrix
    M_prime: TransferMatrix
    Lambda: TransferMatrix
    M_double_prime: TransferMatrix
    method: str
    error_bound: float = 0.0


def general_decompose(net: Network, U: Sequence[str], seed: int = 0) -> GeneralDecomposition:
    """Check restricted(U) = dest-excluded(S, U) @ Lambda^U @ src-excluded(U, T)."""
    U = tuple(U)
    rows, cols = net.s1 + net.s2, net.t1 + net.t2
    Mp = destinations_excluded_matrix(net, rows, U)
    Lam = coupling_matrix(net, U)
    Mpp = sources_excluded_matrix(net, U, cols)
    MU = restricted_network_transfer_matrix(net, U)
    try:
        product = Mp @ Lam @ Mpp
        method, bound = "symbolic", 0.0
        ok = product == MU
    except SymbolicOverflow:
        method = "randomized"
        fld = field(RANDOM_FIELD)
        variables = sorted(MU.variables() | Mp.variables() | Mpp.variables() | Lam.variables())
        rng = random.Random(seed)
        ok = True
        for _ in range(RANDOM_TRIALS):
            point = {v: rng.randrange(fld.order) for v in variables}
            lhs = MU.evaluate(point, fld)
            rhs = fld.matmul(fld.matmul(Mp.evaluate(point, fld), Lam.evaluate(point, fld)), Mpp.evaluate(point, fld))
            ok &= lhs == rhs
        bound = min(1.0, 3 * len(net.edges) / fld.order) ** RANDOM_TRIALS
    if not ok:
        raise DecompositionMismatch(f"general decomposition fails for U={list(U)}")
    return GeneralDecomposition(MU, Mp, Lam, Mpp, method, bound)


@dataclass(frozen=True)
class InterferenceExpansion:
    total: Poly
    b1u1: Poly
    b2u2: Poly
    lambda12u2: Poly
    mu11: Poly
    mu21: Poly

    def reassembled(self) -> Poly:
        return self.b1u1 * (self.mu11 + self.lambda12u2 * self.mu21) + self.b2u2 * self.mu21


def interference_expansion(net: Network, pair: GnsPair) -> InterferenceExpansion:
    """Split the s2->t1 polynomial along the GNS pair."""
    pair = _check_pair(net, pair)
    s2, t1 = net.s2[0], net.t1[0]
    e1, e2 = pair.e1, pair.e2
    exp = InterferenceExpansion(
        total=path_sum(net, s2, t1),
        b1u1=path_sum(net, s2, e1),
        b2u2=path_sum(net, s2, e2, avoid=(e1,)),
        lambda12u2=path_sum(net, e1, e2),
        mu11=path_sum(net, e1, t1, avoid=(e2,)),
        mu21=path_sum(net, e2, t1),
    )
    if exp.reassembled() != exp.total:
        raise DecompositionMismatch("interference expansion does not reassemble")
    return exp


def incoming_group(net: Network, e: str) -> frozenset:
    """Coefficients on the pairs feeding edge e."""
    return frozenset(Var(d, e) for d in net.in_edges(e))
