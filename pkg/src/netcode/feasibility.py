"""Deciding rate (1, 1) for two-unicast-Z networks with single-edge sessions.

The decision is constructive: an achievable verdict carries a scalar linear
code that has been re-verified, an infeasible one carries a checkable
witness (a GNS cut with at most one edge, or a missing session path).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Union

from .codelab.scalar import (
    CodeAssignment,
    exhaustive_search,
    random_search,
    routing_code,
    verify_scalar_code,
)
from .decomposition import GnsPair, _check_pair, incoming_group
from .errors import (
    CodeSearchFailed,
    InternalContradiction,
    PreconditionViolated,
    SearchSpaceTooLarge,
)
from .graph import (
    EdgeCut,
    Network,
    count_paths,
    criticalize,
    enumerate_paths,
    find_path,
    gns_cuts_of_size,
    has_path,
    is_gns_cut,
    min_gns_cut,
)
from .poly import is_homogeneous
from .transfer import path_sum

RANDOM_TRIALS = 400
ORACLE_TRIALS = 4000
PREFIX_CAP = 10_000


# -- verdicts -----------------------------------------------------------------------

@dataclass(frozen=True)
class MissingPath:
    session: int

    def check(self, net: Network) -> bool:
        S, T = (net.s1, net.t1) if self.session == 1 else (net.s2, net.t2)
        return not has_path(net, S, T)


@dataclass(frozen=True)
class Achievable:
    code: CodeAssignment
    field_degree: int
    step: str = ""

    achievable = True


@dataclass(frozen=True)
class Infeasible:
    witness: Union[EdgeCut, MissingPath]
    step: str = ""

    achievable = False

    def check(self, net: Network) -> bool:
        if isinstance(self.witness, MissingPath):
            return self.witness.check(net)
        return len(self.witness.edges) <= 1 and is_gns_cut(net, self.witness.edges)


FeasibilityVerdict = Union[Achievable, Infeasible]


# -- path classes ---------------------------------------------------------------

@dataclass(frozen=True)
class PathClassCount:
    via_e1_not_e2: int
    via_e2_not_e1: int
    via_both: int

    @property
    def total(self) -> int:
        return self.via_e1_not_e2 + self.via_e2_not_e1 + self.via_both

    @property
    def nonempty(self) -> int:
        return sum(1 for c in (self.via_e1_not_e2, self.via_e2_not_e1, self.via_both) if c)


def classify_interference(net: Network, pair: GnsPair) -> PathClassCount:
    """Count s2->t1 paths by which cut edges they use.

    Counting is exact (dynamic programming over the DAG), so no path cap
    applies.  Every interference path meets the cut, hence the three counts
    add up to the total number of s2->t1 paths.
    """
    pair = _check_pair(net, pair)
    e1, e2 = pair.e1, pair.e2
    S, T = net.s2, net.t1
    only1 = count_paths(net, S, T, via=(e1,), avoid=(e2,))
    only2 = count_paths(net, S, T, via=(e2,), avoid=(e1,))
    total = count_paths(net, S, T)
    both = total - only1 - only2 - count_paths(net, S, T, avoid=(e1, e2))
    return PathClassCount(only1, only2, both)


def homogeneity_witness(net: Network, pair: GnsPair):
    """Variable group in which the s2->t1 polynomial fails to be homogeneous.

    Fires when, for e_i in the pair, some interference path uses e_i and
    another avoids it; the group is the set of coefficients feeding e_i.
    """
    pair = _check_pair(net, pair)
    S, T = net.s2, net.t1
    for e in pair:
        if count_paths(net, S, T, via=(e,)) and count_paths(net, S, T, avoid=(e,)):
            group = incoming_group(net, e)
            poly = path_sum(net, S[0], T[0])
            if is_homogeneous(poly, group):
                raise InternalContradiction(
                    f"s2->t1 polynomial is homogeneous in the group feeding {e!r}"
                )
            return group
    return None


# -- the decision procedure ---------------------------------------------------------

def _single_sessions(net: Network):
    if not isinstance(net, Network):
        raise PreconditionViolated("decide_rate11 needs a two-unicast-Z network")
    if not all(len(x) == 1 for x in (net.s1, net.t1, net.s2, net.t2)):
        raise PreconditionViolated("decide_rate11 needs one source and one destination edge per session")


def _checked(net: Network, code: CodeAssignment, step: str) -> Achievable:
    code = code.with_network(net)
    if not verify_scalar_code(net, code, 1, 1):
        raise InternalContradiction(f"code built at step {step} does not verify")
    return Achievable(code, code.field_degree, step)


def _route(net: Network, p1, p2, step: str) -> Achievable:
    if set(p1) & set(p2):
        raise InternalContradiction(f"routes {p1} and {p2} share an edge")
    return _checked(net, routing_code(net, (p1, p2)), step)


def _search(crit: Network, max_field_degree: int, seed: int, jobs: int):
    """Smallest field first: exhaustive GF(2), GF(4), then random GF(2^k)."""
    for k in (1, 2):
        if k > max_field_degree:
            break
        try:
            code, _ = exhaustive_search(crit, k, jobs=jobs)
        except SearchSpaceTooLarge:
            continue
        if code is not None:
            return code
    for k in range(3, max_field_degree + 1):
        code, _ = random_search(crit, k, trials=RANDOM_TRIALS, seed=seed, jobs=jobs)
        if code is not None:
            return code
    return None


def _join_leave(net: Network):
    """Routes around the unique interference path P.

    ``j`` is the last position at which an s1 path can join P coming from
    outside P, ``l`` the first position at which an s2 path can leave P
    for t2.  With j <= l every s1->t1 and s2->t2 path would share P[j..l]
    and a single edge of it would be a GNS cut.
    """
    (P,) = enumerate_paths(net, net.s2, net.t1, cap=2)
    on_p = set(P)
    s1, t2 = net.s1[0], net.t2[0]

    def joins(i):
        if P[i] == s1:
            return True
        return has_path(net, (s1,), (P[i],), removed=on_p - {P[i]})

    def leaves(i):
        if P[i] == t2:
            return True
        return has_path(net, (P[i],), (t2,), removed=on_p - {P[i]})

    js = [i for i in range(len(P)) if joins(i)]
    ls = [i for i in range(len(P)) if leaves(i)]
    j = max(js) if js else None
    l = min(ls) if ls else None
    return P, j, l


def _disjoint_detours(net: Network, P, j, l):
    """Prefix s1 -> P[j] and suffix P[l] -> t2, both off P and edge-disjoint."""
    s1, t2 = net.s1[0], net.t2[0]
    on_p = set(P)
    if P[j] == s1:
        prefixes = [(s1,)]
    else:
        prefixes = enumerate_paths(net, (s1,), (P[j],), avoid=on_p - {P[j]}, cap=PREFIX_CAP)
    for pre in prefixes:
        if P[l] == t2:
            return pre, (t2,)
        blocked = (on_p | set(pre)) - {P[l]}
        suf = find_path(net, (P[l],), (t2,), avoid=blocked)
        if suf is not None:
            return pre, suf
    return None


def decide_rate11(net: Network, seed: int = 0, max_field_degree: int = 16, jobs: int = 1) -> FeasibilityVerdict:
    """Constructive rate-(1,1) decision with scalar linear codes.

    Steps: (0) session paths exist; (1) no GNS cut of size <= 1; (2) no
    interference means any pair of session paths is a routing solution;
    (3) reduce to a critical network; (4) a size-2 cut split by
    interference into two classes admits a code, found by search; (5)
    otherwise one interference path remains and the join/leave positions
    along it give two edge-disjoint routes.
    """
    _single_sessions(net)
    for i, (S, T) in enumerate(((net.s1, net.t1), (net.s2, net.t2)), start=1):
        if not has_path(net, S, T):
            return Infeasible(MissingPath(i), "0")
    cut = min_gns_cut(net, 1)
    if cut is not None:
        return Infeasible(cut, "1")

    if not has_path(net, net.s2, net.t1):
        p1 = find_path(net, net.s1, net.t1)
        p2 = find_path(net, net.s2, net.t2)
        return _route(net, p1, p2, "2")

    crit = criticalize(net)
    if not has_path(crit, crit.s2, crit.t1):
        p1 = find_path(crit, crit.s1, crit.t1)
        p2 = find_path(crit, crit.s2, crit.t2)
        return _route(net, p1, p2, "3")

    for c in gns_cuts_of_size(crit, 2):
        a, b = sorted(c.edges, key=crit.position.__getitem__)
        if classify_interference(crit, GnsPair(a, b)).nonempty >= 2:
            code = _search(crit, max_field_degree, seed, jobs)
            if code is None:
                raise CodeSearchFailed(
                    f"no code found up to GF(2^{max_field_degree}) although cut {{{a}, {b}}} "
                    "splits the interference"
                )
            return _checked(net, code, "4")

    n = count_paths(crit, crit.s2, crit.t1)
    if n != 1:
        raise InternalContradiction(f"critical network with one interference class has {n} s2->t1 paths")
    P, j, l = _join_leave(crit)
    if j is None or l is None:
        raise InternalContradiction("interference path is not joined by s1 or not left towards t2")
    if j <= l:
        raise InternalContradiction(
            f"last join at {P[j]!r} precedes first leave at {P[l]!r} despite minimum GNS cut 2"
        )
    det = _disjoint_detours(crit, P, j, l)
    if det is None:
        raise InternalContradiction("no edge-disjoint detours around the interference path")
    pre, suf = det
    p1 = tuple(pre) + tuple(P[j + 1:])
    p2 = tuple(P[:l]) + tuple(suf)
    return _route(net, p1, p2, "5")


# -- structural facts used by the argument ------------------------------------

def single_path_structure(net: Network) -> dict:
    """On a network with exactly one s2->t1 path P: does any s1->t1 path
    leave P after meeting it, or any s2->t2 path return to P after leaving?

    Returns ``{"path": P, "s1_rediverges": bool, "s2_rejoins": bool}``.
    """
    paths = enumerate_paths(net, net.s2, net.t1, cap=2)
    if len(paths) != 1:
        raise PreconditionViolated(f"expected one s2->t1 path, found {len(paths)}")
    (P,) = paths
    on_p = set(P)
    pos = {e: i for i, e in enumerate(P)}
    redo = False
    for p in enumerate_paths(net, net.s1, net.t1):
        hit = [k for k, e in enumerate(p) if e in on_p]
        if hit and any(e not in on_p for e in p[hit[0]:]):
            redo = True
            break
    rejoin = False
    for p in enumerate_paths(net, net.s2, net.t2):
        k = 0
        while k < len(p) and p[k] in on_p and pos[p[k]] == k:
            k += 1
        if any(e in on_p for e in p[k:]):
            rejoin = True
            break
    return {"path": P, "s1_rediverges": redo, "s2_rejoins": rejoin}


def one_class_everywhere(net: Network) -> bool:
    """All interference paths fall in a single class for every size-2 GNS cut."""
    for c in gns_cuts_of_size(net, 2):
        a, b = sorted(c.edges, key=net.position.__getitem__)
        if classify_interference(net, GnsPair(a, b)).nonempty >= 2:
            return False
    return True


# -- brute-force oracle ---------------------------------------------------------

def nullstellensatz_oracle(net: Network, pair: GnsPair | None = None, k: int = 4,
                           limit: int | None = None, seed: int = 0) -> bool:
    """Is some scalar assignment over GF(2^k) decodable at rate (1,1)?

    By the Nullstellensatz this is the negation of ``G21 * P = (G11 G22)^L``
    for some P and L; the search decides it directly.  Complete when the
    (gauge-reduced) space fits ``limit``; otherwise random trials, and a
    failed random search raises SearchSpaceTooLarge since it proves nothing.
    """
    _single_sessions(net)
    if pair is not None:
        _check_pair(net, pair)
    kw = {} if limit is None else {"limit": limit}
    try:
        code, _ = exhaustive_search(net, k, **kw)
        return code is not None
    except SearchSpaceTooLarge:
        pass
    code, _ = random_search(net, k, trials=ORACLE_TRIALS, seed=seed)
    if code is not None:
        return True
    raise SearchSpaceTooLarge(f"space over GF(2^{k}) too large and random search found nothing")
