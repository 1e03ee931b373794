"""netcode command line."""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import dot, netio
from .codelab import (
    MUnicastNetwork,
    build_z_from_m_unicast,
    check_scalar_code,
    check_vector_code,
    linear_table_code,
    verify_zero_error,
)
from .decomposition import decompose, gns_pair, left_side_network, right_side_network
from .errors import NetcodeError, ParseError
from .feasibility import Achievable, MissingPath, classify_interference, decide_rate11
from .graph import gns_cuts_of_size, min_edge_cut, min_gns_cut
from .kernels import BACKEND_NAME

EXIT_OK, EXIT_NO, EXIT_ERROR = 0, 1, 2


def _edges(ids) -> str:
    return "{" + ", ".join(sorted(ids)) + "}"


def _out(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- commands -----------------------------------------------------------------------

def cmd_analyze(args) -> int:
    net = netio.load_network(args.file)
    if isinstance(net, MUnicastNetwork):
        g = net.graph
        print(f"network: {net.name or args.file}")
        print(f"edges: {len(g.edges)}  vertices: {len(g.vertices)}  sessions: {net.m}")
        for i, (S, T) in enumerate(net.sessions, start=1):
            cut = min_edge_cut(g, S, T)
            print(f"min cut s{i}->t{i}: {len(cut)} {_edges(cut.edges)}")
        return EXIT_OK
    print(f"network: {net.name or args.file}")
    print(f"edges: {len(net.edges)}  vertices: {len(net.vertices)}")
    for label, S, T in (("s1->t1", net.s1, net.t1), ("s2->t2", net.s2, net.t2), ("s2->t1", net.s2, net.t1)):
        if S and T:
            cut = min_edge_cut(net, S, T)
            print(f"min cut {label}: {len(cut)} {_edges(cut.edges)}")
    cut = min_gns_cut(net, args.max_gns)
    if cut is None:
        print(f"min GNS cut: > {args.max_gns}")
    else:
        print(f"min GNS cut: {len(cut)} {_edges(cut.edges)}")
    pairs = gns_cuts_of_size(net, 2)
    if not pairs:
        print("size-2 GNS cuts: none")
    for c in pairs:
        a, b = sorted(c.edges, key=net.position.__getitem__)
        k = classify_interference(net, gns_pair(net, a, b))
        print(f"GNS cut ({a}, {b}) classes: ({k.via_e1_not_e2},{k.via_e2_not_e1},{k.via_both})")
    return EXIT_OK


def cmd_feasible11(args) -> int:
    net = netio.load_network(args.file)
    print(f"seed: {args.seed}")
    verdict = decide_rate11(net, seed=args.seed, max_field_degree=args.max_field_degree, jobs=args.jobs)
    if isinstance(verdict, Achievable):
        print(f"Achievable (step {verdict.step}) over GF(2^{verdict.field_degree})")
        nz = {p: x for p, x in verdict.code.values.items() if x}
        for (a, b), x in nz.items():
            print(f"  beta[{a}->{b}] = {x:x}")
        if args.out:
            _out(netio.dump_code(verdict.code), args.out)
            print(f"code written to {args.out}")
        return EXIT_OK
    w = verdict.witness
    if isinstance(w, MissingPath):
        print(f"Infeasible (step {verdict.step}): no s{w.session}->t{w.session} path")
    else:
        print(f"Infeasible (step {verdict.step}): GNS cut of size {len(w)} {_edges(w.edges)}")
    return EXIT_NO


def cmd_decompose(args) -> int:
    net = netio.load_network(args.file)
    print(f"seed: {args.seed}")
    a, b = [x.strip() for x in args.cut.split(",")]
    pair = gns_pair(net, a, b)
    d = decompose(net, pair, seed=args.seed)
    print(f"cut: ({pair.e1}, {pair.e2})  method: {d.method}")
    for label, m in (("M", d.M), ("M1", d.M1), ("Lambda", d.Lambda), ("M2", d.M2)):
        if m is not None:
            print(f"{label}:")
            print(m.render())
    for key, ok in d.checks.items():
        print(f"check {key}: {'ok' if ok else 'FAILED'}")
    if d.method != "symbolic":
        print(f"error bound: {d.error_bound:.3g}")
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        for name, sub in (("left", left_side_network(net, pair)), ("right", right_side_network(net, pair))):
            path = os.path.join(args.out_dir, f"{name}.json")
            _out(netio.dump_network(sub), path)
            print(f"{name} side network written to {path}")
    return EXIT_OK if all(d.checks.values()) else EXIT_NO


def cmd_construct_z(args) -> int:
    B = netio.load_network(args.file)
    if not isinstance(B, MUnicastNetwork):
        raise ParseError("construct-z needs an m-unicast file (a list of sessions)")
    _out(netio.dump_network(build_z_from_m_unicast(B)), args.out)
    return EXIT_OK


def _rates(args, code_text, net):
    if args.rates:
        r = [Fraction(x) for x in args.rates.split(",")]
        return r[0], r[1]
    import json

    doc = json.loads(code_text)
    if "rates" in doc:
        r = [Fraction(str(x)) for x in doc["rates"]]
        return r[0], r[1]
    return Fraction(len(net.s1)), Fraction(len(net.s2))


def cmd_verify_code(args) -> int:
    net = netio.load_network(args.file)
    with open(args.code, encoding="utf-8") as fh:
        text = fh.read()
    if isinstance(net, MUnicastNetwork):
        code = netio.parse_code(text, net.graph)
        rep = verify_zero_error(linear_table_code(net, code))
        print(f"zero-error over {rep.checked} message tuples: {'valid' if rep.ok else 'INVALID'}")
        return EXIT_OK if rep.ok else EXIT_NO
    code = netio.parse_code(text, net)
    R1, R2 = _rates(args, text, net)
    if code.v == 1 and R1.denominator == R2.denominator == 1:
        chk = check_scalar_code(net, code, int(R1), int(R2))
        g11, g22, z = chk.det_g11, chk.det_g22, chk.g21_zero
    else:
        chk = check_vector_code(net, code, R1, R2)
        g11, g22, z = chk.det_g11, chk.det_g22, chk.g21_zero
    print(f"rate: ({R1}, {R2})  field: GF(2^{code.field_degree})  block: {code.v}")
    print(f"det G11 = {g11:x}  det G22 = {g22:x}  G21 zero: {'yes' if z else 'no'}")
    print("valid" if chk.ok else "INVALID")
    return EXIT_OK if chk.ok else EXIT_NO


def cmd_export_dot(args) -> int:
    _out(dot.to_dot(netio.load_network(args.file)), args.out)
    return EXIT_OK


# -- entry point ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="netcode", description="Linear network coding for two-unicast-Z networks.")
    p.add_argument("--version", action="store_true", help="print version and kernel backend")
    sub = p.add_subparsers(dest="command")

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("file")
        sp.set_defaults(fn=fn)
        return sp

    sp = add("analyze", cmd_analyze, "cuts and interference classes")
    sp.add_argument("--max-gns", type=int, default=4, help="largest GNS cut size searched")

    sp = add("feasible11", cmd_feasible11, "decide rate (1,1)")
    sp.add_argument("--max-field-degree", type=int, default=16)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("-o", "--out", help="write the code JSON here")

    sp = add("decompose", cmd_decompose, "factor M through a GNS pair")
    sp.add_argument("--cut", required=True, help="e1,e2")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out-dir", help="write left/right side networks here")

    sp = add("construct-z", cmd_construct_z, "two-unicast-Z network from an m-unicast one")
    sp.add_argument("-o", "--out")

    sp = add("verify-code", cmd_verify_code, "check a code file")
    sp.add_argument("code")
    sp.add_argument("--rates", help="R1,R2 (fractions allowed)")

    sp = add("export-dot", cmd_export_dot, "Graphviz output")
    sp.add_argument("-o", "--out")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.version:
        from importlib.metadata import version

        print(f"netcode {version('artifact')} ({BACKEND_NAME} kernels)")
        return EXIT_OK
    if not getattr(args, "fn", None):
        parser.print_help()
        return EXIT_ERROR
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"error: {args.file}: {exc}", file=sys.stderr)
    except (NetcodeError, KeyError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
