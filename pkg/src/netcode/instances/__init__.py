"""Bundled example networks."""

from __future__ import annotations

from importlib import resources

from ..netio import parse_code, parse_network

_VARIANT_SUFFIX = "__2"


def names() -> list:
    return sorted(
        p.name[:-5]
        for p in resources.files(__name__).iterdir()
        if p.name.endswith(".json") and not p.name.endswith("_code.json")
    )


def text(name: str) -> str:
    return resources.files(__name__).joinpath(f"{name}.json").read_text(encoding="utf-8")


def load(name: str):
    return parse_network(text(name))


def load_code(name: str, net=None):
    return parse_code(text(name), net)


def gap_instance():
    return load("gap_instance")


def gap_instance_vector_code():
    net = gap_instance()
    return net, load_code("gap_instance_vector_code", net)


def gap_instance_rates(R1: int, R2: int):
    """The gap instance with session sizes fitted to an integer rate pair.

    Session 1 is trimmed to its first edges (the rest become ordinary edges);
    session 2 is widened by parallel copies of its source and destination edges.
    """
    net = gap_instance()
    edges = list(net.edges)
    s2, t2 = list(net.s2), list(net.t2)
    base_s, base_t = net.edge[net.s2[0]], net.edge[net.t2[0]]
    for i in range(len(s2), R2):
        sid, tid = f"{base_s.id}{_VARIANT_SUFFIX}{i}", f"{base_t.id}{_VARIANT_SUFFIX}{i}"
        edges.append((sid, base_s.tail, base_s.head))
        edges.append((tid, base_t.tail, base_t.head))
        s2.append(sid)
        t2.append(tid)
    if R1 > len(net.s1):
        raise ValueError("session 1 has only %d edges" % len(net.s1))
    from ..graph import Network

    return Network(
        tuple(tuple(e) for e in edges),
        s1=net.s1[:R1], t1=net.t1[:R1], s2=tuple(s2[:R2]), t2=tuple(t2[:R2]),
        name=f"gap_instance[{R1},{R2}]",
    )
