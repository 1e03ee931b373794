"""Graphviz DOT export."""

from __future__ import annotations

from .codelab.embedding import MUnicastNetwork
from .graph import Network

SOURCE_COLOR = "green"
DEST_COLOR = "red"
SHADE = "lightgray"


def _q(s: str) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(net) -> str:
    """Edges carry their id as ``id`` and ``label``.

    Source edges are green, destination edges red.  For two-unicast-Z
    networks the head of each session-2 destination edge (the receiver that
    knows message 1) is shaded.
    """
    if isinstance(net, MUnicastNetwork):
        g = net.graph
        roles = {}
        for i, (S, T) in enumerate(net.sessions, start=1):
            roles.update({e: ("s", i) for e in S})
            roles.update({e: ("t", i) for e in T})
        shaded = set()
    else:
        g = net
        roles = {}
        for key, ids in net.sessions.items():
            roles.update({e: (key[0], int(key[1])) for e in ids})
        shaded = {g.edge[e].head for e in net.t2}
    name = getattr(net, "name", "") or "network"
    lines = [f"digraph {_q(name)} {{", "  rankdir=LR;"]
    for v in g.vertices:
        attrs = ' [style=filled, fillcolor="%s"]' % SHADE if v in shaded else ""
        lines.append(f"  {_q(v)}{attrs};")
    for e in g.edges:
        attrs = [f"id={_q(e.id)}"]
        role = roles.get(e.id)
        if role:
            kind, i = role
            color = SOURCE_COLOR if kind == "s" else DEST_COLOR
            attrs.append(f"label={_q(f'{e.id} ({kind}{i})')}")
            attrs.append(f"color={color}")
            attrs.append(f"fontcolor={color}")
        else:
            attrs.append(f"label={_q(e.id)}")
        lines.append(f"  {_q(e.tail)} -> {_q(e.head)} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
