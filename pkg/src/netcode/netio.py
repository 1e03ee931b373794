"""JSON formats for networks and code assignments."""

from __future__ import annotations

import json
from typing import Any

from .codelab.embedding import MUnicastNetwork
from .codelab.scalar import CodeAssignment
from .errors import NetcodeError, ParseError
from .graph import Network


def _locate(text: str, needle: str):
    i = text.find(needle)
    if i < 0:
        return None, None
    line = text.count("\n", 0, i) + 1
    col = i - (text.rfind("\n", 0, i) + 1) + 1
    return line, col


def _fail(text, msg, needle=None):
    line, col = _locate(text, needle) if needle else (None, None)
    raise ParseError(msg, line, col)


def _edge_list(text, doc):
    edges = doc.get("edges")
    if not isinstance(edges, list):
        _fail(text, '"edges" must be a list', '"edges"')
    out = []
    for i, e in enumerate(edges):
        if not isinstance(e, dict) or not {"id", "tail", "head"} <= set(e):
            _fail(text, f'edge #{i} needs "id", "tail" and "head"', json.dumps(e) if isinstance(e, dict) else None)
        out.append((str(e["id"]), str(e["tail"]), str(e["head"])))
    return out


def _expand(text, spec, edges, kind, key):
    """Session list: explicit ids, or {"vertex": v} meaning Out(v) / In(v)."""
    if isinstance(spec, list):
        return [str(x) for x in spec]
    if isinstance(spec, dict) and "vertex" in spec:
        v = str(spec["vertex"])
        if kind == "s":
            ids = sorted(e for e, t, h in edges if t == v)
        else:
            ids = sorted(e for e, t, h in edges if h == v)
        if not ids:
            _fail(text, f"{key}: vertex {v!r} has no {'outgoing' if kind == 's' else 'incoming'} edges", f'"{v}"')
        return ids
    _fail(text, f"{key}: expected a list of edge ids or {{\"vertex\": ...}}", f'"{key}"')


def parse_network(text: str):
    """Parse a network file into a Network or an MUnicastNetwork."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", 1, 1)
    edges = _edge_list(text, doc)
    sessions = doc.get("sessions")
    name = str(doc.get("name", ""))
    try:
        if isinstance(sessions, list):
            sess = []
            for i, s in enumerate(sessions):
                if not isinstance(s, dict) or "s" not in s or "t" not in s:
                    _fail(text, f'session #{i + 1} needs "s" and "t"', '"sessions"')
                sess.append(
                    (_expand(text, s["s"], edges, "s", f"s{i + 1}"), _expand(text, s["t"], edges, "t", f"t{i + 1}"))
                )
            return MUnicastNetwork(tuple(edges), tuple(sess), name=name)
        if not isinstance(sessions, dict):
            _fail(text, '"sessions" must be an object or a list', '"sessions"')
        lists = {}
        for key in ("s1", "t1", "s2", "t2"):
            if key not in sessions:
                _fail(text, f'"sessions" is missing "{key}"', '"sessions"')
            lists[key] = _expand(text, sessions[key], edges, key[0], key)
        return Network(tuple(edges), name=name, **{k: tuple(v) for k, v in lists.items()})
    except ParseError:
        raise
    except NetcodeError as exc:
        msg = str(exc)
        needle = None
        for token in msg.split("'")[1::2]:
            needle = f'"{token}"'
            break
        _fail(text, msg, needle)


def load_network(path):
    with open(path, encoding="utf-8") as fh:
        return parse_network(fh.read())


def network_to_dict(net) -> dict:
    doc: dict[str, Any] = {}
    if getattr(net, "name", ""):
        doc["name"] = net.name
    doc["edges"] = [{"id": e.id, "tail": e.tail, "head": e.head} for e in net.edges]
    if isinstance(net, MUnicastNetwork):
        doc["sessions"] = [{"s": list(S), "t": list(T)} for S, T in net.sessions]
    else:
        doc["sessions"] = {k: list(v) for k, v in net.sessions.items()}
    return doc


def dump_network(net) -> str:
    return json.dumps(network_to_dict(net), indent=2) + "\n"


# -- codes --------------------------------------------------------------------------

def code_to_dict(code: CodeAssignment) -> dict:
    doc: dict[str, Any] = {"field_degree": code.field_degree, "block_dim": code.v}
    for (a, b), x in sorted(code.values.items()):
        if code.v == 1:
            doc[f"beta:{a}:{b}"] = format(int(x), "x")
        else:
            doc[f"beta:{a}:{b}"] = [[format(int(y), "x") for y in row] for row in x]
    return doc


def dump_code(code: CodeAssignment) -> str:
    return json.dumps(code_to_dict(code), indent=2) + "\n"


def parse_code(text: str, net: Network | None = None) -> CodeAssignment:
    """Read a code file; with ``net`` given, keys are matched against its pairs."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise ParseError("code file must be an object", 1, 1)
    k = int(doc.get("field_degree", 1))
    v = int(doc.get("block_dim", 1))
    lookup = {f"{a}:{b}": (a, b) for a, b in net.adjacent_pairs} if net is not None else None
    vals = {}
    for key, raw in doc.items():
        if not key.startswith("beta:"):
            continue
        body = key[len("beta:"):]
        if lookup is not None:
            if body not in lookup:
                _fail(text, f"{key!r} is not an adjacent edge pair of the network", f'"{key}"')
            pair = lookup[body]
        else:
            parts = body.split(":")
            if len(parts) != 2:
                _fail(text, f"cannot split {key!r} into tail and head", f'"{key}"')
            pair = tuple(parts)
        try:
            if v == 1:
                vals[pair] = int(raw, 16)
            else:
                blk = tuple(tuple(int(y, 16) for y in row) for row in raw)
                if len(blk) != v or any(len(r) != v for r in blk):
                    raise ValueError("wrong block shape")
                vals[pair] = blk
        except (TypeError, ValueError) as exc:
            _fail(text, f"bad value for {key!r}: {exc}", f'"{key}"')
    order = 1 << k
    for x in vals.values():
        flat = [x] if v == 1 else [y for r in x for y in r]
        if any(not 0 <= y < order for y in flat):
            raise ParseError(f"coefficient out of range for GF(2^{k})")
    code = CodeAssignment(k, vals, v)
    if net is not None:
        code = code.with_network(net)
    return code


def load_code(path, net=None) -> CodeAssignment:
    with open(path, encoding="utf-8") as fh:
        return parse_code(fh.read(), net)
