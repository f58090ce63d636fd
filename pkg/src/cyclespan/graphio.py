"""Reading and writing graphs in the two wire formats.

Edge-list format::

    n m
    u v          (one line per edge, u < v, lines sorted)

JSON format::

    {"n": 10, "edges": [[0, 1], [0, 4], ...]}

Writers emit edges sorted with ``u < v``, so write-then-read is bit-exact
for both formats.
"""

from __future__ import annotations

import json
from pathlib import Path as FsPath
from typing import TextIO

from .errors import PreconditionError
from .graph import Graph


def parse_edge_list(text: str) -> Graph:
    tokens_by_line = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not tokens_by_line:
        raise PreconditionError("empty edge-list input")
    header = tokens_by_line[0]
    if len(header) != 2:
        raise PreconditionError("edge-list header must be 'n m'", header=" ".join(header))
    n, m = _int_token(header[0]), _int_token(header[1])
    body = tokens_by_line[1:]
    if len(body) != m:
        raise PreconditionError("edge count mismatch", declared=m, found=len(body))
    edges = []
    for toks in body:
        if len(toks) != 2:
            raise PreconditionError("edge line must be 'u v'", line=" ".join(toks))
        edges.append((_int_token(toks[0]), _int_token(toks[1])))
    return Graph(n, edges)


def _int_token(token: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise PreconditionError("expected an integer", token=token) from None


def format_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def parse_json_graph(text: str) -> Graph:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise PreconditionError("invalid JSON graph", reason=str(e)) from e
    if not isinstance(obj, dict) or "n" not in obj or "edges" not in obj:
        raise PreconditionError("JSON graph must have 'n' and 'edges' keys")
    try:
        return Graph(int(obj["n"]), [(int(u), int(v)) for u, v in obj["edges"]])
    except (TypeError, ValueError) as e:
        raise PreconditionError("malformed JSON graph", reason=str(e)) from e


def format_json_graph(g: Graph) -> str:
    return json.dumps({"n": g.n, "edges": [list(e) for e in g.edges]}, sort_keys=True) + "\n"


def sniff_format(text: str) -> str:
    """Guess the format of serialized graph text: ``json`` or ``edgelist``."""
    head = text.lstrip()[:1]
    return "json" if head == "{" else "edgelist"


def load_graph(path: str | FsPath, fmt: str = "auto") -> Graph:
    """Load a graph from a file; ``fmt`` is ``auto``, ``json`` or ``edgelist``."""
    text = FsPath(path).read_text()
    return loads_graph(text, fmt)


def loads_graph(text: str, fmt: str = "auto") -> Graph:
    if fmt == "auto":
        fmt = sniff_format(text)
    if fmt == "json":
        return parse_json_graph(text)
    if fmt == "edgelist":
        return parse_edge_list(text)
    raise PreconditionError("unknown graph format", fmt=fmt)


def save_graph(g: Graph, path: str | FsPath, fmt: str = "edgelist") -> None:
    FsPath(path).write_text(dumps_graph(g, fmt))


def dumps_graph(g: Graph, fmt: str = "edgelist") -> str:
    if fmt == "json":
        return format_json_graph(g)
    if fmt == "edgelist":
        return format_edge_list(g)
    raise PreconditionError("unknown graph format", fmt=fmt)


def write_json(obj: dict, stream: TextIO) -> None:
    """Dump a result object as canonical JSON (sorted keys) plus newline."""
    json.dump(obj, stream, sort_keys=True, indent=2)
    stream.write("\n")
