"""graph6 and edge-list text formats."""

from __future__ import annotations

import sys
from pathlib import Path
from typing import Iterator, TextIO

from .graph import Graph, GraphInputError

MAX_GRAPH6_ORDER = 62


class Graph6ParseError(GraphInputError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class EdgeListParseError(GraphInputError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def to_graph6(g: Graph) -> str:
    if g.n > MAX_GRAPH6_ORDER:
        raise GraphInputError(f"graph6 encoding supports n <= {MAX_GRAPH6_ORDER}, got {g.n}")
    bitstream = [int(g.has_edge(i, j)) for j in range(1, g.n) for i in range(j)]
    bitstream += [0] * (-len(bitstream) % 6)
    out = [chr(g.n + 63)]
    for k in range(0, len(bitstream), 6):
        value = 0
        for b in bitstream[k:k + 6]:
            value = (value << 1) | b
        out.append(chr(value + 63))
    return "".join(out)


def parse_graph6(text: str) -> Graph:
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise Graph6ParseError("empty graph6 string", 0)
    for pos, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise Graph6ParseError(f"byte {ord(ch)} outside 63..126", pos)
    n = ord(s[0]) - 63
    if n > MAX_GRAPH6_ORDER:
        raise Graph6ParseError(f"multi-byte header (n > {MAX_GRAPH6_ORDER}) is not supported", 0)
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    body = s[1:]
    if len(body) < nbytes:
        raise Graph6ParseError(f"truncated: expected {nbytes} data bytes, got {len(body)}", len(s))
    if len(body) > nbytes:
        raise Graph6ParseError("trailing bytes after edge data", 1 + nbytes)
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            byte = ord(body[k // 6]) - 63
            if byte >> (5 - k % 6) & 1:
                edges.append((i, j))
            k += 1
    return Graph.from_edges(n, edges)


def parse_edge_list(text: str) -> Graph:
    lines = text.splitlines()
    header = None
    for lineno, raw in enumerate(lines, start=1):
        if raw.strip():
            header = lineno
            break
    if header is None:
        raise EdgeListParseError("missing vertex count", 1)
    try:
        n = int(lines[header - 1].strip())
    except ValueError:
        raise EdgeListParseError(f"expected vertex count, got {lines[header - 1]!r}", header) from None
    if n < 0:
        raise EdgeListParseError("negative vertex count", header)
    adj = [0] * n
    for lineno in range(header + 1, len(lines) + 1):
        raw = lines[lineno - 1].strip()
        if not raw or raw.startswith("#"):
            continue
        parts = raw.split()
        if len(parts) != 2:
            raise EdgeListParseError(f"expected 'u v', got {raw!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListParseError(f"non-integer label in {raw!r}", lineno) from None
        if not (0 <= u < n and 0 <= v < n):
            raise EdgeListParseError(f"label out of range 0..{n - 1}", lineno)
        if u == v:
            raise EdgeListParseError(f"self-loop at {u}", lineno)
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    return Graph(n, tuple(adj))


def to_edge_list(g: Graph) -> str:
    return "\n".join([str(g.n)] + [f"{u} {v}" for u, v in g.edges()]) + "\n"


def iter_graph6(stream: TextIO) -> Iterator[Graph]:
    for line in stream:
        if line.strip():
            yield parse_graph6(line)


def read_graph6_file(path: str | Path) -> list[Graph]:
    if str(path) == "-":
        return list(iter_graph6(sys.stdin))
    with open(path) as fh:
        return list(iter_graph6(fh))


def write_graph6_file(graphs, path: str | Path) -> None:
    with open(path, "w") as fh:
        for g in graphs:
            fh.write(to_graph6(g) + "\n")
