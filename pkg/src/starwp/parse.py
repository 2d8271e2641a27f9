"""Reader for problem files.

::

    # comment
    graph { vertices: u v w; edges: (u v) (v w) }
    vertex v { rank: 2; gens: x y }
    relator: u w x
    query wp: u w u^-1 w^-1
    query member(x y, y^2): x y^3
    query frei(v)

Vertices without a ``vertex`` block have rank 1 and a generator named after
the vertex.  Blocks may span lines; ``relator`` and ``query`` take the rest
of their line.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from . import graphs, groups
from .words import Word, WordParseError, parse_word

_IDENT = r"[A-Za-z][A-Za-z0-9_]*"


class ParseError(ValueError):
    def __init__(self, message, line, column):
        self.message, self.line, self.column = message, line, column
        super().__init__(f"line {line}, column {column}: {message}")


@dataclass
class Query:
    kind: str  # "wp", "member" or "frei"
    text: str
    line: int
    word: Optional[Word] = None
    subset: tuple = ()


@dataclass
class Problem:
    group: groups.GraphProduct
    relator: Optional[Word]
    queries: list = field(default_factory=list)


class _Source:
    def __init__(self, text):
        self.text = text
        self.starts = [0]
        for m in re.finditer("\n", text):
            self.starts.append(m.end())

    def where(self, pos):
        line = 0
        lo, hi = 0, len(self.starts) - 1
        while lo <= hi:
            mid = (lo + hi) // 2
            if self.starts[mid] <= pos:
                line, lo = mid, mid + 1
            else:
                hi = mid - 1
        return line + 1, pos - self.starts[line] + 1

    def error(self, msg, pos):
        return ParseError(msg, *self.where(pos))


def _strip_comments(text):
    return re.sub(r"#[^\n]*", lambda m: " " * len(m.group(0)), text)


def _word(src, text, pos) -> Word:
    try:
        return parse_word(text)
    except WordParseError as exc:
        col = (exc.column or 1) - 1
        msg = str(exc).split(" (column")[0]
        raise src.error(msg, pos + col) from None


_GRAPH = re.compile(r"graph\s*\{(?P<body>[^}]*)\}")
_VERTEX = re.compile(rf"vertex\s+(?P<name>{_IDENT})\s*\{{(?P<body>[^}}]*)\}}")
_LINE = re.compile(r"(?P<key>relator|query)\b(?P<rest>[^\n]*)")


def parse_problem(text: str) -> Problem:
    src = _Source(text)
    clean = _strip_comments(text)
    pos = 0
    graph = None
    vblocks: dict = {}
    relator, relator_line = None, 1
    queries: list = []
    while True:
        m = re.compile(r"\s*").match(clean, pos)
        pos = m.end()
        if pos >= len(clean):
            break
        if clean.startswith("graph", pos):
            m = _GRAPH.match(clean, pos)
            if not m:
                raise src.error("unterminated or malformed graph block", pos)
            if graph is not None:
                raise src.error("more than one graph block", pos)
            graph = _graph_body(src, m.group("body"), m.start("body"))
            pos = m.end()
        elif clean.startswith("vertex", pos):
            m = _VERTEX.match(clean, pos)
            if not m:
                raise src.error("malformed vertex block", pos)
            name = m.group("name")
            if name in vblocks:
                raise src.error(f"duplicate vertex block for {name!r}", pos)
            vblocks[name] = (_vertex_body(src, m.group("body"), m.start("body")), pos)
            pos = m.end()
        else:
            m = _LINE.match(clean, pos)
            if not m:
                tok = re.compile(r"\S+").match(clean, pos).group(0)
                raise src.error(f"unexpected token {tok!r}", pos)
            rest, rpos = m.group("rest"), m.start("rest")
            if m.group("key") == "relator":
                r = re.match(r"\s*:(.*)", rest)
                if not r:
                    raise src.error("expected ':' after 'relator'", rpos)
                if relator is not None:
                    raise src.error("more than one relator line", pos)
                relator = _word(src, r.group(1), rpos + r.start(1))
                relator_line = src.where(pos)[0]
            else:
                queries.append(_query(src, rest, rpos, src.where(pos)[0]))
            pos = m.end()
    if graph is None:
        raise ParseError("no graph block", 1, 1)
    vg = []
    for v in graph.vertices:
        if v in vblocks:
            vg.append((v, vblocks[v][0]))
        else:
            vg.append((v, groups.FreeAbelian((v,))))
    for name, (_, p) in vblocks.items():
        if name not in set(graph.vertices):
            raise src.error(f"vertex block for unknown vertex {name!r}", p)
    try:
        g = groups.GraphProduct(graph, tuple(vg))
    except (ValueError, graphs.GraphError) as exc:
        raise ParseError(str(exc), 1, 1) from None
    known = set(groups.all_gens(g))
    for w, line in ([(relator, relator_line)] if relator else []) + [(q.word, q.line) for q in queries if q.word]:
        for x, _ in w:
            if x not in known:
                raise ParseError(f"unknown generator {x!r}", line, 1)
    for q in queries:
        for h in q.subset if q.kind == "member" else ():
            for x, _ in h:
                if x not in known:
                    raise ParseError(f"unknown generator {x!r}", q.line, 1)
        if q.kind == "frei":
            for v in q.subset:
                if v not in set(graph.vertices):
                    raise ParseError(f"unknown vertex {v!r}", q.line, 1)
    return Problem(g, relator, queries)


def _graph_body(src, body, pos):
    verts, edges = None, []
    for part in _fields(body, pos):
        key, val, vpos = part
        if key == "vertices":
            verts = val.split()
            for v in verts:
                if not re.fullmatch(_IDENT, v):
                    raise src.error(f"bad vertex identifier {v!r}", vpos)
        elif key == "edges":
            rest = re.sub(rf"\(\s*{_IDENT}\s+{_IDENT}\s*\)", "", val)
            if rest.strip():
                raise src.error(f"malformed edge list near {rest.strip()!r}", vpos)
            edges = re.findall(rf"\(\s*({_IDENT})\s+({_IDENT})\s*\)", val)
        else:
            raise src.error(f"unknown graph field {key!r}", vpos)
    if verts is None:
        raise src.error("graph block without vertices", pos)
    try:
        return graphs.SimplicialGraph(verts, edges)
    except graphs.GraphError as exc:
        raise src.error(str(exc), pos) from None


def _vertex_body(src, body, pos):
    rank, gens = None, None
    for key, val, vpos in _fields(body, pos):
        if key == "rank":
            if not val.strip().isdigit() or int(val) < 1:
                raise src.error(f"rank must be a positive integer, got {val.strip()!r}", vpos)
            rank = int(val)
        elif key == "gens":
            gens = tuple(val.split())
            for x in gens:
                if not re.fullmatch(_IDENT, x):
                    raise src.error(f"bad generator name {x!r}", vpos)
        else:
            raise src.error(f"unknown vertex field {key!r}", vpos)
    if gens is None:
        raise src.error("vertex block without gens", pos)
    if rank is not None and rank != len(gens):
        raise src.error(f"rank {rank} does not match {len(gens)} generators", pos)
    return groups.FreeAbelian(gens)


def _fields(body, pos):
    offset = 0
    for chunk in body.split(";"):
        if chunk.strip():
            m = re.match(r"\s*(\w+)\s*:(.*)", chunk, re.S)
            if not m:
                yield ("", chunk, pos + offset)
            else:
                yield (m.group(1), m.group(2), pos + offset + m.start(2))
        offset += len(chunk) + 1


def _query(src, rest, pos, line) -> Query:
    m = re.match(r"\s*wp\s*:(.*)", rest)
    if m:
        return Query("wp", m.group(1).strip(), line, _word(src, m.group(1), pos + m.start(1)))
    m = re.match(r"\s*member\s*\(([^)]*)\)\s*:(.*)", rest)
    if m:
        subset, off = [], pos + m.start(1)
        for piece in m.group(1).split(","):
            if piece.strip():
                subset.append(_word(src, piece, off))
            off += len(piece) + 1
        word = _word(src, m.group(2), pos + m.start(2))
        return Query("member", f"member({m.group(1).strip()}): {m.group(2).strip()}", line, word,
                     tuple(subset))
    m = re.match(r"\s*frei\s*\(([^)]*)\)\s*$", rest)
    if m:
        verts = tuple(v for v in re.split(r"[\s,]+", m.group(1)) if v)
        return Query("frei", f"frei({' '.join(verts)})", line, None, verts)
    raise src.error("expected 'wp:', 'member(...):' or 'frei(...)' after 'query'", pos)
