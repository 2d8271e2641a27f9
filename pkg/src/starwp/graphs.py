"""Finite simplicial graphs and the combinatorial predicates the solver dispatches on."""
from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations, permutations


class GraphError(ValueError):
    pass


class UnsupportedGraph(GraphError):
    pass


@dataclass(frozen=True)
class SimplicialGraph:
    vertices: tuple
    edges: frozenset

    def __init__(self, vertices, edges=()):
        verts = tuple(vertices)
        if len(set(verts)) != len(verts):
            raise GraphError("duplicate vertex")
        es = set()
        vs = set(verts)
        for e in edges:
            a, b = tuple(e)
            if a == b:
                raise GraphError(f"loop at {a!r}")
            if a not in vs or b not in vs:
                raise GraphError(f"edge ({a} {b}) uses an unknown vertex")
            es.add(frozenset((a, b)))
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", frozenset(es))
        adj = {v: set() for v in verts}
        for e in es:
            a, b = tuple(e)
            adj[a].add(b)
            adj[b].add(a)
        object.__setattr__(self, "_adj", {v: frozenset(s) for v, s in adj.items()})

    def adjacent(self, u, v) -> bool:
        return v in self._adj[u]

    def neighbours(self, v) -> frozenset:
        return self._adj[v]

    def link(self, v) -> "SimplicialGraph":
        return full_subgraph(self, self._adj[v])

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        es = " ".join(f"({' '.join(sorted(e, key=self.vertices.index))})"
                      for e in sorted(self.edges, key=lambda e: sorted(self.vertices.index(x) for x in e)))
        return f"graph {{ vertices: {' '.join(self.vertices)}; edges: {es} }}"


def complete_graph(vertices):
    vs = tuple(vertices)
    return SimplicialGraph(vs, combinations(vs, 2))


def path_graph(vertices):
    vs = tuple(vertices)
    return SimplicialGraph(vs, zip(vs, vs[1:]))


def cycle_graph(vertices):
    vs = tuple(vertices)
    return SimplicialGraph(vs, list(zip(vs, vs[1:])) + [(vs[-1], vs[0])])


def full_subgraph(g: SimplicialGraph, u) -> SimplicialGraph:
    u = set(u)
    unknown = u - set(g.vertices)
    if unknown:
        raise GraphError(f"unknown vertex {sorted(unknown)[0]!r}")
    verts = [v for v in g.vertices if v in u]
    return SimplicialGraph(verts, [tuple(e) for e in g.edges if e <= u])


def _is_c4_or_l3(g: SimplicialGraph, quad) -> bool:
    edges = [e for e in combinations(quad, 2) if g.adjacent(*e)]
    if len(edges) == 4:
        return all(sum(v in e for e in edges) == 2 for v in quad)
    if len(edges) == 3:
        degs = sorted(sum(v in e for e in edges) for v in quad)
        return degs == [1, 1, 2, 2]
    return False


def is_starred(g: SimplicialGraph) -> bool:
    """No induced 4-cycle and no induced path with 4 vertices."""
    return not any(_is_c4_or_l3(g, quad) for quad in combinations(g.vertices, 4))


def is_chordal(g: SimplicialGraph) -> bool:
    """Recognition by repeated removal of simplicial vertices."""
    remaining = set(g.vertices)
    while remaining:
        for v in sorted(remaining, key=g.vertices.index):
            nb = g.neighbours(v) & remaining
            if all(g.adjacent(a, b) for a, b in combinations(nb, 2)):
                remaining.remove(v)
                break
        else:
            return False
    return True


def nodes(g: SimplicialGraph) -> tuple:
    n = len(g.vertices)
    return tuple(v for v in g.vertices if len(g.neighbours(v)) == n - 1)


def connected_components(g: SimplicialGraph) -> list:
    seen = set()
    comps = []
    for v in g.vertices:
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        while stack:
            x = stack.pop()
            for y in g.neighbours(x):
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def is_connected(g: SimplicialGraph) -> bool:
    return len(connected_components(g)) <= 1


def spans_sub_star(g: SimplicialGraph, u) -> bool:
    if not is_starred(g):
        raise UnsupportedGraph("sub-stars are defined for starred graphs only")
    u = frozenset(u)
    n = frozenset(nodes(g))
    if not n <= u:
        return False
    rest = full_subgraph(g, [v for v in g.vertices if v not in n])
    covered = set(n)
    for comp in connected_components(rest):
        if comp <= u:
            covered |= comp
        elif comp & u:
            return False
    return covered == u


def brute_force_starred(g: SimplicialGraph) -> bool:
    """Oracle: compare every 4-subset against C4 and L3 under all relabellings."""
    c4 = {frozenset(e) for e in [(0, 1), (1, 2), (2, 3), (3, 0)]}
    l3 = {frozenset(e) for e in [(0, 1), (1, 2), (2, 3)]}
    for quad in combinations(g.vertices, 4):
        for perm in permutations(quad):
            idx = {v: i for i, v in enumerate(perm)}
            induced = {frozenset((idx[a], idx[b])) for a, b in combinations(quad, 2) if g.adjacent(a, b)}
            if induced == c4 or induced == l3:
                return False
    return True


def brute_force_chordal(g: SimplicialGraph) -> bool:
    """Oracle: look for an induced cycle of length >= 4 over all vertex subsets."""
    vs = g.vertices
    for k in range(4, len(vs) + 1):
        for sub in combinations(vs, k):
            h = full_subgraph(g, sub)
            if len(h.edges) == k and all(len(h.neighbours(v)) == 2 for v in sub) and is_connected(h):
                return False
    return True


_BLOCK = re.compile(r"graph\s*\{\s*vertices\s*:(?P<v>[^;}]*);?\s*(?:edges\s*:(?P<e>[^}]*))?\}", re.S)
_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*$")


def parse_graph(text: str) -> SimplicialGraph:
    m = _BLOCK.search(text)
    if not m:
        raise GraphError("no graph block found")
    verts = m.group("v").split()
    for v in verts:
        if not _IDENT.match(v):
            raise GraphError(f"bad vertex identifier {v!r}")
    edges = []
    for a, b in re.findall(r"\(\s*([^\s()]+)\s+([^\s()]+)\s*\)", m.group("e") or ""):
        edges.append((a, b))
    return SimplicialGraph(verts, edges)
