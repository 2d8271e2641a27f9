"""Group expressions and the exact algorithms for the base class.

Graph products of free abelian groups carry every base-case computation: a
free abelian group is a one-vertex graph product, free and direct products of
graph products are graph products over the disjoint union and the join.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from . import graphs
from .graphs import SimplicialGraph
from .words import EMPTY, Word, free_reduce, inverse, mul


class UnsupportedGroup(TypeError):
    pass


class ForeignGenerator(KeyError):
    pass


@dataclass(frozen=True)
class FreeAbelian:
    gens: tuple

    def __init__(self, gens):
        object.__setattr__(self, "gens", tuple(gens))

    @property
    def rank(self):
        return len(self.gens)


@dataclass(frozen=True)
class FreeProduct:
    left: object
    right: object


@dataclass(frozen=True)
class DirectProduct:
    left: object
    right: object


@dataclass(frozen=True)
class GraphProduct:
    graph: SimplicialGraph
    vertex_groups: tuple  # ((vertex, FreeAbelian), ...) in graph vertex order

    def __init__(self, graph, vertex_groups):
        if isinstance(vertex_groups, dict):
            vg = tuple((v, vertex_groups[v]) for v in graph.vertices)
        else:
            vg = tuple(vertex_groups)
        if [v for v, _ in vg] != list(graph.vertices):
            raise ValueError("vertex groups must be listed in graph vertex order")
        seen = set()
        for _, a in vg:
            if not isinstance(a, FreeAbelian):
                raise UnsupportedGroup("vertex groups must be free abelian")
            for x in a.gens:
                if x in seen:
                    raise ValueError(f"generator {x!r} declared twice")
                seen.add(x)
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "vertex_groups", vg)

    def group_of(self, v) -> FreeAbelian:
        return dict(self.vertex_groups)[v]


@dataclass(frozen=True)
class OneRelatorQuotient:
    base: object
    relator: Word


@dataclass(frozen=True)
class RootAdjunction:
    base: object
    element: Word
    degree: int
    root: str

    def __post_init__(self):
        if self.degree < 2:
            raise ValueError("root degree must be at least 2")


@dataclass(frozen=True)
class MarkedSubgroup:
    ambient: object
    gens: tuple

    def __init__(self, ambient, gens):
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "gens", tuple(free_reduce(g) for g in gens))


def raag(graph: SimplicialGraph) -> GraphProduct:
    """Right-angled Artin group: every vertex is its own rank-one generator."""
    return GraphProduct(graph, tuple((v, FreeAbelian((v,))) for v in graph.vertices))


def free_group(gens) -> GraphProduct:
    return raag(SimplicialGraph(tuple(gens), ()))


# -- flattening to a single graph product ----------------------------------

def as_graph_product(g) -> GraphProduct:
    if isinstance(g, GraphProduct):
        return g
    if isinstance(g, FreeAbelian):
        v = g.gens[0] if g.rank == 1 else "ab:" + ",".join(g.gens)
        return GraphProduct(SimplicialGraph((v,), ()), ((v, g),))
    if isinstance(g, (FreeProduct, DirectProduct)):
        a, b = as_graph_product(g.left), as_graph_product(g.right)
        clash = set(a.graph.vertices) & set(b.graph.vertices)
        if clash:
            raise ValueError(f"vertex {sorted(clash)[0]!r} appears in both factors")
        verts = a.graph.vertices + b.graph.vertices
        edges = [tuple(e) for e in a.graph.edges] + [tuple(e) for e in b.graph.edges]
        if isinstance(g, DirectProduct):
            edges += [(x, y) for x in a.graph.vertices for y in b.graph.vertices]
        return GraphProduct(SimplicialGraph(verts, edges), a.vertex_groups + b.vertex_groups)
    raise UnsupportedGroup(f"{type(g).__name__} has no graph-product form")


def all_gens(g) -> tuple:
    if isinstance(g, FreeAbelian):
        return g.gens
    if isinstance(g, GraphProduct):
        return tuple(x for _, a in g.vertex_groups for x in a.gens)
    if isinstance(g, (FreeProduct, DirectProduct)):
        return all_gens(g.left) + all_gens(g.right)
    if isinstance(g, MarkedSubgroup):
        return all_gens(g.ambient)
    if isinstance(g, OneRelatorQuotient):
        return all_gens(g.base)
    if isinstance(g, RootAdjunction):
        return all_gens(g.base) + (g.root,)
    raise UnsupportedGroup(type(g).__name__)


class _Ctx:
    """Precomputed lookup tables for one graph product."""

    def __init__(self, g: GraphProduct):
        self.g = g
        self.order = {v: i for i, v in enumerate(g.graph.vertices)}
        self.vertex_of = {}
        self.index_of = {}
        self.rank = {}
        self.gens_of = {}
        for v, a in g.vertex_groups:
            self.rank[v] = a.rank
            self.gens_of[v] = a.gens
            for i, x in enumerate(a.gens):
                self.vertex_of[x] = v
                self.index_of[x] = i
        self.adj = {v: g.graph.neighbours(v) for v in g.graph.vertices}


@lru_cache(maxsize=256)
def _ctx(g: GraphProduct) -> _Ctx:
    return _Ctx(g)


@dataclass(frozen=True)
class GPNormalForm:
    syllables: tuple  # ((vertex, exponent vector), ...)

    def __len__(self):
        return len(self.syllables)

    def __bool__(self):
        return bool(self.syllables)

    @property
    def support(self) -> frozenset:
        return frozenset(v for v, _ in self.syllables)


def _syllables_of(ctx: _Ctx, w: Word):
    for x, e in w:
        try:
            v = ctx.vertex_of[x]
        except KeyError:
            raise ForeignGenerator(f"generator {x!r} is not in the group") from None
        vec = [0] * ctx.rank[v]
        vec[ctx.index_of[x]] = e
        yield v, vec


def _append(ctx: _Ctx, syl: list, v, vec) -> None:
    adj = ctx.adj[v]
    for j in range(len(syl) - 1, -1, -1):
        u = syl[j][0]
        if u == v:
            merged = [a + b for a, b in zip(syl[j][1], vec)]
            if any(merged):
                syl[j] = (v, merged)
            else:
                del syl[j]
            return
        if u not in adj:
            break
    syl.append((v, list(vec)))


def gp_reduce(g: GraphProduct, w: Word) -> list:
    """Reduced (not yet canonically ordered) syllable list."""
    ctx = _ctx(g)
    syl: list = []
    for v, vec in _syllables_of(ctx, w):
        _append(ctx, syl, v, vec)
    return syl


def _reduce_syllables(ctx, syllables) -> list:
    syl: list = []
    for v, vec in syllables:
        if any(vec):
            _append(ctx, syl, v, vec)
    return syl


def _lex_order(ctx: _Ctx, syl: list) -> tuple:
    rest = list(syl)
    out = []
    while rest:
        best = None
        for i, (v, _) in enumerate(rest):
            adj = ctx.adj[v]
            if all(u in adj for u, _ in rest[:i]):
                if best is None or ctx.order[v] < ctx.order[rest[best][0]]:
                    best = i
        v, vec = rest.pop(best)
        out.append((v, tuple(vec)))
    return tuple(out)


def gp_normal_form(g: GraphProduct, w: Word) -> GPNormalForm:
    ctx = _ctx(g)
    return GPNormalForm(_lex_order(ctx, gp_reduce(g, w)))


def normal_form_of_syllables(g: GraphProduct, syllables) -> GPNormalForm:
    ctx = _ctx(g)
    return GPNormalForm(_lex_order(ctx, _reduce_syllables(ctx, syllables)))


def nf_to_word(g: GraphProduct, nf) -> Word:
    ctx = _ctx(g)
    syl = nf.syllables if isinstance(nf, GPNormalForm) else nf
    out = []
    for v, vec in syl:
        for x, e in zip(ctx.gens_of[v], vec):
            if e:
                out.append((x, e))
    return free_reduce(out)


def gp_word_problem(g: GraphProduct, w: Word) -> bool:
    """True iff ``w`` is trivial."""
    return not gp_reduce(g, w)


def gp_equal(g: GraphProduct, u: Word, v: Word) -> bool:
    return not gp_reduce(g, mul(u, inverse(v)))


def gp_mul(g: GraphProduct, *words) -> Word:
    return nf_to_word(g, gp_normal_form(g, mul(*words)))


def support(g: GraphProduct, w: Word) -> frozenset:
    return frozenset(v for v, _ in gp_reduce(g, w))


def cyclic_normal_form(g: GraphProduct, w: Word):
    """Return ``(core_nf, t)`` with ``t^-1 w t = core`` and ``core`` cyclically reduced."""
    ctx = _ctx(g)
    syl = gp_reduce(g, w)
    t_syl: list = []
    while True:
        n = len(syl)
        initial = [i for i in range(n) if all(syl[k][0] in ctx.adj[syl[i][0]] for k in range(i))]
        terminal = [j for j in range(n) if all(syl[k][0] in ctx.adj[syl[j][0]] for k in range(j + 1, n))]
        move = None
        for i in initial:
            for j in terminal:
                if i != j and syl[i][0] == syl[j][0]:
                    move = i
                    break
            if move is not None:
                break
        if move is None:
            break
        v, vec = syl[move]
        rest = syl[:move] + syl[move + 1:]
        syl = _reduce_syllables(ctx, rest + [(v, vec)])
        t_syl.append((v, vec))
    core = GPNormalForm(_lex_order(ctx, syl))
    t = nf_to_word(g, _reduce_syllables(ctx, t_syl))
    return core, t


def conjugate_into_subgraph(g: GraphProduct, w: Word, sub) -> Optional[Word]:
    """A conjugator ``t`` with ``t^-1 w t`` in ``G_sub``, or ``None``."""
    core, t = cyclic_normal_form(g, w)
    if core.support <= frozenset(sub):
        return t
    return None


def essential_support(g: GraphProduct, w: Word) -> frozenset:
    return cyclic_normal_form(g, w)[0].support


def subgraph_product(g: GraphProduct, sub) -> GraphProduct:
    h = graphs.full_subgraph(g.graph, sub)
    vg = dict(g.vertex_groups)
    return GraphProduct(h, tuple((v, vg[v]) for v in h.vertices))


def retraction(g: GraphProduct, sub, w: Word) -> Word:
    """Kill every generator of a vertex outside ``sub``."""
    ctx = _ctx(g)
    sub = frozenset(sub)
    for v in sub:
        if v not in ctx.rank:
            raise graphs.GraphError(f"unknown vertex {v!r}")
    kept = []
    for x, e in w:
        v = ctx.vertex_of.get(x)
        if v is None:
            raise ForeignGenerator(f"generator {x!r} is not in the group")
        if v in sub:
            kept.append((x, e))
    return free_reduce(kept)


def abelianization(g, w: Word) -> tuple:
    if isinstance(g, (OneRelatorQuotient, RootAdjunction)):
        raise UnsupportedGroup(f"abelianization of {type(g).__name__} is not provided")
    if isinstance(g, MarkedSubgroup):
        g = g.ambient
    gens = all_gens(g)
    idx = {x: i for i, x in enumerate(gens)}
    vec = [0] * len(gens)
    for x, e in w:
        if x not in idx:
            raise ForeignGenerator(f"generator {x!r} is not in the group")
        vec[idx[x]] += e
    return tuple(vec)


def is_trivial(g, w: Word) -> bool:
    """Word problem for the base class (free abelian, free/direct/graph products)."""
    if isinstance(g, MarkedSubgroup):
        g = g.ambient
    return gp_word_problem(as_graph_product(g), w)


# -- node splittings and the normal closure of a vertex group ----------------

@dataclass(frozen=True)
class NodeDecomposition:
    node: str
    vertex_group: FreeAbelian
    link_part: GraphProduct
    branch_part: GraphProduct
    is_node: bool = True


def node_decompose(g: GraphProduct, vertex=None) -> NodeDecomposition:
    """Split at the least node (or at ``vertex``): ``G = (G_v x G_link) *_{G_link} G_rest``."""
    if vertex is None:
        ns = graphs.nodes(g.graph)
        if len(g.graph) < 1 or not ns:
            raise graphs.UnsupportedGraph("graph has no node")
        vertex = ns[0]
    rest = [v for v in g.graph.vertices if v != vertex]
    link = [v for v in rest if g.graph.adjacent(v, vertex)]
    return NodeDecomposition(vertex, g.group_of(vertex), subgraph_product(g, link),
                             subgraph_product(g, rest), len(link) == len(rest))


def coset_representative(g: GraphProduct, v, t: Word) -> GPNormalForm:
    """Minimal-length representative of ``t (G_v x G_link(v))``."""
    ctx = _ctx(g)
    star = set(ctx.adj[v]) | {v}
    syl = gp_reduce(g, t)
    changed = True
    while changed:
        changed = False
        n = len(syl)
        for j in range(n - 1, -1, -1):
            u = syl[j][0]
            if u in star and all(syl[k][0] in ctx.adj[u] for k in range(j + 1, n)):
                del syl[j]
                changed = True
                break
    return GPNormalForm(_lex_order(ctx, syl))


class NotInKernel(ValueError):
    pass


def closure_normal_form(g: GraphProduct, v, w: Word) -> list:
    """Normal form of ``w`` in the free product of the conjugates ``t G_v t^-1``.

    Returns ``[(t, g_v), ...]`` with ``w = prod t g_v t^-1``, consecutive ``t``
    distinct, each ``g_v`` a nonzero exponent vector of the vertex group.
    """
    ctx = _ctx(g)
    if v not in ctx.rank:
        raise graphs.GraphError(f"unknown vertex {v!r}")
    rest = [u for u in g.graph.vertices if u != v]
    if not gp_word_problem(g, retraction(g, rest, w)):
        raise NotInKernel("word is not in the normal closure of the vertex group")
    prefix: list = []
    factors: list = []
    reps: dict = {}
    for x, e in w:
        u = ctx.vertex_of[x]
        if u != v:
            prefix.append((x, e))
            continue
        key = free_reduce(prefix)
        if key not in reps:
            reps[key] = coset_representative(g, v, key)
        t = reps[key]
        vec = [0] * ctx.rank[v]
        vec[ctx.index_of[x]] = e
        if factors and factors[-1][0] == t:
            merged = [a + b for a, b in zip(factors[-1][1], vec)]
            factors.pop()
        else:
            merged = vec
        if any(merged):
            factors.append((t, merged))
        # a zero factor can expose two equal neighbours
        while len(factors) >= 2 and factors[-1][0] == factors[-2][0]:
            t2, a = factors.pop()
            _, b = factors.pop()
            s = [x1 + x2 for x1, x2 in zip(a, b)]
            if any(s):
                factors.append((t2, s))
    return [(nf_to_word(g, t), tuple(vec)) for t, vec in factors]


def expand_closure_factors(g: GraphProduct, v, factors) -> Word:
    gens = g.group_of(v).gens
    parts = []
    for t, vec in factors:
        gv = free_reduce(list(zip(gens, vec)))
        parts.append(mul(t, gv, inverse(t)))
    return mul(*parts)
