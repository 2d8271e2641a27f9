"""One-relator quotients of starred graph products of free abelian groups.

The recursion peels a node off a connected graph (a direct-product split),
splits a disconnected graph into the free factor carrying the relator and the
rest, and hands a relator spread over several free vertices to the Magnus
engine.
"""
from __future__ import annotations

from . import graphs, groups, magnus
from .decision import NONTRIVIAL, TRIVIAL, Decision, OutOfFuel, as_fuel
from .direct_product import dp_analyze, dp_word_problem
from .lattice import LatticeBasis
from .words import Word, free_reduce, mul


class _Run:
    def __init__(self, fuel):
        self.fuel = fuel
        self.trace: list = []
        self.instances: dict = {}

    def log(self, **entry):
        self.trace.append(entry)


def solve_word_problem(g: groups.GraphProduct, relator: Word, query: Word, fuel=None) -> Decision:
    """Trivial iff ``query`` lies in the normal closure of ``relator``."""
    g = groups.as_graph_product(g)
    if not graphs.is_starred(g.graph):
        raise graphs.UnsupportedGraph("the graph is not starred")
    run = _Run(as_fuel(fuel))
    try:
        ok = _wp(run, g, free_reduce(relator), free_reduce(query))
    except magnus.Undecided as exc:
        return Decision.unknown(exc.reason, run.trace)
    except magnus.UnsupportedFactor:
        return Decision.unknown("unsupported-factor", run.trace)
    except OutOfFuel:
        return Decision.unknown("fuel-exhausted", run.trace)
    return Decision(TRIVIAL if ok else NONTRIVIAL, trace=run.trace)


def _wp(run: _Run, g: groups.GraphProduct, r: Word, q: Word) -> bool:
    run.fuel.spend(1 + len(q))
    if groups.gp_word_problem(g, r):
        run.log(step="trivial-relator")
        return groups.gp_word_problem(g, q)
    if len(g.graph) == 1:
        run.log(step="abelian-quotient", vertex=g.graph.vertices[0])
        lat = LatticeBasis.from_generators([groups.abelianization(g, r)], len(groups.all_gens(g)))
        return lat.coordinates(groups.abelianization(g, q)) is not None
    if graphs.is_connected(g.graph):
        return _connected(run, g, r, q)
    return _disconnected(run, g, r, q)


def _as_decision(run, fn):
    def wp(w, fuel=None):
        start = len(run.trace)
        ok = fn(w)
        return Decision(TRIVIAL if ok else NONTRIVIAL, trace=run.trace[start:])
    return wp


def _connected(run, g, r, q) -> bool:
    nd = groups.node_decompose(g)
    v = nd.node
    rest = [x for x in g.graph.vertices if x != v]
    A = groups.subgraph_product(g, [v])
    B = groups.subgraph_product(g, rest)
    a, b = groups.retraction(g, [v], r), groups.retraction(g, rest, r)
    u, w = groups.retraction(g, [v], q), groups.retraction(g, rest, q)
    run.log(step="node-split", node=v)
    an = dp_analyze(A, B, a, b)
    if an.dispatch == "general" and not an.b_degree_computable:
        return _central_magnus(run, g, r, q)
    start = len(run.trace)
    d = dp_word_problem(an, u, w, run.fuel,
                        wp_a_quotient=_as_decision(run, lambda x: _wp(run, A, a, x)),
                        wp_b_quotient=_as_decision(run, lambda x: _wp(run, B, b, x)))
    del run.trace[start:]
    run.trace.extend(d.trace)
    if d.is_unknown:
        raise magnus.Undecided(d.reason)
    return d.verdict == TRIVIAL


def _central_magnus(run, g, r, q) -> bool:
    """All nodes central, the other vertices free: the Magnus engine with ``C`` = centre."""
    centre = graphs.nodes(g.graph)
    others = [x for x in g.graph.vertices if x not in set(centre)]
    sub = graphs.full_subgraph(g.graph, others)
    if sub.edges or any(g.group_of(x).rank != 1 for x in others):
        raise magnus.Undecided("degree-incomputable")
    f = groups.retraction(g, others, r)
    core, _ = groups.cyclic_normal_form(groups.subgraph_product(g, others), f)
    supp = [x for x in others if x in core.support]
    letters = [g.group_of(x).gens[0] for x in others]
    first = g.group_of(supp[0]).gens[0]
    C = tuple(x for c in centre for x in g.group_of(c).gens)
    key = ("central", g, r)
    if key not in run.instances:
        run.instances[key] = magnus.normalize_instance((first,), tuple(x for x in letters if x != first),
                                                       C, r, run.fuel)
    run.log(step="central-magnus", centre=list(centre))
    return _magnus_wp(run, run.instances[key], q)


def _magnus_wp(run, inst, q) -> bool:
    d = magnus.quotient_word_problem(inst, q)
    run.trace.append({"step": "magnus", "length": inst.length})
    run.trace.extend(d.trace)
    if d.is_unknown:
        raise magnus.Undecided(d.reason)
    return d.verdict == TRIVIAL


def _disconnected(run, g, r, q) -> bool:
    core, _ = groups.cyclic_normal_form(g, r)
    r0 = groups.nf_to_word(g, core)
    comps = graphs.connected_components(g.graph)
    hit = [c for c in comps if set(c) & core.support]
    S = [x for x in g.graph.vertices if any(x in c for c in hit)]
    R = [x for x in g.graph.vertices if x not in set(S)]
    run.log(step="free-product-split", support_components=[sorted(c) for c in hit])
    GS = groups.subgraph_product(g, S)
    if len(hit) == 1:
        def factor_wp(w):
            return _wp(run, GS, r0, w)
    else:
        if any(len(c) != 1 or g.group_of(next(iter(c))).rank != 1 for c in hit):
            raise magnus.Undecided("unsupported-factor")
        key = ("free", g, r0)
        if key not in run.instances:
            first = next(x for x in S if x in core.support)
            a = g.group_of(first).gens
            b = tuple(y for x in S if x != first for y in g.group_of(x).gens)
            run.instances[key] = magnus.normalize_instance(a, b, (), r0, run.fuel)

        def factor_wp(w):
            return _magnus_wp(run, run.instances[key], w)
    if not R:
        return factor_wp(q)
    GR = groups.subgraph_product(g, R)
    s_gens = set(groups.all_gens(GS))
    return free_product_wp(q, lambda x: x in s_gens, factor_wp,
                           lambda w: groups.gp_word_problem(GR, w))


def free_product_wp(q: Word, in_left, wp_left, wp_right) -> bool:
    """Word problem in a free product from the factors' word problems."""
    syl: list = []
    for x, e in free_reduce(q):
        side = bool(in_left(x))
        if syl and syl[-1][0] == side:
            syl[-1] = (side, syl[-1][1] + ((x, e),))
        else:
            syl.append((side, ((x, e),)))
    stack: list = []
    for side, w in syl:
        if stack and stack[-1][0] == side:
            w = mul(stack.pop()[1], w)
        trivial = wp_left(w) if side else wp_right(w)
        if not trivial:
            stack.append((side, w))
    return not stack


# -- Freiheitssatz predicates ---------------------------------------------------------

def freiheitssatz_nodal(g: groups.GraphProduct, relator: Word, u) -> bool:
    """True when ``G_U`` is guaranteed to embed: ``U`` is a set of nodes and the relator is outside ``G_U``."""
    g = groups.as_graph_product(g)
    u = set(u)
    ns = set(graphs.nodes(g.graph))
    if not u <= ns:
        raise graphs.GraphError(f"{sorted(u - ns)} are not nodes")
    return not groups.support(g, relator) <= u


def freiheitssatz_substar(g: groups.GraphProduct, relator: Word, u) -> bool:
    """True when ``U`` spans a sub-star and the relator is not conjugate into ``G_U``."""
    g = groups.as_graph_product(g)
    u = set(u)
    if not graphs.spans_sub_star(g.graph, u):
        raise graphs.GraphError("vertex set does not span a sub-star")
    if u <= set(graphs.nodes(g.graph)):
        return freiheitssatz_nodal(g, relator, u)
    return groups.conjugate_into_subgraph(g, relator, u) is None

