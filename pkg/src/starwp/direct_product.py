"""Word problem of ``(A x B) / <<(a, b)>>`` through normal-closure degrees.

The normal closure of ``(a, b)`` contains ``M_A x M_B`` with
``M_A = <<[A, a]>>`` and is generated modulo that by ``(a, b)`` itself, so
``(u, v)`` is trivial exactly when ``u = a^s mod M_A`` and ``v = b^s mod M_B``
for one integer ``s``.  When the abelianized relator part is nonzero that
``s`` is read off the (torsion-free) abelianization.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from . import groups
from .decision import NONTRIVIAL, TRIVIAL, Decision, as_fuel
from .words import Word, free_reduce, mul, power


@dataclass
class DPKernelAnalysis:
    A: object
    B: object
    a: Word
    b: Word
    abel_a: tuple
    abel_b: tuple
    a_trivial: bool
    b_trivial: bool
    dispatch: str  # "both-trivial", "a-trivial", "b-trivial" or "general"
    trace: list = field(default_factory=list)

    @property
    def a_degree_computable(self) -> bool:
        return any(self.abel_a)

    @property
    def b_degree_computable(self) -> bool:
        return any(self.abel_b)


def dp_analyze(A, B, a: Word, b: Word) -> DPKernelAnalysis:
    ga, gb = groups.as_graph_product(A), groups.as_graph_product(B)
    a, b = free_reduce(a), free_reduce(b)
    at = groups.gp_word_problem(ga, a)
    bt = groups.gp_word_problem(gb, b)
    if at and bt:
        dispatch = "both-trivial"
    elif at:
        dispatch = "a-trivial"
    elif bt:
        dispatch = "b-trivial"
    else:
        dispatch = "general"
    return DPKernelAnalysis(A, B, a, b, tuple(groups.abelianization(ga, a)),
                            tuple(groups.abelianization(gb, b)), at, bt, dispatch)


def degree(vec, rel) -> Optional[int]:
    """The integer ``s`` with ``vec = s * rel``, or ``None``."""
    s = None
    for x, r in zip(vec, rel):
        if r == 0:
            if x:
                return None
            continue
        if x % r:
            return None
        q = x // r
        if s is not None and q != s:
            return None
        s = q
    return 0 if s is None else s


def _is_abelian(g) -> bool:
    gp = groups.as_graph_product(g)
    n = len(gp.graph)
    return len(gp.graph.edges) == n * (n - 1) // 2


def _default_quotient_wp(g, rel):
    from .solver import solve_word_problem
    gp = groups.as_graph_product(g)

    def wp(w, fuel=None):
        return solve_word_problem(gp, rel, w, fuel)
    return wp


def dp_word_problem(analysis: DPKernelAnalysis, u: Word, v: Word, fuel=None,
                    wp_a_quotient: Optional[Callable] = None,
                    wp_b_quotient: Optional[Callable] = None) -> Decision:
    """Decide whether ``(u, v)`` is trivial.

    ``wp_a_quotient(w, fuel)`` must decide the word problem of ``A/<<a>>``
    (similarly for ``B``); by default the quotient solver is used.
    """
    fuel = as_fuel(fuel)
    an = analysis
    ga, gb = groups.as_graph_product(an.A), groups.as_graph_product(an.B)
    u, v = free_reduce(u), free_reduce(v)
    trace = [{"step": "direct-product", "dispatch": an.dispatch,
              "abel_a": list(an.abel_a), "abel_b": list(an.abel_b)}]
    wpa = wp_a_quotient or _default_quotient_wp(an.A, an.a)
    wpb = wp_b_quotient or _default_quotient_wp(an.B, an.b)

    def call(fn, w):
        d = fn(w, fuel)
        trace.extend(d.trace)
        return d

    def done(verdict, reason=None):
        if reason:
            return Decision.unknown(reason, trace)
        return Decision(verdict, trace=trace)

    if an.dispatch == "both-trivial":
        ok = groups.gp_word_problem(ga, u) and groups.gp_word_problem(gb, v)
        return done(TRIVIAL if ok else NONTRIVIAL)
    if an.dispatch == "a-trivial":
        if not groups.gp_word_problem(ga, u):
            return done(NONTRIVIAL)
        d = call(wpb, v)
        return done(d.verdict, d.reason)
    if an.dispatch == "b-trivial":
        if not groups.gp_word_problem(gb, v):
            return done(NONTRIVIAL)
        d = call(wpa, u)
        return done(d.verdict, d.reason)

    # both relator parts nontrivial: first the image in (A/<<a>>) x (B/<<b>>)
    da = call(wpa, u)
    if da.verdict == NONTRIVIAL:
        return done(NONTRIVIAL)
    db = call(wpb, v)
    if db.verdict == NONTRIVIAL:
        return done(NONTRIVIAL)
    for d in (da, db):
        if d.is_unknown:
            return done(None, d.reason)
    ua = groups.abelianization(ga, u)
    vb = groups.abelianization(gb, v)
    sa = degree(ua, an.abel_a) if an.a_degree_computable else None
    sb = degree(vb, an.abel_b) if an.b_degree_computable else None
    trace.append({"step": "degrees", "s_a": sa, "s_b": sb})
    if an.a_degree_computable and an.b_degree_computable:
        if sa is None or sb is None:
            raise AssertionError("normal-closure element with non-integral degree")
        return done(TRIVIAL if sa == sb else NONTRIVIAL)
    # one computable side fixes s; the residual needs M = 1 on the other side
    if an.a_degree_computable and _is_abelian(an.B):
        rest = mul(v, power(an.b, -sa))
        return done(TRIVIAL if groups.gp_word_problem(gb, rest) else NONTRIVIAL)
    if an.b_degree_computable and _is_abelian(an.A):
        rest = mul(u, power(an.a, -sb))
        return done(TRIVIAL if groups.gp_word_problem(ga, rest) else NONTRIVIAL)
    return done(None, "degree-incomputable")


def split_pair(g: groups.GraphProduct, left, w: Word):
    """Coordinates of ``w`` in ``G_left x G_rest`` for a join decomposition."""
    right = [x for x in g.graph.vertices if x not in set(left)]
    return groups.retraction(g, left, w), groups.retraction(g, right, w)

