"""Epimorphisms onto Z for finitely generated subgroups (algorithmic local indicability).

Every construction returns integer images, one per given generator, whose gcd
is 1 and which vanish on every relation among the generators.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Callable

from . import groups
from .groups import GraphProduct, MarkedSubgroup
from .lattice import LatticeBasis
from .membership import fold
from .words import EMPTY, Word, free_reduce, inverse, mul


class TrivialSubgroup(ValueError):
    pass


class NontrivialProjection(ValueError):
    pass


@dataclass(frozen=True)
class EpiToZ:
    sub: MarkedSubgroup
    images: tuple

    def __call__(self, witness_word) -> int:
        """Image of a word over generator indices."""
        return sum(e * self.images[i] for i, e in witness_word)


@dataclass
class AlgorithmicSES:
    """``1 -> K -> G -> H -> 1`` with the procedures a ses-based epi needs."""
    quotient_map: Callable
    quotient_is_trivial: Callable
    quotient_epi: Callable  # list of words in H -> images
    kernel_rewrite: Callable  # word of G in K -> word of K
    kernel_epi: Callable  # list of words in K -> images


def _normalize(images) -> tuple:
    g = 0
    for x in images:
        g = gcd(g, x)
    if g == 0:
        raise TrivialSubgroup("epimorphism images are all zero")
    # sign convention: the first nonzero image is positive
    if next(x for x in images if x) < 0:
        g = -g
    return tuple(x // g for x in images)


def _scatter(n, idx, images):
    out = [0] * n
    for i, x in zip(idx, images):
        out[i] = x
    return tuple(out)


def ses_epi(ses: AlgorithmicSES, gens) -> tuple:
    q = [ses.quotient_map(g) for g in gens]
    live = [i for i, h in enumerate(q) if not ses.quotient_is_trivial(h)]
    if live:
        return _normalize(_scatter(len(gens), live, ses.quotient_epi([q[i] for i in live])))
    ks = [ses.kernel_rewrite(g) for g in gens]
    return _normalize(ses.kernel_epi(ks))


def abelian_epi(vectors) -> tuple:
    """First coordinate over the HNF basis of the generated lattice."""
    vectors = [tuple(v) for v in vectors]
    if not vectors or not any(any(v) for v in vectors):
        raise TrivialSubgroup("all generators are trivial")
    dim = len(vectors[0])
    lat = LatticeBasis.from_generators(vectors, dim)
    return _normalize([lat.coordinates(v)[0] for v in vectors])


def free_epi(gens) -> tuple:
    """Send the least folded basis element to 1, the others to 0."""
    fg = fold(gens)
    if fg.rank == 0:
        raise TrivialSubgroup("all generators are trivial")
    images = []
    for h in gens:
        coords = fg.basis_coordinates(h)
        images.append(sum(e for j, e in coords if j == 0))
    return _normalize(images)


# -- free products -------------------------------------------------------------

def commutator_rewrite(a: GraphProduct, b: GraphProduct, w: Word) -> Word:
    """Rewrite ``w`` in the free basis ``[x, y]`` of the kernel of ``A*B -> AxB``.

    Letters of the result are pairs ``(x_nf, y_nf)`` of nonempty normal forms
    standing for ``[x, y] = x y x^-1 y^-1``.  With partial products
    ``p_i = a_1..a_i`` and ``q_i = b_1..b_i`` the identity is
    ``w = prod_i [p_i, q_i] [p_{i+1}, q_i]^-1``.
    """
    a_gens = set(groups.all_gens(a))
    b_gens = set(groups.all_gens(b))
    syl: list = []
    for x, e in free_reduce(w):
        if x in a_gens:
            tag = 0
        elif x in b_gens:
            tag = 1
        else:
            raise groups.ForeignGenerator(f"generator {x!r} is in neither factor")
        if syl and syl[-1][0] == tag:
            syl[-1][1].append((x, e))
        else:
            syl.append((tag, [(x, e)]))
    pa, pb = EMPTY, EMPTY
    out = []

    def comm(x, y, sign):
        nx = groups.gp_normal_form(a, x)
        ny = groups.gp_normal_form(b, y)
        if nx and ny:
            out.append(((nx, ny), sign))

    for tag, letters in syl:
        if tag == 0:
            new = mul(pa, letters)
            comm(pa, pb, 1)
            comm(new, pb, -1)
            pa = new
        else:
            pb = mul(pb, letters)
    if not groups.gp_word_problem(a, pa) or not groups.gp_word_problem(b, pb):
        raise NontrivialProjection("word has nontrivial image in the direct product")
    comm(pa, pb, 1)
    return free_reduce(out)


def expand_commutators(a: GraphProduct, b: GraphProduct, letters: Word) -> Word:
    parts = []
    for (nx, ny), e in letters:
        x, y = groups.nf_to_word(a, nx), groups.nf_to_word(b, ny)
        c = mul(x, y, inverse(x), inverse(y))
        parts.extend([c if e > 0 else inverse(c)] * abs(e))
    return mul(*parts)


def _gp_of(g) -> GraphProduct:
    if isinstance(g, MarkedSubgroup):
        g = g.ambient
    return groups.as_graph_product(g)


def free_product_epi(a, b, gens) -> EpiToZ:
    A, B = _gp_of(a), _gp_of(b)
    both = groups.as_graph_product(groups.FreeProduct(A, B))
    images = _free_product_images(A, B, both, [free_reduce(g) for g in gens])
    return EpiToZ(MarkedSubgroup(both, gens), images)


def _free_product_images(A, B, both, gens) -> tuple:
    # project to A x B: the B-coordinate first, then the A-coordinate
    for side, verts in ((B, list(B.graph.vertices)), (A, list(A.graph.vertices))):
        q = [groups.retraction(both, verts, g) for g in gens]
        live = [i for i, h in enumerate(q) if not groups.gp_word_problem(side, h)]
        if live:
            return _normalize(_scatter(len(gens), live, _live_images(side, [q[i] for i in live])))
    return free_epi([commutator_rewrite(A, B, g) for g in gens])


# -- graph products --------------------------------------------------------------

def _gp_images(g: GraphProduct, gens) -> tuple:
    gens = [free_reduce(h) for h in gens]
    live = [i for i, h in enumerate(gens) if not groups.gp_word_problem(g, h)]
    if not live:
        raise TrivialSubgroup("all generators are trivial")
    hs = [gens[i] for i in live]
    return _scatter(len(gens), live, _live_images(g, hs))


def _live_images(g: GraphProduct, hs) -> tuple:
    n = len(g.graph)
    if len(g.graph.edges) == n * (n - 1) // 2:
        return abelian_epi([groups.abelianization(g, h) for h in hs])
    if not g.graph.edges and all(a.rank == 1 for _, a in g.vertex_groups):
        return free_epi(hs)
    v = g.graph.vertices[0]
    rest = list(g.graph.vertices[1:])
    if not g.graph.neighbours(v):
        A = groups.subgraph_product(g, [v])
        B = groups.subgraph_product(g, rest)
        return _free_product_images(A, B, g, hs)
    lam = groups.subgraph_product(g, rest)
    ses = AlgorithmicSES(
        quotient_map=lambda w: groups.retraction(g, rest, w),
        quotient_is_trivial=lambda w: groups.gp_word_problem(lam, w),
        quotient_epi=lambda qs: _gp_images(lam, qs),
        kernel_rewrite=lambda w: groups.closure_normal_form(g, v, w),
        kernel_epi=lambda ks: _closure_images(g, v, ks),
    )
    return ses_epi(ses, hs)


def _closure_images(g: GraphProduct, v, factor_lists) -> tuple:
    """Epi on a subgroup of the free product of conjugates ``t G_v t^-1``."""
    index: dict = {}
    for fl in factor_lists:
        for t, _ in fl:
            index.setdefault(t, len(index))
    base_gens = g.group_of(v).gens
    vg = []
    for t, k in index.items():
        vg.append((f"{v}#{k}", groups.FreeAbelian(tuple(f"{x}#{k}" for x in base_gens))))
    fp = GraphProduct(groups.SimplicialGraph([name for name, _ in vg], ()), tuple(vg))
    words = []
    for fl in factor_lists:
        w = []
        for t, vec in fl:
            k = index[t]
            w.extend((f"{x}#{k}", e) for x, e in zip(base_gens, vec) if e)
        words.append(free_reduce(w))
    return _gp_images(fp, words)


def graph_product_epi(g: GraphProduct, gens) -> EpiToZ:
    return EpiToZ(MarkedSubgroup(g, gens), _normalize(_gp_images(g, gens)))


def epi_to_Z(g, gens) -> EpiToZ:
    if isinstance(g, MarkedSubgroup):
        g = g.ambient
    if isinstance(g, (groups.OneRelatorQuotient, groups.RootAdjunction)):
        raise groups.UnsupportedGroup(f"no epimorphism construction for {type(g).__name__}")
    if isinstance(g, groups.FreeProduct):
        return free_product_epi(g.left, g.right, gens)
    gp = groups.as_graph_product(g)
    return EpiToZ(MarkedSubgroup(g, gens), _normalize(_gp_images(gp, gens)))
