"""Brute-force cross-checks kept apart from the solver.

Nothing here is imported by the decision procedures; tests and the ``check``
command use these to certify verdicts independently.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import groups
from .words import EMPTY, Word, free_reduce, inverse, mul


# -- normal closure, yes side -------------------------------------------------------

def word_ball(gens, radius: int) -> list:
    """All freely reduced words of length at most ``radius`` (shortlex order)."""
    out = [EMPTY]
    frontier = [EMPTY]
    letters = [(x, e) for x in gens for e in (1, -1)]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            for x, e in letters:
                if w and w[-1][0] == x and (w[-1][1] > 0) != (e > 0):
                    continue
                nxt.append(free_reduce(w + ((x, e),)))
        frontier = nxt
        out.extend(nxt)
    return out


def closure_ball(g, relator: Word, conj_len: int, factors: int) -> set:
    """Normal forms of products of at most ``factors`` conjugates of ``relator^+-1``.

    Conjugators range over the words of length at most ``conj_len``.
    """
    gp = groups.as_graph_product(g)
    r = free_reduce(relator)
    if not r:
        raise ValueError("relator must be a nonempty word")
    conj = {}
    for t in word_ball(groups.all_gens(gp), conj_len):
        for s in (r, inverse(r)):
            nf = groups.gp_normal_form(gp, mul(t, s, inverse(t)))
            conj.setdefault(nf, groups.nf_to_word(gp, nf))
    conj_words = list(conj.values())
    result = {groups.gp_normal_form(gp, EMPTY)}
    layer = {groups.gp_normal_form(gp, EMPTY): EMPTY}
    for _ in range(factors):
        nxt = {}
        for w in layer.values():
            for c in conj_words:
                nf = groups.gp_normal_form(gp, mul(w, c))
                if nf not in result and nf not in nxt:
                    nxt[nf] = groups.nf_to_word(gp, nf)
        result.update(nxt)
        layer = nxt
    return result


def closure_words(g, relator: Word, conj_len: int, factors: int) -> list:
    """``closure_ball`` as words, sorted for reproducible iteration."""
    gp = groups.as_graph_product(g)
    return sorted((groups.nf_to_word(gp, nf) for nf in closure_ball(g, relator, conj_len, factors)),
                  key=lambda w: (len(w), w))


# -- faithful representations ---------------------------------------------------------

def affine_bs12(w: Word) -> tuple:
    """The affine map ``x -> p x + q`` of ``w`` under ``a -> 2x``, ``b -> x + 1``."""
    p, q = Fraction(1), Fraction(0)
    maps = {"a": (Fraction(2), Fraction(0)), "b": (Fraction(1), Fraction(1))}
    for x, e in w:
        if x not in maps:
            raise groups.ForeignGenerator(f"generator {x!r} is not a or b")
        mp, mq = maps[x]
        if e < 0:
            mp, mq = 1 / mp, -mq / mp
        for _ in range(abs(e)):
            # compose as matrices [[p, q], [0, 1]] multiplied on the right
            p, q = p * mp, p * mq + q
    return p, q


def rep_oracle_bs12(w: Word) -> bool:
    """True iff ``w`` is trivial in ``<a, b | a b a^-1 = b^2>``."""
    return affine_bs12(w) == (1, 0)


def abelian_oracle(gens, relators, w: Word) -> bool:
    """Triviality in the abelianization of ``<gens | relators>``."""
    from .lattice import LatticeBasis
    idx = {x: i for i, x in enumerate(gens)}

    def vec(u):
        v = [0] * len(gens)
        for x, e in u:
            v[idx[x]] += e
        return v
    lat = LatticeBasis.from_generators([vec(r) for r in relators], len(gens))
    return lat.coordinates(vec(w)) is not None


# -- partially commutative rewriting --------------------------------------------------

def commutation_oracle(g, w: Word) -> bool:
    """Triviality by cancelling ``x^e ... x^-e`` across letters commuting with ``x``.

    Two generators commute when they lie in one vertex group or in adjacent
    vertex groups; this cancellation system is confluent for such groups.
    """
    gp = groups.as_graph_product(g)
    vertex_of = {}
    for v, a in gp.vertex_groups:
        for x in a.gens:
            vertex_of[x] = v

    def commute(x, y):
        u, v = vertex_of[x], vertex_of[y]
        return u == v or gp.graph.adjacent(u, v)

    letters = []
    for x, e in w:
        letters.extend([(x, 1 if e > 0 else -1)] * abs(e))
    changed = True
    while changed:
        changed = False
        for i in range(len(letters)):
            x, e = letters[i]
            for j in range(i + 1, len(letters)):
                y, f = letters[j]
                if y == x and f == -e:
                    del letters[j]
                    del letters[i]
                    changed = True
                    break
                if not commute(x, y):
                    break
            if changed:
                break
    return not letters


# -- Todd-Coxeter --------------------------------------------------------------------

@dataclass
class CosetTable:
    gens: tuple
    table: list  # table[coset][column] with columns x, x^-1 per generator

    @property
    def index(self) -> int:
        return len(self.table)

    def act(self, w: Word, start: int = 0) -> int:
        col = {x: 2 * i for i, x in enumerate(self.gens)}
        c = start
        for x, e in w:
            k = col[x] + (0 if e > 0 else 1)
            for _ in range(abs(e)):
                c = self.table[c][k]
        return c

    def is_identity(self, w: Word) -> bool:
        return all(self.act(w, c) == c for c in range(self.index))


@dataclass
class Overflow:
    max_cosets: int

    def __bool__(self):
        return False


def todd_coxeter(presentation, subgroup=(), max_cosets: int = 10000):
    """Coset enumeration (HLT with coincidences) for ``(gens, relators)``.

    Returns a ``CosetTable`` on the cosets of ``<subgroup>`` or ``Overflow``.
    """
    gens, relators = presentation
    gens = tuple(gens)
    ncol = 2 * len(gens)
    col = {x: 2 * i for i, x in enumerate(gens)}

    def cols(w):
        out = []
        for x, e in free_reduce(w):
            k = col[x] + (0 if e > 0 else 1)
            out.extend([k] * abs(e))
        return out

    rels = [cols(r) for r in relators if free_reduce(r)]
    subs = [cols(h) for h in subgroup if free_reduce(h)]
    table = [[None] * ncol]
    parent = [0]
    live_count = [1]

    def inv(k):
        return k ^ 1

    def find(c):
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    def new_coset():
        if live_count[0] >= max_cosets:
            raise _Full
        table.append([None] * ncol)
        parent.append(len(parent))
        live_count[0] += 1
        return len(table) - 1

    def coincidence(a, b):
        queue = []

        def merge(x, y):
            x, y = find(x), find(y)
            if x == y:
                return
            if x > y:
                x, y = y, x
            parent[y] = x
            live_count[0] -= 1
            queue.append(y)

        merge(a, b)
        while queue:
            g = queue.pop(0)
            for k in range(ncol):
                d = table[g][k]
                if d is None:
                    continue
                if table[d][inv(k)] == g:
                    table[d][inv(k)] = None
                mu, nu = find(g), find(d)
                if table[mu][k] is not None:
                    merge(nu, table[mu][k])
                elif table[nu][inv(k)] is not None:
                    merge(mu, table[nu][inv(k)])
                else:
                    table[mu][k] = nu
                    table[nu][inv(k)] = mu

    def scan_fill(c, word):
        """Trace ``word`` from ``c`` and back, defining cosets to close the loop."""
        while True:
            f, i = c, 0
            while i < len(word) and table[f][word[i]] is not None:
                f = find(table[f][word[i]])
                i += 1
            if i == len(word):
                if f != c:
                    coincidence(f, c)
                return
            b, j = c, len(word) - 1
            while j >= i and table[b][inv(word[j])] is not None:
                b = find(table[b][inv(word[j])])
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if j == i:
                table[f][word[i]] = b
                table[b][inv(word[i])] = f
                return
            d = new_coset()
            table[f][word[i]] = d
            table[d][inv(word[i])] = f

    try:
        for h in subs:
            scan_fill(0, h)
        c = 0
        while c < len(table):
            if find(c) == c:
                for r in rels:
                    if find(c) != c:
                        break
                    scan_fill(c, r)
                if find(c) == c:
                    for k in range(ncol):
                        if table[c][k] is None:
                            d = new_coset()
                            table[c][k] = d
                            table[d][inv(k)] = c
            c += 1
    except _Full:
        return Overflow(max_cosets)
    live = [c for c in range(len(table)) if find(c) == c]
    renum = {c: i for i, c in enumerate(live)}
    out = [[renum[find(table[c][k])] for k in range(ncol)] for c in live]
    return CosetTable(gens, out)


class _Full(Exception):
    pass


def relation_words(k: int, max_len: int) -> list:
    """Reduced words over generator indices ``0..k-1`` up to ``max_len`` letters."""
    return word_ball(range(k), max_len)

