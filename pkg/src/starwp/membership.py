"""Uniform subgroup membership with witnesses over the subgroup generators.

Witness words use the integer index of a subgroup generator as their letter,
so ``((1, 1), (0, -1))`` means ``g1 * g0^-1``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from . import groups
from .decision import IN, NOT_IN, Decision, Fuel, OutOfFuel, as_fuel
from .groups import GraphProduct, MarkedSubgroup
from .lattice import LatticeBasis, left_kernel
from .words import EMPTY, Word, free_reduce, inverse, mul, power, substitute


@dataclass(frozen=True)
class MembershipWitness:
    word: Word  # over generator indices

    def evaluate(self, gens) -> Word:
        return substitute(self.word, {i: g for i, g in enumerate(gens)})

    def exponent_vector(self, k: int) -> tuple:
        v = [0] * k
        for i, e in self.word:
            v[i] += e
        return tuple(v)


class FoldedGraph:
    """Stallings folding whose edges carry labels in the free group on generator indices.

    Invariant: along any closed path at the basepoint, the product of labels,
    evaluated on the generators, equals the word read along the path.
    """

    def __init__(self):
        self.base = 0
        self.out: dict = {0: {}}  # state -> {(gen, sign): (state, label)}
        self._alias: dict = {}  # merged state -> (survivor, delta)
        self._next = 1
        self.ngens = 0
        self.work = 0

    @property
    def states(self):
        return list(self.out)

    def edges(self):
        """Positively oriented edges ``(src, gen, dst)``."""
        for p, d in self.out.items():
            for (x, s), (q, _) in d.items():
                if s > 0:
                    yield p, x, q

    def _new_state(self):
        q = self._next
        self._next += 1
        self.out[q] = {}
        return q

    def _find(self, v):
        delta = EMPTY
        while v in self._alias:
            v, d = self._alias[v]
            delta = mul(d, delta)
        return v, delta

    def _drain(self, queue):
        while queue:
            p, key, q, lab = queue.popleft()
            self.work += 1
            p, dp = self._find(p)
            q, dq = self._find(q)
            lab = mul(dp, lab, inverse(dq))
            x, s = key
            hit = self.out[p].get(key)
            if hit is not None:
                self._fold(queue, p, q, lab, hit[0], hit[1])
                continue
            rev = self.out[q].get((x, -s))
            if rev is not None:
                self._fold(queue, q, p, inverse(lab), rev[0], rev[1])
                continue
            self.out[p][key] = (q, lab)
            self.out[q][(x, -s)] = (p, inverse(lab))

    def _fold(self, queue, p, q_new, l_new, q_old, l_old):
        if q_new == q_old:
            return
        if q_new == self.base:
            surv, lS, vic, lV = q_new, l_new, q_old, l_old
        else:
            surv, lS, vic, lV = q_old, l_old, q_new, l_new
        delta = mul(inverse(lS), lV)
        entries = list(self.out.pop(vic).items())
        for (x, s), (t, lf) in entries:
            if t != vic:
                del self.out[t][(x, -s)]
        self._alias[vic] = (surv, delta)
        for (x, s), (t, lf) in entries:
            if t == vic:
                if s > 0:
                    queue.append((surv, (x, s), surv, mul(delta, lf, inverse(delta))))
            else:
                queue.append((surv, (x, s), t, mul(delta, lf)))

    def add_petal(self, w: Word) -> None:
        i = self.ngens
        self.ngens += 1
        letters = [(x, 1 if e > 0 else -1) for x, e in w for _ in range(abs(e))]
        if not letters:
            return
        queue: deque = deque()
        cur = self.base
        for j, key in enumerate(letters):
            nxt = self.base if j == len(letters) - 1 else self._new_state()
            lab = ((i, 1),) if j == 0 else EMPTY
            queue.append((cur, key, nxt, lab))
            cur = nxt
            self._drain(queue)

    def prune(self) -> None:
        """Cut hanging trees so only the core remains."""
        changed = True
        while changed:
            changed = False
            for v in list(self.out):
                if v != self.base and len(self.out[v]) <= 1:
                    for (x, s), (t, _) in self.out.pop(v).items():
                        del self.out[t][(x, -s)]
                    changed = True

    def read(self, w: Word):
        """Follow ``w`` from the basepoint; return ``(end, label)`` or ``None``."""
        v, lab = self.base, []
        for x, e in free_reduce(w):
            s = 1 if e > 0 else -1
            for _ in range(abs(e)):
                hit = self.out[v].get((x, s))
                if hit is None:
                    return None
                v = hit[0]
                lab.extend(hit[1])
        return v, free_reduce(lab)

    # -- free basis ----------------------------------------------------------

    def spanning_tree(self):
        """BFS tree; returns ``{state: path word from base}`` and tree edge set."""
        paths = {self.base: EMPTY}
        tree = set()
        queue = deque([self.base])
        while queue:
            v = queue.popleft()
            for (x, s), (t, _) in sorted(self.out[v].items(), key=lambda kv: (str(kv[0][0]), -kv[0][1])):
                if t not in paths:
                    paths[t] = mul(paths[v], ((x, s),))
                    tree.add(frozenset(((v, x, s), (t, x, -s))))
                    queue.append(t)
        return paths, tree

    def basis(self) -> list:
        """Free basis words, one per non-tree edge, sorted lexicographically."""
        return [b for b, _ in self._basis_edges()]

    def _basis_edges(self):
        paths, tree = self.spanning_tree()
        out = []
        for p, x, q in self.edges():
            if frozenset(((p, x, 1), (q, x, -1))) in tree:
                continue
            word = mul(paths[p], ((x, 1),), inverse(paths[q]))
            out.append((word, (p, x, q)))
        out.sort(key=lambda t: (len(t[0]), _word_key(t[0])))
        return out

    def basis_coordinates(self, w: Word) -> Optional[Word]:
        """``w`` as a word over basis indices, or ``None`` if not in the subgroup."""
        edges = self._basis_edges()
        index = {e: i for i, (_, e) in enumerate(edges)}
        v, coords = self.base, []
        for x, e in free_reduce(w):
            s = 1 if e > 0 else -1
            for _ in range(abs(e)):
                hit = self.out[v].get((x, s))
                if hit is None:
                    return None
                t = hit[0]
                key = (v, x, t) if s > 0 else (t, x, v)
                if key in index:
                    coords.append((index[key], s))
                v = t
        if v != self.base:
            return None
        return free_reduce(coords)

    @property
    def rank(self) -> int:
        nv = len(self.out)
        ne = sum(1 for _ in self.edges())
        return ne - nv + 1


def _word_key(w):
    return tuple((str(x), e) for x, e in w)


def fold(gens, fuel: Optional[Fuel] = None) -> FoldedGraph:
    fg = FoldedGraph()
    for g in gens:
        fg.add_petal(free_reduce(g))
        if fuel is not None:
            fuel.spend(fg.work + 1)
            fg.work = 0
    fg.prune()
    return fg


def free_member(fg: FoldedGraph, w: Word) -> Optional[MembershipWitness]:
    hit = fg.read(w)
    if hit is None or hit[0] != fg.base:
        return None
    return MembershipWitness(hit[1])


def abelian_member(basis: LatticeBasis, v) -> Optional[MembershipWitness]:
    c = basis.generator_coefficients(v)
    if c is None:
        if len(v) != basis.dim:
            raise ValueError("dimension mismatch")
        return None
    return MembershipWitness(tuple((i, e) for i, e in enumerate(c) if e))


# -- structural recursion ------------------------------------------------------

class _Unsupported(Exception):
    pass


def _is_free(g: GraphProduct) -> bool:
    return not g.graph.edges and all(a.rank == 1 for _, a in g.vertex_groups)


def _is_abelian(g: GraphProduct) -> bool:
    n = len(g.graph)
    return len(g.graph.edges) == n * (n - 1) // 2


class _Projected:
    """Membership structure of a free or free abelian subgroup ``P = <h_i>``.

    ``relations`` are words over generator indices that evaluate to 1 in the
    ambient group of ``P`` and normally generate all such relations.
    """

    def __init__(self, g: GraphProduct, hs, fuel: Fuel):
        self.g, self.hs = g, list(hs)
        k = len(self.hs)
        gens = groups.all_gens(g)
        if _is_abelian(g):
            self.kind = "abelian"
            vecs = [groups.abelianization(g, h) for h in self.hs]
            fuel.spend(len(vecs) * max(1, len(gens)))
            self.lattice = LatticeBasis.from_generators(vecs, len(gens))
            rels = [tuple((i, c) for i, c in enumerate(row) if c) for row in left_kernel(vecs, len(gens))]
            rels += [((i, 1), (j, 1), (i, -1), (j, -1)) for i in range(k) for j in range(i + 1, k)]
            self.relations = rels
        elif _is_free(g):
            self.kind = "free"
            self.fg = fold(self.hs, fuel)
            basis = self.fg.basis()
            bwords = []
            for b in basis:
                wit = free_member(self.fg, b)
                bwords.append(wit.word)
            self.relations = []
            for i, h in enumerate(self.hs):
                coords = self.fg.basis_coordinates(h)
                s = substitute(coords, {j: bw for j, bw in enumerate(bwords)})
                r = mul(((i, 1),), inverse(s))
                if r:
                    self.relations.append(r)
        else:
            raise _Unsupported("projection is neither free nor free abelian")

    def witness(self, w: Word) -> Optional[Word]:
        if self.kind == "abelian":
            v = groups.abelianization(self.g, w)
            wit = abelian_member(self.lattice, v)
        else:
            wit = free_member(self.fg, w)
        return None if wit is None else wit.word


class _FactorFold:
    """Folded graph of a subgroup of a free product of free abelian groups.

    Black vertices alternate with factor vertices; a factor vertex carries a
    lattice ``L`` in its vertex group and every edge ``(black, vec)`` means that
    walking from the black vertex into the factor vertex reads ``vec``.  Each
    edge and lattice generator also carries a word over the generator indices;
    with vertex potentials ``T`` (``T`` of the base is 1) the edge word
    evaluates to ``T_black vec T_factor^-1`` and a lattice word to
    ``T_factor l T_factor^-1``, so closed walks at the base read their own
    witnesses.
    """

    def __init__(self, g: GraphProduct, hs, fuel: Fuel):
        self.g, self.fuel = g, fuel
        self.dim = {v: a.rank for v, a in g.vertex_groups}
        self.blacks = 1
        self.factors: dict = {}  # id -> [vertex, lattice [(vec, word)], edges [[black, vec, word]]]
        for i, h in enumerate(hs):
            syl = groups.gp_normal_form(g, h).syllables
            prev = 0
            for j, (v, vec) in enumerate(syl):
                last = j == len(syl) - 1
                nxt = 0 if last else self._new_black()
                zero = (0,) * self.dim[v]
                neg = tuple(-x for x in vec)
                self.factors[len(self.factors)] = [v, [], [[prev, zero, EMPTY], [nxt, neg, ((i, -1),) if last else EMPTY]]]
                prev = nxt
        while self._step():
            fuel.spend(1)

    def _new_black(self):
        self.blacks += 1
        return self.blacks - 1

    def _lattice_word(self, node, vec) -> Optional[Word]:
        lat = node[1]
        if not any(vec):
            return EMPTY
        if not lat:
            return None
        coeffs = LatticeBasis.from_generators([l for l, _ in lat], len(vec)).generator_coefficients(vec)
        if coeffs is None:
            return None
        return mul(*[power(w, c) for (_, w), c in zip(lat, coeffs) if c])

    def _step(self) -> bool:
        # two factor vertices of one vertex group at a black vertex: merge them
        seen: dict = {}
        for fid, node in self.factors.items():
            for black, vec, word in node[2]:
                key = (black, node[0])
                if key in seen and seen[key][0] != fid:
                    self._merge_factors(seen[key], (fid, vec, word))
                    return True
                seen.setdefault(key, (fid, vec, word))
        for fid, node in self.factors.items():
            edges = node[2]
            for i in range(len(edges)):
                for j in range(i + 1, len(edges)):
                    (u, a, ga), (w, b, gb) = edges[i], edges[j]
                    diff = tuple(y - x for x, y in zip(a, b))
                    lw = self._lattice_word(node, diff)
                    if u == w:
                        if lw is None:
                            node[1].append((diff, mul(inverse(ga), gb)))
                        del edges[j]
                        return True
                    if lw is not None:
                        self._merge_blacks(u, w, mul(ga, lw, inverse(gb)))
                        return True
        return False

    def _merge_factors(self, keep, gone):
        (k, a1, g1), (d, a2, g2) = keep, gone
        delta = mul(inverse(g2), g1)
        node, old = self.factors[k], self.factors.pop(d)
        for black, c, word in old[2]:
            node[2].append([black, tuple(x - y + z for x, y, z in zip(c, a2, a1)), mul(word, delta)])
        for vec, word in old[1]:
            node[1].append((vec, mul(inverse(delta), word, delta)))

    def _merge_blacks(self, u, w, e):
        # e evaluates to T_u T_w^-1; the base keeps its trivial potential
        if w == 0:
            u, w, e = w, u, inverse(e)
        for node in self.factors.values():
            for edge in node[2]:
                if edge[0] == w:
                    edge[0], edge[2] = u, mul(e, edge[2])

    def witness(self, w: Word) -> Optional[Word]:
        at, out = 0, []
        for v, s in groups.gp_normal_form(self.g, w).syllables:
            self.fuel.spend(1)
            hit = None
            for node in self.factors.values():
                if node[0] != v:
                    continue
                entry = next(((a, ga) for b, a, ga in node[2] if b == at), None)
                if entry is not None:
                    hit = (node, entry)
                    break
            if hit is None:
                return None
            node, (a, ga) = hit
            for x, c, gc in node[2]:
                # s = a + l - c with l in the lattice
                lw = self._lattice_word(node, tuple(si - ai + ci for si, ai, ci in zip(s, a, c)))
                if lw is not None:
                    out.append(mul(ga, lw, inverse(gc)))
                    at = x
                    break
            else:
                return None
        return mul(*out) if at == 0 else None


def _split_central(g: GraphProduct):
    ns = [v for v in g.graph.vertices if len(g.graph.neighbours(v)) == len(g.graph) - 1]
    rest = [v for v in g.graph.vertices if v not in ns]
    return ns, rest


def _collapse_cliques(g: GraphProduct) -> Optional[GraphProduct]:
    """``g`` as an edgeless product of free abelian groups, when every component is complete."""
    from .graphs import SimplicialGraph, connected_components
    comps = sorted((sorted(c, key=g.graph.vertices.index) for c in connected_components(g.graph)),
                   key=lambda c: g.graph.vertices.index(c[0]))
    if len(comps) < 2:
        return None
    for c in comps:
        if any(not g.graph.adjacent(a, b) for i, a in enumerate(c) for b in c[i + 1:]):
            return None
    vg = tuple((c[0], groups.FreeAbelian(tuple(x for v in c for x in g.group_of(v).gens))) for c in comps)
    return GraphProduct(SimplicialGraph([c[0] for c in comps], []), vg)


def _gp_member(g: GraphProduct, hs, w: Word, fuel: Fuel) -> Optional[Word]:
    """Witness word over indices of ``hs`` or ``None``; raises ``_Unsupported``."""
    if _is_free(g) or _is_abelian(g):
        return _Projected(g, hs, fuel).witness(w)
    flat = _collapse_cliques(g)
    if flat is not None:
        return _FactorFold(flat, hs, fuel).witness(w)
    central, rest = _split_central(g)
    if not central:
        raise _Unsupported("no central vertex group and not free")
    h_part = groups.subgraph_product(g, rest)
    if not (_is_free(h_part) or _is_abelian(h_part)):
        raise _Unsupported("non-central part is neither free nor free abelian")
    z_part = groups.subgraph_product(g, central)
    zdim = len(groups.all_gens(z_part))
    proj = [groups.retraction(g, rest, h) for h in hs]
    zvec = [groups.abelianization(z_part, groups.retraction(g, central, h)) for h in hs]
    P = _Projected(h_part, proj, fuel)
    W = P.witness(groups.retraction(g, rest, w))
    if W is None:
        return None

    def zof(word_over_idx):
        v = [0] * zdim
        for i, e in word_over_idx:
            v = [a + e * b for a, b in zip(v, zvec[i])]
        return v

    target = groups.abelianization(z_part, groups.retraction(g, central, w))
    disc = [a - b for a, b in zip(target, zof(W))]
    rels = [r for r in P.relations if any(zof(r))]
    fuel.spend(len(rels) * max(1, zdim))
    if not rels:
        return W if not any(disc) else None
    lat = LatticeBasis.from_generators([zof(r) for r in rels], zdim)
    coeffs = lat.generator_coefficients(disc)
    if coeffs is None:
        return None
    tail = [power(r, c) for r, c in zip(rels, coeffs) if c]
    return mul(W, *tail)


def member(sub: MarkedSubgroup, w: Word, fuel=None) -> Decision:
    fuel = as_fuel(fuel)
    try:
        g = groups.as_graph_product(sub.ambient)
    except groups.UnsupportedGroup as exc:
        return Decision.unknown(f"unsupported-shape: {exc}")
    w = free_reduce(w)
    try:
        wit = _gp_member(g, sub.gens, w, fuel)
    except _Unsupported as exc:
        return Decision.unknown(f"unsupported-shape: {exc}")
    except OutOfFuel:
        return Decision.unknown("fuel-exhausted")
    if wit is None:
        return Decision(NOT_IN)
    witness = MembershipWitness(wit)
    # certify before answering
    if not groups.gp_equal(g, witness.evaluate(sub.gens), w):
        raise AssertionError("membership witness failed to evaluate to the query")
    return Decision(IN, witness=witness)
