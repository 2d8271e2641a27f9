"""Random generators and small enumerators shared by the test modules."""
import itertools
import random

from starwp import graphs, groups
from starwp.words import EMPTY, free_reduce, mul


def random_graph(rng, n, p=0.5, prefix="v"):
    verts = [f"{prefix}{i}" for i in range(1, n + 1)]
    edges = [(u, v) for u, v in itertools.combinations(verts, 2) if rng.random() < p]
    return graphs.SimplicialGraph(verts, edges)


def random_graph_product(rng, max_vertices=5, max_rank=2, p=0.5):
    g = random_graph(rng, rng.randint(1, max_vertices), p)
    vgs = []
    for v in g.vertices:
        k = rng.randint(1, max_rank)
        gens = (v,) if k == 1 else tuple(f"{v}{c}" for c in "xyz"[:k])
        vgs.append((v, groups.FreeAbelian(gens)))
    return groups.GraphProduct(g, tuple(vgs))


def random_word(rng, gens, length, max_exp=1):
    out = []
    for _ in range(length):
        e = rng.randint(1, max_exp) * rng.choice((1, -1))
        out.append((rng.choice(gens), e))
    return free_reduce(out)


def element_ball(g, radius):
    """A shortest word for every element of length at most ``radius`` (breadth first)."""
    gp = groups.as_graph_product(g)
    letters = [((x, e),) for x in groups.all_gens(gp) for e in (1, -1)]
    seen = {groups.gp_normal_form(gp, EMPTY): EMPTY}
    frontier = [EMPTY]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            for s in letters:
                u = mul(w, s)
                nf = groups.gp_normal_form(gp, u)
                if nf not in seen:
                    seen[nf] = u
                    nxt.append(u)
        frontier = nxt
    return list(seen.values())


def rng_for(name):
    return random.Random(f"starwp-{name}")
