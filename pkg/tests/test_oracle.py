import pytest

from starwp import graphs as G, groups as gr, oracle
from starwp.words import inverse, mul, parse_word as p


def test_word_ball_counts():
    # 1 + 4 (1 + 3 + 9) reduced words of length <= 3 on two letters
    assert len(oracle.word_ball("ab", 3)) == 53
    assert len(set(oracle.word_ball("ab", 3))) == 53


def test_closure_ball_examples():
    f2 = gr.free_group(["a", "b"])
    r = p("a b a^-1 b^-1")
    ball = oracle.closure_ball(f2, r, 0, 1)
    nfs = {gr.gp_normal_form(f2, r), gr.gp_normal_form(f2, inverse(r)), gr.gp_normal_form(f2, ())}
    assert ball == nfs
    ball = oracle.closure_ball(f2, r, 1, 2)
    assert gr.gp_normal_form(f2, mul(p("a"), r, p("a^-1"), r)) in ball
    with pytest.raises(ValueError):
        oracle.closure_ball(f2, (), 1, 1)


def test_bs12_representation():
    assert oracle.rep_oracle_bs12(p("a b a^-1 b^-2"))
    assert not oracle.rep_oracle_bs12(p("b"))
    assert oracle.affine_bs12(p("b")) == (1, 1)
    assert oracle.affine_bs12(p("a")) == (2, 0)
    with pytest.raises(gr.ForeignGenerator):
        oracle.affine_bs12(p("c"))


def test_bs12_representation_kills_the_closure_ball():
    f2 = gr.free_group(["a", "b"])
    for nf in oracle.closure_ball(f2, p("a b a^-1 b^-2"), 2, 2):
        assert oracle.rep_oracle_bs12(gr.nf_to_word(f2, nf))


def test_abelian_oracle():
    assert oracle.abelian_oracle("ab", [p("a b a^-1 b^-1")], p("a b a^-1 b^-1"))
    assert not oracle.abelian_oracle("ab", [p("a^2 b^3")], p("a"))
    assert oracle.abelian_oracle("ab", [p("a^2 b^3")], p("b^-3 a^-2"))


def test_commutation_oracle():
    g = gr.raag(G.path_graph("uvw"))
    assert oracle.commutation_oracle(g, p("u v u^-1 v^-1"))
    assert not oracle.commutation_oracle(g, p("u w u^-1 w^-1"))


@pytest.mark.parametrize("gens, rels, sub, index", [
    ("x", ["x^3"], [], 3),
    ("xy", ["x y x^-1 y^-1"], ["x", "y^2"], 2),
    ("xy", ["x^2", "y^3", "x y x y"], [], 6),
    ("xy", ["x^2", "y^5", "x y x y"], [], 10),
    ("xy", ["x^2", "y^3", "x y x y x y x y x y"], [], 60),
    ("xy", ["x^8", "y^2 x^-4", "y^-1 x y x"], [], 16),
])
def test_todd_coxeter_indices(gens, rels, sub, index):
    t = oracle.todd_coxeter((tuple(gens), [p(r) for r in rels]), [p(h) for h in sub])
    assert t and t.index == index
    for r in rels:
        assert t.is_identity(p(r))


def test_todd_coxeter_overflow():
    t = oracle.todd_coxeter((("x", "y"), []), [], max_cosets=100)
    assert not t and t.max_cosets == 100


@pytest.mark.parametrize("k", [2, 3, 4])
def test_coset_tables_respect_engine_trivial_verdicts(k):
    from starwp import magnus as M
    bs = p("a b a^-1 b^-2")
    # finite quotients <a, b | a b a^-1 = b^2, a^k>
    table = oracle.todd_coxeter((("a", "b"), [bs, p(f"a^{k}")]))
    assert table
    inst = M.normalize_instance(("a",), ("b",), (), bs)
    trivial = 0
    for w in oracle.word_ball("ab", 6):
        if M.quotient_word_problem(inst, w).verdict == "Trivial":
            trivial += 1
            assert table.is_identity(w)
    assert trivial > 1
