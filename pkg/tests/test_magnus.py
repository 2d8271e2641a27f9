import pytest
from hypothesis import given, strategies as st

from starwp import groups as gr, magnus as M, oracle
from starwp.decision import Fuel
from starwp.words import exponent_sum, inverse, mul, parse_word as p

from helpers import random_word, rng_for


def inst(A, B, w, C=(), **kw):
    return M.normalize_instance(A, B, C, p(w), **kw)


def wp(i, w):
    return M.quotient_word_problem(i, p(w)).verdict


def test_normalize_instance_examples():
    assert inst(("a",), ("b",), "a b").length == 1
    with pytest.raises(M.ConjugateIntoFactor):
        inst(("a",), ("b",), "a b a^-1")
    i = inst(("a",), ("b",), "a c b", C=("c",))
    assert i.length == 1 and i.syllables.trailing == p("c")
    with pytest.raises(gr.ForeignGenerator):
        inst(("a",), ("b",), "a q")


def test_reduce_to_generated():
    assert inst(("a",), ("b",), "a b a b^2").length == 2
    r = M.reduce_to_generated(inst(("a",), ("b",), "a b"))
    assert r["identity_frame"]
    r = M.reduce_to_generated(inst(("x", "y"), ("b",), "x b x b^2"))
    assert r["A0"] == [p("x")] and not r["identity_frame"]
    r = M.reduce_to_generated(inst(("x", "y"), ("b",), "x b x^2 b y b"))
    assert len(r["A0"]) == 2


def test_base_case_examples():
    assert wp(inst(("a",), ("b",), "a b^-1"), "a b^-1") == "Trivial"
    i = inst(("a",), ("b",), "a b")
    assert wp(i, "a^2 b^2") == "Trivial"
    assert wp(i, "b") == "NonTrivial"


def test_commutator_relator_examples():
    i = inst(("a",), ("b",), "a b a^-1 b^-1")
    assert wp(i, "a b b^-1 a^-1") == "Trivial"
    assert wp(i, "a b a^-1 b^-1") == "Trivial"
    assert wp(i, "a") == "NonTrivial"
    assert wp(i, "a^2 b a^-2 b^-1") == "Trivial"
    cases = [e["case"] for e in M.quotient_word_problem(i, p("a")).trace]
    assert "hnn-zero-sum" in cases


def test_case21_examples():
    i = inst(("a",), ("b",), "a b a b^2")
    # abelianization Z^2 / <(2, 3)>: (3, -2) is not a multiple so a^3 b^-2 survives
    assert wp(i, "a^3 b^-2") == "NonTrivial"
    assert wp(i, "b a b^2 a") == "Trivial"
    i = inst(("a",), ("b",), "a^2 b")
    assert wp(i, "b a^2") == "Trivial"


def test_case22_t_sequence():
    assert M.shear_t_sequence(2, 2, (1, 1), (1, 1)) == [-2, 0, -2, 0]
    levels = M.root_levels(2, 3, (2, 1), (1, -2))
    # block i starts at the running height and steps by m
    assert levels == [[2], [(2 - 2) + 1 + 2, (2 - 2) + 1 + 4]]


@pytest.mark.parametrize("strategy", ["orthogonal", "coordinate"])
def test_case22_verdicts(strategy):
    i = inst(("a",), ("b", "x"), "a b a b", strategy=strategy)
    assert wp(i, "x") == "NonTrivial"
    assert wp(i, "a b a b") == "Trivial"
    assert wp(i, "b a b a") == "Trivial"


def test_proper_power_relator_gives_cyclic_factor():
    # <a, b, x | (a b x)^2> is F(a, b) * Z/2 with c = a b x of order two
    i = inst(("a",), ("b", "x"), "a b x a b x")
    assert wp(i, "a b x a b x") == "Trivial"
    assert wp(i, "a b x") == "NonTrivial"
    assert wp(i, "x^-1 b^-1 a^-1 a b x") == "Trivial"
    d = M.quotient_word_problem(i, p("b a b x a b x b^-1"))
    assert d.verdict == "Trivial"
    assert "cyclic-factor" in {e["case"] for e in d.trace}


def test_coordinate_strategy_reaches_shear_and_root_cases():
    i = inst(("a",), ("b", "x"), "a b^2 a x b", strategy="coordinate")
    assert wp(i, "a b^2 a x b") == "Trivial"
    assert wp(i, "x") == "NonTrivial"
    d = M.quotient_word_problem(i, p("a b a x"))
    assert d.verdict == "NonTrivial"
    assert {"hnn-shear", "hnn-root"} <= {e["case"] for e in d.trace}


def test_member_factor_examples():
    i = inst(("a",), ("b",), "a b a^-1 b^-1")
    assert M.quotient_member_factor(i, p("a^3"), "A").verdict == "In"
    d = M.quotient_member_factor(i, p("b a b^-1"), "A")
    assert d.verdict == "In" and d.witness == p("a")
    s = inst(("a", "b", "c"), ("d",), "a b a^-1 b^-1 c d c^-1 d^-1")
    assert M.quotient_member_factor(s, p("d"), "A").verdict == "NotIn"
    assert M.quotient_member_factor(s, p("a b a^-1 b^-1 c d c^-1"), "B").verdict == "In"


def test_adjoin_root_examples():
    r = M.adjoin_root(("a",), p("a"), 2)
    assert r.degree == 2 and r.element == p("a")
    with pytest.raises(ValueError):
        M.adjoin_root(("a",), p("a"), 1)


def test_nielsen_euclid_builds_adapted_basis():
    basis, k, _ = M.nielsen_euclid(["t", "u"], [2, 3])

    def value(w):
        return 2 * exponent_sum(w, "t") + 3 * exponent_sum(w, "u")
    assert [value(w) for w in basis] == [int(j == k) for j in range(2)]
    with pytest.raises(ValueError):
        M.nielsen_euclid(["t", "u"], [4, 6])


def test_orthogonal_functional_is_primitive_and_orthogonal():
    for e in ([2, 3], [2, 2, 0], [1, -4, 6], [0, 5]):
        f = M.orthogonal_functional(e)
        assert sum(x * y for x, y in zip(e, f)) == 0
        assert __import__("math").gcd(*f) == 1


def test_levelize_and_strip_central():
    assert M.levelize(p("t x t^-1 y"), "t") == ((("x@1", 1), ("y@0", 1)), 0)
    assert M.strip_central(p("a c b c"), ("c",)) == (p("a b"), p("c^2"))
    assert M.split_level(M.lev("x", -3)) == ("x", -3)


def test_trace_records_decomposition():
    d = M.quotient_word_problem(inst(("a",), ("b",), "a b a^-1 b^-2"), p("b"))
    assert d.trace[0]["case"] == "split" and d.trace[0]["depth"] == 0


def test_fuel_exhaustion_is_unknown():
    fuel = Fuel(10_000)
    i = M.normalize_instance(("a",), ("b",), (), p("a b a^-1 b^-2"), fuel=fuel)
    fuel.budget = fuel.used + 3
    d = M.quotient_word_problem(i, p("a^4 b a^-4 b^-1 a b"))
    assert d.verdict == "Unknown" and d.reason == "fuel-exhausted"


def test_trivial_verdicts_are_sound_on_random_relators():
    rng = rng_for("magnus-random")
    free = gr.free_group(["a", "b"])
    for _ in range(6):
        while True:
            r = random_word(rng, "ab", rng.randint(4, 6))
            try:
                i = M.normalize_instance(("a",), ("b",), (), r)
                break
            except M.ConjugateIntoFactor:
                continue
        ball = oracle.closure_ball(free, r, 2, 2)
        for nf in ball:
            w = gr.nf_to_word(free, nf)
            assert M.quotient_word_problem(i, w).verdict == "Trivial"
        # abelianization gives NonTrivial certificates
        for w in oracle.word_ball("ab", 4):
            d = M.quotient_word_problem(i, w)
            if not oracle.abelian_oracle(("a", "b"), [r], w):
                assert d.verdict == "NonTrivial"


nonzero = st.integers(-4, 4).filter(bool)


@given(st.integers(1, 4), st.lists(st.tuples(nonzero, nonzero), min_size=1, max_size=5))
def test_root_level_blocks_are_distinct(m, blocks):
    ms = [x for x, _ in blocks]
    ns = [y for _, y in blocks]
    for block, ni in zip(M.root_levels(m, 1, ms, ns), ns):
        assert len(block) == abs(ni) == len(set(block))


@given(st.lists(st.tuples(nonzero, nonzero), min_size=2, max_size=5))
def test_shear_sequence_closes_up(blocks):
    ms = [x for x, _ in blocks]
    ns = [y for _, y in blocks]
    t = M.shear_t_sequence(sum(ms), sum(ns), ms, ns)
    assert len(t) == 2 * len(blocks) and t[-1] == 0
