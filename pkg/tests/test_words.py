import pytest
from hypothesis import given, strategies as st

from starwp import words as W
from starwp.words import parse_word as p


def test_free_reduce_examples():
    assert W.free_reduce(p("x x^-1")) == ()
    assert W.free_reduce(p("x^2 x^3")) == (("x", 5),)
    assert W.free_reduce(p("x y y^-1 x")) == (("x", 2),)


def test_parse_and_format_round_trip():
    w = p("a^2 b^-1 a b^3")
    assert W.format_word(w) == "a^2 b^-1 a b^3"
    assert p(W.format_word(w)) == w
    assert W.format_word(()) == "1"


@pytest.mark.parametrize("text", ["x^0", "x^", "^2", "x^-"])
def test_parse_rejects_bad_tokens(text):
    with pytest.raises(W.WordParseError):
        p(text)


def test_zero_exponent_message():
    with pytest.raises(W.WordParseError, match="zero exponent"):
        p("y x^0")


def test_cyclic_reduce_examples():
    assert W.cyclic_reduce(p("x y x^-1")) == (p("y"), p("x"))
    # a cyclically reduced word keeps its letters; the core is its least rotation
    w = p("x y x^-2 y^-1")
    core, t = W.cyclic_reduce(w)
    assert W.mul(t, core, W.inverse(t)) == w and sorted(core) == sorted(w)
    assert W.cyclic_reduce(p("a b")) == (p("a b"), ())
    # x y x y^-1 x^-1 = (x y) x (x y)^-1
    assert W.cyclic_reduce(p("x y x y^-1 x^-1")) == (p("x"), p("x y"))


def test_cyclic_reduce_matches_brute_force_conjugates():
    rng = __import__("random").Random(5)
    for _ in range(300):
        w = W.free_reduce([(rng.choice("xy"), rng.choice((1, -1))) for _ in range(rng.randint(0, 10))])
        core, t = W.cyclic_reduce(w)
        assert W.mul(t, core, W.inverse(t)) == w
        assert W.is_cyclically_reduced(core)
        # the core is the shortest element of the conjugacy class reachable by cyclic peeling
        assert W.length(core) <= W.length(w)


def test_syllable_split_examples():
    s = W.syllable_split(p("a1 b1 a2"), {"a1": "A", "b1": "B", "a2": "A"})
    assert [t for t, _ in s.syllables] == ["A", "B", "A"]
    assert s.trailing == ()
    s = W.syllable_split(p("a c b"), {"a": "A", "b": "B", "c": "C"})
    assert s.syllables == (("A", p("a")), ("B", p("b")))
    assert s.trailing == p("c")
    assert W.syllable_split((), {}).length == 0


def test_commutator_and_substitute():
    c = W.commutator(p("x"), p("y"))
    assert c == p("x y x^-1 y^-1")
    assert W.substitute(c, {"x": p("a b"), "y": p("b")}) == p("a b a^-1 b^-1")
    assert W.exponent_sum(p("x^2 y x^-3"), "x") == -1
    assert W.power(p("x y"), -2) == p("y^-1 x^-1 y^-1 x^-1")


letters = st.lists(st.tuples(st.sampled_from("abc"), st.sampled_from((1, -1, 2, -3))), max_size=12)


@given(letters, letters)
def test_group_laws(u, v):
    u, v = W.free_reduce(u), W.free_reduce(v)
    assert W.mul(u, W.inverse(u)) == ()
    assert W.inverse(W.mul(u, v)) == W.mul(W.inverse(v), W.inverse(u))
    assert W.free_reduce(W.free_reduce(u)) == u
    assert W.length(W.mul(u, v)) <= W.length(u) + W.length(v)
