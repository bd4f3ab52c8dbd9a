import pytest
from hypothesis import given, settings, strategies as st

from tapkit.builders import Case2Spec, Case3Spec, TwoBridgeSpec, build
from tapkit.errors import NonCyclicAbelianization, UnknownGenerator
from tapkit.groups import (GroupRingElement, Presentation, Word, abelianization_degrees, commutator,
                           fox_derivative, reduce_word)

GENS = ["a", "b", "c"]
letters = st.lists(st.tuples(st.sampled_from(GENS), st.sampled_from([1, -1])), max_size=14)
words = letters.map(Word)


def W(text):
    return Word.parse(text)


def R(x):
    return GroupRingElement.of(x)


def test_reduce_word_examples():
    assert reduce_word([("a", 1), ("a", -1)]) == Word.identity()
    assert Word([("a", 1), ("b", 1), ("b", -1), ("a", 1)]) == Word.gen("a", 2)
    assert str(Word([("a", 1), ("b", -1), ("a", -1)])) == "a b^-1 a^-1"


@given(letters)
def test_reduce_idempotent_and_shorter(raw):
    once = reduce_word(raw)
    assert reduce_word(once.letters) == once
    assert len(once) <= len(raw)
    L = once.letters
    assert all(not (g == h and s == -t) for (g, s), (h, t) in zip(L, L[1:]))


@given(words, words, words)
def test_word_group_axioms(u, v, w):
    assert (u * v) * w == u * (v * w)
    assert u * u.inverse() == Word.identity()
    assert (u * v).inverse() == v.inverse() * u.inverse()


@given(words)
def test_parse_round_trip(w):
    assert W(str(w)) == w


def test_fox_base_cases():
    x, y = Word.gen("x"), Word.gen("y")
    assert fox_derivative(x, "x") == R(1)
    assert fox_derivative(x.inverse(), "x") == -R(x.inverse())
    assert fox_derivative(y, "x").is_zero()


def test_fox_power_by_three_product_steps():
    x = Word.gen("x")
    # d(x^3) = d(x) + x d(x^2) = 1 + x (1 + x d(x)) = 1 + x + x^2
    step = R(1) + x * (R(1) + x * R(1))
    assert fox_derivative(x ** 3, "x") == step
    assert fox_derivative(x ** 3, "x") == R(1) + R(x) + R(x ** 2)


@given(words, words, st.sampled_from(GENS))
def test_fox_product_rule(u, v, g):
    assert fox_derivative(u * v, g) == fox_derivative(u, g) + u * fox_derivative(v, g)


@given(words, st.sampled_from(GENS))
def test_fox_inverse_rule(u, g):
    assert fox_derivative(u.inverse(), g) == -(u.inverse() * fox_derivative(u, g))


@given(words)
def test_fundamental_identity(u):
    total = GroupRingElement()
    for g in GENS:
        total = total + fox_derivative(u, g) * (R(Word.gen(g)) - 1)
    assert total == R(u) - 1


@pytest.mark.parametrize("spec", [TwoBridgeSpec((2, -3)), Case3Spec(2), Case3Spec(-3),
                                  Case2Spec(1, (1, -1, 2), (1, -2))])
def test_fundamental_identity_on_builder_relators(spec):
    p = build(spec)
    for r in p.relators:
        total = GroupRingElement()
        for g in p.generators:
            total = total + fox_derivative(r, g) * (R(Word.gen(g)) - 1)
        assert total == R(r) - 1


@given(words, words, words)
@settings(max_examples=40)
def test_group_ring_distributes(u, v, w):
    a, b, c = R(u) + 2, R(v) - R(w), R(w) * 3
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)


def test_commutator():
    a, b = Word.gen("a"), Word.gen("b")
    assert commutator(a, b) == W("a b a^-1 b^-1")
    assert commutator(a, a) == Word.identity()


def test_degrees_two_bridge():
    p = build(TwoBridgeSpec((1, -1)))
    assert p.degrees["b"] == 1
    assert set(p.degrees.values()) <= {1, -1}
    for r in p.relators:
        assert p.word_degree(r) == 0


def test_degrees_case3():
    assert build(Case3Spec(4)).degrees == {"x": 1, "z": 2}
    assert build(Case3Spec(-3)).degrees == {"x": 1, "z": 2}


def test_degrees_trivial_and_errors():
    assert abelianization_degrees(["x"], [], "x") == {"x": 1}
    with pytest.raises(NonCyclicAbelianization):
        abelianization_degrees(["x", "y"], [], "x")
    with pytest.raises(UnknownGenerator):
        abelianization_degrees(["x"], [], "y")


def test_presentation_json_round_trip():
    p = build(Case2Spec(-1, (0, 1, -2), (2, 1)))
    text = p.dumps()
    q = Presentation.loads(text)
    assert q.dumps() == text
    assert q.degrees == p.degrees


def test_trefoil_schema():
    obj = {"generators": ["x", "y"], "relators": ["x y x y^-1 x^-1 y^-1"], "meridian": "x"}
    p = Presentation.from_json(obj)
    assert p.to_json() == obj
    assert p.deficiency == 1
