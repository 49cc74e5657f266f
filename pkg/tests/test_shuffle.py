from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from elliptikit.shuffle import (
    X0,
    Letter,
    RingMismatchError,
    ShuffleElement,
    antipode,
    deconcatenate,
    degree,
    format_word,
    parse_word,
    reconstruct,
    shuffle_product,
    star_decompose,
)

W = ShuffleElement.word
A, B = Letter(2, 0), Letter(1, 0.5 + 0.5j)
letters = st.sampled_from([X0, Letter(0, 0), A, B])
words = st.lists(letters, max_size=4).map(tuple)


def test_length_one_product():
    assert W("a") * W("b") == ShuffleElement({("a", "b"): 1, ("b", "a"): 1})
    assert W("x") * W("x") == W("xx", 2)


def test_unit():
    assert W("abc") * ShuffleElement.one() == W("abc")


def test_deconcatenation():
    assert deconcatenate(()) == [((), ())]
    assert deconcatenate(("a",)) == [((), ("a",)), (("a",), ())]
    assert deconcatenate(tuple("abc")) == [((), tuple("abc")), (("a",), tuple("bc")), (tuple("ab"), ("c",)), (tuple("abc"), ())]


def test_antipode_on_short_words():
    assert antipode(W("ab")) == W("ba")
    assert antipode(W("a")) == W("a", -1)


def test_regular_splitting_examples():
    p = star_decompose(W((X0,)))
    assert p.coeffs[0].is_zero() and p.coeffs[1] == ShuffleElement.one()
    assert star_decompose(W((A,))).coeffs == [W((A,))]
    p = star_decompose(W((X0, A)))
    assert p.coeffs[1] == W((A,)) and p.coeffs[0] == W((A, X0), -1)
    assert reconstruct(p) == W((X0, A))


def test_degree():
    assert degree(ShuffleElement.zero()) == -1
    assert degree(W((A,))) == 0
    assert degree(W((X0, X0))) == 2


def test_ring_mismatch():
    with pytest.raises(RingMismatchError):
        W("a") + W("a", 1.0, exact=False)
    with pytest.raises(RingMismatchError):
        W("a", 0.5)


def test_word_syntax_round_trip():
    w = parse_word("G[1,0; 2,s; 0,0]", {"s": 0.5 + 0.5j})
    assert w == (X0, Letter(2, 0.5 + 0.5j), Letter(0, 0))
    assert parse_word(format_word(w)) == w
    assert parse_word("G[]") == ()
    with pytest.raises(ValueError):
        parse_word("[1,0")
    with pytest.raises(ValueError):
        parse_word("[0,1]")  # n = 0 forces a = 0
    with pytest.raises(ValueError):
        parse_word("[x,0]")


@given(words, words)
def test_commutative(u, v):
    assert W(u) * W(v) == W(v) * W(u)


@given(words, words, words)
def test_associative(u, v, w):
    assert (W(u) * W(v)) * W(w) == W(u) * (W(v) * W(w))


@given(words)
def test_antipode_axiom(w):
    total = ShuffleElement.zero()
    for a, b in deconcatenate(w):
        total = total + shuffle_product(antipode(W(a)), W(b))
    assert total == (ShuffleElement.one() if not w else ShuffleElement.zero())


@given(words)
def test_antipode_is_involution(w):
    assert antipode(antipode(W(w))) == W(w)


@given(words, words)
def test_regular_splitting_round_trip(u, v):
    x = W(u) + W(v, Fraction(3, 2))
    p = star_decompose(x)
    assert reconstruct(p) == x
    assert all(not word or word[0] != X0 for c in p.coeffs for word in c.terms)
    assert p.degree == degree(x) or x.is_zero()
