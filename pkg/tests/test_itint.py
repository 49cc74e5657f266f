import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from elliptikit.itint import (
    FormSpec,
    Path,
    PathError,
    Punctures,
    chen_compose,
    holonomy_invariance_check,
    iterated_integral,
    loop_around,
    parse_path,
    propagate,
    suffix_integrals,
)
from elliptikit.shuffle import shuffle_words

DZ = FormSpec.dz()


def test_empty_word_is_one(ctx_square):
    assert iterated_integral(ctx_square, [], Path((0.1j, 0.4))) == 1


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_powers_of_dz(ctx_square, n):
    z0, z = 0.1 + 0.2j, 0.45 - 0.3j
    path = Path((z0, 0.3 + 0.5j, z))
    assert abs(iterated_integral(ctx_square, [DZ] * n, path) - (z - z0) ** n / math.factorial(n)) < 1e-13


def test_additivity_on_unit_segments(ctx_square):
    path = Path((0j, 1 + 0j, 1 + 1j))
    assert abs(iterated_integral(ctx_square, [DZ], path) - (1 + 1j)) < 1e-14
    assert abs(iterated_integral(ctx_square, [DZ, DZ], path) - (1 + 1j) ** 2 / 2) < 1e-10


def test_chen_composition(ctx_skew):
    forms = [FormSpec("g", 2, 0), DZ, FormSpec("g", 1, 0)]
    a, b = Path((0.2 + 0.3j, 0.5 + 0.2j)), Path((0.5 + 0.2j, 0.4 + 0.7j))
    whole = iterated_integral(ctx_skew, forms, a.then(b))
    pre = propagate(ctx_skew, forms, a)
    suf = suffix_integrals(ctx_skew, forms, b)
    assert abs(chen_compose(pre, suf) - whole) < 1e-12


FORMS = [DZ, FormSpec("g", 1, 0), FormSpec("g", 2, 0), FormSpec("E2")]


@given(
    st.lists(st.sampled_from(range(len(FORMS))), min_size=1, max_size=2),
    st.lists(st.sampled_from(range(len(FORMS))), min_size=1, max_size=2),
)
def test_shuffle_morphism(ctx_square, u, v):
    path = Path((0.2 + 0.3j, 0.6 + 0.25j, 0.55 + 0.7j))
    I = lambda w: iterated_integral(ctx_square, [FORMS[i] for i in w], path)  # noqa: E731
    rhs = sum(m * I(w) for w, m in shuffle_words(tuple(u), tuple(v)))
    assert abs(I(u) * I(v) - rhs) < 1e-8 * max(1.0, abs(rhs))


def test_homotopy_invariance(ctx_square):
    a = Path((0.1 + 0.05j, 0.25 + 0.12j, 0.4 + 0.1j))
    b = Path((0.1 + 0.05j, 0.25 + 0.02j, 0.4 + 0.1j))
    assert holonomy_invariance_check(ctx_square, [FormSpec("g", 2, 0)], a, b) < 1e-8
    assert holonomy_invariance_check(ctx_square, [FormSpec("g", 2, 0)], a, a) == 0


def test_monodromy_around_a_puncture(ctx_square):
    s = 0.5 + 0.5j
    above = Path((0.3 + 0.5j, 0.5 + 0.7j, 0.7 + 0.5j))
    below = Path((0.3 + 0.5j, 0.5 + 0.3j, 0.7 + 0.5j))
    diff = holonomy_invariance_check(ctx_square, [FormSpec("g", 1, s)], above, below)
    assert abs(diff - 2 * math.pi) < 1e-8
    loop = loop_around(s, 0.1)
    assert abs(iterated_integral(ctx_square, [FormSpec("g", 1, s)], loop) - 2j * math.pi) < 1e-8


def test_path_parsing_and_validation(ctx_square):
    p = parse_path("path: [0,0; 0.5,0; 0.5,0.25]")
    assert p.vertices == (0j, 0.5 + 0j, 0.5 + 0.25j)
    for bad in ("[0,0; 1]", "0,0; 1,1", "[a,b; 1,1]"):
        with pytest.raises(PathError):
            parse_path(bad)
    punct = Punctures((0j, 0.5 + 0.5j))
    with pytest.raises(PathError):
        Path((0.3 + 0.3j, 0.7 + 0.7j)).validate(ctx_square, punct, 1e-3)
    Path((0.3 + 0.3j, 0.7 + 0.3j)).validate(ctx_square, punct, 1e-3)
