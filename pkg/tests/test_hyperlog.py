import math

import numpy as np
import pytest

from elliptikit.gamma import standard_path
from elliptikit.hyperlog import (
    CATALOG,
    STAR,
    IllConditionedSamples,
    hl_eval,
    numeric_independence_check,
    parse_hl_word,
    residue_reconstruction,
    verify_catalog_identity,
)
from elliptikit.itint import Path, Punctures
from elliptikit.kronecker import kronecker_g


def test_star_words(ctx_square):
    path = Path((0.2 + 0j, 0.5 + 0j))
    assert abs(hl_eval(ctx_square, (STAR,), path) - 0.3) < 1e-15
    for n in (2, 4):
        assert abs(hl_eval(ctx_square, (STAR,) * n, path) - 0.3**n / math.factorial(n)) < 1e-14
    assert hl_eval(ctx_square, (), path) == 1


def test_word_syntax():
    assert parse_hl_word("[*, 0, s]", {"s": 0.5j}) == (STAR, 0j, 0.5j)
    assert parse_hl_word("L[⋆; 0]") == (STAR, 0j)
    with pytest.raises(ValueError):
        parse_hl_word("*, 0")


def test_letter_must_be_a_puncture(ctx_square):
    with pytest.raises(ValueError):
        hl_eval(ctx_square, (0.3 + 0j,), Path((0.2 + 0j, 0.5 + 0j)))


@pytest.mark.parametrize("identity", CATALOG)
def test_catalog(ctx, identity):
    res = verify_catalog_identity(ctx, identity, 0.62 + 0.41j, 0.3 + 0.2j)
    assert res.residual < (1e-8 if identity == "ii" else 1e-7)


def test_catalog_first_identity_at_n_zero(ctx_square):
    res = verify_catalog_identity(ctx_square, "i", 0.62 + 0.41j, 0.3 + 0.2j, n=0)
    assert res.lhs == 1 and res.rhs == 1


def test_catalog_needs_single_puncture(ctx_square):
    with pytest.raises(ValueError):
        verify_catalog_identity(ctx_square, "ii", 0.6, 0.3, punctures=Punctures((0j, 0.5 + 0.5j)))


def test_residues_are_reproduced(ctx_skew):
    s1, s2 = 0.4 + 0.45 * ctx_skew.tau, 0.7 + 0.2 * ctx_skew.tau
    punct = Punctures((0j, s1, s2))
    out = residue_reconstruction(ctx_skew, punct, {0j: -3.0, s1: 1 + 1j, s2: 2 - 1j})
    for target, measured in out.values():
        assert abs(target - measured) < 1e-10
    with pytest.raises(ValueError):
        residue_reconstruction(ctx_skew, punct, {s1: 1.0})


def _points(ctx, n=120, seed=3):
    rng = np.random.default_rng(seed)
    pts = rng.uniform(0.05, 0.95, n) + rng.uniform(0.05, 0.95, n) * ctx.tau
    return pts[ctx.distance_to_lattice(pts) > 0.1]


def test_one_and_g1_are_independent(ctx_square):
    pts = _points(ctx_square)
    g1 = kronecker_g(ctx_square, 1, pts)
    rep = numeric_independence_check(ctx_square, np.column_stack([np.ones_like(g1), g1]), pts, 2)
    assert rep.independent and rep.gap >= 1e3


def test_planted_relation_is_dependent(ctx_square):
    pts = _points(ctx_square)
    g1 = kronecker_g(ctx_square, 1, pts)
    vals = np.column_stack([np.ones_like(g1), g1, g1**2 - 2 * (g1**2 / 2)])
    rep = numeric_independence_check(ctx_square, vals, pts, 2)
    assert not rep.independent and rep.gap >= 1e3
    assert rep.to_dict()["verdict"] == "dependent"


def test_independence_input_checks(ctx_square):
    pts = _points(ctx_square)
    vals = np.ones((len(pts), 1))
    with pytest.raises(ValueError):
        numeric_independence_check(ctx_square, vals[:3], pts[:3], 2)
    with pytest.raises(ValueError):
        numeric_independence_check(ctx_square, np.ones((4, 1)), np.array([0.3 + 0.2j] * 4), 1)
    with pytest.raises(IllConditionedSamples):
        same = np.full(40, 0.3 + 0.2j) + 1e-13 * np.arange(40)
        numeric_independence_check(ctx_square, np.ones((40, 1)), same, 2)
