import math

import pytest

from elliptikit.gamma import (
    G_value,
    TangentialConfig,
    based_from_tangential,
    basepoint_transport,
    fe_transport_check,
    gamma_derivative_check,
    gamma_shuffle,
    gamma_tangential,
    standard_path,
)
from elliptikit.itint import Path, PathError, Punctures
from elliptikit.kronecker import kronecker_g
from elliptikit.shuffle import Letter

X0, ZERO, TWO = Letter(1, 0), Letter(0, 0), Letter(2, 0)


@pytest.fixture
def setup(ctx):
    punct = Punctures((0j, 0.4 + 0.45 * ctx.tau))
    return ctx, punct, standard_path(ctx, punct, 0.3 + 0.2j)


def _word(spec, s):
    """Letters given as (n, a) with a = 's' standing for the second puncture."""
    return tuple(Letter(n, s if a == "s" else a) for n, a in spec)


def test_empty_word(setup):
    ctx, punct, path = setup
    assert gamma_shuffle(ctx, (), path, punct) == 1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_dz_words(setup, n):
    ctx, punct, path = setup
    assert abs(gamma_shuffle(ctx, (ZERO,) * n, path, punct) - path.end**n / math.factorial(n)) < 1e-13


def test_single_x0_is_regularised_log(setup):
    ctx, punct, path = setup
    assert abs(gamma_shuffle(ctx, (X0,), path, punct) - G_value(ctx, path)) < 1e-13
    h = 1e-3
    z = path.end
    v = {k: G_value(ctx, path.then(Path((z, z + k * h)))) for k in (-2, -1, 1, 2)}
    fd = (-v[2] + 8 * v[1] - 8 * v[-1] + v[-2]) / (12 * h)
    assert abs(fd - kronecker_g(ctx, 1, z)) < 1e-6 * abs(kronecker_g(ctx, 1, z))


WORDS = [
    [(1, 0)],
    [(2, 0)],
    [(1, 0), (1, 0)],
    [(1, 0), (2, 0)],
    [(2, 0), (1, 0)],
    [(1, "s")],
    [(1, 0), (2, "s"), (1, 0)],
]


@pytest.mark.parametrize("spec", WORDS, ids=str)
def test_tangential_agrees_with_shuffle(setup, spec):
    ctx, punct, path = setup
    word = _word(spec, punct.reps[1])
    res = gamma_tangential(ctx, word, path, punct)
    assert abs(res.value - gamma_shuffle(ctx, word, path, punct)) < 1e-6
    assert res.fit_residual < 1e-6


def test_tangential_log_polynomial_shape(setup):
    ctx, punct, path = setup
    res = gamma_tangential(ctx, (X0,), path, punct)
    # Γ(1;0) along [t, z] behaves like G(z) - log t
    assert abs(res.log_polynomial[1] + 1) < 1e-6
    assert len(gamma_tangential(ctx, (TWO,), path, punct).log_polynomial) == 1


def test_tangential_config_validation(setup):
    ctx, punct, path = setup
    with pytest.raises(ValueError):
        gamma_tangential(ctx, (X0, X0), path, punct, TangentialConfig(fit_degree_cap=1))
    with pytest.raises(ValueError):
        gamma_tangential(ctx, (X0,), path, punct, TangentialConfig(t_samples=(1e-3, 1e-4)))


@pytest.mark.parametrize("spec", [[(0, 0)], [(1, 0), (2, "s")], [(2, "s"), (0, 0), (1, 0)]], ids=str)
def test_derivative_identity(setup, spec):
    ctx, punct, path = setup
    assert gamma_derivative_check(ctx, _word(spec, punct.reps[1]), path, punct)["rel_error"] < 1e-6


@pytest.mark.parametrize("spec", [[(0, 0)], [(2, 0), (0, 0)], [(1, 0), (1, "s")]], ids=str)
def test_transport_identities(setup, spec):
    ctx, punct, path0 = setup
    word = _word(spec, punct.reps[1])
    path1 = Path((path0.end, 0.2 + 0.35j))
    lhs, rhs = basepoint_transport(ctx, word, path0, path1, punct)
    assert abs(lhs - rhs) < 1e-8 * max(1, abs(lhs))
    lhs, rhs = based_from_tangential(ctx, word, path0, path1, punct)
    assert abs(lhs - rhs) < 1e-8 * max(1, abs(lhs))


def test_puncture_shift_expansion(setup):
    ctx, punct, path = setup
    word = _word([(1, 0), (2, "s")], punct.reps[1])
    lhs, rhs = fe_transport_check(ctx, word, 1, path, punct)
    assert abs(lhs - rhs) < 1e-10 * max(1, abs(lhs))
    with pytest.raises(ValueError):
        fe_transport_check(ctx, word, 0, path, punct)


def test_bad_inputs(setup):
    ctx, punct, path = setup
    with pytest.raises(PathError):
        gamma_shuffle(ctx, (TWO,), Path((0.1 + 0j, 0.3 + 0.2j)), punct)
    with pytest.raises(PathError):
        gamma_shuffle(ctx, (TWO,), Path((0j, 0.1j, 0.3 + 0.2j)), punct)
    with pytest.raises(ValueError):
        gamma_shuffle(ctx, (Letter(1, 0.123),), path, punct)
