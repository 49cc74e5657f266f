import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from elliptikit.diffalg import (
    EllipticPoly,
    ExpressionError,
    MultiPointElement,
    ReductionError,
    check_graded_symbols,
    derive,
    filtration_degree,
    format_poly,
    g_as_elliptic_poly,
    graded_symbol,
    parse_expression,
    random_elliptic_poly,
    reduce_mod_derivative,
    reduce_multipoint,
)
from elliptikit.kronecker import kronecker_g
from elliptikit.lattice import eisenstein_functions

P, Q, X = EllipticPoly.P(), EllipticPoly.Q(), EllipticPoly.X()
e2, g2, g3 = EllipticPoly.e2(), EllipticPoly.g2(), EllipticPoly.g3()
ONE = EllipticPoly.const(1)


def test_products():
    assert Q * Q == 4 * P**3 - g2 * P - g3
    assert P * ONE == P
    assert (P + X) ** 2 == P * P + 2 * P * X + X * X


def test_derivation_rules():
    assert derive(X) == -P - e2
    assert derive(P) == Q
    assert derive(Q) == 6 * P * P - g2 * 0.5
    assert derive(Q * Q - 4 * P**3 + g2 * P + g3).is_zero()


def test_g_lifts():
    assert g_as_elliptic_poly(0) == ONE
    assert g_as_elliptic_poly(1) == X
    assert g_as_elliptic_poly(2) == (X * X - P) * 0.5


def test_g_lifts_numerically(ctx):
    z = np.array([0.21 + 0.34j, -0.3 + 0.1j])
    for n in range(7):
        assert np.allclose(g_as_elliptic_poly(n).evaluate(ctx, z), kronecker_g(ctx, n, z), rtol=1e-11, atol=1e-11)


def test_degrees_and_symbols():
    assert filtration_degree(X) == 1 and filtration_degree(P) == 2 and filtration_degree(Q) == 3
    sym = graded_symbol(P)
    assert sym.degree == 2 and set(sym.coeffs) == {(0, 2)}
    assert all(check_graded_symbols(12).values())


def test_reduction_examples():
    r = reduce_mod_derivative(ONE)
    assert r.c == ONE and not r.lambdas and r.primitive.is_zero()
    r = reduce_mod_derivative(g_as_elliptic_poly(4))
    assert r.c.is_zero() and r.lambdas == {4: ONE} and r.primitive.is_zero()
    r = reduce_mod_derivative(P)
    assert r.c == -e2 and not r.lambdas and r.primitive == -X
    assert format_poly(r.primitive) == "-X"


def test_derivative_reduces_to_zero():
    rng = random.Random(5)
    for _ in range(10):
        v = random_elliptic_poly(rng, max_degree=5)
        r = reduce_mod_derivative(derive(v))
        assert r.c.is_zero() and not r.lambdas
        assert derive(r.primitive - v).is_zero()


@given(st.integers(0, 2**32 - 1))
def test_round_trip_and_uniqueness(seed):
    rng = random.Random(seed)
    u = random_elliptic_poly(rng, max_degree=6)
    r = reduce_mod_derivative(u)
    assert r.reconstruct() == u
    assert all(filtration_degree(lam) <= 0 for lam in r.lambdas.values())
    assert filtration_degree(r.c) <= 0
    shift = random_elliptic_poly(rng, max_degree=5, terms=3)
    other = reduce_mod_derivative(u + derive(shift))
    assert other.c == r.c and other.lambdas == r.lambdas


def test_multipoint_reduction(ctx_skew):
    s1, s2 = 0.4 + 0.45 * ctx_skew.tau, 0.7 + 0.2 * ctx_skew.tau
    m = MultiPointElement({0j: P * X, s1: Q + X**3, s2: g_as_elliptic_poly(3)})
    dec = reduce_multipoint(m)
    assert (s2, 3) in dec.lambdas
    for z in (0.15 + 0.3j, -0.2 + 0.55j):
        assert abs(m.evaluate(ctx_skew, z) - dec.evaluate_decomposition(ctx_skew, z)) < 1e-9 * max(1, abs(m.evaluate(ctx_skew, z)))


def test_expression_grammar():
    assert parse_expression("P") == P
    assert parse_expression("2*X^2 - Q + 1/2") == 2 * X * X - Q + ONE * 0.5
    assert parse_expression("(1+2i)*P**2 + e2*g2") == P * P * (1 + 2j) + e2 * g2
    assert parse_expression("0.25*X") == X * 0.25
    for bad in ("P +", "Z", "P^X", "X/P", "1/0"):
        with pytest.raises(ExpressionError):
            parse_expression(bad)


def test_evaluation_against_lattice(ctx):
    z = 0.27 + 0.19j
    E = eisenstein_functions(ctx, z, 3)
    u = P * X + Q
    expected = (E[2] - ctx.e[2]) * E[1] - 2 * E[3]
    assert abs(u.evaluate(ctx, z) - expected) < 1e-10 * abs(expected)


def test_reduction_error_type():
    assert issubclass(ReductionError, ArithmeticError)
