import math

import numpy as np
import pytest
import sympy

from elliptikit.kronecker import (
    closed_form_symbol,
    evaluate_symbolic_g,
    g_symbolic,
    g_values,
    graded_symbol_of_g,
    kronecker_g,
)
from elliptikit.lattice import TWO_PI_I, eisenstein_functions

Z = np.array([0.27 + 0.31j, -0.4 + 0.15j, 0.05 + 0.6j])


def test_low_order_values(ctx):
    g = g_values(ctx, Z, 3)
    E = eisenstein_functions(ctx, Z, 3)
    assert np.all(g[:, 0] == 1)
    assert np.allclose(g[:, 1], E[:, 1], rtol=0, atol=1e-12)
    assert np.allclose(g[:, 2], (E[:, 1] ** 2 - E[:, 2] + ctx.e[2]) / 2, rtol=1e-12, atol=1e-12)


def test_tau_shift_of_g3(ctx):
    z = 0.21 + 0.33j
    lhs = kronecker_g(ctx, 3, z - ctx.tau) - kronecker_g(ctx, 3, z)
    rhs = sum(TWO_PI_I ** (3 - k) / math.factorial(3 - k) * kronecker_g(ctx, k, z) for k in range(3))
    assert abs(lhs - rhs) < 1e-8


def test_translated_argument(ctx):
    s = 0.4 + 0.45 * ctx.tau
    assert kronecker_g(ctx, 2, 0.1 + 0.2j, s) == kronecker_g(ctx, 2, 0.1 + 0.2j - s)


def test_symbolic_and_numeric_routes_agree(ctx):
    for n in range(7):
        assert abs(evaluate_symbolic_g(ctx, n, 0.3 + 0.2j) - kronecker_g(ctx, n, 0.3 + 0.2j)) < 1e-11


def test_symbolic_forms():
    assert str(g_symbolic(0)) == "(1)"
    assert str(g_symbolic(1)) == "(1)*x0"
    assert str(g_symbolic(2)) == "(1/2)*x0^2 + (-1/2)*x1"


def test_stable_near_the_pole(ctx):
    # g_n = b_n + b_(n-1)/w: compare with the raw recursion a little further out
    near = 1e-5 + 1e-5j
    assert np.all(np.isfinite(g_values(ctx, np.array([near]), 6)))
    assert abs(kronecker_g(ctx, 1, near) - eisenstein_functions(ctx, near, 1)[1]) < 1e-6


@pytest.mark.parametrize("n", [0, 1, 2, 5, 9])
def test_graded_symbols_match_expansion(n):
    X, Y = sympy.symbols("X Y")
    expected = sympy.Integer(1) if n == 0 else sympy.expand((X - Y) ** (n - 1) * (X + (n - 1) * Y) / sympy.factorial(n))
    got = graded_symbol_of_g(n)
    assert got.terms == closed_form_symbol(n).terms
    poly = sympy.Poly(expected, X, Y)
    mine = {tuple(m): sympy.Rational(c.numerator, c.denominator) for m, c in got.terms.items()}
    assert mine == {m: c for m, c in poly.terms()}
