"""Kronecker coefficients g_n and their symbolic shadows.

The functions g_n are the Laurent coefficients in α of

    F(z, α) = (1/α) exp( -sum_{r>=1} (-α)^r / r * (E_r(z) - e_r) ),

that is ``F = sum_n g_n α^(n-1)``.  The same exponential-of-series routine
is run once on complex arrays (numerics) and once on exact polynomials in
X = E_1 and the Ē_r = E_r - e_r (symbolic form); there is a single code path.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence, TypeVar

import numpy as np

from .exact import MPoly
from .lattice import TWO_PI_I, LatticeContext, _check_regular, eisenstein_functions, regular_parts

T = TypeVar("T")


def exp_series(a: Sequence[T], order: int, one: T, ratio: Callable = Fraction) -> list[T]:
    """Coefficients b_0..b_order of exp(sum_{k>=1} a_k t^k).

    ``a[k]`` is the coefficient of t^k (``a[0]`` is ignored).  Uses the
    recurrence k b_k = sum_{j=1}^{k} j a_j b_{k-j}.  ``ratio(j, k)`` builds
    the scalar j/k in the coefficient ring.
    """
    b = [one]
    for k in range(1, order + 1):
        acc = None
        for j in range(1, k + 1):
            term = a[j] * b[k - j] * ratio(j, k)
            acc = term if acc is None else acc + term
        b.append(acc)
    return b


def _log_coefficients(ebar: Callable[[int], T], order: int, ratio: Callable = Fraction) -> list:
    # -(-α)^r / r  ->  coefficient (-1)^(r+1) / r
    return [None] + [ebar(r) * ratio((-1) ** (r + 1), r) for r in range(1, order + 1)]


def _float_ratio(j: int, k: int) -> float:
    return j / k


# --------------------------------------------------------------------------
# numerics
# --------------------------------------------------------------------------


def g_values(ctx: LatticeContext, z, nmax: int) -> np.ndarray:
    """g_0(z), ..., g_nmax(z) stacked on the last axis.

    The pole at the nearest lattice point w is factored out: with
    E_r = w^(-r) + R_r the generating series becomes (1/α + 1/w) B(α), so
    g_n = b_n + b_(n-1)/w, which stays accurate next to the lattice where
    the raw formula cancels catastrophically.
    """
    z = np.asarray(z, dtype=complex)
    if nmax == 0:
        return np.ones(z.shape + (1,), dtype=complex)
    _check_regular(ctx, z.ravel())
    reg, w, nshift = regular_parts(ctx, z, nmax)
    e = ctx.e

    def rbar(r: int):
        val = reg[..., r] - (e[r] if r < len(e) else 0)
        return val - TWO_PI_I * nshift if r == 1 else val

    logs = _log_coefficients(rbar, nmax, _float_ratio)
    b = exp_series(logs, nmax, np.ones(z.shape, complex), _float_ratio)
    inv = 1.0 / w
    g = [b[0]] + [b[n] + b[n - 1] * inv for n in range(1, nmax + 1)]
    return np.stack(g, axis=-1)


def kronecker_g(ctx: LatticeContext, n: int, z, a: complex = 0.0):
    """(T_a g_n)(z) = g_n(z - a)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    vals = g_values(ctx, np.asarray(z, dtype=complex) - a, n)[..., n]
    return complex(vals) if np.ndim(vals) == 0 else vals


class KroneckerTable:
    """Thread-safe memo of g_n values at scalar points, keyed by (n, z)."""

    def __init__(self, ctx: LatticeContext, nmax: int = 12):
        self.ctx = ctx
        self.nmax = nmax
        self._memo: dict[complex, np.ndarray] = {}
        self._lock = threading.Lock()

    def values(self, z: complex) -> np.ndarray:
        z = complex(z)
        with self._lock:
            hit = self._memo.get(z)
        if hit is None:
            hit = g_values(self.ctx, z, self.nmax)
            with self._lock:
                self._memo[z] = hit
        return hit

    def g(self, n: int, z: complex, a: complex = 0.0) -> complex:
        if n > self.nmax:
            raise ValueError(f"table holds n <= {self.nmax}")
        return complex(self.values(complex(z) - a)[n])


# --------------------------------------------------------------------------
# symbolic form
# --------------------------------------------------------------------------


@lru_cache(maxsize=None)
def g_symbolic(n: int) -> MPoly:
    """g_n as an exact polynomial in X, Ē_2, ..., Ē_n.

    Variable 0 is X; variable r - 1 is Ē_r for r >= 2.  Ē_r has weight r.
    """
    nv = max(n, 1)

    def ebar(r: int) -> MPoly:
        return MPoly.var(nv, r - 1, Fraction(1))

    coeffs = exp_series(_log_coefficients(ebar, n), n, MPoly.const(nv, Fraction(1)))
    return coeffs[n]


def symbolic_weights(n: int) -> tuple[int, ...]:
    return tuple(range(1, max(n, 1) + 1))


def evaluate_symbolic_g(ctx: LatticeContext, n: int, z):
    """Evaluate ``g_symbolic(n)`` by substituting numerical E_r and e_r."""
    z = np.asarray(z, dtype=complex)
    nv = max(n, 1)
    table = eisenstein_functions(ctx, z, nv)
    vals = [table[..., 1]] + [table[..., r] - ctx.e[r] for r in range(2, nv + 1)]
    return g_symbolic(n).evaluate(vals)


def graded_symbol_of_g(n: int) -> MPoly:
    """Top-weight part of g_n with X -> X and Ē_r -> Y^r, as a polynomial in (X, Y)."""
    poly = g_symbolic(n)
    top = poly.weighted_part(symbolic_weights(n), n)
    nv = max(n, 1)
    images = [MPoly.var(2, 0, Fraction(1))] + [MPoly.var(2, 1, Fraction(1)) ** r for r in range(2, nv + 1)]
    return top.substitute(images)


def closed_form_symbol(n: int) -> MPoly:
    """(X - Y)^(n-1) (X + (n-1) Y) / n!."""
    X = MPoly.var(2, 0, Fraction(1))
    Y = MPoly.var(2, 1, Fraction(1))
    if n == 0:
        return MPoly.const(2, Fraction(1))
    return (X - Y) ** (n - 1) * (X + Y * (n - 1)) * Fraction(1, math.factorial(n))
