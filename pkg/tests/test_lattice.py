import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from elliptikit import _kernels
from elliptikit.lattice import (
    TWO_PI_I,
    LatticeContext,
    SingularityError,
    eisenstein_function,
    eisenstein_functions,
    eisenstein_series,
    oracle_eisenstein_function,
    oracle_eisenstein_series,
    weierstrass_p,
)

# Values of the brute-force lattice sum (N = M = 2000, Euler-Maclaurin row
# tails), frozen once; the fast evaluator shares no code with it.
ORACLE_VALUES = {
    (1j, 1, 0.3 + 0.1j): 2.0016596059866942 - 1.3971310452330412j,
    (1j, 2, 0.3 + 0.1j): 11.886964108172158 - 5.404936803175014j,
    (1j, 3, 0.21 - 0.17j): -24.85899518335409 + 46.75934437217131j,
    (1j, 4, 0.3 + 0.1j): 31.51212002153897 - 94.53636006461693j,
    (0.5 + 1.5j, 1, 0.3 + 0.1j): 1.9736264667153096 - 1.3919927880655942j,
    (0.5 + 1.5j, 2, 0.3 + 0.1j): 11.828793277835075 - 5.502673441134936j,
    (0.5 + 1.5j, 3, 0.21 - 0.17j): -24.089186172730127 + 46.6176199001844j,
    (0.5 + 1.5j, 4, 0.3 + 0.1j): 31.911316822807894 - 93.90372655522349j,
}


@pytest.mark.parametrize("key", list(ORACLE_VALUES), ids=lambda k: f"tau={k[0]},r={k[1]}")
def test_fast_matches_frozen_oracle(key):
    tau, r, z = key
    assert abs(eisenstein_function(LatticeContext(tau), r, z) - ORACLE_VALUES[key]) < 1e-10


def test_odd_series_vanish(ctx_square):
    assert eisenstein_series(ctx_square, 3) == 0
    assert eisenstein_series(ctx_square, 5) == 0


def test_degenerate_lattice_limit():
    # Im τ so large that |q| underflows; only the n = 0 row survives, e_2 = 2 ζ(2)
    ctx = LatticeContext(0.2 + 300j)
    assert abs(eisenstein_series(ctx, 2) - math.pi**2 / 3) < 1e-12


def test_square_lattice_closed_forms(ctx_square):
    # lemniscatic lattice: e_2 = pi, g2 = Gamma(1/4)^8 / (16 pi^2), g3 = 0
    assert abs(eisenstein_series(ctx_square, 2) - math.pi) < 1e-13
    assert abs(ctx_square.g2 - math.gamma(0.25) ** 8 / (16 * math.pi**2)) < 1e-10
    assert abs(ctx_square.g3) < 1e-10


def test_series_against_oracle(ctx_square):
    assert abs(eisenstein_series(ctx_square, 2) - oracle_eisenstein_series(ctx_square, 2)) < 1e-8
    assert abs(eisenstein_series(ctx_square, 4) - oracle_eisenstein_series(ctx_square, 4)) < 1e-10


def test_oracle_truncation_converges(ctx_square):
    z = 0.3 + 0.1j
    a = oracle_eisenstein_function(ctx_square, 4, z, N=200, M=200)
    b = oracle_eisenstein_function(ctx_square, 4, z, N=400, M=400)
    assert abs(a - b) < 1e-8


def test_e1_at_half_is_real(ctx_square):
    assert abs(eisenstein_function(ctx_square, 1, 0.5).imag) < 1e-10
    assert abs(oracle_eisenstein_function(ctx_square, 1, 0.5, N=4000, M=4000).imag) < 1e-9


def test_translation_convention(ctx):
    z = 0.31 + 0.17j
    e1 = eisenstein_function(ctx, 1, z)
    assert abs(eisenstein_function(ctx, 1, z + 1) - e1) < 1e-12
    # T_a f(z) = f(z - a): shifting the argument by -tau adds 2 pi i
    assert abs(eisenstein_function(ctx, 1, z - ctx.tau) - e1 - TWO_PI_I) < 1e-12
    assert abs(eisenstein_function(ctx, 1, z + ctx.tau) - e1 + TWO_PI_I) < 1e-12


def test_parity(ctx):
    z = 0.23 - 0.11j
    assert abs(eisenstein_function(ctx, 2, -z) - eisenstein_function(ctx, 2, z)) < 1e-11
    assert abs(eisenstein_function(ctx, 3, -z) + eisenstein_function(ctx, 3, z)) < 1e-10


def test_weierstrass_relations(ctx):
    z = np.array([0.13 + 0.29j, 0.4 - 0.2j, -0.35 + 0.6j])
    p = weierstrass_p(ctx, z)
    dp = weierstrass_p(ctx, z, 1)
    E = eisenstein_functions(ctx, z, 3)
    assert np.allclose(p, E[:, 2] - ctx.e[2], rtol=0, atol=1e-12)
    assert np.allclose(dp, -2 * E[:, 3], rtol=0, atol=1e-12)
    halves = weierstrass_p(ctx, np.array([0.5, ctx.tau / 2, (1 + ctx.tau) / 2]))
    rhs = 4 * np.prod([p - h for h in halves], axis=0)
    assert np.max(np.abs(dp**2 - rhs) / np.abs(dp**2)) < 1e-8
    # ℘'^2 = 4℘^3 - g2 ℘ - g3
    assert np.max(np.abs(dp**2 - (4 * p**3 - ctx.g2 * p - ctx.g3)) / np.abs(dp**2)) < 1e-10


def test_singularity_and_bad_tau(ctx_square):
    with pytest.raises(SingularityError):
        eisenstein_function(ctx_square, 2, 1 + 1j)
    with pytest.raises(ValueError):
        LatticeContext(1 - 1j)
    with pytest.raises(ValueError):
        eisenstein_function(ctx_square, 0, 0.3)


@given(
    x=st.floats(-0.45, 0.45),
    y=st.floats(-0.45, 0.45),
    m=st.integers(-3, 3),
    n=st.integers(-2, 2),
    r=st.integers(2, 8),
)
def test_periodicity_property(ctx_skew, x, y, m, n, r):
    z = x + y * ctx_skew.tau
    if ctx_skew.distance_to_lattice(np.array([z]))[0] < 0.05:
        return
    a = eisenstein_function(ctx_skew, r, z)
    b = eisenstein_function(ctx_skew, r, z + m + n * ctx_skew.tau)
    assert abs(a - b) <= 1e-9 * max(1.0, abs(a))


@pytest.mark.skipif(not _kernels.USE_NUMBA, reason="numba backend disabled")
def test_numba_and_numpy_kernels_agree(ctx_skew):
    rng = np.random.default_rng(1)
    zs = np.ascontiguousarray(rng.uniform(-0.5, 0.5, 200) + 1j * rng.uniform(-0.7, 0.7, 200))
    args = (zs, ctx_skew.tau, 6, ctx_skew.series_truncation, ctx_skew._cache["dtab"], ctx_skew._cache["zetas"])
    a = _kernels.regular_block_py(*args)
    b = _kernels.regular_block_nb(*args)
    assert np.allclose(a[0], b[0], rtol=1e-12, atol=1e-12)
    assert np.allclose(a[1], b[1]) and np.array_equal(a[2], b[2])
    s = (0.3 + 0.2j, ctx_skew.tau, 3, 100, 100, False)
    assert abs(_kernels.lattice_sum_py(*s) - _kernels.lattice_sum_nb(*s)) < 1e-12
