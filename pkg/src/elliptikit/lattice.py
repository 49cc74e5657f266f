"""Lattice Λ = Z + Zτ: Eisenstein functions, Eisenstein series and ℘.

The fast evaluator reduces z to the centred period parallelogram, splits off
the pole w^(-r) of the nearest lattice point, sums the remaining inner
(integer) direction in closed form (cotangent derivatives, or a zeta Taylor
series near the pole), and folds all rows ``n != 0`` into a single q-series.  The independent oracle is a brute-force truncated double sum in
the same order (inner index first) with an Euler-Maclaurin tail on each row;
it shares no code with the fast path.

Conventions
-----------
``E_r(z) = sum_λ (z + λ)^(-r)`` with Eisenstein summation for r = 1, 2, and
``e_r = sum_{λ != 0} λ^(-r)`` (zero for odd r).  Translation operators act by
``T_a f(z) = f(z - a)``; with this convention ``E_1(z - τ) = E_1(z) + 2πi``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import zeta

from . import _kernels

R_MAX = 24
TWO_PI_I = 2j * math.pi
_TAYLOR_TERMS = 200


class SingularityError(ValueError):
    """Raised when a meromorphic function is evaluated on (or next to) a pole."""


def _default_truncation(tau: complex) -> int:
    # rows n != 0 contribute terms ~ k^(R_MAX-1) |q|^(k/2)
    log_rho = -math.pi * tau.imag  # log |q|^(1/2); exp() would underflow for large Im τ
    k = 8
    while k < 4000 and (R_MAX - 1) * math.log(k) + k * log_rho > math.log(1e-18):
        k += 1
    return k


@dataclass(frozen=True)
class LatticeContext:
    """Immutable description of the lattice plus cached Eisenstein series.

    ``series_truncation`` is the number of q-powers kept by the fast
    evaluator; ``oracle_truncation`` the (N, M) box of the brute-force sum.
    ``pole_guard`` overrides the minimal distance to the lattice at which
    functions with poles may be evaluated.
    """

    tau: complex
    series_truncation: int | None = None
    oracle_truncation: tuple[int, int] = (2000, 2000)
    tolerance: float = 1e-10
    pole_guard: float | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        tau = complex(self.tau)
        if not tau.imag > 0:
            raise ValueError(f"tau must lie in the upper half-plane, got {tau}")
        object.__setattr__(self, "tau", tau)
        if self.series_truncation is None:
            object.__setattr__(self, "series_truncation", _default_truncation(tau))
        elif self.series_truncation < 1:
            raise ValueError("series_truncation must be positive")
        n_or, m_or = self.oracle_truncation
        object.__setattr__(self, "oracle_truncation", (int(n_or), int(m_or)))
        self._cache["dtab"] = _kernels.cot_derivative_table(R_MAX + 2)
        zetas = np.zeros(R_MAX + 2 + _TAYLOR_TERMS + 1)
        zetas[2:] = zeta(np.arange(2, zetas.shape[0], dtype=float))
        self._cache["zetas"] = zetas

    # -- derived constants ------------------------------------------------
    @property
    def q(self) -> complex:
        return complex(np.exp(TWO_PI_I * self.tau))

    @property
    def eps_sing(self) -> float:
        if self.pole_guard is not None:
            return self.pole_guard
        return 1e-6 * min(1.0, abs(self.tau))

    @property
    def e(self) -> np.ndarray:
        """Eisenstein series e_0..e_R_MAX (e_0 and odd entries are zero)."""
        if "e" not in self._cache:
            self._cache["e"] = _series_fast(self, R_MAX)
        return self._cache["e"]

    @property
    def g2(self) -> complex:
        return 60 * complex(self.e[4])

    @property
    def g3(self) -> complex:
        return 140 * complex(self.e[6])

    # -- lattice geometry --------------------------------------------------
    def reduce(self, z):
        """Split z = w + m + nτ with w in the centred period parallelogram."""
        z = np.asarray(z, dtype=complex)
        n = np.floor(z.imag / self.tau.imag + 0.5)
        w = z - n * self.tau
        m = np.floor(w.real + 0.5)
        return w - m, m, n

    def distance_to_lattice(self, z):
        """Euclidean distance from z to Λ (vectorised)."""
        w, _, _ = self.reduce(z)
        best = np.full(np.shape(w), np.inf)
        for dn in (-1, 0, 1):
            for dm in (-1, 0, 1):
                best = np.minimum(best, np.abs(w - dm - dn * self.tau))
        return best


# --------------------------------------------------------------------------
# fast evaluators
# --------------------------------------------------------------------------


def _check_regular(ctx: LatticeContext, z: np.ndarray) -> None:
    d = ctx.distance_to_lattice(z)
    if np.any(d < ctx.eps_sing):
        bad = np.ravel(z)[np.argmin(np.ravel(d))]
        raise SingularityError(f"z = {bad} lies within {ctx.eps_sing:g} of the lattice")


def regular_parts(ctx: LatticeContext, z, rmax: int):
    """Split E_r at the nearest lattice point.

    Returns ``(R, w, n)`` with z = w + m + nτ, w in the centred parallelogram
    and ``R[..., r] = E_r(w) - w^(-r)`` for r = 1..rmax (column 0 unused).
    Hence E_r(z) = w^(-r) + R_r, minus 2πi n when r = 1.
    """
    if rmax < 1:
        raise ValueError("rmax must be at least 1")
    if rmax > R_MAX + 2:
        raise ValueError(f"rmax {rmax} exceeds supported maximum {R_MAX + 2}")
    z = np.asarray(z, dtype=complex)
    flat = np.ascontiguousarray(z.ravel())
    res, w, n = _kernels.regular_block(
        flat, ctx.tau, rmax, ctx.series_truncation, ctx._cache["dtab"], ctx._cache["zetas"]
    )
    return res.reshape(z.shape + (rmax + 1,)), w.reshape(z.shape), n.reshape(z.shape)


def eisenstein_functions(ctx: LatticeContext, z, rmax: int) -> np.ndarray:
    """Table of E_r(z), r = 0..rmax, with shape ``z.shape + (rmax + 1,)``.

    Column 0 is set to 1 so that the table can be indexed directly by r in
    generating-series code.
    """
    z = np.asarray(z, dtype=complex)
    _check_regular(ctx, z.ravel())
    res, w, n = regular_parts(ctx, z, rmax)
    out = res.copy()
    inv = 1.0 / w
    p = np.ones_like(w)
    for r in range(1, rmax + 1):
        p = p * inv
        out[..., r] += p
    out[..., 1] -= TWO_PI_I * n
    out[..., 0] = 1.0
    return out


def eisenstein_function(ctx: LatticeContext, r: int, z):
    """E_r(z); scalar in, scalar out, array in, array out."""
    if r < 1:
        raise ValueError("E_r is defined for r >= 1")
    vals = eisenstein_functions(ctx, z, r)[..., r]
    return complex(vals) if np.ndim(vals) == 0 else vals


def _series_fast(ctx: LatticeContext, rmax: int) -> np.ndarray:
    q = ctx.q
    ks = np.arange(1, ctx.series_truncation + 1, dtype=float)
    lam = q**ks / (1 - q**ks)
    out = np.zeros(rmax + 1, dtype=complex)
    for r in range(2, rmax + 1, 2):
        amp = (-TWO_PI_I) ** r / math.factorial(r - 1)
        out[r] = 2 * zeta(r) + 2 * amp * np.sum(ks ** (r - 1) * lam)
    return out


def eisenstein_series(ctx: LatticeContext, r: int) -> complex:
    """e_r = sum over nonzero lattice points of λ^(-r) (Eisenstein summation for r = 2)."""
    if r < 1:
        raise ValueError("e_r is defined for r >= 1")
    if r % 2:
        return 0j
    if r <= R_MAX:
        return complex(ctx.e[r])
    return complex(_series_fast(ctx, r)[r])


def weierstrass_p(ctx: LatticeContext, z, derivative: int = 0):
    """℘^{(k)}(z) = (-1)^k (k+1)! E_{k+2}(z) - e_2 δ_{k,0}."""
    k = derivative
    if k < 0:
        raise ValueError("derivative order must be non-negative")
    vals = (-1) ** k * math.factorial(k + 1) * eisenstein_functions(ctx, z, k + 2)[..., k + 2]
    if k == 0:
        vals = vals - ctx.e[2]
    return complex(vals) if np.ndim(vals) == 0 else vals


def weierstrass_p_prime(ctx: LatticeContext, z):
    return weierstrass_p(ctx, z, 1)


# --------------------------------------------------------------------------
# independent oracle
# --------------------------------------------------------------------------


def _oracle_box(ctx: LatticeContext, r: int, N: int | None, M: int | None) -> tuple[int, int]:
    n0, m0 = ctx.oracle_truncation
    if N is None:
        N = n0 if r <= 2 else min(n0, 400)
    if M is None:
        M = m0 if r <= 2 else min(m0, 400)
    return int(N), int(M)


def oracle_eisenstein_function(ctx: LatticeContext, r: int, z, N: int | None = None, M: int | None = None):
    """Truncated double sum for E_r(z): rows |n| <= N, each row |m| <= M plus
    an Euler-Maclaurin estimate of the row tail."""
    N, M = _oracle_box(ctx, r, N, M)
    zs = np.atleast_1d(np.asarray(z, dtype=complex))
    _check_regular(ctx, zs)
    vals = np.array([_kernels.lattice_sum(complex(w), ctx.tau, r, N, M, False) for w in zs.ravel()])
    vals = vals.reshape(zs.shape)
    return complex(vals[0]) if np.ndim(z) == 0 else vals


def oracle_eisenstein_series(ctx: LatticeContext, r: int, N: int | None = None, M: int | None = None) -> complex:
    N, M = _oracle_box(ctx, r, N, M)
    return complex(_kernels.lattice_sum(0j, ctx.tau, r, N, M, True))
