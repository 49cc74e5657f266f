"""Realise three distinct branch points as affine images of half-period values of ℘.

Given (a1, a2, a3) we look for τ and a != 0, b with

    a ℘(1/2 | τ) + b = a1,   a ℘(τ/2 | τ) + b = a2,   a ℘((1+τ)/2 | τ) + b = a3.

The cross-ratio λ(τ) = (℘(τ/2) - ℘(1/2)) / (℘((1+τ)/2) - ℘(1/2)) must equal
λ* = (a2 - a1)/(a3 - a1).  We solve λ(τ0) = μ by Newton's method for τ0 in the
standard fundamental domain F, for each μ in the S3-orbit of λ*, and map
τ0 to τ = γ τ0 with γ one of six coset representatives of Γ(2) in SL2(Z)
chosen so that λ(τ) = λ* exactly.  Finally τ is moved by Γ(2) (which fixes λ)
into the domain |Re τ| <= 1, |τ ± 1/2| >= 1/2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .lattice import LatticeContext, weierstrass_p


class UniformizationError(RuntimeError):
    """Newton's method did not reach the requested cross-ratio."""


@dataclass
class UniformizationResult:
    tau: complex
    a: complex
    b: complex
    a_three_halves: complex
    branch_points: tuple[complex, complex, complex]
    residuals: dict = field(default_factory=dict)

    def context(self) -> LatticeContext:
        return LatticeContext(self.tau)

    def to_dict(self) -> dict:
        return {
            "tau": self.tau,
            "a": self.a,
            "b": self.b,
            "a_three_halves": self.a_three_halves,
            "residuals": dict(self.residuals),
        }


def half_period_values(tau: complex) -> tuple[complex, complex, complex]:
    """℘(1/2), ℘(τ/2), ℘((1+τ)/2) for the lattice Z + Zτ."""
    ctx = LatticeContext(tau)
    v = weierstrass_p(ctx, np.array([0.5, tau / 2, (1 + tau) / 2]))
    return complex(v[0]), complex(v[1]), complex(v[2])


def modular_lambda(tau: complex) -> complex:
    e1, e2, e3 = half_period_values(tau)
    return (e2 - e1) / (e3 - e1)


def j_from_lambda(lam: complex) -> complex:
    return 256 * (1 - lam + lam**2) ** 3 / (lam**2 * (1 - lam) ** 2)


def j_invariant(tau: complex) -> complex:
    """1728 g2^3 / (g2^3 - 27 g3^2), independent of λ."""
    ctx = LatticeContext(tau)
    g2, g3 = ctx.g2, ctx.g3
    return 1728 * g2**3 / (g2**3 - 27 * g3**2)


def s3_orbit(lam: complex) -> list[complex]:
    return [lam, 1 - lam, 1 / lam, 1 / (1 - lam), lam / (lam - 1), (lam - 1) / lam]


# coset representatives of Γ(2) in SL2(Z)
_COSETS = (
    ((1, 0), (0, 1)),
    ((1, 1), (0, 1)),
    ((0, -1), (1, 0)),
    ((0, -1), (1, 1)),
    ((1, -1), (1, 0)),
    ((1, 0), (1, 1)),
)


def _mobius(g, tau: complex) -> complex:
    (a, b), (c, d) = g
    return (a * tau + b) / (c * tau + d)


def _reduce_gamma2(tau: complex, max_steps: int = 200) -> complex:
    """Move τ by Γ(2) into |Re τ| <= 1, |τ ± 1/2| >= 1/2."""
    for _ in range(max_steps):
        shift = math.floor((tau.real + 1) / 2)
        tau -= 2 * shift
        if abs(tau - 0.5) < 0.5 - 1e-14:
            tau = tau / (1 - 2 * tau)  # [[1, 0], [-2, 1]]
        elif abs(tau + 0.5) < 0.5 - 1e-14:
            tau = tau / (1 + 2 * tau)  # [[1, 0], [2, 1]]
        else:
            return tau
    return tau


def _newton(target: complex, seed: complex, tol: float, max_iter: int = 60) -> complex | None:
    tau = seed
    f = modular_lambda(tau) - target
    for _ in range(max_iter):
        h = 1e-6 * max(1.0, abs(tau.imag))
        deriv = (modular_lambda(tau + h) - modular_lambda(tau - h)) / (2 * h)
        if deriv == 0:
            return None
        step = -f / deriv
        damp = 1.0
        while True:
            cand = tau + damp * step
            if cand.imag > 0.05:
                fc = modular_lambda(cand) - target
                if abs(fc) < abs(f) or damp < 1e-3:
                    break
            damp *= 0.5
            if damp < 1e-4:
                return None
        tau, f = cand, fc
        if abs(f) <= tol * max(1.0, abs(target)):
            return tau
    return None


def _seed_grid(n: int = 16) -> np.ndarray:
    xs = np.linspace(-0.5, 0.5, n)
    ys = np.geomspace(math.sqrt(3) / 2, 6.0, n)
    return (xs[None, :] + 1j * ys[:, None]).ravel()


def solve_lambda(target: complex, tol: float = 1e-13) -> complex:
    """τ with λ(τ) = target, in the Γ(2) domain described in the module docstring."""
    if target in (0, 1):
        raise ValueError("λ = 0 or 1 means two branch points coincide")
    seeds = _seed_grid()
    grid = np.array([modular_lambda(t) for t in seeds])
    best = None
    for mu in s3_orbit(target):
        order = np.argsort(np.abs(grid - mu))
        for idx in order[:4]:
            tau0 = _newton(mu, complex(seeds[idx]), tol)
            if tau0 is None:
                continue
            for g in _COSETS:
                tau = _mobius(g, tau0)
                err = abs(modular_lambda(tau) - target)
                if best is None or err < best[0]:
                    best = (err, tau)
            if best[0] <= 1e3 * tol * max(1.0, abs(target)):
                break
        if best is not None and best[0] <= 1e3 * tol * max(1.0, abs(target)):
            break
    if best is None or best[0] > 1e-9 * max(1.0, abs(target)):
        raise UniformizationError(f"no τ found for λ = {target}")
    tau = _reduce_gamma2(best[1])
    # polish on the final representative
    polished = _newton(target, tau, tol, max_iter=8)
    return polished if polished is not None and abs(polished - tau) < 1e-6 else tau


def uniformize(a1: complex, a2: complex, a3: complex, tol: float = 1e-13) -> UniformizationResult:
    a1, a2, a3 = complex(a1), complex(a2), complex(a3)
    scale = max(abs(a1 - a2), abs(a2 - a3), abs(a1 - a3))
    if min(abs(a1 - a2), abs(a2 - a3), abs(a1 - a3)) <= 1e-14 * max(1.0, scale):
        raise ValueError("branch points must be pairwise distinct")
    target = (a2 - a1) / (a3 - a1)
    tau = solve_lambda(target, tol)
    e1, e2, e3 = half_period_values(tau)
    a = (a1 - a3) / (e1 - e3)
    b = a1 - a * e1
    a32 = cmath.exp(1.5 * cmath.log(a))
    rel = max(1.0, scale)
    residuals = {
        "a1": abs(a * e1 + b - a1) / rel,
        "a2": abs(a * e2 + b - a2) / rel,
        "a3": abs(a * e3 + b - a3) / rel,
        "lambda": abs((e2 - e1) / (e3 - e1) - target),
        "symmetric": abs(a * (e1 + e2 + e3) + 3 * b - (a1 + a2 + a3)) / rel,
    }
    return UniformizationResult(tau, a, b, a32, (a1, a2, a3), residuals)


def iso_point(u: UniformizationResult, z: complex) -> tuple[complex, complex, complex]:
    """[a℘(z) + b : a^(3/2) ℘'(z)/2 : 1], or [0 : 1 : 0] on the lattice."""
    ctx = u.context()
    if ctx.distance_to_lattice(np.array([complex(z)]))[0] < 1e-12:
        return (0j, 1 + 0j, 0j)
    p = complex(weierstrass_p(ctx, complex(z)))
    dp = complex(weierstrass_p(ctx, complex(z), 1))
    return (u.a * p + u.b, 0.5 * u.a_three_halves * dp, 1 + 0j)


def curve_residual(u: UniformizationResult, point: tuple[complex, complex, complex]) -> float:
    """|Y^2 T - (X - a1 T)(X - a2 T)(X - a3 T)| relative to the size of the terms."""
    X, Y, T = point
    a1, a2, a3 = u.branch_points
    lhs = Y**2 * T
    rhs = (X - a1 * T) * (X - a2 * T) * (X - a3 * T)
    return abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))
