"""Regularised iterated integrals Γ̃ from the tangential base point at 0.

Two independent routes compute Γ̃(word; z):

* ``gamma_shuffle`` writes the word as sum_k c_k ⧢ (1;0)^{⧢k} with every c_k
  free of a leading (1;0).  Words in c_k have integrands that stay bounded at
  0, so their iterated integrals can start at 0 itself; the letter (1;0)
  contributes G(z) = lim (∫_t^z g_1 dz + log t) per power of X.
* ``gamma_tangential`` integrates from small real t > 0, fits the result as a
  polynomial in log t plus t-suppressed corrections and keeps the constant.

A path for Γ̃ is a polygon whose first vertex is 0 and whose first segment
runs along the positive real axis.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .itint import (
    DEFAULT_TOL,
    FormSpec,
    Path,
    PathError,
    Punctures,
    evaluate_forms,
    propagate,
    suffix_integrals,
)
from .lattice import TWO_PI_I, LatticeContext
from .shuffle import X0, Letter, ShuffleElement, antipode_word, leading_run, star_decompose

Word = tuple


class RegularizationError(RuntimeError):
    """The tangential fit did not reproduce its samples."""


@dataclass(frozen=True)
class TangentialConfig:
    """Sampling for the tangential route.

    ``delta`` bounds the sample points (default: half the distance from 0 to
    the nearest other puncture, at most 1/2).  Unless ``t_samples`` is given,
    ``samples`` points are spread geometrically from min(delta, first vertex)/2
    down to ``t_min``.  The fit uses a polynomial of degree ``fit_degree_cap``
    (default: the leading (1;0)-run of the word) in log t for the constant-in-t
    part and corrections t^m P_m(log t) for m <= ``remainder_order``.
    """

    delta: float | None = None
    t_samples: tuple[float, ...] | None = None
    fit_degree_cap: int | None = None
    samples: int = 64
    t_min: float = 1e-11
    remainder_order: int = 4
    fit_tol: float = 1e-6
    quad_tol: float = 1e-14


@dataclass
class TangentialResult:
    value: complex
    log_polynomial: list[complex]
    fit_residual: float
    samples: list[float] = field(default_factory=list)


# --------------------------------------------------------------------------
# validation helpers
# --------------------------------------------------------------------------


def default_delta(ctx: LatticeContext, punctures: Punctures) -> float:
    pts = punctures.lattice_points_near(ctx, 0j, 0j, pad=2.0)
    pts = pts[np.abs(pts) > 1e-14]
    return min(0.5, 0.5 * float(np.abs(pts).min()))


def check_word(word: Sequence[Letter], punctures: Punctures) -> None:
    for letter in word:
        if not isinstance(letter, Letter):
            raise TypeError(f"not a letter: {letter!r}")
        if not any(abs(letter.a - s) < 1e-12 for s in punctures.reps):
            raise ValueError(f"letter {letter!r} uses a point outside the puncture representatives")


def check_gamma_path(ctx: LatticeContext, punctures: Punctures, path: Path, eps: float | None = None) -> None:
    if path.start != 0:
        raise PathError("paths for Γ̃ must start at the tangential base point 0")
    first = path.vertices[1]
    if first.imag != 0 or first.real <= 0:
        raise PathError("paths for Γ̃ must leave 0 along the positive real axis")
    path.validate(ctx, punctures, eps if eps is not None else 10 * ctx.eps_sing, skip_start=True)


def standard_path(ctx: LatticeContext, punctures: Punctures, z: complex, delta: float | None = None) -> Path:
    """Path 0 -> d -> z with d = delta / 2 on the positive real axis."""
    d = 0.5 * (delta if delta is not None else default_delta(ctx, punctures))
    path = Path((0j, complex(d), complex(z))) if complex(z) != d else Path((0j, complex(d)))
    check_gamma_path(ctx, punctures, path)
    return path


def _forms(word: Sequence[Letter]) -> list[FormSpec]:
    return [FormSpec.from_letter(x) for x in word]


# --------------------------------------------------------------------------
# shuffle route
# --------------------------------------------------------------------------


def log_along(path: Path) -> complex:
    """Branch of log z continued along a path leaving 0 along the positive reals."""
    segs = path.segments()
    value = complex(math.log(segs[0][1].real))
    for a, b in segs[1:]:
        value += cmath.log(b / a)
    return value


def G_value(ctx: LatticeContext, path: Path, tol: float = DEFAULT_TOL) -> complex:
    """G(z) = lim_{t->0} (∫_t^z g_1 dz + log t) at the end of ``path``."""
    reg = propagate(ctx, [FormSpec("g1reg")], path, tol=tol)[1]
    return complex(reg + log_along(path))


def regular_limit(ctx: LatticeContext, forms: Sequence[FormSpec], path: Path, tol: float = DEFAULT_TOL) -> complex:
    """Iterated integral starting exactly at 0; the first form must be regular there."""
    if not forms:
        return 1.0 + 0j
    return complex(propagate(ctx, forms, path, tol=tol)[-1])


def gamma_shuffle(
    ctx: LatticeContext,
    word: Sequence[Letter],
    path: Path,
    punctures: Punctures | None = None,
    tol: float = DEFAULT_TOL,
) -> complex:
    """Γ̃(word) at the end of ``path`` via shuffle regularisation."""
    word = tuple(word)
    punctures = punctures or Punctures()
    check_word(word, punctures)
    check_gamma_path(ctx, punctures, path)
    return _shuffle_value(ctx, word, path, tol)


def _shuffle_value(ctx: LatticeContext, word: Word, path: Path, tol: float) -> complex:
    poly = star_decompose(ShuffleElement.word(word))
    g_val = G_value(ctx, path, tol) if poly.degree >= 1 else 0j
    total = 0j
    memo: dict[Word, complex] = {}
    for k, coeff in enumerate(poly.coeffs):
        for w, c in coeff.terms.items():
            if w not in memo:
                memo[w] = regular_limit(ctx, _forms(w), path, tol)
            total += complex(c) * memo[w] * g_val**k
    return total


def gamma_prefixes(
    ctx: LatticeContext,
    word: Sequence[Letter],
    path: Path,
    punctures: Punctures | None = None,
    tol: float = DEFAULT_TOL,
) -> np.ndarray:
    """Γ̃ of every prefix word[:k], k = 0..len(word), at the end of ``path``."""
    word = tuple(word)
    return np.array([gamma_shuffle(ctx, word[:k], path, punctures, tol) for k in range(len(word) + 1)])


# --------------------------------------------------------------------------
# tangential route
# --------------------------------------------------------------------------


def gamma_tangential(
    ctx: LatticeContext,
    word: Sequence[Letter],
    path: Path,
    punctures: Punctures | None = None,
    cfg: TangentialConfig = TangentialConfig(),
    tol: float = DEFAULT_TOL,
) -> TangentialResult:
    """Γ̃(word) as the constant term of the log-polynomial asymptotics in t."""
    word = tuple(word)
    punctures = punctures or Punctures()
    check_word(word, punctures)
    check_gamma_path(ctx, punctures, path)
    forms = _forms(word)
    n = len(word)
    first = path.vertices[1].real
    delta = cfg.delta if cfg.delta is not None else default_delta(ctx, punctures)
    deg = leading_run(word, X0)
    cap = deg if cfg.fit_degree_cap is None else cfg.fit_degree_cap
    if cap < deg:
        raise ValueError(f"fit_degree_cap {cap} is below the degree {deg} of the word")
    if cfg.t_samples is not None:
        ts = np.sort(np.asarray(cfg.t_samples, dtype=float))[::-1]
    else:
        ts = np.geomspace(0.5 * min(delta, first), cfg.t_min, cfg.samples)
    if ts.size < cap + 3:
        raise ValueError(f"need at least {cap + 3} samples, got {ts.size}")
    if ts[-1] <= 0 or ts[0] >= min(delta, first):
        raise ValueError("samples must lie in (0, min(delta, first vertex))")
    t_max = ts[0]
    # the samples sit far inside the usual pole guard
    fine = replace(ctx, pole_guard=min(ctx.eps_sing, 0.5 * ts[-1]))

    # Chen: I_t(w)(z) = sum_k I_t(w[:k])(first) * I_first(w[k:])(z)
    if len(path.vertices) > 2:
        tail = suffix_integrals(ctx, forms, Path(path.vertices[1:]), cfg.quad_tol)
    else:
        tail = np.zeros(n + 1, dtype=complex)
        tail[n] = 1.0
    data = np.array(
        [sum(propagate(fine, forms, Path((complex(t), complex(first))), tol=cfg.quad_tol) * tail) for t in ts]
    )

    # constant-in-t part: degree <= leading run; t^m corrections may carry
    # one log per singular letter anywhere in the word.  Chebyshev polynomials
    # in the rescaled log keep the least-squares system well conditioned.
    singular = sum(1 for x in word if x == X0)
    logs = np.log(ts)
    domain = [float(logs.min()), float(logs.max())]
    cheb = np.polynomial.chebyshev
    x = (2 * logs - domain[0] - domain[1]) / (domain[1] - domain[0])
    cols, keys = [], []
    for m in range(cfg.remainder_order + 1):
        jmax = cap if m == 0 else singular
        basis = cheb.chebvander(x, jmax)
        for j in range(jmax + 1):
            cols.append((ts / t_max) ** m * basis[:, j])
            keys.append((m, j))
    A = np.array(cols).T
    coef, *_ = np.linalg.lstsq(A, data, rcond=None)
    fitted = A @ coef
    resid = float(np.max(np.abs(fitted - data)) / (float(np.max(np.abs(data))) or 1.0))
    if resid > cfg.fit_tol:
        raise RegularizationError(f"tangential fit residual {resid:.3g} exceeds {cfg.fit_tol:g}")
    series = cheb.Chebyshev([complex(coef[keys.index((0, j))]) for j in range(cap + 1)], domain=domain)
    log_poly = [complex(c) for c in series.convert(kind=np.polynomial.Polynomial).coef]
    log_poly += [0j] * (cap + 1 - len(log_poly))
    value = complex(series(0.0))
    return TangentialResult(value, log_poly, resid, list(map(float, ts)))


# --------------------------------------------------------------------------
# identities
# --------------------------------------------------------------------------


def gamma_derivative_check(
    ctx: LatticeContext,
    word: Sequence[Letter],
    path: Path,
    punctures: Punctures | None = None,
    h: float = 1e-3,
    tol: float = DEFAULT_TOL,
) -> dict:
    """Compare d/dz Γ̃(word) with T_{a_r}(g_{n_r}) Γ̃(word minus last letter).

    The derivative is a five-point central difference of independent
    shuffle-route evaluations at z ± h, z ± 2h.
    """
    word = tuple(word)
    if not word:
        raise ValueError("the derivative identity needs a non-empty word")
    z = path.end
    vals = {}
    for k in (-2, -1, 1, 2):
        vals[k] = gamma_shuffle(ctx, word, path.then(Path((z, z + k * h))), punctures, tol)
    deriv = (-vals[2] + 8 * vals[1] - 8 * vals[-1] + vals[-2]) / (12 * h)
    coeff = complex(evaluate_forms(ctx, [FormSpec.from_letter(word[-1])], np.array([z]))[0, 0])
    rhs = coeff * gamma_shuffle(ctx, word[:-1], path, punctures, tol)
    rel = abs(deriv - rhs) / max(1.0, abs(rhs))
    return {"lhs": deriv, "rhs": rhs, "rel_error": rel}


def basepoint_transport(
    ctx: LatticeContext,
    word: Sequence[Letter],
    path0: Path,
    path1: Path,
    punctures: Punctures | None = None,
    tol: float = DEFAULT_TOL,
) -> tuple[complex, complex]:
    """Γ̃(word)(z) against sum over deconcatenations Γ̃(w1)(z0) I_{z0}(w2)(z).

    ``path0`` runs 0 -> z0 and ``path1`` runs z0 -> z.
    """
    word = tuple(word)
    lhs = gamma_shuffle(ctx, word, path0.then(path1), punctures, tol)
    heads = gamma_prefixes(ctx, word, path0, punctures, tol)
    tails = suffix_integrals(ctx, _forms(word), path1, tol)
    return lhs, complex(np.sum(heads * tails))


def based_from_tangential(
    ctx: LatticeContext,
    word: Sequence[Letter],
    path0: Path,
    path1: Path,
    punctures: Punctures | None = None,
    tol: float = DEFAULT_TOL,
) -> tuple[complex, complex]:
    """I_{z0}(word)(z) against sum Γ̃(S(w1))(z0) Γ̃(w2)(z), S the antipode."""
    word = tuple(word)
    direct = complex(propagate(ctx, _forms(word), path1, tol=tol)[-1])
    full = path0.then(path1)
    total = 0j
    for k in range(len(word) + 1):
        head, sign = antipode_word(word[:k])
        total += sign * gamma_shuffle(ctx, head, path0, punctures, tol) * gamma_shuffle(
            ctx, word[k:], full, punctures, tol
        )
    return direct, total


def fe_transport_check(
    ctx: LatticeContext,
    word: Sequence[Letter],
    position: int,
    path: Path,
    punctures: Punctures | None = None,
    tol: float = DEFAULT_TOL,
) -> tuple[complex, complex]:
    """Shift the letter at ``position`` from (n; a) to (n; a + τ).

    Returns Γ̃ of the shifted word integrated directly, against the expansion
    ω_{n,a+τ} = sum_{k<=n} (2πi)^(n-k)/(n-k)! ω_{k,a} applied letter-wise.
    """
    word = tuple(word)
    punctures = punctures or Punctures()
    check_word(word, punctures)
    check_gamma_path(ctx, punctures, path)
    letter = word[position]
    if letter.n == 0:
        raise ValueError("ω_{0,a} = dz does not depend on a")
    if letter.a == 0:
        raise ValueError("shifting a = 0 by τ moves a pole onto the base point")
    shifted = word[:position] + (Letter(letter.n, letter.a + ctx.tau),) + word[position + 1 :]
    lhs = _shuffle_value(ctx, shifted, path, tol)
    rhs = 0j
    for k in range(letter.n + 1):
        coeff = TWO_PI_I ** (letter.n - k) / math.factorial(letter.n - k)
        repl = Letter(k, letter.a if k else 0)
        rhs += coeff * _shuffle_value(ctx, word[:position] + (repl,) + word[position + 1 :], path, tol)
    return lhs, rhs


def gamma_at_points(
    ctx: LatticeContext,
    word: Sequence[Letter],
    hub_path: Path,
    points: Sequence[complex],
    punctures: Punctures | None = None,
    tol: float = DEFAULT_TOL,
) -> np.ndarray:
    """Γ̃ of every prefix of ``word`` at each point, reached by straight lines from the hub.

    ``hub_path`` runs from 0 to the hub; the branch at each point is the one
    obtained by continuing along the segment hub -> point.  Returns an array of
    shape (len(points), len(word) + 1).
    """
    word = tuple(word)
    punctures = punctures or Punctures()
    hub = hub_path.end
    start = gamma_prefixes(ctx, word, hub_path, punctures, tol)
    forms = _forms(word)
    out = np.empty((len(points), len(word) + 1), dtype=complex)
    for i, p in enumerate(points):
        if complex(p) == hub:
            out[i] = start
            continue
        seg = Path((hub, complex(p)))
        seg.validate(ctx, punctures, 10 * ctx.eps_sing)
        out[i] = propagate(ctx, forms, seg, y0=start, tol=tol)
    return out
