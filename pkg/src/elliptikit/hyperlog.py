"""Elliptic hyperlogarithms and their relations with Γ̃ in the one-puncture case.

The alphabet is S ⊔ {⋆}: the letter ⋆ stands for α_⋆ = dz, the puncture 0 for
β = E_2 dz and a puncture s != 0 for α_s = (g_1(z - s) - g_1(z)) dz.  All of
these forms are regular away from pr^{-1}(S), so hyperlogarithms are ordinary
iterated integrals from a base point z0 that is not a puncture.
"""

from __future__ import annotations

import math
from cmath import exp as cmath_exp
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .gamma import gamma_at_points, gamma_prefixes, standard_path
from .itint import DEFAULT_TOL, FormSpec, Path, PathError, Punctures, propagate, segment_distance
from .kronecker import kronecker_g
from .lattice import LatticeContext, eisenstein_functions
from .shuffle import Letter, parse_point

STAR = "*"


def hl_form(letter, punctures: Punctures) -> FormSpec:
    if letter == STAR:
        return FormSpec.dz()
    s = complex(letter)
    if not any(abs(s - r) < 1e-12 for r in punctures.reps):
        raise ValueError(f"hyperlogarithm letter {letter!r} is not a puncture representative")
    if s == 0:
        return FormSpec("E2")
    return FormSpec("g1diff", 1, s)


def parse_hl_word(text: str, labels: Mapping[str, complex] | None = None) -> tuple:
    """Parse "[*, 0, s1]" (letters separated by commas or semicolons)."""
    body = text.strip()
    if body.startswith("L"):
        body = body[1:].strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ValueError(f"hyperlogarithm word must be bracketed: {text!r}")
    body = body[1:-1].replace(";", ",").strip()
    if not body:
        return ()
    out = []
    for chunk in body.split(","):
        chunk = chunk.strip()
        out.append(STAR if chunk in ("*", "⋆") else parse_point(chunk, labels))
    return tuple(out)


def hl_eval(
    ctx: LatticeContext,
    word: Sequence,
    path: Path,
    punctures: Punctures | None = None,
    tol: float = DEFAULT_TOL,
) -> complex:
    """L_word at the end of ``path``, based at its start."""
    punctures = punctures or Punctures()
    path.validate(ctx, punctures, 10 * ctx.eps_sing)
    forms = [hl_form(x, punctures) for x in word]
    return complex(propagate(ctx, forms, path, tol=tol)[-1])


def hl_prefixes(ctx, word, path, punctures=None, tol=DEFAULT_TOL) -> np.ndarray:
    punctures = punctures or Punctures()
    path.validate(ctx, punctures, 10 * ctx.eps_sing)
    return propagate(ctx, [hl_form(x, punctures) for x in word], path, tol=tol)


# --------------------------------------------------------------------------
# relations with Γ̃ for S = {0}
# --------------------------------------------------------------------------

CATALOG = ("i", "ii", "iii", "iv", "v")
ANCHORS = {
    "i": "L(*^n) = sum_j (-z0)^(n-j)/(n-j)! Γ̃(0^j)",
    "ii": "L_β = -g_1 + g_1(z0)",
    "iii": "Γ̃(1) = -L_βα + g_1(z0) L_α + Γ̃(1; z0)",
    "iv": "g_1^n = sum_k (-1)^k n!/(n-k)! g_1(z0)^(n-k) L_β^k",
    "v": "Γ̃(2) = L_ββα - g_1(z0) L_βα + (e_2 + g_1(z0)^2)/2 L_α - L_β/2 + Γ̃(2; z0)",
}


@dataclass
class IdentityResult:
    identity: str
    lhs: complex
    rhs: complex

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs) / max(1.0, abs(self.lhs))


def verify_catalog_identity(
    ctx: LatticeContext,
    identity: str,
    z: complex,
    z0: complex,
    n: int = 3,
    punctures: Punctures | None = None,
    tol: float = DEFAULT_TOL,
) -> IdentityResult:
    """Check one relation between hyperlogarithms based at z0 and Γ̃ functions.

    Γ̃ is continued along 0 -> δ/2 -> z0 -> z and the hyperlogarithms along
    the straight segment z0 -> z.
    """
    punctures = punctures or Punctures()
    if len(punctures.reps) != 1:
        raise ValueError("the catalog is stated for the single puncture 0")
    if identity not in CATALOG:
        raise ValueError(f"unknown identity {identity!r}; expected one of {CATALOG}")
    z, z0 = complex(z), complex(z0)
    to_z0 = standard_path(ctx, punctures, z0)
    seg = Path((z0, z))
    full = to_z0.then(seg)
    x = Letter

    def L(word):
        return hl_eval(ctx, word, seg, punctures, tol)

    g1z, g1z0 = kronecker_g(ctx, 1, z), kronecker_g(ctx, 1, z0)
    if identity == "i":
        gam = gamma_prefixes(ctx, (x(0, 0),) * n, full, punctures, tol)
        rhs = sum((-z0) ** (n - j) / math.factorial(n - j) * gam[j] for j in range(n + 1))
        return IdentityResult(identity, L((STAR,) * n), complex(rhs))
    if identity == "ii":
        return IdentityResult(identity, L((0j,)), -g1z + g1z0)
    if identity == "iii":
        from .gamma import gamma_shuffle

        lhs = gamma_shuffle(ctx, (x(1, 0),), full, punctures, tol)
        rhs = -L((0j, STAR)) + g1z0 * L((STAR,)) + gamma_shuffle(ctx, (x(1, 0),), to_z0, punctures, tol)
        return IdentityResult(identity, lhs, rhs)
    if identity == "iv":
        betas = hl_prefixes(ctx, (0j,) * n, seg, punctures, tol)
        rhs = sum(
            (-1) ** k * math.factorial(n) / math.factorial(n - k) * g1z0 ** (n - k) * betas[k] for k in range(n + 1)
        )
        return IdentityResult(identity, g1z**n, complex(rhs))
    from .gamma import gamma_shuffle

    e2 = complex(ctx.e[2])
    lhs = gamma_shuffle(ctx, (x(2, 0),), full, punctures, tol)
    rhs = (
        L((0j, 0j, STAR))
        - g1z0 * L((0j, STAR))
        + 0.5 * (e2 + g1z0**2) * L((STAR,))
        - 0.5 * L((0j,))
        + gamma_shuffle(ctx, (x(2, 0),), to_z0, punctures, tol)
    )
    return IdentityResult(identity, lhs, rhs)


# --------------------------------------------------------------------------
# residues
# --------------------------------------------------------------------------


def residue(f: Callable[[np.ndarray], np.ndarray], center: complex, radius: float = 1e-2, nodes: int = 16) -> complex:
    """(1/2πi) ∮ f dz over a circle, by the trapezoidal rule."""
    theta = 2 * math.pi * np.arange(nodes) / nodes
    dz = radius * np.exp(1j * theta)
    return complex(np.mean(f(center + dz) * dz))


def residue_reconstruction(
    ctx: LatticeContext, punctures: Punctures, targets: Mapping[complex, complex], radius: float = 1e-2
) -> dict[complex, tuple[complex, complex]]:
    """Build sum_{s != 0} r_s (g_1(z - s) - g_1(z)) for a residue tuple summing to 0.

    Returns, for each puncture, the target residue and the one measured by a
    contour integral.
    """
    targets = {complex(k): complex(v) for k, v in targets.items()}
    if set(targets) - set(punctures.reps):
        raise ValueError("targets must be indexed by puncture representatives")
    if abs(sum(targets.values())) > 1e-12 * max(1.0, max(abs(v) for v in targets.values())):
        raise ValueError("residues of a form on a compact curve must sum to zero")
    coeffs = {s: targets.get(s, 0j) for s in punctures.reps if s != 0}

    def f(z):
        g0 = kronecker_g(ctx, 1, z)
        return sum(c * (kronecker_g(ctx, 1, z, s) - g0) for s, c in coeffs.items())

    scale = radius * min(1.0, abs(ctx.tau))
    return {s: (targets.get(s, 0j), residue(f, s, scale)) for s in punctures.reps}


# --------------------------------------------------------------------------
# numerical independence over O_S
# --------------------------------------------------------------------------


class IllConditionedSamples(ValueError):
    """The sample points cannot separate the coefficient functions."""


@dataclass
class IndependenceReport:
    singular_values: list[float]
    threshold: float
    rank: int
    columns: int
    independent: bool
    gap: float

    def to_dict(self) -> dict:
        return {
            "singular_values": self.singular_values,
            "threshold": self.threshold,
            "rank": self.rank,
            "columns": self.columns,
            "verdict": "independent" if self.independent else "dependent",
            "gap": self.gap,
        }


def coefficient_functions(
    ctx: LatticeContext, punctures: Punctures, pole_degree_cap: int
) -> list[tuple[str, Callable[[np.ndarray], np.ndarray]]]:
    """A spanning set of O_S up to the given pole order: 1, translates of E_k, g_1 differences."""
    out: list[tuple[str, Callable]] = [("1", lambda z: np.ones(np.shape(z), dtype=complex))]
    for s in punctures.reps:
        for k in range(2, pole_degree_cap + 1):
            out.append((f"E{k}(z-{s})", lambda z, s=s, k=k: eisenstein_functions(ctx, np.asarray(z) - s, k)[..., k]))
    for s in punctures.reps:
        if s != 0:
            out.append((f"g1(z-{s})-g1(z)", lambda z, s=s: kronecker_g(ctx, 1, z, s) - kronecker_g(ctx, 1, z)))
    return out


def numeric_independence_check(
    ctx: LatticeContext,
    values: np.ndarray,
    sample_points: Sequence[complex],
    pole_degree_cap: int,
    punctures: Punctures | None = None,
    rel_threshold: float = 1e-6,
    balance_passes: int = 1,
    sheet_ids: Sequence[int] | None = None,
) -> IndependenceReport:
    """Look for O_S-linear relations among functions sampled at common points.

    ``values[i, j]`` is the j-th candidate function at the i-th sample point
    (all on one branch; points on different sheets are told apart by
    ``sheet_ids``).  The matrix of products φ_m f_j, with φ_m running
    over ``coefficient_functions``, is column-normalised; singular values
    below ``rel_threshold`` times the largest one count as relations.  The
    gap is the ratio between the smallest retained singular value and the
    threshold when nothing is dropped, and between the smallest retained and
    the largest dropped value otherwise.
    """
    punctures = punctures or Punctures()
    pts = np.asarray(sample_points, dtype=complex)
    values = np.asarray(values, dtype=complex)
    if values.ndim != 2 or values.shape[0] != pts.shape[0]:
        raise ValueError("values must have one row per sample point")
    ids = np.zeros(pts.shape[0], dtype=int) if sheet_ids is None else np.asarray(sheet_ids)
    if len(set(zip(ids.tolist(), pts.tolist()))) != pts.shape[0]:
        raise ValueError("sample points must be pairwise distinct")
    phis = np.array([f(pts) for _, f in coefficient_functions(ctx, punctures, pole_degree_cap)]).T
    cols = phis.shape[1] * values.shape[1]
    if pts.shape[0] < 2 * cols:
        raise ValueError(f"need at least {2 * cols} sample points for {cols} candidate columns, got {pts.shape[0]}")
    base = phis / np.linalg.norm(phis, axis=0)
    sb = np.linalg.svd(base, compute_uv=False)
    if sb[-1] < rel_threshold * sb[0]:
        raise IllConditionedSamples("the coefficient functions are numerically dependent on these samples")
    M = (phis[:, :, None] * values[:, None, :]).reshape(pts.shape[0], cols)
    # equilibrate rows, then columns; scaling rows leaves relations untouched
    for _ in range(balance_passes):
        rn = np.linalg.norm(M, axis=1)
        M = M / np.where(rn == 0, 1.0, rn)[:, None]
    norms = np.linalg.norm(M, axis=0)
    norms[norms == 0] = 1.0
    sv = np.linalg.svd(M / norms, compute_uv=False)
    threshold = rel_threshold * sv[0]
    rank = int(np.sum(sv > threshold))
    if rank == cols:
        gap = float(sv[-1] / threshold)
    else:
        gap = float(sv[rank - 1] / max(sv[rank], np.finfo(float).tiny)) if rank else 0.0
    return IndependenceReport([float(s) for s in sv], float(threshold), rank, cols, rank == cols, gap)


@dataclass
class SampleSheet:
    """Points reached by straight segments from the end of ``path`` (a path from 0)."""

    path: Path
    points: np.ndarray


def sample_tree(
    ctx: LatticeContext,
    punctures: Punctures,
    hub: complex,
    reach: int = 2,
    radius: float = 1.5,
    per_sheet: int = 16,
    margin: float = 0.05,
    seed: int = 0,
) -> list[SampleSheet]:
    """Sample points on several sheets of the universal cover.

    The hub is reached from 0 along the standard Γ̃ path; from there the tree
    branches along lattice translations m + nτ (|m|, |n| <= reach), taken in
    both orders.  Around each branch end, points within ``radius`` are kept
    when the segment to them stays ``margin`` away from pr^{-1}(S).
    """
    rng = np.random.default_rng(seed)
    base = standard_path(ctx, punctures, hub)
    tau = ctx.tau
    routes = []
    for m in range(-reach, reach + 1):
        for n in range(-reach, reach + 1):
            routes.append((m, n * tau))
            if m and n:
                routes.append((n * tau, m))
    sheets = []
    for first, second in routes:
        verts = [hub]
        for step in (first, second):
            if step:
                verts.append(verts[-1] + step)
        path = base
        if len(verts) > 1:
            leg = Path(tuple(verts))
            try:
                leg.validate(ctx, punctures, margin)
            except PathError:
                continue
            path = base.then(leg)
        centre = path.end
        pts: list[complex] = []
        tries = 0
        while len(pts) < per_sheet:
            tries += 1
            if tries > 1000 * per_sheet:
                raise IllConditionedSamples("could not place sample points away from the punctures")
            p = centre + radius * math.sqrt(rng.uniform()) * cmath_exp(2j * math.pi * rng.uniform())
            near = punctures.lattice_points_near(ctx, centre, p, pad=margin + 0.5)
            if near.size == 0 or segment_distance(centre, p, near).min() > margin:
                pts.append(p)
        sheets.append(SampleSheet(path, np.array(pts)))
    return sheets


def gamma_family_values(
    ctx: LatticeContext,
    words: Sequence[tuple],
    sheets: Sequence[SampleSheet],
    punctures: Punctures | None = None,
    tol: float = DEFAULT_TOL,
) -> np.ndarray:
    """Γ̃(word) on every sample point, shape (total points, len(words))."""
    punctures = punctures or Punctures()
    words = [tuple(w) for w in words]
    longest = [w for w in words if not any(len(v) > len(w) and v[: len(w)] == w for v in words)]
    blocks = []
    for sheet in sheets:
        known: dict[tuple, np.ndarray] = {}
        for w in longest:
            vals = gamma_at_points(ctx, w, sheet.path, sheet.points, punctures, tol)
            for k in range(len(w) + 1):
                known.setdefault(w[:k], vals[:, k])
        blocks.append(np.array([known[w] for w in words]).T)
    return np.vstack(blocks)


def words_up_to(alphabet: Sequence[Letter], length: int) -> list[tuple]:
    out: list[tuple] = [()]
    layer: list[tuple] = [()]
    for _ in range(length):
        layer = [w + (x,) for w in layer for x in alphabet]
        out.extend(layer)
    return out


def sheet_points(sheets: Sequence[SampleSheet]) -> np.ndarray:
    return np.concatenate([sh.points for sh in sheets])
