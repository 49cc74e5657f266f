"""Iterated integrals of meromorphic one-forms along polygonal paths.

For forms ω_1..ω_n the prefix integrals y_k = I([ω_1|...|ω_k]) obey the
triangular system dy_k = y_{k-1} ω_k with y_0 = 1.  Each straight segment is
cut into panels; on a panel the system is integrated exactly for the
polynomial interpolant through Gauss-Legendre nodes (spectral integration
matrix), and panels are bisected until one-panel and two-panel results agree.
Nodes are interior, so a path may start at a simple pole as long as every
integrand stays bounded there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from numpy.polynomial import legendre as L

from .kronecker import g_values
from .lattice import LatticeContext, eisenstein_functions
from .shuffle import Letter

DEFAULT_TOL = 1e-12
NODES = 20


class PathError(ValueError):
    """A path passes too close to a puncture or is malformed."""


# --------------------------------------------------------------------------
# forms
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FormSpec:
    """A one-form f(z) dz.

    kinds: ``"g"`` -> g_n(z - a); ``"E2"`` -> E_2(z); ``"g1diff"`` ->
    g_1(z - s) - g_1(z); ``"g1reg"`` -> g_1(z) - 1/z.  ``g`` with n = 0 is dz.
    """

    kind: str = "g"
    n: int = 0
    a: complex = 0j

    @classmethod
    def from_letter(cls, letter: Letter) -> "FormSpec":
        return cls("g", letter.n, letter.a)

    @classmethod
    def dz(cls) -> "FormSpec":
        return cls("g", 0, 0j)


def evaluate_forms(ctx: LatticeContext, forms: Sequence[FormSpec], z: np.ndarray) -> np.ndarray:
    """Coefficient functions of ``forms`` at points z, shape (len(forms), len(z))."""
    z = np.asarray(z, dtype=complex)
    out = np.empty((len(forms), z.shape[0]), dtype=complex)
    gcache: dict[complex, np.ndarray] = {}
    need: dict[complex, int] = {}
    for f in forms:
        if f.kind == "g" and f.n > 0:
            need[f.a] = max(need.get(f.a, 0), f.n)
        elif f.kind in ("g1diff",):
            need[f.a] = max(need.get(f.a, 0), 1)
            need[0j] = max(need.get(0j, 0), 1)
        elif f.kind == "g1reg":
            need[0j] = max(need.get(0j, 0), 1)
    for a, nmax in need.items():
        gcache[a] = g_values(ctx, z - a, nmax)
    e2tab = None
    for i, f in enumerate(forms):
        if f.kind == "g":
            out[i] = 1.0 if f.n == 0 else gcache[f.a][:, f.n]
        elif f.kind == "E2":
            if e2tab is None:
                e2tab = eisenstein_functions(ctx, z, 2)[:, 2]
            out[i] = e2tab
        elif f.kind == "g1diff":
            out[i] = gcache[f.a][:, 1] - gcache[0j][:, 1]
        elif f.kind == "g1reg":
            out[i] = gcache[0j][:, 1] - 1.0 / z
        else:
            raise ValueError(f"unknown form kind {f.kind!r}")
    return out


# --------------------------------------------------------------------------
# punctures and paths
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Punctures:
    """Representatives S̃ of the puncture set S (0 always included)."""

    reps: tuple[complex, ...] = (0j,)
    labels: tuple[tuple[str, complex], ...] = ()

    def __post_init__(self) -> None:
        reps = tuple(dict.fromkeys(complex(s) for s in self.reps))
        if 0j not in reps:
            reps = (0j,) + reps
        object.__setattr__(self, "reps", reps)

    @classmethod
    def from_mapping(cls, mapping: dict[str, complex]) -> "Punctures":
        return cls(tuple([0j] + list(mapping.values())), tuple((k, complex(v)) for k, v in mapping.items()))

    @property
    def label_map(self) -> dict[str, complex]:
        return {"0": 0j, **dict(self.labels)}

    def lattice_points_near(self, ctx: LatticeContext, lo: complex, hi: complex, pad: float = 1.0) -> np.ndarray:
        """All points of pr^{-1}(S) inside the padded box spanned by lo and hi."""
        tau = ctx.tau
        xs = (min(lo.real, hi.real) - pad, max(lo.real, hi.real) + pad)
        ys = (min(lo.imag, hi.imag) - pad, max(lo.imag, hi.imag) + pad)
        n_lo = math.floor(ys[0] / tau.imag) - 1
        n_hi = math.ceil(ys[1] / tau.imag) + 1
        pts = []
        for s in self.reps:
            for n in range(n_lo - 1, n_hi + 2):
                base = s + n * tau
                m_lo = math.floor(xs[0] - base.real) - 1
                m_hi = math.ceil(xs[1] - base.real) + 1
                for m in range(m_lo, m_hi + 1):
                    p = base + m
                    if xs[0] <= p.real <= xs[1] and ys[0] <= p.imag <= ys[1]:
                        pts.append(p)
        return np.array(pts, dtype=complex)


def segment_distance(a: complex, b: complex, pts: np.ndarray) -> np.ndarray:
    d = b - a
    if d == 0:
        return np.abs(pts - a)
    t = np.clip(((pts - a) * np.conj(d)).real / abs(d) ** 2, 0.0, 1.0)
    return np.abs(pts - (a + t * d))


@dataclass(frozen=True)
class Path:
    """Polygonal path through the given vertices."""

    vertices: tuple[complex, ...]

    def __post_init__(self) -> None:
        vs = tuple(complex(v) for v in self.vertices)
        if len(vs) < 2:
            raise PathError("a path needs at least two vertices")
        object.__setattr__(self, "vertices", vs)

    @property
    def start(self) -> complex:
        return self.vertices[0]

    @property
    def end(self) -> complex:
        return self.vertices[-1]

    def segments(self) -> list[tuple[complex, complex]]:
        return [(a, b) for a, b in zip(self.vertices[:-1], self.vertices[1:]) if a != b]

    def then(self, other: "Path") -> "Path":
        if abs(self.end - other.start) > 1e-14:
            raise PathError("paths do not compose: end and start differ")
        return Path(self.vertices + other.vertices[1:])

    def reversed(self) -> "Path":
        return Path(tuple(reversed(self.vertices)))

    def with_start(self, z: complex) -> "Path":
        return Path((z,) + self.vertices[1:])

    def validate(self, ctx: LatticeContext, punctures: Punctures, eps: float, skip_start: bool = False) -> None:
        """Raise ``PathError`` if the path comes within eps of pr^{-1}(S).

        With ``skip_start`` the starting vertex itself may be a puncture (a
        tangential base point); the first segment is then checked away from it.
        """
        for i, (a, b) in enumerate(self.segments()):
            pts = punctures.lattice_points_near(ctx, a, b)
            if pts.size == 0:
                continue
            if skip_start and i == 0:
                pts = pts[np.abs(pts - a) > 1e-14]
            dist = segment_distance(a, b, pts)
            if dist.size and dist.min() < eps:
                bad = pts[np.argmin(dist)]
                raise PathError(f"segment {a} -> {b} passes within {dist.min():.3g} of puncture {bad}")


def parse_path(text: str) -> Path:
    """Parse "[re,im; re,im; ...]" (an optional "path:" prefix is accepted)."""
    body = text.strip()
    if body.lower().startswith("path:"):
        body = body[5:].strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise PathError(f"path must be bracketed: {text!r}")
    pts = []
    for chunk in body[1:-1].split(";"):
        parts = [p.strip() for p in chunk.split(",")]
        if len(parts) != 2:
            raise PathError(f"malformed vertex {chunk!r}")
        try:
            pts.append(complex(float(parts[0]), float(parts[1])))
        except ValueError:
            raise PathError(f"malformed vertex {chunk!r}") from None
    return Path(tuple(pts))


# --------------------------------------------------------------------------
# panel integrator
# --------------------------------------------------------------------------


@lru_cache(maxsize=8)
def _panel_rule(m: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Nodes, weights and cumulative integration matrix on [-1, 1]."""
    x, w = L.leggauss(m)
    vander = L.legvander(x, m - 1)
    anti = np.empty((m, m))
    for j in range(m):
        coef = np.zeros(m)
        coef[j] = 1.0
        anti[:, j] = L.legval(x, L.legint(coef, lbnd=-1))
    cumulative = anti @ np.linalg.inv(vander)
    return x, w, cumulative


def _panel(ctx, forms, a, b, t0, t1, y):
    x, w, S = _panel_rule(NODES)
    t = t0 + (x + 1.0) * 0.5 * (t1 - t0)
    F = evaluate_forms(ctx, forms, a + t * (b - a))
    fac = (b - a) * 0.5 * (t1 - t0)
    out = y.copy()
    Y = np.full(NODES, y[0], dtype=complex)
    for k in range(1, len(forms) + 1):
        integrand = Y * F[k - 1] * fac
        out[k] = y[k] + w @ integrand
        Y = y[k] + S @ integrand
    return out


def _segment(ctx, forms, a, b, y, tol, max_depth=48):
    def converged(u, v):
        return np.max(np.abs(u - v)) <= tol * max(1.0, float(np.max(np.abs(v))))

    def rec(t0, t1, y0, whole, depth):
        mid = 0.5 * (t0 + t1)
        left = _panel(ctx, forms, a, b, t0, mid, y0)
        both = _panel(ctx, forms, a, b, mid, t1, left)
        if converged(whole, both) or depth >= max_depth:
            return both
        yl = rec(t0, mid, y0, left, depth + 1)
        return rec(mid, t1, yl, _panel(ctx, forms, a, b, mid, t1, yl), depth + 1)

    pieces = max(1, math.ceil(abs(b - a) / 0.25))
    grid = np.linspace(0.0, 1.0, pieces + 1)
    for t0, t1 in zip(grid[:-1], grid[1:]):
        y = rec(t0, t1, y, _panel(ctx, forms, a, b, t0, t1, y), 0)
    return y


def propagate(
    ctx: LatticeContext,
    forms: Sequence[FormSpec],
    path: Path,
    y0: Iterable[complex] | None = None,
    tol: float = DEFAULT_TOL,
) -> np.ndarray:
    """Prefix integrals y_0..y_n at the end of ``path``.

    ``y0`` gives starting values of the prefixes (default 1, 0, ..., 0); a
    non-trivial start realises Chen's composition with an earlier path.
    """
    n = len(forms)
    y = np.zeros(n + 1, dtype=complex)
    if y0 is None:
        y[0] = 1.0
    else:
        y[:] = np.asarray(list(y0), dtype=complex)
    for a, b in path.segments():
        y = _segment(ctx, forms, a, b, y, tol)
    return y


def iterated_integral(ctx: LatticeContext, forms: Sequence[FormSpec], path: Path, tol: float = DEFAULT_TOL) -> complex:
    """I_path([ω_1|...|ω_n]); the empty word gives 1."""
    return complex(propagate(ctx, forms, path, tol=tol)[-1])


def suffix_integrals(ctx: LatticeContext, forms: Sequence[FormSpec], path: Path, tol: float = DEFAULT_TOL) -> np.ndarray:
    """I_path of every suffix [ω_k|...|ω_n], k = 0..n (last entry is the empty word)."""
    n = len(forms)
    return np.array([iterated_integral(ctx, forms[k:], path, tol) for k in range(n)] + [1.0], dtype=complex)


def chen_compose(prefix_first: Sequence[complex], suffix_second: Sequence[complex]) -> complex:
    """sum over deconcatenations I_{p1}(w^(1)) I_{p2}(w^(2))."""
    return complex(sum(p * s for p, s in zip(prefix_first, suffix_second)))


def holonomy_invariance_check(
    ctx: LatticeContext,
    forms: Sequence[FormSpec],
    path_a: Path,
    path_b: Path,
    tol: float = DEFAULT_TOL,
) -> float:
    """|I_a - I_b| for two paths with the same ends, homotopic in the punctured plane."""
    if abs(path_a.start - path_b.start) > 1e-14 or abs(path_a.end - path_b.end) > 1e-14:
        raise PathError("paths must share their endpoints")
    return abs(iterated_integral(ctx, forms, path_a, tol) - iterated_integral(ctx, forms, path_b, tol))


def loop_around(center: complex, radius: float, start_angle: float = 0.0, vertices: int = 64) -> Path:
    """Counter-clockwise polygonal loop around ``center``."""
    ang = start_angle + np.linspace(0.0, 2 * math.pi, vertices + 1)
    pts = center + radius * np.exp(1j * ang)
    pts[-1] = pts[0]
    return Path(tuple(pts))
