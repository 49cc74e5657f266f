"""Property suites that check the implemented identities numerically or exactly.

Every suite takes a ``RunConfig`` and returns a list of ``Check`` records in a
fixed order.  Randomness comes from generators seeded by ``cfg.seed`` and the
suite name, so a suite produces identical output for identical configuration.
"""

from __future__ import annotations

import itertools
import math
import random
import zlib
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import diffalg, gamma, hyperlog, shuffle, uniformize
from .config import RunConfig
from .itint import Path, PathError, Punctures
from .kronecker import g_values
from .lattice import (
    TWO_PI_I,
    LatticeContext,
    eisenstein_functions,
    oracle_eisenstein_function,
)
from .shuffle import Letter, ShuffleElement

SUITES = (
    "functional-equations",
    "oracle",
    "shuffle",
    "regularization",
    "sect56",
    "reduction",
    "uniformization",
    "independence",
)


@dataclass(frozen=True)
class Check:
    id: str
    anchor: str
    residual: float
    tolerance: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "anchor": self.anchor,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def _check(cfg: RunConfig, cid: str, anchor: str, residual: float, tol: float) -> Check:
    """A tolerance of 0 demands an exact result (residual counts failures)."""
    tol = cfg.tolerance(cid, tol)
    residual = float(residual)
    ok = residual < tol if tol > 0 else residual == 0
    return Check(cid, anchor, residual, tol, bool(ok))


def _tau_label(tau: complex) -> str:
    return f"tau={tau.real:g}{tau.imag:+g}i"


def _rng(cfg: RunConfig, suite: str) -> np.random.Generator:
    return np.random.default_rng([cfg.seed, zlib.crc32(suite.encode())])


def _py_rng(cfg: RunConfig, suite: str) -> random.Random:
    return random.Random(cfg.seed * 1_000_003 + zlib.crc32(suite.encode()))


def _distance_to_set(ctx: LatticeContext, z: complex, reps) -> float:
    return min(float(ctx.distance_to_lattice(np.array([z - s]))[0]) for s in reps)


def _random_point(rng, ctx: LatticeContext, reps=(0j,), min_dist: float = 0.2, lo: float = 0.0, hi: float = 1.0):
    """z = x + yτ with x, y uniform in [lo, hi) and z at least ``min_dist`` from pr^{-1}(S)."""
    for _ in range(10_000):
        x, y = rng.uniform(lo, hi, size=2)
        z = complex(x + y * ctx.tau)
        if _distance_to_set(ctx, z, reps) >= min_dist:
            return z
    raise RuntimeError("could not place a sample point")


def _rel(a, b) -> float:
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    return float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(b))))


def _fd(f: Callable[[np.ndarray], np.ndarray], z: np.ndarray, h: float) -> np.ndarray:
    """Seven-point central difference along the real direction."""
    c = {1: 45.0, 2: -9.0, 3: 1.0}
    return sum(c[k] * (f(z + k * h) - f(z - k * h)) for k in c) / (60.0 * h)


def _cauchy_derivative(f: Callable[[np.ndarray], np.ndarray], z: complex, radius: float, nodes: int = 64) -> complex:
    """f'(z) from the trapezoidal rule on a circle, exponentially accurate for analytic f."""
    w = np.exp(2j * math.pi * np.arange(nodes) / nodes)
    return complex(np.mean(f(z + radius * w) / w) / radius)


def _default_punctures(cfg: RunConfig, ctx: LatticeContext, count: int) -> Punctures:
    """The configured punctures when there are enough of them, else fixed interior points."""
    if len(cfg.punctures) >= count:
        return Punctures.from_mapping(dict(cfg.punctures[:count]))
    fracs = ((0.4, 0.45), (0.7, 0.2), (0.25, 0.75))
    tau = ctx.tau
    return Punctures.from_mapping({f"s{i + 1}": x + y * tau for i, (x, y) in enumerate(fracs[:count])})


# --------------------------------------------------------------------------
# functional equations of E_r and g_n
# --------------------------------------------------------------------------


def suite_functional_equations(cfg: RunConfig) -> list[Check]:
    rng = _rng(cfg, "functional-equations")
    out: list[Check] = []
    nmax, rmax, npts = 6, 6, 20
    h = 1e-3
    for tau in cfg.suite_taus:
        ctx = cfg.context(tau)
        lab = _tau_label(ctx.tau)
        z = np.array([_random_point(rng, ctx, min_dist=0.3) for _ in range(npts)])

        def E(w, r=rmax + 1):
            return eisenstein_functions(ctx, w, r)

        def g(w):
            return g_values(ctx, w, nmax)

        e_z = E(z)
        out.append(_check(cfg, f"fe/E1-shift-1[{lab}]", "E1 is invariant under z -> z - 1",
                          _rel(E(z - 1)[:, 1], e_z[:, 1]), 1e-8))
        out.append(_check(cfg, f"fe/E1-shift-tau[{lab}]", "E1(z - tau) = E1(z) + 2 pi i",
                          _rel(E(z - ctx.tau)[:, 1], e_z[:, 1] + TWO_PI_I), 1e-8))
        res = max(
            _rel(_fd(lambda w, r=r: E(w)[:, r], z, h), -r * e_z[:, r + 1]) for r in range(1, rmax + 1)
        )
        out.append(_check(cfg, f"fe/Er-derivative[{lab}]", "E_r' = -r E_(r+1)", res, 1e-6))

        g_z = g(z)
        out.append(_check(cfg, f"fe/gn-shift-1[{lab}]", "g_n is invariant under z -> z - 1",
                          _rel(g(z - 1), g_z), 1e-8))
        shifted = g(z - ctx.tau) - g_z
        expect = np.zeros_like(g_z)
        for n in range(1, nmax + 1):
            for k in range(n):
                expect[:, n] += TWO_PI_I ** (n - k) / math.factorial(n - k) * g_z[:, k]
        out.append(_check(cfg, f"fe/gn-shift-tau[{lab}]",
                          "g_n(z - tau) - g_n(z) = sum_(k<n) (2 pi i)^(n-k)/(n-k)! g_k(z)",
                          _rel(shifted, expect), 1e-8))
        res = 0.0
        for n in range(1, nmax + 1):
            rhs = sum((-1) ** (n - k) * e_z[:, n - k + 1] * g_z[:, k] for k in range(n))
            res = max(res, _rel(_fd(lambda w, n=n: g(w)[:, n], z, h), rhs))
        out.append(_check(cfg, f"fe/gn-derivative[{lab}]",
                          "g_n' = sum_(k<n) (-1)^(n-k) E_(n-k+1) g_k", res, 1e-6))
    return out


# --------------------------------------------------------------------------
# fast evaluator against the brute-force lattice sum
# --------------------------------------------------------------------------


def suite_oracle(cfg: RunConfig, rmax: int = 4, npts: int = 20) -> list[Check]:
    rng = _rng(cfg, "oracle")
    out: list[Check] = []
    for tau in cfg.suite_taus:
        ctx = cfg.context(tau)
        lab = _tau_label(ctx.tau)
        z = np.array([_random_point(rng, ctx, min_dist=0.05, lo=-1.0, hi=1.0) for _ in range(npts)])
        fast = eisenstein_functions(ctx, z, rmax)
        for r in range(1, rmax + 1):
            slow = oracle_eisenstein_function(ctx, r, z)
            out.append(_check(cfg, f"oracle/E{r}[{lab}]", f"fast E_{r} agrees with the truncated double sum",
                              _rel(fast[:, r], slow), 1e-8))
    return out


# --------------------------------------------------------------------------
# shuffle Hopf algebra
# --------------------------------------------------------------------------


def _words(alphabet, max_len):
    return [w for k in range(max_len + 1) for w in itertools.product(alphabet, repeat=k)]


def _tensor_shuffle(a: dict, b: dict) -> dict:
    out: dict = {}
    for (u1, u2), c in a.items():
        for (v1, v2), d in b.items():
            for w1, m1 in shuffle.shuffle_words(u1, v1):
                for w2, m2 in shuffle.shuffle_words(u2, v2):
                    key = (w1, w2)
                    out[key] = out.get(key, 0) + c * d * m1 * m2
    return {k: v for k, v in out.items() if v != 0}


def _star_product(p, q) -> list[ShuffleElement]:
    out: dict[int, ShuffleElement] = {}
    for k, c in enumerate(p.coeffs):
        for j, d in enumerate(q.coeffs):
            if c.is_zero() or d.is_zero():
                continue
            out[k + j] = out.get(k + j, ShuffleElement.zero()) + c * d
    top = max(out, default=-1)
    return [out.get(k, ShuffleElement.zero()) for k in range(top + 1)]


def suite_shuffle(cfg: RunConfig) -> list[Check]:
    x0, a, b = shuffle.X0, Letter(2, 0), Letter(0, 0)
    two = _words((x0, a), 4)
    three = _words((x0, a, b), 4)
    W = ShuffleElement.word
    fails: dict[str, int] = {}

    def record(name, ok):
        fails[name] = fails.get(name, 0) + (0 if ok else 1)

    for u, v in itertools.product(two, repeat=2):
        uv = W(u) * W(v)
        record("commutativity", uv == W(v) * W(u))
        lhs = uv.coproduct()
        rhs = _tensor_shuffle(W(u).coproduct(), W(v).coproduct())
        record("bialgebra", lhs == rhs)
    short = _words((x0, a), 2)
    for u, v, w in itertools.product(short, repeat=3):
        record("associativity", (W(u) * W(v)) * W(w) == W(u) * (W(v) * W(w)))
    for w in three:
        x = W(w)
        eps = Fraction(1) if not w else Fraction(0)
        triple_l = {}
        for (p, q), c in x.coproduct().items():
            for (p1, p2) in shuffle.deconcatenate(p):
                triple_l[(p1, p2, q)] = triple_l.get((p1, p2, q), 0) + c
        triple_r = {}
        for (p, q), c in x.coproduct().items():
            for (q1, q2) in shuffle.deconcatenate(q):
                triple_r[(p, q1, q2)] = triple_r.get((p, q1, q2), 0) + c
        record("coassociativity", triple_l == triple_r)
        cop = x.coproduct()
        record("counit", cop.get(((), w)) == 1 and cop.get((w, ())) == 1)
        left = ShuffleElement.zero()
        right = ShuffleElement.zero()
        for (p, q), c in x.coproduct().items():
            left = left + shuffle.antipode(W(p)) * W(q) * c
            right = right + W(p) * shuffle.antipode(W(q)) * c
        unit = ShuffleElement.one().scale(eps)
        record("antipode", left == unit and right == unit)
        poly = shuffle.star_decompose(x)
        record("regular-splitting", shuffle.reconstruct(poly) == x and all(
            shuffle.leading_run(word) == 0 for c in poly.coeffs for word in c.terms
        ))
    for u, v in itertools.product(_words((x0, a, b), 2), repeat=2):
        lhs = shuffle.star_decompose(W(u) * W(v)).coeffs
        rhs = _star_product(shuffle.star_decompose(W(u)), shuffle.star_decompose(W(v)))
        while lhs and lhs[-1].is_zero():
            lhs = lhs[:-1]
        while rhs and rhs[-1].is_zero():
            rhs = rhs[:-1]
        record("regular-splitting-multiplicative", lhs == rhs)
    anchors = {
        "commutativity": "shuffle product is commutative",
        "associativity": "shuffle product is associative",
        "bialgebra": "deconcatenation is a shuffle-algebra morphism",
        "coassociativity": "deconcatenation is coassociative",
        "counit": "empty word projection is a counit",
        "antipode": "reversal with sign is the antipode",
        "regular-splitting": "words split uniquely as regular words times powers of (1;0)",
        "regular-splitting-multiplicative": "the splitting respects shuffle products",
    }
    return [_check(cfg, f"shuffle/{k}", anchors[k], float(fails[k]), 0.0) for k in anchors]


# --------------------------------------------------------------------------
# regularised iterated integrals
# --------------------------------------------------------------------------


def regularization_alphabet(s: complex) -> tuple[Letter, ...]:
    return (Letter(0, 0), Letter(1, 0), Letter(2, 0), Letter(1, s), Letter(2, s))


def random_words(rng, alphabet, count: int, max_len: int = 3) -> list[tuple]:
    out = []
    for _ in range(count):
        k = int(rng.integers(1, max_len + 1))
        out.append(tuple(alphabet[int(i)] for i in rng.integers(0, len(alphabet), size=k)))
    return out


def _gamma_target(rng, ctx, punctures, delta=None):
    """A random endpoint z whose standard path is admissible."""
    for _ in range(1000):
        z = _random_point(rng, ctx, punctures.reps, min_dist=0.1, lo=0.05, hi=0.95)
        try:
            return z, gamma.standard_path(ctx, punctures, z, delta)
        except PathError:
            continue
    raise RuntimeError("could not find an admissible endpoint")


def _regularization_setup(cfg: RunConfig, tau: complex):
    ctx = cfg.context(tau)
    punctures = _default_punctures(cfg, ctx, 1)
    return ctx, _tau_label(ctx.tau), punctures, regularization_alphabet(punctures.reps[1])


def regularization_agreement(cfg: RunConfig, words: int = 20) -> list[Check]:
    """Tangential log-fit against the shuffle route on random words."""
    rng = _rng(cfg, "regularization/agreement")
    out: list[Check] = []
    for tau in cfg.suite_taus:
        ctx, lab, punctures, alphabet = _regularization_setup(cfg, tau)
        worst = 0.0
        for word in random_words(rng, alphabet, words):
            _, path = _gamma_target(rng, ctx, punctures, cfg.delta)
            a = gamma.gamma_shuffle(ctx, word, path, punctures)
            b = gamma.gamma_tangential(ctx, word, path, punctures).value
            worst = max(worst, abs(a - b) / max(1.0, abs(a)))
        out.append(_check(cfg, f"reg/tangential-vs-shuffle[{lab}]",
                          "tangential log-fit constant term equals the shuffle-regularised value", worst, 1e-6))
    return out


def derivative_identity(cfg: RunConfig, words: int = 20) -> list[Check]:
    rng = _rng(cfg, "regularization/derivative")
    out: list[Check] = []
    for tau in cfg.suite_taus:
        ctx, lab, punctures, alphabet = _regularization_setup(cfg, tau)
        worst = 0.0
        for word in random_words(rng, alphabet, words):
            _, path = _gamma_target(rng, ctx, punctures, cfg.delta)
            worst = max(worst, gamma.gamma_derivative_check(ctx, word, path, punctures)["rel_error"])
        out.append(_check(cfg, f"reg/derivative[{lab}]",
                          "d/dz of a word integral is the last form times the shorter word", worst, 1e-6))
    return out


def transport_identities(cfg: RunConfig, words: int = 5) -> list[Check]:
    rng = _rng(cfg, "regularization/transport")
    out: list[Check] = []
    for tau in cfg.suite_taus:
        ctx, lab, punctures, alphabet = _regularization_setup(cfg, tau)
        worst_t = worst_a = 0.0
        for word in random_words(rng, alphabet, words):
            while True:
                z0, p0 = _gamma_target(rng, ctx, punctures, cfg.delta)
                z = _random_point(rng, ctx, punctures.reps, min_dist=0.1, lo=0.05, hi=0.95)
                p1 = Path((z0, z))
                try:
                    gamma.check_gamma_path(ctx, punctures, p0.then(p1))
                    break
                except PathError:
                    continue
            lhs, rhs = gamma.basepoint_transport(ctx, word, p0, p1, punctures)
            worst_t = max(worst_t, abs(lhs - rhs) / max(1.0, abs(lhs)))
            lhs, rhs = gamma.based_from_tangential(ctx, word, p0, p1, punctures)
            worst_a = max(worst_a, abs(lhs - rhs) / max(1.0, abs(lhs)))
        out.append(_check(cfg, f"reg/basepoint-transport[{lab}]",
                          "path composition splits a word integral over deconcatenations", worst_t, 1e-8))
        out.append(_check(cfg, f"reg/antipode-transport[{lab}]",
                          "integrals based at z0 follow from tangential ones via the antipode", worst_a, 1e-8))
        worst = 0.0
        shiftable = [x for x in alphabet if x.n and x.a != 0]
        for word in random_words(rng, alphabet, words):
            pos = int(rng.integers(0, len(word) + 1))
            word = word[:pos] + (shiftable[int(rng.integers(0, len(shiftable)))],) + word[pos:]
            _, path = _gamma_target(rng, ctx, punctures, cfg.delta)
            lhs, rhs = gamma.fe_transport_check(ctx, word, pos, path, punctures)
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
        out.append(_check(cfg, f"reg/puncture-shift[{lab}]",
                          "moving a letter's puncture by tau expands via the g_n shift rule", worst, 1e-8))
    return out


def suite_regularization(cfg: RunConfig) -> list[Check]:
    return regularization_agreement(cfg) + derivative_identity(cfg) + transport_identities(cfg)


# --------------------------------------------------------------------------
# hyperlogarithm catalogue (single puncture)
# --------------------------------------------------------------------------


def suite_sect56(cfg: RunConfig, nz: int = 10, nz0: int = 3, n: int = 3) -> list[Check]:
    rng = _rng(cfg, "sect56")
    out: list[Check] = []
    punctures = Punctures()
    for tau in cfg.suite_taus:
        ctx = cfg.context(tau)
        lab = _tau_label(ctx.tau)
        z0s, _ = zip(*[_gamma_target(rng, ctx, punctures) for _ in range(nz0)])
        pairs = []
        for z0 in z0s:
            got = 0
            while got < nz:
                z = _random_point(rng, ctx, min_dist=0.1, lo=0.05, hi=0.95)
                try:
                    gamma.check_gamma_path(ctx, punctures, gamma.standard_path(ctx, punctures, z0).then(Path((z0, z))))
                except PathError:
                    continue
                pairs.append((z, z0))
                got += 1
        for ident in hyperlog.CATALOG:
            worst = max(
                hyperlog.verify_catalog_identity(ctx, ident, z, z0, n, punctures).residual for z, z0 in pairs
            )
            out.append(_check(cfg, f"sect56/{ident}[{lab}]", hyperlog.ANCHORS[ident], worst, 1e-7))
    return out


# --------------------------------------------------------------------------
# reduction modulo derivatives
# --------------------------------------------------------------------------


def _reduction_points(rng, ctx, reps, count, min_dist):
    return [_random_point(rng, ctx, reps, min_dist=min_dist, lo=-0.5, hi=0.5) for _ in range(count)]


def graded_symbol_checks(cfg: RunConfig, nmax: int = 12) -> list[Check]:
    sym = diffalg.check_graded_symbols(nmax)
    return [_check(cfg, "reduction/graded-symbols",
                   "graded symbol of g_n is (X - Y)^(n-1) (X + (n-1) Y) / n!",
                   float(sum(not ok for ok in sym.values())), 0.0)]


def reduction_checks(cfg: RunConfig, samples: int = 50, points: int = 5) -> list[Check]:
    """Round trip, uniqueness under adding derivatives, and numeric spot checks.

    The numeric check differentiates the primitive with a contour integral,
    independently of the symbolic derivation.
    """
    rng = _rng(cfg, "reduction/single")
    prng = _py_rng(cfg, "reduction/single")
    out: list[Check] = []
    polys = [diffalg.random_elliptic_poly(prng, max_degree=6) for _ in range(samples)]
    results = [diffalg.reduce_mod_derivative(u) for u in polys]
    out.append(_check(cfg, "reduction/round-trip", "u = c + sum lambda_n g_n + d(h) holds symbolically",
                      float(sum(r.reconstruct() != u for r, u in zip(results, polys))), 0.0))
    bad = 0
    for u, r in zip(polys, results):
        shift = diffalg.random_elliptic_poly(prng, max_degree=5, terms=3)
        other = diffalg.reduce_mod_derivative(u + diffalg.derive(shift))
        bad += int(other.c != r.c or other.lambdas != r.lambdas)
    out.append(_check(cfg, "reduction/uniqueness", "adding a derivative leaves c and the lambda_n unchanged",
                      float(bad), 0.0))
    ctx = cfg.context()
    worst = 0.0
    for u, r in zip(polys, results):
        num = r.numeric(ctx)
        for z in _reduction_points(rng, ctx, (0j,), points, 0.25):
            lhs = complex(u.evaluate(ctx, z))
            rhs = num["c"] + sum(lam * complex(g_values(ctx, z, n)[n]) for n, lam in num["lambdas"].items())
            rhs += _cauchy_derivative(lambda w: r.primitive.evaluate(ctx, w), z, 0.04)
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
    out.append(_check(cfg, "reduction/numeric", "the decomposition evaluates to u at sample points", worst, 1e-8))
    return out


def multipoint_checks(cfg: RunConfig, samples: int = 20, points: int = 3) -> list[Check]:
    """Elements over three punctures, decomposition checked numerically."""
    rng = _rng(cfg, "reduction/multipoint")
    prng = _py_rng(cfg, "reduction/multipoint")
    ctx = cfg.context()
    punctures = _default_punctures(cfg, ctx, 2)
    worst = 0.0
    for _ in range(samples):
        m = diffalg.MultiPointElement(
            {s: diffalg.random_elliptic_poly(prng, max_degree=5, terms=3) for s in punctures.reps}
        )
        dec = diffalg.reduce_multipoint(m)
        c = dec.c.scalar_value(ctx)
        lams = {k: lam.scalar_value(ctx) for k, lam in dec.lambdas.items()}
        for z in _reduction_points(rng, ctx, punctures.reps, points, 0.15):
            lhs = complex(m.evaluate(ctx, z))
            rhs = c + sum(lam * complex(g_values(ctx, z - s, n)[n]) for (s, n), lam in lams.items())
            rhs += _cauchy_derivative(lambda w: dec.primitive.evaluate(ctx, w), z, 0.03)
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
    return [_check(cfg, "reduction/multipoint",
                   "translated elements reduce to constants, translated g_n and derivatives", worst, 1e-8)]


def suite_reduction(cfg: RunConfig) -> list[Check]:
    return graded_symbol_checks(cfg) + reduction_checks(cfg) + multipoint_checks(cfg)


# --------------------------------------------------------------------------
# uniformisation of branch triples
# --------------------------------------------------------------------------


def suite_uniformization(cfg: RunConfig, triples: int = 20, curve_points: int = 20) -> list[Check]:
    rng = _rng(cfg, "uniformization")
    out: list[Check] = []
    worst_match = worst_curve = worst_sym = worst_s3 = 0.0
    for k in range(triples):
        a = rng.normal(size=3) + 1j * rng.normal(size=3)
        u = uniformize.uniformize(*a)
        worst_match = max(worst_match, u.residuals["a1"], u.residuals["a2"], u.residuals["a3"])
        worst_sym = max(worst_sym, u.residuals["symmetric"])
        ctx = u.context()
        for _ in range(curve_points):
            z = _random_point(rng, ctx, min_dist=0.05)
            worst_curve = max(worst_curve, uniformize.curve_residual(u, uniformize.iso_point(u, z)))
        if k < 3:
            lam = (a[1] - a[0]) / (a[2] - a[0])
            for perm in itertools.permutations(range(3)):
                v = uniformize.uniformize(*a[list(perm)])
                lam_v = uniformize.modular_lambda(v.tau)
                worst_s3 = max(worst_s3, min(abs(lam_v - m) / max(1.0, abs(m)) for m in uniformize.s3_orbit(lam)))
    out.append(_check(cfg, "uniformize/branch-match", "a wp(half period) + b reproduces each branch point",
                      worst_match, 1e-8))
    out.append(_check(cfg, "uniformize/curve", "(a wp + b, a^(3/2) wp'/2) lies on Y^2 = prod (X - a_i)",
                      worst_curve, 1e-8))
    out.append(_check(cfg, "uniformize/symmetric", "the three half-period values sum to the branch sum",
                      worst_sym, 1e-8))
    out.append(_check(cfg, "uniformize/s3", "permuting branch points moves lambda within its S3 orbit",
                      worst_s3, 1e-8))
    u = uniformize.uniformize(1, 0, -1)
    j1 = abs(uniformize.j_from_lambda(uniformize.modular_lambda(u.tau)) - 1728)
    j2 = abs(uniformize.j_invariant(u.tau) - 1728)
    out.append(_check(cfg, "uniformize/j-1728", "branch points 1, 0, -1 give j = 1728", max(j1, j2), 1e-6))
    return out


# --------------------------------------------------------------------------
# numerical independence over the coefficient functions
# --------------------------------------------------------------------------


INDEPENDENCE_GAP = 1e3


def independence_family(punctures: Punctures | None = None):
    alphabet = (Letter(0, 0), Letter(1, 0), Letter(2, 0))
    return alphabet, hyperlog.words_up_to(alphabet, 2)


def independence_reports(ctx: LatticeContext, seed: int = 0, cap: int = 2) -> dict[str, hyperlog.IndependenceReport]:
    """Rank reports for the truncated family and for planted relations."""
    punctures = Punctures()
    _, words = independence_family()
    ncols = 2 * len(words) * cap
    routes = 41
    per_sheet = math.ceil(8 * ncols / routes)
    sheets = hyperlog.sample_tree(ctx, punctures, (1 + ctx.tau) / 2, per_sheet=per_sheet, seed=seed)
    pts = hyperlog.sheet_points(sheets)
    ids = np.concatenate([np.full(len(sh.points), i) for i, sh in enumerate(sheets)])
    extra = [(Letter(1, 0), Letter(1, 0)), (Letter(1, 0),), (Letter(0, 0),)]
    all_words = list(words) + [w for w in extra if w not in words]
    vals = hyperlog.gamma_family_values(ctx, all_words, sheets, punctures)
    col = {w: vals[:, i] for i, w in enumerate(all_words)}
    g1 = np.asarray(g_values(ctx, pts, 2))
    family = np.column_stack([col[w] for w in words] + [g1[:, 1] * col[w] for w in words])

    def run(values):
        return hyperlog.numeric_independence_check(ctx, values, pts, cap, punctures, sheet_ids=ids)

    e2 = eisenstein_functions(ctx, pts, 2)[:, 2]
    one = np.ones(len(pts), dtype=complex)
    return {
        "family": run(family),
        "zero-column": run(np.column_stack([family, np.zeros(len(pts))])),
        "shuffle-relation": run(np.column_stack([family, col[(Letter(1, 0),)] ** 2])),
        "coefficient-multiple": run(np.column_stack([family, e2 * col[(Letter(0, 0),)]])),
        "g2-vs-g1-squared": run(np.column_stack([one, g1[:, 1] ** 2, g1[:, 2]])),
    }


def suite_independence(cfg: RunConfig) -> list[Check]:
    out: list[Check] = []
    anchors = {
        "family": "g1^i Gamma(w), i <= 1, |w| <= 2, are independent over the coefficient functions",
        "zero-column": "planted zero function is detected as a relation",
        "shuffle-relation": "planted shuffle relation Gamma(1)^2 = 2 Gamma(1,1) is detected",
        "coefficient-multiple": "planted E2 Gamma(0) is detected as a coefficient multiple",
        "g2-vs-g1-squared": "planted relation 2 g2 = g1^2 - E2 is detected",
    }
    for tau in cfg.suite_taus:
        ctx = cfg.context(tau)
        lab = _tau_label(ctx.tau)
        reports = independence_reports(ctx, seed=cfg.seed % (2**32))
        for name, rep in reports.items():
            expected = name == "family"
            ok_verdict = rep.independent == expected
            # residual: reciprocal of the gap, so that smaller is better
            resid = 1.0 / rep.gap if rep.gap > 0 and ok_verdict else math.inf
            out.append(_check(cfg, f"independence/{name}[{lab}]", anchors[name], resid, 1.0 / INDEPENDENCE_GAP))
    return out


SUITE_FUNCTIONS: dict[str, Callable[[RunConfig], list[Check]]] = {
    "functional-equations": suite_functional_equations,
    "oracle": suite_oracle,
    "shuffle": suite_shuffle,
    "regularization": suite_regularization,
    "sect56": suite_sect56,
    "reduction": suite_reduction,
    "uniformization": suite_uniformization,
    "independence": suite_independence,
}


def run_suite(name: str, cfg: RunConfig) -> list[Check]:
    if name not in SUITE_FUNCTIONS:
        raise ValueError(f"unknown suite {name!r}; expected one of {SUITES + ('all',)}")
    checks = SUITE_FUNCTIONS[name](cfg)
    return sorted(checks, key=lambda c: c.id)
