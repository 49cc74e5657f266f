"""Exact differential algebra of O[g_1] for a single puncture.

Elements are polynomials in P = ℘, Q = ℘', X = g_1 whose coefficients are
Gaussian rationals times monomials in the lattice constants e_2, g2, g3; the
constants stay symbolic, so every identity here is exact relative to them.
Canonical form keeps Q to degree at most one using Q^2 = 4P^3 - g2 P - g3.

The derivation is ∂P = Q, ∂Q = 6P^2 - g2/2, ∂X = -(P + e_2).  A monomial
P^a Q^b X^j has filtration degree 2a + 3b + j; its graded symbol in C[X, Y]
is obtained from P -> Y^2, Q -> -2Y^3, X -> X.
"""

from __future__ import annotations

import ast
import math
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

import numpy as np
import sympy
from sympy.polys.domains import QQ_I

from .exact import MPoly, gauss, to_complex
from .kronecker import closed_form_symbol, g_symbolic, kronecker_g
from .lattice import LatticeContext, weierstrass_p

# key: (a, b, j, pe2, pg2, pg3) for P^a Q^b X^j e2^pe2 g2^pg2 g3^pg3
Key = tuple[int, int, int, int, int, int]
Scalar = tuple[int, int, int]  # exponents of (e2, g2, g3)

ZERO = QQ_I(0)
ONE = QQ_I(1)


class ReductionError(ArithmeticError):
    """The reduction met a singular system (would contradict the direct-sum theorem)."""


def _add_into(out: dict, key, c) -> None:
    s = out.get(key, ZERO) + c
    if not s:
        out.pop(key, None)
    else:
        out[key] = s


class EllipticPoly:
    """Canonical element sum c * P^a Q^b X^j * e2^p g2^q g3^r with b in {0, 1}."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Key, object] | None = None):
        self.terms: dict[Key, object] = {}
        for key, c in (terms or {}).items():
            c = gauss(c)
            if c:
                a, b, j, p, q, r = key
                if b <= 1:
                    _add_into(self.terms, tuple(key), c)
                else:
                    # Q^b = Q^(b-2) (4P^3 - g2 P - g3)
                    red = EllipticPoly({(a + 3, b - 2, j, p, q, r): 4 * c, (a + 1, b - 2, j, p, q + 1, r): -c,
                                        (a, b - 2, j, p, q, r + 1): -c})
                    for k2, c2 in red.terms.items():
                        _add_into(self.terms, k2, c2)

    # constructors ---------------------------------------------------------
    @classmethod
    def const(cls, c) -> "EllipticPoly":
        return cls({(0, 0, 0, 0, 0, 0): c})

    @classmethod
    def scalar(cls, exps: Scalar, c=1) -> "EllipticPoly":
        return cls({(0, 0, 0) + tuple(exps): c})

    @classmethod
    def P(cls) -> "EllipticPoly":
        return cls({(1, 0, 0, 0, 0, 0): 1})

    @classmethod
    def Q(cls) -> "EllipticPoly":
        return cls({(0, 1, 0, 0, 0, 0): 1})

    @classmethod
    def X(cls) -> "EllipticPoly":
        return cls({(0, 0, 1, 0, 0, 0): 1})

    @classmethod
    def e2(cls) -> "EllipticPoly":
        return cls.scalar((1, 0, 0))

    @classmethod
    def g2(cls) -> "EllipticPoly":
        return cls.scalar((0, 1, 0))

    @classmethod
    def g3(cls) -> "EllipticPoly":
        return cls.scalar((0, 0, 1))

    # arithmetic -----------------------------------------------------------
    @staticmethod
    def _lift(other) -> "EllipticPoly":
        return other if isinstance(other, EllipticPoly) else EllipticPoly.const(other)

    def __add__(self, other) -> "EllipticPoly":
        other = self._lift(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            _add_into(out, k, c)
        res = EllipticPoly()
        res.terms = out
        return res

    __radd__ = __add__

    def __neg__(self) -> "EllipticPoly":
        res = EllipticPoly()
        res.terms = {k: -c for k, c in self.terms.items()}
        return res

    def __sub__(self, other) -> "EllipticPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "EllipticPoly":
        return self._lift(other) - self

    def __mul__(self, other) -> "EllipticPoly":
        if not isinstance(other, EllipticPoly):
            c = gauss(other)
            res = EllipticPoly()
            res.terms = {k: v * c for k, v in self.terms.items()} if c else {}
            return res
        out: dict[Key, object] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                key = tuple(x + y for x, y in zip(k1, k2))
                if key[1] <= 1:
                    _add_into(out, key, c1 * c2)
                else:
                    for k3, c3 in EllipticPoly({key: c1 * c2}).terms.items():
                        _add_into(out, k3, c3)
        res = EllipticPoly()
        res.terms = out
        return res

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "EllipticPoly":
        if k < 0:
            raise ValueError("negative powers are not in the ring")
        result = EllipticPoly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, EllipticPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def is_scalar(self) -> bool:
        return all(k[:3] == (0, 0, 0) for k in self.terms)

    # structure ------------------------------------------------------------
    def filtration_degree(self) -> int:
        """max 2a + 3b + j over the monomials (-1 for zero)."""
        return max((2 * k[0] + 3 * k[1] + k[2] for k in self.terms), default=-1)

    def part_of_degree(self, n: int) -> "EllipticPoly":
        return EllipticPoly({k: c for k, c in self.terms.items() if 2 * k[0] + 3 * k[1] + k[2] == n})

    def scalar_coefficient(self, a: int, b: int, j: int) -> "EllipticPoly":
        """Coefficient of P^a Q^b X^j as a polynomial in the constants."""
        return EllipticPoly({(0, 0, 0) + k[3:]: c for k, c in self.terms.items() if k[:3] == (a, b, j)})

    def evaluate(self, ctx: LatticeContext, z) -> complex | np.ndarray:
        z = np.asarray(z, dtype=complex)
        P = weierstrass_p(ctx, z)
        Q = weierstrass_p(ctx, z, 1)
        X = kronecker_g(ctx, 1, z)
        return self.evaluate_at(P, Q, X, *constants(ctx))

    def evaluate_at(self, P, Q, X, e2, g2, g3):
        total = 0j
        for (a, b, j, p, q, r), c in self.terms.items():
            total = total + to_complex(c) * P**a * Q**b * X**j * e2**p * g2**q * g3**r
        return total

    def scalar_value(self, ctx: LatticeContext) -> complex:
        if not self.is_scalar():
            raise ValueError("element depends on P, Q or X")
        return complex(self.evaluate_at(0, 0, 0, *constants(ctx)))

    def __repr__(self) -> str:
        return format_poly(self)


def constants(ctx: LatticeContext) -> tuple[complex, complex, complex]:
    return complex(ctx.e[2]), ctx.g2, ctx.g3


def _fmt_coeff(c) -> str:
    z = c if not hasattr(c, "x") else None
    if z is not None:
        return str(z)
    re_, im_ = Fraction(int(c.x.numerator), int(c.x.denominator)), Fraction(int(c.y.numerator), int(c.y.denominator))
    if im_ == 0:
        return str(re_)
    if re_ == 0:
        return f"{im_}*i"
    return f"({re_}{'+' if im_ > 0 else '-'}{abs(im_)}*i)"


def format_poly(u: EllipticPoly) -> str:
    """Canonical text form, e.g. ``-X`` or ``1/2*X^2 - 1/2*P``."""
    if not u.terms:
        return "0"
    names = ("P", "Q", "X", "e2", "g2", "g3")
    parts = []
    for key in sorted(u.terms, key=lambda k: (-(2 * k[0] + 3 * k[1] + k[2]), [-x for x in k])):
        c = u.terms[key]
        factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, key) if e]
        coeff = _fmt_coeff(c)
        if factors:
            if coeff == "1":
                body = "*".join(factors)
            elif coeff == "-1":
                body = "-" + "*".join(factors)
            else:
                body = coeff + "*" + "*".join(factors)
        else:
            body = coeff
        parts.append(body)
    text = " + ".join(parts)
    return text.replace("+ -", "- ")


# --------------------------------------------------------------------------
# derivation and the special elements
# --------------------------------------------------------------------------


def derive(u: EllipticPoly) -> EllipticPoly:
    """∂ with ∂P = Q, ∂Q = 6P^2 - g2/2, ∂X = -(P + e_2)."""
    out = EllipticPoly()
    half = QQ_I(1) / QQ_I(2)
    for (a, b, j, p, q, r), c in u.terms.items():
        pieces = {}
        if a:
            pieces[(a - 1, b + 1, j, p, q, r)] = a * c
        if b:
            pieces[(a + 2, b - 1, j, p, q, r)] = 6 * b * c
            pieces[(a, b - 1, j, p, q + 1, r)] = -b * c * half
        if j:
            pieces[(a + 1, b, j - 1, p, q, r)] = pieces.get((a + 1, b, j - 1, p, q, r), ZERO) - j * c
            pieces[(a, b, j - 1, p + 1, q, r)] = pieces.get((a, b, j - 1, p + 1, q, r), ZERO) - j * c
        out = out + EllipticPoly(pieces)
    return out


ep_derive = derive


def ep_multiply(u: EllipticPoly, v: EllipticPoly) -> EllipticPoly:
    return u * v


@lru_cache(maxsize=None)
def eisenstein_constant(r: int) -> EllipticPoly:
    """e_r as a polynomial in g2, g3 for r >= 4 (zero for odd r), symbol e2 for r = 2."""
    if r == 2:
        return EllipticPoly.e2()
    if r % 2 or r < 2:
        return EllipticPoly()
    # ℘ = z^-2 + sum c_k z^(2k), c_k = (2k+1) e_(2k+2)
    k = (r - 2) // 2
    return _p_laurent(k) * (QQ_I(1) / QQ_I(2 * k + 1))


@lru_cache(maxsize=None)
def _p_laurent(k: int) -> EllipticPoly:
    if k == 1:
        return EllipticPoly.g2() * (QQ_I(1) / QQ_I(20))
    if k == 2:
        return EllipticPoly.g3() * (QQ_I(1) / QQ_I(28))
    acc = EllipticPoly()
    for m in range(1, k - 1):
        acc = acc + _p_laurent(m) * _p_laurent(k - 1 - m)
    return acc * (QQ_I(3) / QQ_I((2 * k + 3) * (k - 2)))


@lru_cache(maxsize=None)
def p_derivative(k: int) -> EllipticPoly:
    """℘^(k) in canonical form."""
    return EllipticPoly.P() if k == 0 else derive(p_derivative(k - 1))


@lru_cache(maxsize=None)
def E_as_elliptic_poly(r: int) -> EllipticPoly:
    """E_r: X for r = 1, P + e_2 for r = 2, (-1)^r ℘^(r-2)/(r-1)! for r >= 3."""
    if r < 1:
        raise ValueError("E_r needs r >= 1")
    if r == 1:
        return EllipticPoly.X()
    if r == 2:
        return EllipticPoly.P() + EllipticPoly.e2()
    return p_derivative(r - 2) * (QQ_I((-1) ** r) / QQ_I(math.factorial(r - 1)))


@lru_cache(maxsize=None)
def g_as_elliptic_poly(n: int) -> EllipticPoly:
    """g_n with X = g_1 and Ē_r = E_r - e_r rewritten through ℘ and its derivatives."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return EllipticPoly.const(1)
    poly = g_symbolic(n)
    images = [EllipticPoly.X()] + [E_as_elliptic_poly(r) - eisenstein_constant(r) for r in range(2, max(n, 1) + 1)]
    out = EllipticPoly()
    for mon, c in poly.terms.items():
        term = EllipticPoly.const(gauss(c))
        for img, e in zip(images, mon):
            if e:
                term = term * img**e
        out = out + term
    return out


# --------------------------------------------------------------------------
# graded symbols
# --------------------------------------------------------------------------


@dataclass
class GradedSymbol:
    """Homogeneous element of C[X, Y] of the given degree.

    ``coeffs[(i, k)]`` is the coefficient of X^i Y^k, itself a polynomial in
    the lattice constants (an ``EllipticPoly`` without P, Q, X).
    """

    degree: int
    coeffs: dict[tuple[int, int], EllipticPoly] = field(default_factory=dict)

    @property
    def in_graded_piece(self) -> bool:
        """Lies in C X^n + Y^2 C[X, Y]_(n-2): no term with Y to the first power."""
        return all(k != 1 for (_, k) in self.coeffs)

    def to_mpoly(self) -> MPoly:
        """As an MPoly in (X, Y) when every coefficient is a plain number."""
        terms = {}
        for (i, k), c in self.coeffs.items():
            if not c.is_scalar() or any(key != (0,) * 6 for key in c.terms):
                raise ValueError("symbol coefficients involve lattice constants")
            v = c.terms[(0,) * 6]
            terms[(i, k)] = v
        return MPoly(2, terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, GradedSymbol) and self.degree == other.degree and self.coeffs == other.coeffs


def graded_symbol(u: EllipticPoly) -> GradedSymbol:
    n = u.filtration_degree()
    out: dict[tuple[int, int], EllipticPoly] = {}
    for (a, b, j, p, q, r), c in u.terms.items():
        if 2 * a + 3 * b + j != n:
            continue
        coeff = c * (QQ_I(-2) ** b)
        key = (j, 2 * a + 3 * b)
        out[key] = out.get(key, EllipticPoly()) + EllipticPoly({(0, 0, 0, p, q, r): coeff})
    return GradedSymbol(n, {k: v for k, v in out.items() if not v.is_zero()})


def filtration_degree(u: EllipticPoly) -> int:
    return u.filtration_degree()


def symbol_from_mpoly(poly: MPoly, degree: int) -> GradedSymbol:
    return GradedSymbol(
        degree, {tuple(m): EllipticPoly.const(gauss(c)) for m, c in poly.terms.items() if c}
    )


# --------------------------------------------------------------------------
# reduction modulo derivatives
# --------------------------------------------------------------------------


@dataclass
class ReductionResult:
    """u = c + sum_n λ_n g_n + ∂(h); c and the λ_n are polynomials in e_2, g2, g3."""

    c: EllipticPoly
    lambdas: dict[int, EllipticPoly]
    primitive: EllipticPoly

    def reconstruct(self) -> EllipticPoly:
        out = self.c + derive(self.primitive)
        for n, lam in self.lambdas.items():
            out = out + lam * g_as_elliptic_poly(n)
        return out

    def numeric(self, ctx: LatticeContext) -> dict:
        return {
            "c": self.c.scalar_value(ctx),
            "lambdas": {n: lam.scalar_value(ctx) for n, lam in sorted(self.lambdas.items())},
        }


def _domain_basis(n: int) -> list[tuple[int, int]]:
    """(a, b) pairs for Y^a X^b spanning C X^(n-1) + Y^2 C[X, Y]_(n-3)."""
    return [(0, n - 1)] + [(a, n - 1 - a) for a in range(2, n)]


def _target_basis(n: int) -> list[tuple[int, int]]:
    """(i, k) pairs for X^i Y^k spanning Y^2 C[X, Y]_(n-2)."""
    return [(n - k, k) for k in range(2, n + 1)]


def lift_monomial(a: int, b: int) -> EllipticPoly:
    """Y^a X^b -> E_a X^b (a >= 2), X^b -> X^b."""
    base = EllipticPoly.X() ** b
    return base if a == 0 else E_as_elliptic_poly(a) * base


@lru_cache(maxsize=None)
def _graded_derivative_inverse(n: int) -> tuple[tuple[tuple[int, int], ...], tuple[tuple[int, int], ...], sympy.Matrix]:
    """Inverse of the top-degree part of ∂ from degree n - 1 lifts to degree n."""
    dom = _domain_basis(n)
    tgt = _target_basis(n)
    index = {m: i for i, m in enumerate(tgt)}
    mat = sympy.zeros(len(tgt), len(dom))
    for col, (a, b) in enumerate(dom):
        sym = graded_symbol(derive(lift_monomial(a, b)))
        if sym.degree != n:
            raise ReductionError(f"lift of Y^{a} X^{b} does not raise the degree to {n}")
        for key, c in sym.coeffs.items():
            if key not in index:
                raise ReductionError(f"∂ of a lift leaves the graded piece at {key}")
            val = c.terms.get((0,) * 6)
            if val is None or len(c.terms) != 1:
                raise ReductionError("top-degree part of ∂ involves lattice constants")
            mat[index[key], col] = sympy.Rational(int(val.x.numerator), int(val.x.denominator))
    if mat.det() == 0:
        raise ReductionError(f"graded derivative is singular in degree {n}")
    return tuple(dom), tuple(tgt), mat.inv()


def reduce_mod_derivative(u: EllipticPoly) -> ReductionResult:
    """Write u = c + sum λ_n g_n + ∂(h) by descending filtration degree."""
    rest = u
    lambdas: dict[int, EllipticPoly] = {}
    primitive = EllipticPoly()
    while True:
        n = rest.filtration_degree()
        if n <= 0:
            break
        sym = graded_symbol(rest)
        mu = sym.coeffs.get((n, 0), EllipticPoly()) * math.factorial(n)
        target = graded_symbol(g_as_elliptic_poly(n))
        rho = dict(sym.coeffs)
        for key, c in target.coeffs.items():
            rho[key] = rho.get(key, EllipticPoly()) - mu * c
        rho = {k: v for k, v in rho.items() if not v.is_zero()}
        if any(k[1] == 1 for k in rho):
            raise ReductionError("symbol has a Y-linear term outside the graded piece")
        step = EllipticPoly()
        if n >= 2 and rho:
            dom, tgt, inv = _graded_derivative_inverse(n)
            vec = [rho.get(t, EllipticPoly()) for t in tgt]
            for i, (a, b) in enumerate(dom):
                coeff = EllipticPoly()
                for k, v in enumerate(vec):
                    entry = inv[i, k]
                    if entry != 0 and not v.is_zero():
                        coeff = coeff + v * (QQ_I(int(entry.p)) / QQ_I(int(entry.q)))
                if not coeff.is_zero():
                    step = step + coeff * lift_monomial(a, b)
        if not mu.is_zero():
            lambdas[n] = lambdas.get(n, EllipticPoly()) + mu
        new = rest - mu * g_as_elliptic_poly(n) - derive(step)
        if new.filtration_degree() >= n:
            raise ReductionError(f"reduction did not lower the degree {n}")
        primitive = primitive + step
        rest = new
    return ReductionResult(rest, {k: v for k, v in lambdas.items() if not v.is_zero()}, primitive)


# --------------------------------------------------------------------------
# several punctures
# --------------------------------------------------------------------------


@dataclass
class MultiPointElement:
    """sum_s T_s(component_s): component_s is evaluated at z - s."""

    components: dict[complex, EllipticPoly]

    def evaluate(self, ctx: LatticeContext, z) -> complex | np.ndarray:
        z = np.asarray(z, dtype=complex)
        total = 0j
        for s, u in self.components.items():
            total = total + u.evaluate(ctx, z - s)
        return total


@dataclass
class MultiPointReduction:
    c: EllipticPoly
    lambdas: dict[tuple[complex, int], EllipticPoly]
    primitive: MultiPointElement

    def evaluate_decomposition(self, ctx: LatticeContext, z) -> complex | np.ndarray:
        """c + sum λ_(s,n) g_n(z - s) + ∂(primitive)(z), evaluated numerically."""
        z = np.asarray(z, dtype=complex)
        total = self.c.scalar_value(ctx) + 0 * z
        for (s, n), lam in self.lambdas.items():
            total = total + lam.scalar_value(ctx) * kronecker_g(ctx, n, z, s)
        for s, h in self.primitive.components.items():
            total = total + derive(h).evaluate(ctx, z - s)
        return total


def reduce_multipoint(m: MultiPointElement) -> MultiPointReduction:
    c = EllipticPoly()
    lambdas: dict[tuple[complex, int], EllipticPoly] = {}
    prim: dict[complex, EllipticPoly] = {}
    for s, u in m.components.items():
        res = reduce_mod_derivative(u)
        c = c + res.c
        for n, lam in res.lambdas.items():
            lambdas[(complex(s), n)] = lam
        if not res.primitive.is_zero():
            prim[complex(s)] = res.primitive
    return MultiPointReduction(c, lambdas, MultiPointElement(prim))


# --------------------------------------------------------------------------
# random elements and the text grammar
# --------------------------------------------------------------------------


def random_elliptic_poly(rng: random.Random, max_degree: int = 6, terms: int = 5, constants: bool = True) -> EllipticPoly:
    """Random element of filtration degree <= max_degree with small Gaussian-rational coefficients."""
    out = EllipticPoly()
    for _ in range(terms):
        deg = rng.randint(0, max_degree)
        b = rng.randint(0, 1) if deg >= 3 else 0
        a = rng.randint(0, (deg - 3 * b) // 2)
        j = deg - 3 * b - 2 * a
        p = q = r = 0
        if constants and rng.random() < 0.3:
            p, q, r = rng.choice([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
        c = QQ_I(rng.randint(-5, 5), rng.randint(-3, 3)) / QQ_I(rng.randint(1, 4))
        out = out + EllipticPoly({(a, b, j, p, q, r): c})
    return out


_NAMES = {
    "P": EllipticPoly.P,
    "Q": EllipticPoly.Q,
    "X": EllipticPoly.X,
    "e2": EllipticPoly.e2,
    "g2": EllipticPoly.g2,
    "g3": EllipticPoly.g3,
}


class ExpressionError(ValueError):
    pass


def parse_expression(text: str) -> EllipticPoly:
    """Parse sums, products and integer powers of P, Q, X, e2, g2, g3 and numbers.

    ``^`` and ``**`` both denote powers; complex literals use ``i`` or ``j``
    (``2i``, ``1/2+3i``).  Decimal literals are read exactly.
    """
    src = text.replace("^", "**")
    src = re.sub(r"(?<![A-Za-z_\d.])((?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)[ij]\b", r"(\1*1j)", src)
    src = re.sub(r"(?<![A-Za-z_\d])[ij]\b", "1j", src)
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"cannot parse {text!r}: {exc.msg} at column {exc.offset}") from None
    return _eval_node(tree.body, text)


def _eval_node(node, text):
    if isinstance(node, ast.BinOp):
        left = _eval_node(node.left, text)
        if isinstance(node.op, ast.Pow):
            if not isinstance(node.right, ast.Constant) or not isinstance(node.right.value, int):
                raise ExpressionError(f"exponents must be non-negative integers in {text!r}")
            if isinstance(left, EllipticPoly):
                return left ** node.right.value
            return gauss(left) ** node.right.value
        right = _eval_node(node.right, text)
        if isinstance(node.op, ast.Add):
            return _as_poly(left) + _as_poly(right)
        if isinstance(node.op, ast.Sub):
            return _as_poly(left) - _as_poly(right)
        if isinstance(node.op, ast.Mult):
            if isinstance(left, EllipticPoly) or isinstance(right, EllipticPoly):
                return _as_poly(left) * _as_poly(right)
            return gauss(left) * gauss(right)
        if isinstance(node.op, ast.Div):
            if isinstance(right, EllipticPoly):
                if not (right.is_scalar() and set(right.terms) <= {(0,) * 6}):
                    raise ExpressionError(f"division by a non-number in {text!r}")
                right = right.terms.get((0,) * 6, ZERO)
            den = gauss(right)
            if not den:
                raise ExpressionError(f"division by zero in {text!r}")
            return _as_poly(left) * (ONE / den) if isinstance(left, EllipticPoly) else gauss(left) / den
        raise ExpressionError(f"unsupported operator in {text!r}")
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        val = _eval_node(node.operand, text)
        if isinstance(node.op, ast.UAdd):
            return val
        return -val if isinstance(val, EllipticPoly) else -gauss(val)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float, complex)):
        return gauss(node.value)
    if isinstance(node, ast.Name):
        if node.id not in _NAMES:
            raise ExpressionError(f"unknown symbol {node.id!r} at column {node.col_offset} in {text!r}")
        return _NAMES[node.id]()
    raise ExpressionError(f"unsupported syntax at column {getattr(node, 'col_offset', '?')} in {text!r}")


def _as_poly(v) -> EllipticPoly:
    return v if isinstance(v, EllipticPoly) else EllipticPoly.const(v)


def check_graded_symbols(nmax: int = 12) -> dict[int, bool]:
    """Exact comparison of graded_symbol(g_n) with (X - Y)^(n-1) (X + (n-1)Y)/n!."""
    out = {}
    for n in range(0, nmax + 1):
        sym = graded_symbol(g_as_elliptic_poly(n))
        out[n] = sym == symbol_from_mpoly(closed_form_symbol(n), n)
    return out
