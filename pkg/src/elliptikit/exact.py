"""Small sparse multivariate polynomial type with exact coefficients.

Zero tests use truthiness: sympy Gaussian rationals compare unequal to the
integer 0 even when they vanish.

Coefficients can be anything closed under ``+`` and ``*`` (``Fraction``,
sympy ``QQ_I`` elements, Python ``complex``).  Only what the symbolic parts of
the package need is implemented.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from sympy.polys.domains import QQ_I

Monomial = tuple[int, ...]


def gauss(value) -> object:
    """Convert an int, Fraction, float or complex to an exact Gaussian rational."""
    if isinstance(value, type(QQ_I(0))):
        return value
    if isinstance(value, complex):
        return QQ_I(0) + _rat(value.real) + QQ_I(0, 1) * _rat(value.imag)
    return QQ_I(0) + _rat(value)


def _rat(x):
    fr = Fraction(x) if not isinstance(x, float) else Fraction(repr(x))
    return QQ_I(0) + QQ_I.convert(fr.numerator) / QQ_I.convert(fr.denominator)


def to_complex(c) -> complex:
    if hasattr(c, "x") and hasattr(c, "y"):
        return complex(float(c.x), float(c.y))
    return complex(c)


class MPoly:
    """Polynomial in ``nvars`` variables stored as ``{exponents: coefficient}``."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Monomial, object] | None = None):
        self.nvars = nvars
        self.terms: dict[Monomial, object] = {}
        if terms:
            for mon, c in terms.items():
                if c:
                    self.terms[tuple(mon)] = c

    # constructors -------------------------------------------------------
    @classmethod
    def const(cls, nvars: int, c) -> "MPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int, c=1) -> "MPoly":
        mon = [0] * nvars
        mon[i] = 1
        return cls(nvars, {tuple(mon): c})

    # arithmetic -----------------------------------------------------------
    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return MPoly.const(self.nvars, other)

    def __add__(self, other) -> "MPoly":
        other = self._coerce(other)
        out = dict(self.terms)
        for mon, c in other.terms.items():
            s = out.get(mon, 0) + c
            if not s:
                out.pop(mon, None)
            else:
                out[mon] = s
        return MPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "MPoly":
        return MPoly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "MPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "MPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "MPoly":
        if not isinstance(other, MPoly):
            if not other:
                return MPoly(self.nvars)
            return MPoly(self.nvars, {m: c * other for m, c in self.terms.items()})
        other = self._coerce(other)
        out: dict[Monomial, object] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mon = tuple(a + b for a, b in zip(m1, m2))
                out[mon] = out.get(mon, 0) + c1 * c2
        return MPoly(self.nvars, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MPoly":
        result = MPoly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, MPoly):
            other = MPoly.const(self.nvars, other)
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    # structure ------------------------------------------------------------
    def weighted_part(self, weights: Iterable[int], w: int) -> "MPoly":
        weights = tuple(weights)
        return MPoly(
            self.nvars,
            {m: c for m, c in self.terms.items() if sum(a * b for a, b in zip(m, weights)) == w},
        )

    def weighted_degree(self, weights: Iterable[int]) -> int:
        weights = tuple(weights)
        if not self.terms:
            return -1
        return max(sum(a * b for a, b in zip(m, weights)) for m in self.terms)

    def coeff(self, mon: Monomial):
        return self.terms.get(tuple(mon), 0)

    def substitute(self, images: list["MPoly"]) -> "MPoly":
        """Replace variable i by ``images[i]`` (all images share one ring)."""
        nv = images[0].nvars
        out = MPoly(nv)
        for mon, c in self.terms.items():
            term = MPoly.const(nv, c)
            for i, e in enumerate(mon):
                if e:
                    term = term * images[i] ** e
            out = out + term
        return out

    def evaluate(self, values) -> complex:
        """Numerical value; ``values`` may hold numpy arrays."""
        total = 0
        for mon, c in self.terms.items():
            term = to_complex(c) if not isinstance(c, (int, float, complex)) else c
            for v, e in zip(values, mon):
                if e:
                    term = term * v**e
            total = total + term
        return total

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mon in sorted(self.terms, reverse=True):
            c = self.terms[mon]
            vars_ = "*".join(f"x{i}^{e}" if e > 1 else f"x{i}" for i, e in enumerate(mon) if e)
            parts.append(f"({c})" + (f"*{vars_}" if vars_ else ""))
        return " + ".join(parts)
