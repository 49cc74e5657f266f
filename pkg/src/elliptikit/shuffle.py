"""Shuffle Hopf algebra on words of letters (n; a), and regularisation at the
letter (1; 0).

Words are tuples of hashable letters, so the algebraic routines also work on
plain strings or integers.  Elements are finite linear combinations stored as
``{word: coefficient}``.  The coefficient ring is fixed per element: ``exact``
elements carry ``Fraction`` coefficients, the others Python ``complex``.

Sh(V) splits as Sh*(V)[X] with X the letter (1; 0) and Sh*(V) spanned by the
words that do not start with (1; 0).  ``star_decompose`` computes that
splitting; ``reconstruct`` inverts it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Hashable, Iterable, Mapping

Word = tuple


@dataclass(frozen=True)
class Letter:
    """Letter (n; a): the form T_a(g_n) dz, with a a puncture representative."""

    n: int
    a: complex = 0j

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("letter index n must be non-negative")
        object.__setattr__(self, "a", complex(self.a))
        if self.n == 0 and self.a != 0:
            raise ValueError("letters with n = 0 must have a = 0")

    def sort_key(self) -> tuple:
        return (self.n, self.a.real, self.a.imag)

    def __repr__(self) -> str:
        return f"({self.n};{_fmt_complex(self.a)})"


X0 = Letter(1, 0)


def _fmt_complex(a: complex) -> str:
    if a == 0:
        return "0"
    if a.imag == 0:
        return f"{a.real:g}"
    return f"{a.real:g}{a.imag:+g}i"


class RingMismatchError(TypeError):
    """Exact and floating-point elements were combined."""


class ShuffleElement:
    """Linear combination of words."""

    __slots__ = ("terms", "exact")

    def __init__(self, terms: Mapping[Word, object] | None = None, exact: bool = True):
        self.exact = exact
        self.terms: dict[Word, object] = {}
        for w, c in (terms or {}).items():
            c = _to_ring(c, exact)
            if c != 0:
                self.terms[tuple(w)] = self.terms.get(tuple(w), 0) + c
        self.terms = {w: c for w, c in self.terms.items() if c != 0}

    @classmethod
    def word(cls, w: Iterable[Hashable], coeff=1, exact: bool = True) -> "ShuffleElement":
        return cls({tuple(w): coeff}, exact)

    @classmethod
    def one(cls, exact: bool = True) -> "ShuffleElement":
        return cls({(): 1}, exact)

    @classmethod
    def zero(cls, exact: bool = True) -> "ShuffleElement":
        return cls({}, exact)

    def _check(self, other: "ShuffleElement") -> None:
        if self.exact != other.exact:
            raise RingMismatchError("cannot combine exact and floating-point shuffle elements")

    def __add__(self, other: "ShuffleElement") -> "ShuffleElement":
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return ShuffleElement(out, self.exact)

    def __neg__(self) -> "ShuffleElement":
        return ShuffleElement({w: -c for w, c in self.terms.items()}, self.exact)

    def __sub__(self, other: "ShuffleElement") -> "ShuffleElement":
        return self + (-other)

    def scale(self, c) -> "ShuffleElement":
        c = _to_ring(c, self.exact)
        return ShuffleElement({w: c * v for w, v in self.terms.items()}, self.exact)

    def __mul__(self, other):
        """Shuffle product with another element, or scaling by a number."""
        if isinstance(other, ShuffleElement):
            return shuffle_product(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other) -> bool:
        return isinstance(other, ShuffleElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def max_abs_diff(self, other: "ShuffleElement") -> float:
        keys = set(self.terms) | set(other.terms)
        return max((abs(complex(self.terms.get(k, 0)) - complex(other.terms.get(k, 0))) for k in keys), default=0.0)

    def counit(self):
        return self.terms.get((), 0)

    def coproduct(self) -> dict[tuple[Word, Word], object]:
        out: dict[tuple[Word, Word], object] = {}
        for w, c in self.terms.items():
            for pair in deconcatenate(w):
                out[pair] = out.get(pair, 0) + c
        return {k: v for k, v in out.items() if v != 0}

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w in sorted(self.terms, key=_word_key):
            parts.append(f"{self.terms[w]}*[{'|'.join(map(repr, w))}]")
        return " + ".join(parts)


def _to_ring(c, exact: bool):
    if exact:
        if isinstance(c, (float, complex)):
            raise RingMismatchError("floating-point coefficient in an exact element")
        return Fraction(c) if not isinstance(c, Fraction) else c
    return complex(c)


def _word_key(w: Word) -> tuple:
    return tuple(x.sort_key() if isinstance(x, Letter) else (repr(x),) for x in w)


# --------------------------------------------------------------------------
# products and coproducts on words
# --------------------------------------------------------------------------


@lru_cache(maxsize=65536)
def shuffle_words(u: Word, v: Word) -> tuple[tuple[Word, int], ...]:
    """Shuffle of two words as a tuple of (word, multiplicity)."""
    if not u:
        return ((v, 1),)
    if not v:
        return ((u, 1),)
    out: dict[Word, int] = {}
    for w, c in shuffle_words(u[1:], v):
        key = (u[0],) + w
        out[key] = out.get(key, 0) + c
    for w, c in shuffle_words(u, v[1:]):
        key = (v[0],) + w
        out[key] = out.get(key, 0) + c
    return tuple(out.items())


def shuffle_product(x: ShuffleElement, y: ShuffleElement) -> ShuffleElement:
    x._check(y)
    out: dict[Word, object] = {}
    for u, cu in x.terms.items():
        for v, cv in y.terms.items():
            for w, m in shuffle_words(u, v):
                out[w] = out.get(w, 0) + cu * cv * m
    return ShuffleElement(out, x.exact)


def deconcatenate(w: Word) -> list[tuple[Word, Word]]:
    """All splittings w = w1 w2, from (empty, w) to (w, empty)."""
    w = tuple(w)
    return [(w[:i], w[i:]) for i in range(len(w) + 1)]


def antipode_word(w: Word) -> tuple[Word, int]:
    """S[w_1|...|w_k] = (-1)^k [w_k|...|w_1]."""
    w = tuple(w)
    return tuple(reversed(w)), (-1) ** len(w)


def antipode(x: ShuffleElement) -> ShuffleElement:
    out: dict[Word, object] = {}
    for w, c in x.terms.items():
        rw, sign = antipode_word(w)
        out[rw] = out.get(rw, 0) + sign * c
    return ShuffleElement(out, x.exact)


# --------------------------------------------------------------------------
# regularisation with respect to the letter x0 = (1; 0)
# --------------------------------------------------------------------------


def leading_run(w: Word, x0: Hashable = X0) -> int:
    r = 0
    for letter in w:
        if letter != x0:
            break
        r += 1
    return r


@dataclass
class StarPolynomial:
    """Polynomial sum_k c_k X^k with coefficients c_k in Sh*(V)."""

    coeffs: list[ShuffleElement]
    x0: Hashable = X0

    @property
    def degree(self) -> int:
        nz = [k for k, c in enumerate(self.coeffs) if not c.is_zero()]
        return max(nz) if nz else -1

    def __repr__(self) -> str:
        return " + ".join(f"({c})*X^{k}" for k, c in enumerate(self.coeffs) if not c.is_zero()) or "0"


@lru_cache(maxsize=16384)
def _decompose_word(w: Word, x0: Hashable) -> tuple[tuple[int, tuple[tuple[Word, Fraction], ...]], ...]:
    r = leading_run(w, x0)
    if r == 0:
        return ((0, ((w, Fraction(1)),)),)
    rest = w[1:]
    acc: dict[int, dict[Word, Fraction]] = {}

    def add(k: int, word: Word, c: Fraction) -> None:
        slot = acc.setdefault(k, {})
        slot[word] = slot.get(word, 0) + c

    # x0 ⧢ rest = r*w + (insertions of x0 after the first non-x0 letter)
    for k, items in _decompose_word(rest, x0):
        for word, c in items:
            add(k + 1, word, c / r)
    for i in range(r, len(rest) + 1):
        other = rest[:i] + (x0,) + rest[i:]
        for k, items in _decompose_word(other, x0):
            for word, c in items:
                add(k, word, -c / r)
    return tuple(
        (k, tuple((word, c) for word, c in slot.items() if c != 0)) for k, slot in sorted(acc.items())
    )


def star_decompose(x: ShuffleElement, x0: Hashable = X0) -> StarPolynomial:
    """Write x = sum_k c_k ⧢ x0^{⧢k} with every c_k free of leading x0."""
    acc: dict[int, dict[Word, object]] = {}
    for w, c in x.terms.items():
        for k, items in _decompose_word(w, x0):
            slot = acc.setdefault(k, {})
            for word, d in items:
                slot[word] = slot.get(word, 0) + c * (d if x.exact else complex(d))
    top = max(acc) if acc else -1
    coeffs = [ShuffleElement(acc.get(k, {}), x.exact) for k in range(top + 1)]
    return StarPolynomial(coeffs, x0)


def reconstruct(p: StarPolynomial) -> ShuffleElement:
    """Inverse of ``star_decompose``: sum_k c_k ⧢ x0^{⧢k}, with x0^{⧢k} = k! [x0^k]."""
    exact = p.coeffs[0].exact if p.coeffs else True
    out = ShuffleElement.zero(exact)
    for k, c in enumerate(p.coeffs):
        if c.is_zero():
            continue
        power = ShuffleElement.word((p.x0,) * k, math.factorial(k), exact)
        out = out + c * power
    return out


def degree(x: ShuffleElement, x0: Hashable = X0) -> int:
    """Largest leading x0-run among the words of x (-1 for the zero element)."""
    return max((leading_run(w, x0) for w in x.terms), default=-1)


# --------------------------------------------------------------------------
# text syntax: "G[n1,a1; n2,a2]" or "[n1,a1; ...]"
# --------------------------------------------------------------------------

def parse_point(text: str, labels: Mapping[str, complex] | None = None) -> complex:
    """A puncture label, "0", or a complex literal such as 0.3+0.2i."""
    text = text.strip()
    if labels and text in labels:
        return complex(labels[text])
    lit = text.replace(" ", "").replace("i", "j")
    try:
        return complex(lit)
    except ValueError:
        raise ValueError(f"unknown puncture or malformed number: {text!r}") from None


def parse_word(text: str, labels: Mapping[str, complex] | None = None) -> Word:
    body = text.strip()
    if body.startswith("G"):
        body = body[1:].strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ValueError(f"word must be bracketed: {text!r}")
    body = body[1:-1].strip()
    if not body:
        return ()
    letters = []
    for chunk in body.split(";"):
        parts = chunk.split(",")
        if len(parts) == 1:
            n, a = parts[0], "0"
        elif len(parts) == 2:
            n, a = parts
        else:
            raise ValueError(f"malformed letter {chunk!r}")
        try:
            n_int = int(n.strip())
        except ValueError:
            raise ValueError(f"letter index must be an integer: {chunk!r}") from None
        letters.append(Letter(n_int, parse_point(a, labels)))
    return tuple(letters)


def format_word(w: Word) -> str:
    return "[" + "; ".join(f"{x.n},{_fmt_complex(x.a)}" for x in w) + "]"
