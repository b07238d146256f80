"""Noncommutative polynomials in the generators N and Delta.

A word is a string over the letters ``"N"`` and ``"D"`` (``D`` stands for
the sub-Laplacian Delta). Words compose like operators: the *leftmost*
letter acts *last*, so ``"ND"`` means "apply Delta, then N".
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple

from .coeff import SqrtPiCoefficient


class Generator(Enum):
    N = "N"
    DELTA = "D"

    @property
    def degree(self) -> int:
        return 1 if self is Generator.N else 2


_DEGREE = {"N": 1, "D": 2}


def word_degree(word: str) -> int:
    return sum(_DEGREE[c] for c in word)


def word_key(word: str) -> Tuple[int, str]:
    """Canonical sort key: by degree, then lexicographically."""
    return (word_degree(word), word)


def format_word(word: str) -> str:
    if not word:
        return "Id"
    return "*".join("Delta" if c == "D" else "N" for c in word)


def _check_word(word: str) -> str:
    if any(c not in _DEGREE for c in word):
        raise ValueError(f"invalid word {word!r}; letters must be N or D")
    return word


def _coerce(c) -> SqrtPiCoefficient:
    if isinstance(c, SqrtPiCoefficient):
        return c
    return SqrtPiCoefficient(c)


@dataclass(frozen=True)
class OperatorPoly:
    """Finite sum of words with :class:`SqrtPiCoefficient` weights."""

    terms: Mapping[str, SqrtPiCoefficient] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for w, c in self.terms.items():
            c = _coerce(c)
            if not c.is_zero():
                clean[_check_word(w)] = c
        ordered = dict(sorted(clean.items(), key=lambda kv: word_key(kv[0])))
        object.__setattr__(self, "terms", ordered)

    # constructors
    @classmethod
    def zero(cls) -> "OperatorPoly":
        return cls({})

    @classmethod
    def identity(cls) -> "OperatorPoly":
        return cls({"": SqrtPiCoefficient.one()})

    @classmethod
    def word(cls, word: str, coeff=1) -> "OperatorPoly":
        return cls({word: _coerce(coeff)})

    # arithmetic
    def __add__(self, other: "OperatorPoly") -> "OperatorPoly":
        if not isinstance(other, OperatorPoly):
            return NotImplemented
        out: Dict[str, SqrtPiCoefficient] = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out[w] + c if w in out else c
        return OperatorPoly(out)

    def __neg__(self) -> "OperatorPoly":
        return OperatorPoly({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "OperatorPoly") -> "OperatorPoly":
        return self + (-other)

    def __mul__(self, other):
        # scalar multiplication or composition (self after other)
        if isinstance(other, OperatorPoly):
            return compose(self, other)
        if isinstance(other, (int, Fraction, SqrtPiCoefficient)):
            return scale(other, self)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, SqrtPiCoefficient)):
            return scale(other, self)
        return NotImplemented

    def __matmul__(self, other: "OperatorPoly") -> "OperatorPoly":
        return compose(self, other)

    # inspection
    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set:
        return {word_degree(w) for w in self.terms}

    def pi_powers(self) -> set:
        return {c.p for c in self.terms.values()}

    def coefficient(self, word: str) -> SqrtPiCoefficient:
        return self.terms.get(word, SqrtPiCoefficient.zero())

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __str__(self):
        return serialize(self)

    def to_json(self) -> list:
        return [{"word": format_word(w), **c.to_json()} for w, c in self.terms.items()]


def compose(p: OperatorPoly, q: OperatorPoly) -> OperatorPoly:
    """``p`` after ``q``: words concatenate as ``wp + wq``."""
    out: Dict[str, SqrtPiCoefficient] = {}
    for wp, cp in p.terms.items():
        for wq, cq in q.terms.items():
            w = wp + wq
            c = cp * cq
            out[w] = out[w] + c if w in out else c
    return OperatorPoly(out)


def scale(c, p: OperatorPoly) -> OperatorPoly:
    c = _coerce(c)
    return OperatorPoly({w: c * v for w, v in p.terms.items()})


def add(*polys: OperatorPoly) -> OperatorPoly:
    out = OperatorPoly.zero()
    for p in polys:
        out = out + p
    return out


def serialize(p: OperatorPoly) -> str:
    """Canonical one-line text form, terms sorted by (degree, word)."""
    if p.is_zero():
        return "0"
    return " + ".join(f"({c}) {format_word(w)}" for w, c in p.terms.items())


N = OperatorPoly.word("N")
DELTA = OperatorPoly.word("D")
ID = OperatorPoly.identity()


@dataclass(frozen=True)
class ReducedPoly:
    """An operator applied to the constant function 1.

    ``constant_part`` comes from the identity word; every other surviving
    word is stored as the prefix that acts on ``H = Delta(delta)``.
    """

    constant_part: SqrtPiCoefficient
    h_terms: Mapping[str, SqrtPiCoefficient]

    def __post_init__(self):
        ordered = {w: c for w, c in sorted(self.h_terms.items(),
                                           key=lambda kv: word_key(kv[0]))
                   if not c.is_zero()}
        object.__setattr__(self, "h_terms", ordered)

    def is_zero(self) -> bool:
        return self.constant_part.is_zero() and not self.h_terms

    def __str__(self):
        parts = []
        if not self.constant_part.is_zero():
            parts.append(f"({self.constant_part}) 1")
        for w, c in self.h_terms.items():
            parts.append(f"({c}) {format_word(w) if w else 'Id'}[H]")
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"constant": self.constant_part.to_json(),
                "h_terms": [{"word": format_word(w), **c.to_json()}
                            for w, c in self.h_terms.items()]}


def apply_to_one(p: OperatorPoly) -> ReducedPoly:
    """Reduce ``P(1)`` using Delta(1) = 0 and N(1) = H."""
    const = SqrtPiCoefficient.zero()
    h: Dict[str, SqrtPiCoefficient] = {}
    for w, c in p.terms.items():
        if not w:
            const = const + c
        elif w[-1] == "N":
            prefix = w[:-1]
            h[prefix] = h[prefix] + c if prefix in h else c
    return ReducedPoly(const, h)


def from_terms(items: Iterable[Tuple[str, object]]) -> OperatorPoly:
    out = OperatorPoly.zero()
    for w, c in items:
        out = out + OperatorPoly.word(w, c)
    return out
