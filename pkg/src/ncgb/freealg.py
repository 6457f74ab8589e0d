"""Words, the deglex order, and sparse noncommutative polynomials.

Two word representations coexist on purpose.  Inside the rewriting engine a
word is a plain tuple of generator indices (declaration order doubles as the
monomial order, so tuple comparison is the lexicographic tail of deglex).
The copy-indexed alphabet used by the inflation machinery works with tuples
of :class:`Generator` instead, because those words cross between algebras
with different (and differently sized) alphabets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .scalar import FieldError, FieldSpec, Scalar

PLAIN = "plain"
XFAM = "x"
YFAM = "y"

Word = tuple[int, ...]


@dataclass(frozen=True)
class Generator:
    """A named generator; family/copy carry the copy-indexed structure."""

    name: str
    family: str = PLAIN
    copy: int = 1

    def __post_init__(self) -> None:
        if self.family not in (PLAIN, XFAM, YFAM):
            raise ValueError(f"unknown generator family {self.family!r}")
        if self.copy < 1:
            raise ValueError("copy-index must be a positive integer")
        if self.family == PLAIN and self.copy != 1:
            raise ValueError("plain generators carry copy-index 1")

    @property
    def label(self) -> str:
        if self.family == PLAIN:
            return self.name
        return f"{self.name}.{self.copy}"

    def __repr__(self) -> str:
        return self.label


GWord = tuple[Generator, ...]


def deglex_key(word: Word) -> tuple[int, Word]:
    """Sort key realizing deglex: total degree first, then left-to-right."""
    return (len(word), word)


def deglex_cmp(u: Word, v: Word, ngens: int) -> int:
    """Compare two words in deglex; returns -1, 0, or 1.

    Letters are generator indices into an ordered alphabet of size ngens;
    an out-of-range letter is rejected rather than silently compared.
    """
    for w in (u, v):
        for letter in w:
            if not 0 <= letter < ngens:
                raise ValueError(f"letter {letter} not in the generator order")
    if len(u) != len(v):
        return -1 if len(u) < len(v) else 1
    if u == v:
        return 0
    return -1 if u < v else 1


class Polynomial:
    """Sparse field-coefficient combination of words, leading term first.

    Terms are kept deglex-descending, so the leading term is terms[0];
    zero coefficients are never stored.  Immutable after construction.
    """

    __slots__ = ("terms", "field")

    def __init__(self, terms: tuple[tuple[Word, Scalar], ...], field: FieldSpec):
        self.terms = terms
        self.field = field

    @classmethod
    def from_dict(
        cls, coeffs: Mapping[Word, Scalar], field: FieldSpec
    ) -> "Polynomial":
        items = [(w, c) for w, c in coeffs.items() if c]
        items.sort(key=lambda wc: deglex_key(wc[0]), reverse=True)
        return cls(tuple(items), field)

    @classmethod
    def zero(cls, field: FieldSpec) -> "Polynomial":
        return cls((), field)

    @classmethod
    def from_word(cls, word: Word, field: FieldSpec) -> "Polynomial":
        return cls(((word, field.one),), field)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def lead_word(self) -> Word:
        if not self.terms:
            raise ValueError("the zero polynomial has no leading term")
        return self.terms[0][0]

    @property
    def lead_coeff(self) -> Scalar:
        if not self.terms:
            raise ValueError("the zero polynomial has no leading term")
        return self.terms[0][1]

    def degree(self) -> int:
        """Degree of the leading word (-1 for the zero polynomial)."""
        return len(self.terms[0][0]) if self.terms else -1

    def is_homogeneous(self) -> bool:
        return len({len(w) for w, _ in self.terms}) <= 1

    def coefficient(self, word: Word) -> Scalar:
        for w, c in self.terms:
            if w == word:
                return c
        return self.field.zero

    def _check(self, other: "Polynomial") -> None:
        if self.field != other.field:
            raise FieldError(
                f"field mismatch: {self.field} vs {other.field}"
            )

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        acc = {w: c for w, c in self.terms}
        for w, c in other.terms:
            if w in acc:
                s = acc[w] + c
                if s:
                    acc[w] = s
                else:
                    del acc[w]
            else:
                acc[w] = c
        return Polynomial.from_dict(acc, self.field)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple((w, -c) for w, c in self.terms), self.field)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        acc: dict[Word, Scalar] = {}
        for u, cu in self.terms:
            for v, cv in other.terms:
                w = u + v
                prod = cu * cv
                if w in acc:
                    s = acc[w] + prod
                    if s:
                        acc[w] = s
                    else:
                        del acc[w]
                else:
                    acc[w] = prod
        return Polynomial.from_dict(acc, self.field)

    def scale(self, c: Scalar) -> "Polynomial":
        if c.char != self.field.characteristic:
            raise FieldError("scaling coefficient from a different field")
        if not c:
            return Polynomial.zero(self.field)
        return Polynomial(tuple((w, k * c) for w, k in self.terms), self.field)

    def monic(self) -> "Polynomial":
        if not self.terms:
            raise ValueError("cannot make the zero polynomial monic")
        return self.scale(self.lead_coeff.inverse())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.field == other.field
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.terms, self.field))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for w, c in self.terms:
            word = "*".join(str(i) for i in w) if w else "1"
            bits.append(f"{c}[{word}]")
        return " + ".join(bits)


def poly_op(f: Polynomial, g: Polynomial | Scalar, op: str) -> Polynomial:
    """add / sub / mul of two polynomials, or scale by a Scalar."""
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "scale":
        return f.scale(g)
    raise ValueError(f"unknown op {op!r}")


def _require_indexed(word: GWord, hom: str) -> None:
    for g in word:
        if g.family == PLAIN:
            raise ValueError(
                f"{hom} is defined only on the copy-indexed alphabet; "
                f"{g.label} has no family"
            )


def apply_hom(word: GWord, hom: str) -> GWord:
    """S_x drops Y-letters, S_y drops X-letters, Phi collapses copies to 1."""
    _require_indexed(word, hom)
    if hom == "S_x":
        return tuple(g for g in word if g.family == XFAM)
    if hom == "S_y":
        return tuple(g for g in word if g.family == YFAM)
    if hom == "Phi":
        return tuple(Generator(g.name, g.family, 1) for g in word)
    raise ValueError(f"unknown homomorphism {hom!r}")


def apply_hom_terms(
    terms: Mapping[GWord, Scalar], hom: str
) -> dict[GWord, Scalar]:
    """Termwise extension of apply_hom to generator-word combinations."""
    acc: dict[GWord, Scalar] = {}
    for w, c in terms.items():
        img = apply_hom(w, hom)
        if img in acc:
            s = acc[img] + c
            if s:
                acc[img] = s
            else:
                del acc[img]
        else:
            acc[img] = c
    return acc


@dataclass(frozen=True)
class Signature:
    """Multihomogeneous class of a word: degree, X-count, copy-index rows.

    Two copy-indexed words span the same component exactly when their
    signatures coincide.
    """

    n: int
    n_x: int
    s: tuple[int, ...]
    t: tuple[int, ...]


def signature_of(word: GWord) -> Signature:
    _require_indexed(word, "signature_of")
    s = tuple(g.copy for g in word if g.family == XFAM)
    t = tuple(g.copy for g in word if g.family == YFAM)
    return Signature(n=len(word), n_x=len(s), s=s, t=t)


def gword_degree(word: GWord) -> int:
    return len(word)


def concat(*words: Iterable) -> tuple:
    out: tuple = ()
    for w in words:
        out = out + tuple(w)
    return out
