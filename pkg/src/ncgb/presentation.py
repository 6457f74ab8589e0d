"""Algebra presentations: the data type, a text parser, and the catalog.

The text format is line-oriented::

    field 0
    generators a b c x
    relations
    cb - bc + aa
    xx            # comments run to end of line

Within a relation expression, a run of letters denotes a product of
single-letter generators (``cb`` is c times b), ``*`` separates arbitrary
generator names (``a.1*a.2``), and an optional integer coefficient prefixes
each word.  Declaration order of the generators is the monomial order,
ascending.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property

from .freealg import Generator, GWord, PLAIN, Polynomial, Word
from .scalar import FieldError, FieldSpec, Scalar, integer_normalize

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9]*(?:\.[0-9]+)?")
_TOKEN_RE = re.compile(r"\s*(?:(?P<name>[A-Za-z][A-Za-z0-9]*(?:\.[0-9]+)?)"
                       r"|(?P<int>[0-9]+)"
                       r"|(?P<op>[+*\-−]))")


class PresentationError(ValueError):
    """Structurally invalid presentation."""


class PresentationSyntaxError(PresentationError):
    """Parse failure, carrying line and column of the offending text."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Presentation:
    """An ordered generator list plus homogeneous relations over a field."""

    fieldspec: FieldSpec
    generators: tuple[Generator, ...]
    relations: tuple[Polynomial, ...]
    label: str | None = None

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for g in self.generators:
            if not _NAME_RE.fullmatch(g.label):
                raise PresentationError(f"unserializable generator name {g.label!r}")
            if g.label in seen:
                raise PresentationError(f"duplicate generator {g.label}")
            seen.add(g.label)
        n = len(self.generators)
        for i, rel in enumerate(self.relations, 1):
            if rel.field != self.fieldspec:
                raise PresentationError(f"relation {i} lives over {rel.field}")
            if rel.is_zero():
                raise PresentationError(f"relation {i} is zero")
            if not rel.is_homogeneous():
                raise PresentationError(f"relation {i} is not homogeneous")
            if rel.degree() < 1:
                raise PresentationError(f"relation {i} has degree 0")
            for w, _ in rel.terms:
                for letter in w:
                    if not 0 <= letter < n:
                        raise PresentationError(
                            f"relation {i} uses letter index {letter} "
                            f"outside the {n}-generator alphabet"
                        )

    @property
    def ngens(self) -> int:
        return len(self.generators)

    @cached_property
    def index_of(self) -> dict[str, int]:
        return {g.label: i for i, g in enumerate(self.generators)}

    @cached_property
    def _gen_index(self) -> dict[Generator, int]:
        return {g: i for i, g in enumerate(self.generators)}

    def to_gens(self, word: Word) -> GWord:
        return tuple(self.generators[i] for i in word)

    def from_gens(self, gword: GWord) -> Word:
        return tuple(self._gen_index[g] for g in gword)

    def word_label(self, word: Word) -> str:
        """Render a word; juxtaposition when every label is one letter."""
        labels = [self.generators[i].label for i in word]
        if not labels:
            return "1"
        if all(len(l) == 1 for l in self.index_of):
            return "".join(labels)
        return "*".join(labels)

    def structurally_equal(self, other: "Presentation", rename: bool = False) -> bool:
        """Field, generator labels, and relation data coincide.

        With rename=True generator labels are ignored (positions must still
        match), which is equality up to the renaming g_i of one presentation
        to g_i of the other.
        """
        if self.fieldspec != other.fieldspec or self.ngens != other.ngens:
            return False
        if not rename:
            if [g.label for g in self.generators] != [g.label for g in other.generators]:
                return False
        if len(self.relations) != len(other.relations):
            return False
        for r, s in zip(self.relations, other.relations):
            if r.terms != s.terms:
                return False
        return True


def _resolve_word(token: str, index_of: dict[str, int], line: int, col: int) -> list[int]:
    if token in index_of:
        return [index_of[token]]
    letters = []
    for ch in token:
        if ch not in index_of:
            raise PresentationSyntaxError(
                f"unknown generator {token!r}"
                + (f" (and {ch!r} is not a single-letter generator)" if len(token) > 1 else ""),
                line, col,
            )
        letters.append(index_of[ch])
    return letters


def _tokenize(text: str, line: int) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            rest = text[pos:].lstrip()
            if not rest:
                break
            col = len(text) - len(rest) + 1
            raise PresentationSyntaxError(f"unexpected character {rest[0]!r}", line, col)
        kind = m.lastgroup
        value = m.group(kind)
        tokens.append((kind, value, m.start(kind) + 1))
        pos = m.end()
    return tokens


def parse_expression(
    text: str,
    index_of: dict[str, int],
    fieldspec: FieldSpec,
    line: int = 1,
) -> Polynomial:
    """Parse one relation expression into a normalized Polynomial."""
    tokens = _tokenize(text, line)
    if not tokens:
        raise PresentationSyntaxError("empty relation", line, 1)
    acc: dict[Word, Scalar] = {}
    i = 0
    sign = 1
    if tokens[0][0] == "op":
        if tokens[0][1] == "*":
            raise PresentationSyntaxError("expected a term", line, tokens[0][2])
        sign = 1 if tokens[0][1] == "+" else -1
        i = 1
        if i >= len(tokens):
            raise PresentationSyntaxError("dangling sign", line, tokens[0][2])
    while i < len(tokens):
        coeff = 1
        letters: list[int] = []
        seen_any = False
        if i < len(tokens) and tokens[i][0] == "int":
            coeff = int(tokens[i][1])
            seen_any = True
            i += 1
            if i < len(tokens) and tokens[i][0] == "op" and tokens[i][1] == "*":
                i += 1
                if i >= len(tokens) or tokens[i][0] != "name":
                    raise PresentationSyntaxError(
                        "expected a generator after '*'", line,
                        tokens[i - 1][2])
                # fall through to the name loop
        while i < len(tokens) and tokens[i][0] == "name":
            letters.extend(_resolve_word(tokens[i][1], index_of, line, tokens[i][2]))
            seen_any = True
            i += 1
            if i < len(tokens) and tokens[i][0] == "op" and tokens[i][1] == "*":
                star_col = tokens[i][2]
                i += 1
                if i >= len(tokens) or tokens[i][0] != "name":
                    raise PresentationSyntaxError(
                        "expected a generator after '*'", line, star_col)
        if not seen_any:
            col = tokens[i][2] if i < len(tokens) else len(text)
            raise PresentationSyntaxError("expected a term", line, col)
        word = tuple(letters)
        c = fieldspec.scalar(sign * coeff)
        if word in acc:
            s = acc[word] + c
            if s:
                acc[word] = s
            else:
                del acc[word]
        elif c:
            acc[word] = c
        # next: sign or end
        if i < len(tokens):
            kind, value, col = tokens[i]
            if kind != "op" or value == "*":
                raise PresentationSyntaxError("expected '+' or '-'", line, col)
            sign = 1 if value == "+" else -1
            i += 1
            if i >= len(tokens):
                raise PresentationSyntaxError("dangling sign", line, col)
    poly = Polynomial.from_dict(acc, fieldspec)
    if poly.is_zero():
        raise PresentationSyntaxError("relation cancels to zero", line, 1)
    if not poly.is_homogeneous():
        raise PresentationSyntaxError("relation is not homogeneous", line, 1)
    return poly


def _strip_comment(line: str) -> str:
    cut = line.find("#")
    return line if cut < 0 else line[:cut]


def parse_presentation(text: str, label: str | None = None) -> Presentation:
    """Parse the line-oriented presentation format."""
    fieldspec: FieldSpec | None = None
    generators: tuple[Generator, ...] | None = None
    index_of: dict[str, int] = {}
    relations: list[Polynomial] = []
    stage = "field"
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        if stage == "field":
            parts = line.split()
            if parts[0] != "field" or len(parts) != 2:
                raise PresentationSyntaxError("expected 'field <0|prime>'", lineno, 1)
            try:
                char = int(parts[1])
            except ValueError:
                raise PresentationSyntaxError(
                    f"characteristic must be an integer, got {parts[1]!r}",
                    lineno, len(parts[0]) + 2) from None
            try:
                fieldspec = FieldSpec(char)
            except FieldError as exc:
                raise PresentationSyntaxError(str(exc), lineno, len(parts[0]) + 2) from None
            stage = "generators"
        elif stage == "generators":
            parts = line.split()
            if parts[0] != "generators":
                raise PresentationSyntaxError("expected 'generators <name> ...'", lineno, 1)
            gens = []
            for name in parts[1:]:
                if not _NAME_RE.fullmatch(name):
                    raise PresentationSyntaxError(
                        f"invalid generator name {name!r}", lineno, line.find(name) + 1)
                if name in index_of:
                    raise PresentationSyntaxError(
                        f"duplicate generator {name!r}", lineno, 1)
                index_of[name] = len(gens)
                gens.append(Generator(name))
            generators = tuple(gens)
            stage = "relations-header"
        elif stage == "relations-header":
            if line != "relations":
                raise PresentationSyntaxError("expected 'relations'", lineno, 1)
            stage = "relations"
        else:
            relations.append(parse_expression(line, index_of, fieldspec, lineno))
    if stage in ("field", "generators"):
        raise PresentationSyntaxError("incomplete presentation", 1, 1)
    return Presentation(fieldspec, generators, tuple(relations), label=label)


def render_coefficients(rel: Polynomial) -> list[tuple[int, Word]]:
    """Integer coefficient per term, scaling only when forced.

    Characteristic-0 relations with non-integer entries are replaced by
    their primitive integer form (the same relation up to a scalar); prime
    fields print residues directly.
    """
    if rel.field.characteristic:
        return [(c.value, w) for w, c in rel.terms]
    vals = [c.value for _, c in rel.terms]
    if all(v.denominator == 1 for v in vals):
        return [(int(c.value), w) for w, c in rel.terms]
    ints = integer_normalize(vals)
    return [(k, w) for k, (w, _) in zip(ints, rel.terms)]


def render_expression(rel: Polynomial, pres: Presentation) -> str:
    bits: list[str] = []
    for coeff, word in render_coefficients(rel):
        wtext = pres.word_label(word)
        if not word:
            body = str(abs(coeff))
        elif abs(coeff) == 1:
            body = wtext
        else:
            sep = "*" if wtext[0].isdigit() else ""
            body = f"{abs(coeff)}{sep}{wtext}" if "*" not in wtext else f"{abs(coeff)}*{wtext}"
        if not bits:
            bits.append(body if coeff >= 0 else f"-{body}")
        else:
            bits.append(f"+ {body}" if coeff >= 0 else f"- {body}")
    return " ".join(bits)


def serialize(pres: Presentation) -> str:
    """Emit the text format; reparsing yields a structurally equal value."""
    lines = [f"field {pres.fieldspec.characteristic}",
             "generators " + " ".join(g.label for g in pres.generators),
             "relations"]
    for rel in pres.relations:
        lines.append(render_expression(rel, pres))
    return "\n".join(lines) + "\n"


def to_json_dict(pres: Presentation) -> dict:
    """Stable machine-readable rendering of a presentation."""
    rels = []
    for rel in pres.relations:
        terms = []
        for w, c in rel.terms:
            v = c.value
            if isinstance(v, Fraction) and v.denominator != 1:
                coeff: int | str = f"{v.numerator}/{v.denominator}"
            else:
                coeff = int(v)
            terms.append([coeff, [pres.generators[i].label for i in w]])
        rels.append(terms)
    return {
        "field": pres.fieldspec.characteristic,
        "generators": [g.label for g in pres.generators],
        "relations": rels,
    }


@dataclass(frozen=True)
class CatalogEntry:
    """A named presentation template plus its reference check data."""

    key: str
    source: str
    x_names: tuple[str, ...] = ()
    y_names: tuple[str, ...] = ()
    expected_series: tuple[int, ...] | None = None
    expected_nilpotency: int | None = None
    note: str = ""


_R31_SOURCE = """
generators a b c x
relations
cb - bc + aa
bb + aa - ac
cc - ba
xx
ax + bx - xa - xb
bx + cx - xa - xb - xc
"""

_R32_SOURCE = """
generators a b c x y
relations
cb - bc + aa
bb + aa - ac
cc - ba
yy - xx
yx
ay + bx + cy - xb - yc
ax + by - xa - yb
cy + bx - ya - xb - yc
ax + by + cx - ya - xb
"""

_P41_SOURCE = """
generators a
relations
aa
"""

_P42_SOURCE = """
generators a b
relations
bb - aa
ba
"""

_P43_SOURCE = """
generators a b c
relations
cc - ba
cb - aa
bb
ca
"""

_P44_SOURCE = """
generators a b c d
relations
dd - ca
dc - ab
db - aa
da
cd - bb
cc - ba
cb - bc
"""

_P45_SOURCE = """
generators a b c d e
relations
de - eb
ce - db
ee - da
ed - cb
dd - bb
cd - ab
ec - ca
dc - ba
cc - aa
ea
"""

CATALOG: dict[str, CatalogEntry] = {
    e.key: e
    for e in (
        CatalogEntry(
            "R31", _R31_SOURCE,
            x_names=("a", "b", "c"), y_names=("x",),
            expected_series=(1, 4, 10, 18, 21, 0), expected_nilpotency=5,
            note="3+1-generator seed, catalog reference series",
        ),
        CatalogEntry(
            "R32", _R32_SOURCE,
            x_names=("a", "b", "c"), y_names=("x", "y"),
            expected_series=(1, 5, 16, 35, 43, 0), expected_nilpotency=5,
            note="3+2-generator seed, catalog reference series",
        ),
        CatalogEntry(
            "P41", _P41_SOURCE,
            expected_series=(1, 1, 0), expected_nilpotency=2,
            note="semigroup family n=1",
        ),
        CatalogEntry(
            "P42", _P42_SOURCE,
            expected_series=(1, 2, 2, 0), expected_nilpotency=3,
            note="semigroup family n=2",
        ),
        CatalogEntry(
            "P43", _P43_SOURCE,
            expected_series=(1, 3, 5, 4, 0), expected_nilpotency=4,
            note="semigroup family n=3",
        ),
        CatalogEntry(
            "P44", _P44_SOURCE,
            expected_series=(1, 4, 9, 8, 0), expected_nilpotency=4,
            note="semigroup family n=4",
        ),
        CatalogEntry(
            "P45", _P45_SOURCE,
            expected_series=(1, 5, 15, 25, 0), expected_nilpotency=4,
            note="semigroup family n=5",
        ),
    )
}


def builtin(key: str, fieldspec: FieldSpec = FieldSpec(0)) -> Presentation:
    """Instantiate a catalog presentation over the requested field."""
    entry = CATALOG.get(key)
    if entry is None:
        raise KeyError(
            f"unknown catalog key {key!r}; available: {', '.join(sorted(CATALOG))}")
    text = f"field {fieldspec.characteristic}\n{entry.source}"
    return parse_presentation(text, label=key)
