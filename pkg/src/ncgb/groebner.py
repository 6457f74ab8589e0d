"""Degree-truncated Buchberger completion in the free algebra.

Everything here is graded: relations are homogeneous, so an ambiguity of
degree d can only influence components of degree >= d, and processing
obstructions degree by degree yields a basis that is provably complete
through the truncation degree.

The reduction kernel rewrites the deglex-greatest reducible word first,
locating occurrences of leading words with an Aho-Corasick style factor
automaton.  Coefficients inside the kernel are raw Fractions / residues;
the public types carry Scalars.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass
from fractions import Fraction

from .freealg import Generator, Polynomial, Word, deglex_key
from .presentation import Presentation, render_expression
from .scalar import FieldError, FieldSpec, Scalar, integer_normalize, is_prime


class CompletionError(ValueError):
    """Invalid input to the completion machinery."""


# ---------------------------------------------------------------------------
# factor automaton over a set of forbidden (leading) words


class SubwordIndex:
    """Aho-Corasick automaton locating leading-word occurrences.

    States are proper prefixes of the patterns plus the root; match[s] is
    the index of the longest pattern ending at state s (through failure
    links), or -1.  Also drives the normal-word counting DP.
    """

    __slots__ = ("ngens", "patterns", "goto", "match", "depth")

    def __init__(self, patterns: list[Word], ngens: int):
        self.ngens = ngens
        self.patterns = list(patterns)
        goto: list[list[int]] = [[0] * ngens]
        match: list[int] = [-1]
        depth: list[int] = [0]
        fail: list[int] = [0]
        # trie
        raw: list[dict[int, int]] = [{}]
        for pi, pat in enumerate(self.patterns):
            if not pat:
                raise CompletionError("empty leading word")
            s = 0
            for letter in pat:
                nxt = raw[s].get(letter)
                if nxt is None:
                    nxt = len(raw)
                    raw.append({})
                    match.append(-1)
                    depth.append(depth[s] + 1)
                    fail.append(0)
                    raw[s][letter] = nxt
                s = nxt
            match[s] = pi
        # BFS failure links and dense transitions
        goto = [[0] * ngens for _ in raw]
        order: list[int] = []
        for a, child in raw[0].items():
            goto[0][a] = child
            fail[child] = 0
            order.append(child)
        i = 0
        while i < len(order):
            s = order[i]
            i += 1
            f = fail[s]
            if match[s] < 0 and match[f] >= 0:
                match[s] = match[f]
            for a in range(self.ngens):
                child = raw[s].get(a)
                if child is None:
                    goto[s][a] = goto[f][a]
                else:
                    fail[child] = goto[f][a]
                    goto[s][a] = child
                    order.append(child)
        self.goto = goto
        self.match = match
        self.depth = depth

    def find_first(self, word: Word) -> tuple[int, int] | None:
        """Leftmost occurrence: (pattern index, start position), or None."""
        goto = self.goto
        match = self.match
        s = 0
        for pos, letter in enumerate(word):
            s = goto[s][letter]
            m = match[s]
            if m >= 0:
                return m, pos + 1 - len(self.patterns[m])
        return None

    def contains_match(self, word: Word) -> bool:
        return self.find_first(word) is not None

    def normal_counts(self, maxdeg: int) -> list[int]:
        """Number of words per degree avoiding every pattern as a subword."""
        alive = [m < 0 for m in self.match]
        counts = [1]
        vec = {0: 1}
        goto = self.goto
        for _ in range(maxdeg):
            nxt: dict[int, int] = {}
            for s, k in vec.items():
                row = goto[s]
                for a in range(self.ngens):
                    t = row[a]
                    if alive[t]:
                        nxt[t] = nxt.get(t, 0) + k
            vec = nxt
            counts.append(sum(vec.values()))
        return counts


# ---------------------------------------------------------------------------
# reduction kernel on raw term dicts


def _neg_word(word: Word) -> Word:
    return tuple(-x for x in word)


def _reduce_raw(terms: dict, matcher, char: int) -> dict:
    """Full normal form of a raw {word: coeff} dict under a match oracle.

    matcher(word) returns (start, pattern_length, tails) for the chosen
    occurrence of a leading word, tails being the raw tail terms of the
    monic rule, or None when the word is irreducible.
    """
    work = dict(terms)
    done: dict = {}
    heap = [(-len(w), _neg_word(w)) for w in work]
    heapq.heapify(heap)
    while heap:
        nl, nw = heapq.heappop(heap)
        w = _neg_word(nw)
        c = work.pop(w, None)
        if c is None:
            continue
        hit = matcher(w)
        if hit is None:
            done[w] = done.get(w, 0) + c
            continue
        start, plen, tails = hit
        prefix = w[:start]
        suffix = w[start + plen:]
        if char:
            for tw, tc in tails:
                nword = prefix + tw + suffix
                nc = (work.get(nword, 0) - c * tc) % char
                if nc:
                    if nword not in work:
                        heapq.heappush(heap, (-len(nword), _neg_word(nword)))
                    work[nword] = nc
                elif nword in work:
                    del work[nword]
        else:
            for tw, tc in tails:
                nword = prefix + tw + suffix
                nc = work.get(nword, 0) - c * tc
                if nc:
                    if nword not in work:
                        heapq.heappush(heap, (-len(nword), _neg_word(nword)))
                    work[nword] = nc
                elif nword in work:
                    del work[nword]
    return {w: c for w, c in done.items() if c}


def _monicize_raw(terms: dict, char: int) -> tuple[Word, tuple]:
    """Scale a nonzero raw dict monic; returns (lead word, tail pairs)."""
    lead = max(terms, key=deglex_key)
    lc = terms[lead]
    if char:
        inv = pow(lc, -1, char)
        tails = tuple(
            (w, (c * inv) % char) for w, c in terms.items() if w != lead
        )
    else:
        tails = tuple((w, c / lc) for w, c in terms.items() if w != lead)
    return lead, tails


class _RuleSet:
    """Reduction rules: an automaton layer plus a same-degree word table."""

    __slots__ = ("index", "tails", "exact")

    def __init__(self, patterns: list[Word], tails: list[tuple], ngens: int):
        self.index = SubwordIndex(patterns, ngens)
        self.tails = list(tails)
        self.exact: dict[Word, tuple] = {}

    def add_exact(self, word: Word, tails: tuple) -> None:
        self.exact[word] = tails

    def __call__(self, word: Word):
        hit = self.index.find_first(word)
        if hit is not None:
            m, start = hit
            return start, len(self.index.patterns[m]), self.tails[m]
        tails = self.exact.get(word)
        if tails is not None:
            return 0, len(word), tails
        return None


def _poly_to_raw(poly: Polynomial) -> dict:
    return {w: c.value for w, c in poly.terms}


def _raw_to_poly(terms: dict, field: FieldSpec) -> Polynomial:
    char = field.characteristic
    return Polynomial.from_dict(
        {w: Scalar(c, char) for w, c in terms.items()}, field
    )


# ---------------------------------------------------------------------------
# public reduction and obstruction surface


def normal_form(f: Polynomial, basis: list[Polynomial], ngens: int | None = None) -> Polynomial:
    """Reduce f modulo the two-sided multiples of monic basis elements.

    The result contains no leading word of the basis as a subword of any of
    its words; the rewriting strategy (greatest word first, leftmost
    occurrence) is fixed, so the output is deterministic even when the
    basis is not confluent.
    """
    for g in basis:
        if g.field != f.field:
            raise FieldError("basis element over a different field")
        if g.is_zero():
            raise CompletionError("zero polynomial in the basis")
        if g.lead_coeff != f.field.one:
            raise CompletionError("basis elements must be monic")
    if f.is_zero() or not basis:
        return f
    if ngens is None:
        ngens = 1 + max(
            (max(letter for letter in w) for g in basis + [f]
             for w, _ in g.terms if w),
            default=0,
        )
    patterns = [g.lead_word for g in basis]
    tails = [tuple((w, c.value) for w, c in g.terms[1:]) for g in basis]
    rules = _RuleSet(patterns, tails, ngens)
    out = _reduce_raw(_poly_to_raw(f), rules, f.field.characteristic)
    return _raw_to_poly(out, f.field)


@dataclass(frozen=True)
class Obstruction:
    """A critical pair of leading words.

    For overlaps, offset is the length of the shared piece (a proper suffix
    of the left word equal to a proper prefix of the right word).  For
    inclusions, offset is where the right word starts inside the left one.
    """

    kind: str
    left: int
    right: int
    offset: int
    word: Word

    @property
    def degree(self) -> int:
        return len(self.word)


def find_obstructions(basis: list[Polynomial], maxdeg: int) -> list[Obstruction]:
    """All overlap and inclusion ambiguities with word degree <= maxdeg."""
    lws = [g.lead_word for g in basis]
    out: list[Obstruction] = []
    for i, u in enumerate(lws):
        for j, v in enumerate(lws):
            for k in range(1, min(len(u), len(v))):
                if len(u) + len(v) - k <= maxdeg and u[len(u) - k:] == v[:k]:
                    out.append(Obstruction("overlap", i, j, k, u + v[k:]))
            if i != j and len(v) < len(u) and len(u) <= maxdeg:
                for o in range(len(u) - len(v) + 1):
                    if u[o:o + len(v)] == v:
                        out.append(Obstruction("inclusion", i, j, o, u))
    out.sort(key=lambda ob: (ob.degree, deglex_key(ob.word), ob.left, ob.right,
                             ob.kind, ob.offset))
    return out


def s_polynomial(ob: Obstruction, basis: list[Polynomial]) -> Polynomial:
    """The difference of the two rewrites of the ambiguity word."""
    gi = basis[ob.left]
    gj = basis[ob.right]
    field = gi.field
    if ob.kind == "overlap":
        lu = gi.lead_word
        lv = gj.lead_word
        right = Polynomial.from_word(lv[ob.offset:], field)
        left = Polynomial.from_word(lu[: len(lu) - ob.offset], field)
        return gi * right - left * gj
    prefix = Polynomial.from_word(ob.word[: ob.offset], field)
    suffix = Polynomial.from_word(ob.word[ob.offset + len(gj.lead_word):], field)
    return gi - prefix * gj * suffix


# ---------------------------------------------------------------------------
# completion


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced, monic, degree-truncated basis of a graded two-sided ideal."""

    elements: tuple[Polynomial, ...]
    complete_through: int
    fieldspec: FieldSpec
    generators: tuple[Generator, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def leading_words(self) -> list[Word]:
        return [g.lead_word for g in self.elements]

    def by_degree(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for g in self.elements:
            counts[g.degree()] = counts.get(g.degree(), 0) + 1
        return counts


@dataclass
class _Entry:
    lead: Word
    tails: tuple  # ((word, raw coeff), ...)

    @property
    def degree(self) -> int:
        return len(self.lead)


def _stage_obstructions(entries: list[_Entry], degree: int) -> list[tuple]:
    """Critical pairs with ambiguity word of exactly the given degree.

    Inclusions never arise between stored entries (eager interreduction),
    so only overlaps are enumerated.
    """
    out = []
    for i, e in enumerate(entries):
        u = e.lead
        for j, f in enumerate(entries):
            v = f.lead
            k = len(u) + len(v) - degree
            if not 1 <= k <= min(len(u), len(v)) - 1:
                continue
            if u[len(u) - k:] == v[:k]:
                out.append((u + v[k:], i, j, k))
    out.sort(key=lambda t: (deglex_key(t[0]), t[1], t[2]))
    return out


def _stage_s_poly(entries: list[_Entry], amb: Word, i: int, j: int, k: int, char) -> dict:
    """Raw S-polynomial of an overlap: g_i * R - L * g_j, tails only.

    Both rewrites of the ambiguity word drop its leading term, so the raw
    dict is built directly from the two tails.
    """
    gi = entries[i]
    gj = entries[j]
    right = gj.lead[k:]
    left = gi.lead[: len(gi.lead) - k]
    acc: dict = {}
    for w, c in gi.tails:
        nw = w + right
        acc[nw] = acc.get(nw, 0) + c
    for w, c in gj.tails:
        nw = left + w
        acc[nw] = acc.get(nw, 0) - c
    if char:
        return {w: c % char for w, c in acc.items() if c % char}
    return {w: c for w, c in acc.items() if c}


def buchberger(
    pres: Presentation,
    maxdeg: int,
    shuffle_seed: int | None = None,
) -> GroebnerBasis:
    """Reduced Groebner basis of the relation ideal, complete through maxdeg.

    Obstructions are processed in ascending ambiguity degree (ties: deglex
    of the ambiguity word, then index pair), every new element is reduced
    against the current basis before insertion, and same-degree tails are
    interreduced at the end of each degree stage.  shuffle_seed randomizes
    the within-degree processing order; the reduced truncated basis is
    unique, so the output must not depend on it.
    """
    char = pres.fieldspec.characteristic
    ngens = pres.ngens
    if pres.relations:
        top = max(r.degree() for r in pres.relations)
        if maxdeg < top:
            raise CompletionError(
                f"maxdeg {maxdeg} is below the top relation degree {top}")
    entries: list[_Entry] = []
    inputs: dict[int, list[dict]] = {}
    for rel in pres.relations:
        inputs.setdefault(rel.degree(), []).append(_poly_to_raw(rel))
    rng = random.Random(shuffle_seed) if shuffle_seed is not None else None

    for d in range(1, maxdeg + 1):
        items: list[tuple[tuple, dict | None, tuple | None]] = []
        for pos, raw in enumerate(inputs.get(d, ())):
            items.append(((0, (), pos, 0), dict(raw), None))
        for amb, i, j, k in _stage_obstructions(entries, d):
            items.append(((1, amb, i, j), None, (amb, i, j, k)))
        if not items:
            continue
        if rng is not None:
            rng.shuffle(items)
        else:
            items.sort(key=lambda it: it[0])
        rules = _RuleSet(
            [e.lead for e in entries], [e.tails for e in entries], ngens)
        stage: list[_Entry] = []
        for _, raw, spec_ in items:
            if raw is None:
                amb, i, j, k = spec_
                raw = _stage_s_poly(entries, amb, i, j, k, char)
            h = _reduce_raw(raw, rules, char)
            if not h:
                continue
            lead, tails = _monicize_raw(h, char)
            if len(lead) != d:
                raise CompletionError(
                    "homogeneity violated during completion")
            entry = _Entry(lead, tails)
            stage.append(entry)
            rules.add_exact(lead, tails)
        # interreduce the tails of this degree against the full stage
        for entry in stage:
            raw = dict(entry.tails)
            if any(w in rules.exact for w in raw):
                reduced = _reduce_raw(raw, rules, char)
                entry.tails = tuple(reduced.items())
        entries.extend(stage)

    elements = []
    field = pres.fieldspec
    one = field.one
    for e in sorted(entries, key=lambda e: (e.degree, deglex_key(e.lead))):
        terms = {e.lead: one}
        for w, c in e.tails:
            terms[w] = Scalar(c, char)
        elements.append(Polynomial.from_dict(terms, field))
    return GroebnerBasis(
        elements=tuple(elements),
        complete_through=maxdeg,
        fieldspec=field,
        generators=pres.generators,
    )


def verify_confluence(gb: GroebnerBasis, maxdeg: int | None = None) -> list[Obstruction]:
    """Reduce every S-polynomial through the truncation; returns failures."""
    if maxdeg is None:
        maxdeg = gb.complete_through
    basis = list(gb.elements)
    ngens = len(gb.generators)
    patterns = [g.lead_word for g in basis]
    tails = [tuple((w, c.value) for w, c in g.terms[1:]) for g in basis]
    rules = _RuleSet(patterns, tails, ngens)
    char = gb.fieldspec.characteristic
    bad = []
    for ob in find_obstructions(basis, maxdeg):
        s = s_polynomial(ob, basis)
        if _reduce_raw(_poly_to_raw(s), rules, char):
            bad.append(ob)
    return bad


def is_reduced(gb: GroebnerBasis) -> bool:
    """Monic, fully interreduced, pairwise non-including leading words."""
    basis = list(gb.elements)
    one = gb.fieldspec.one
    for g in basis:
        if g.is_zero() or g.lead_coeff != one:
            return False
    for i, g in enumerate(basis):
        others = [h.lead_word for k, h in enumerate(basis) if k != i]
        if not others:
            continue
        idx = SubwordIndex(others, len(gb.generators))
        for w, _ in g.terms:
            if idx.contains_match(w):
                return False
    return True


# ---------------------------------------------------------------------------
# integer normalization and characteristic transfer


@dataclass(frozen=True)
class IntegerizedBasis:
    """Content-free integer form of a characteristic-0 basis."""

    elements: tuple[Polynomial, ...]
    complete_through: int
    generators: tuple[Generator, ...]
    lead_coeffs: tuple[int, ...]
    all_pow2: bool


def _is_pow2(n: int) -> bool:
    n = abs(n)
    return n > 0 and (n & (n - 1)) == 0


def integerize(gb: GroebnerBasis) -> IntegerizedBasis:
    """Scale each monic element to primitive integer coefficients.

    Reports every leading coefficient and whether each one is plus or minus
    a power of two.
    """
    if gb.fieldspec.characteristic != 0:
        raise FieldError("integerize applies to characteristic-0 bases only")
    field = FieldSpec(0)
    elements = []
    leads = []
    for g in gb.elements:
        ints = integer_normalize([c.value for _, c in g.terms])
        terms = {
            w: Scalar(Fraction(k), 0)
            for (w, _), k in zip(g.terms, ints)
        }
        elements.append(Polynomial.from_dict(terms, field))
        leads.append(ints[0])
    return IntegerizedBasis(
        elements=tuple(elements),
        complete_through=gb.complete_through,
        generators=gb.generators,
        lead_coeffs=tuple(leads),
        all_pow2=all(_is_pow2(c) for c in leads),
    )


def export_basis(gb: GroebnerBasis) -> str:
    """One element per line in the relation grammar, with a header.

    Characteristic-0 elements print in primitive integer form, prime-field
    elements as monic residue combinations; every line after the ``g<i> =``
    prefix reparses through the expression grammar.
    """
    pres = Presentation(gb.fieldspec, gb.generators, ())
    lines = [
        f"# field {gb.fieldspec.characteristic}",
        "# order " + " < ".join(g.label for g in gb.generators),
        f"# complete_through {gb.complete_through}",
    ]
    for i, g in enumerate(gb.elements, 1):
        lines.append(f"g{i} = " + render_expression(g, pres))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class TransferResult:
    basis: GroebnerBasis
    valid: bool
    leading_words_match: bool
    failures: tuple[Obstruction, ...]


def transfer_mod_p(gbz: IntegerizedBasis, p: int, maxdeg: int | None = None) -> TransferResult:
    """Reduce an integer basis mod p and certify it stays a Groebner basis.

    Raises when a leading coefficient vanishes mod p (the transfer is then
    meaningless); otherwise re-monicizes, reruns the S-polynomial checks
    through maxdeg, and reports whether the leading-word set survived.
    """
    if not is_prime(p):
        raise FieldError(f"transfer modulus must be prime, got {p}")
    if maxdeg is None:
        maxdeg = gbz.complete_through
    for i, lc in enumerate(gbz.lead_coeffs):
        if lc % p == 0:
            raise FieldError(
                f"leading coefficient {lc} of element {i + 1} vanishes mod {p}")
    field = FieldSpec(p)
    elements = []
    for g in gbz.elements:
        coeffs = [int(c.value) % p for _, c in g.terms]
        inv = pow(coeffs[0], -1, p)
        terms = {
            w: Scalar((k * inv) % p, p)
            for (w, _), k in zip(g.terms, coeffs)
            if k % p
        }
        elements.append(Polynomial.from_dict(terms, field))
    basis = GroebnerBasis(
        elements=tuple(elements),
        complete_through=maxdeg,
        fieldspec=field,
        generators=gbz.generators,
    )
    failures = tuple(verify_confluence(basis, maxdeg))
    lw_match = [g.lead_word for g in gbz.elements] == [g.lead_word for g in elements]
    return TransferResult(
        basis=basis,
        valid=not failures,
        leading_words_match=lw_match,
        failures=failures,
    )
