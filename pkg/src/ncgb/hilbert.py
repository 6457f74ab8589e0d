"""Hilbert series, nilpotency verdicts, a rank-based dimension oracle,
and the growth inequality checks.

The series comes from counting normal words (words avoiding every leading
word of a truncated basis) with the factor-automaton DP.  The oracle
recomputes graded dimensions by exact linear algebra over the free algebra
and deliberately shares nothing with the rewriting machinery, so the two
routes cross-check each other.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .groebner import GroebnerBasis, SubwordIndex
from .presentation import Presentation


class EngineInvariantError(AssertionError):
    """A certified mathematical invariant failed; the engine is buggy."""


@dataclass(frozen=True)
class HilbertData:
    """Graded dimensions dim R_q for q = 0..exact_through."""

    coefficients: tuple[int, ...]
    exact_through: int
    source: str  # "groebner" | "oracle"

    def __post_init__(self) -> None:
        if len(self.coefficients) != self.exact_through + 1:
            raise ValueError("coefficient vector length mismatch")
        if self.coefficients[0] != 1:
            raise ValueError("dim R_0 must be 1 (the unit)")
        if any(c < 0 for c in self.coefficients):
            raise ValueError("negative graded dimension")

    def is_nilpotent_certified(self) -> bool:
        return 0 in self.coefficients

    def nilpotency_degree(self) -> int | None:
        for q, c in enumerate(self.coefficients):
            if c == 0:
                return q
        return None


def render_series(coefficients) -> str:
    """Human form like '1 + 4t + 10t^2 + 18t^3 + 21t^4', zeros omitted."""
    bits = []
    for q, c in enumerate(coefficients):
        if c == 0:
            continue
        if q == 0:
            bits.append(str(c))
        elif q == 1:
            bits.append("t" if c == 1 else f"{c}t")
        else:
            bits.append(f"t^{q}" if c == 1 else f"{c}t^{q}")
    return " + ".join(bits) if bits else "0"


def hilbert_series(gb: GroebnerBasis, maxdeg: int) -> HilbertData:
    """dim R_q = number of degree-q words avoiding every leading word."""
    if maxdeg > gb.complete_through:
        raise ValueError(
            f"series requested through degree {maxdeg} but the basis is only "
            f"complete through {gb.complete_through}; counts beyond that "
            f"would overcount")
    idx = SubwordIndex(gb.leading_words(), len(gb.generators))
    counts = idx.normal_counts(maxdeg)
    if maxdeg >= 1 and counts[1] != len(gb.generators) - sum(
        1 for w in gb.leading_words() if len(w) == 1
    ):
        raise EngineInvariantError("degree-1 count disagrees with alphabet")
    _check_monotone_vanishing(counts)
    return HilbertData(tuple(counts), maxdeg, "groebner")


def _check_monotone_vanishing(counts) -> None:
    seen_zero = False
    for c in counts:
        if seen_zero and c != 0:
            raise EngineInvariantError(
                "graded component reappeared after vanishing")
        if c == 0:
            seen_zero = True


@dataclass(frozen=True)
class NilpotencyVerdict:
    """nilpotent(k) for the least k with dim R_k = 0, else the bound."""

    nilpotent: bool
    k: int | None
    checked_through: int

    @property
    def status(self) -> str:
        if self.nilpotent:
            return f"nilpotent({self.k})"
        return f"not-nilpotent-within({self.checked_through})"


def nilpotency_index(gb: GroebnerBasis) -> NilpotencyVerdict:
    data = hilbert_series(gb, gb.complete_through)
    k = data.nilpotency_degree()
    if k is None:
        return NilpotencyVerdict(False, None, gb.complete_through)
    return NilpotencyVerdict(True, k, gb.complete_through)


# ---------------------------------------------------------------------------
# brute-force dimension oracle


class OracleSizeError(ValueError):
    """The requested degree is beyond the desk-scale guard."""


def _rank_int_rows(rows: list[dict[int, int]]) -> int:
    """Fraction-free sparse row reduction over Q (integer rows)."""
    pivots: dict[int, dict[int, int]] = {}
    rank = 0
    for row in rows:
        row = dict(row)
        while row:
            col = max(row)
            piv = pivots.get(col)
            if piv is None:
                g = math.gcd(*row.values()) if len(row) > 1 else abs(row[col])
                if g > 1:
                    row = {c: v // g for c, v in row.items()}
                pivots[col] = row
                rank += 1
                break
            a = piv[col]
            b = row[col]
            new: dict[int, int] = {}
            for c, v in row.items():
                w = a * v - b * piv.get(c, 0)
                if w:
                    new[c] = w
            for c, v in piv.items():
                if c not in row:
                    w = -b * v
                    if w:
                        new[c] = w
            row = new
    return rank


def _rank_mod_p_rows(rows: list[dict[int, int]], p: int) -> int:
    pivots: dict[int, dict[int, int]] = {}
    rank = 0
    for row in rows:
        row = {c: v % p for c, v in row.items() if v % p}
        while row:
            col = max(row)
            piv = pivots.get(col)
            if piv is None:
                inv = pow(row[col], -1, p)
                pivots[col] = {c: (v * inv) % p for c, v in row.items()}
                rank += 1
                break
            b = row[col]
            new: dict[int, int] = {}
            for c, v in row.items():
                w = (v - b * piv.get(c, 0)) % p
                if w:
                    new[c] = w
            for c, v in piv.items():
                if c not in row:
                    w = (-b * v) % p
                    if w:
                        new[c] = w
            row = new
    return rank


def dim_oracle(pres: Presentation, d: int, cap: int = 250_000) -> int:
    """dim R_d by exact rank of the span of all U*r*V, no rewriting involved.

    Enumerates the n^d degree-d words as coordinates, spans every two-sided
    multiple of every relation landing in degree d, and subtracts the rank.
    """
    if d < 0:
        raise ValueError("degree must be non-negative")
    if d == 0:
        return 1
    n = pres.ngens
    total = n ** d
    if total > cap:
        raise OracleSizeError(
            f"{n}^{d} = {total} exceeds the oracle cap {cap}")
    char = pres.fieldspec.characteristic

    def col(word) -> int:
        v = 0
        for letter in word:
            v = v * n + letter
        return v

    rows: list[dict[int, int]] = []
    for rel in pres.relations:
        e = rel.degree()
        if e > d:
            continue
        if char == 0:
            den = math.lcm(*(c.value.denominator for _, c in rel.terms))
            terms = [(w, int(c.value * den)) for w, c in rel.terms]
        else:
            terms = [(w, c.value) for w, c in rel.terms]
        for i in range(d - e + 1):
            j = d - e - i
            for u in itertools.product(range(n), repeat=i):
                base = col(u) * n ** (d - i) if u else 0
                for v in itertools.product(range(n), repeat=j):
                    row = {}
                    for w, cv in terms:
                        row[col(u + w + v)] = cv
                    rows.append(row)
    if char == 0:
        rank = _rank_int_rows(rows)
    else:
        rank = _rank_mod_p_rows(rows, char)
    return total - rank


# ---------------------------------------------------------------------------
# growth inequality


@dataclass(frozen=True)
class GSReport:
    """Coefficients of H(t)(1 - n t + d t^2) and the verdict.

    For a certified-nilpotent series the whole product is exact and every
    coefficient is checked; otherwise only the entries fully determined by
    the known dimensions participate in the verdict.
    """

    product: tuple[int, ...]
    checked_through: int
    nilpotent: bool
    ok: bool


def gs_check(h: HilbertData, n: int, d: int) -> GSReport:
    coeffs = h.coefficients
    D = h.exact_through
    nilpotent = h.is_nilpotent_certified()
    top = D + 2 if nilpotent else D

    def hval(q: int) -> int:
        return coeffs[q] if 0 <= q <= D else 0

    product = tuple(
        hval(q) - n * hval(q - 1) + d * hval(q - 2) for q in range(top + 1)
    )
    checked_through = top if nilpotent else max(D - 2, 0)
    ok = product[0] >= 1 and all(
        product[q] >= 0 for q in range(1, checked_through + 1)
    )
    return GSReport(product, checked_through, nilpotent, ok)


# ---------------------------------------------------------------------------
# nilpotency thresholds


@dataclass(frozen=True)
class PhiThreshold:
    """1 / (4 cos^2(pi/(k+1))): the relation-density threshold for step k."""

    k: int
    value: float
    exact: Fraction | None
    display: str


def phi(k: int) -> PhiThreshold:
    if k < 2:
        raise ValueError("the threshold is defined for k >= 2")
    value = 1.0 / (4.0 * math.cos(math.pi / (k + 1)) ** 2)
    exact = {2: Fraction(1), 3: Fraction(1, 2), 5: Fraction(1, 3)}.get(k)
    if exact is not None:
        display = str(exact)
    elif k == 4:
        display = "(3-sqrt(5))/2"
    else:
        display = f"{value:.6f}"
    return PhiThreshold(k, value, exact, display)


def ceil_phi_n2(k: int, n: int) -> int:
    """ceil(phi_k * n^2), computed exactly (never through floats)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if k == 2:
        return n * n
    if k == 3:
        return (n * n + 1) // 2
    if k == 5:
        return (n * n + 2) // 3
    if k == 4:
        # phi_4 n^2 = (3 n^2 - sqrt(5 n^4)) / 2 with the root irrational
        # for n >= 1, so the ceiling is floor + 1.
        if n == 0:
            return 0
        a = 3 * n * n
        m = math.isqrt(5 * n ** 4)
        return (a - m - 1) // 2 + 1
    raise ValueError(f"no exact threshold form for k={k}")
