"""Copy inflation of bi-graded quadratic presentations.

A seed splits a presentation whose generators fall into two families X and
Y, with every quadratic relation supported on X.X, on Y.Y, or on X.Y + Y.X.
Inflation replaces each X-generator by alpha indexed copies and each
Y-generator by beta copies, and each relation by the corresponding indexed
family; the nilpotency index is preserved, which the test suite certifies
on a grid of (alpha, beta) rather than assuming.

construct5 assembles, for every n, a presentation with n generators and
ceil(n^2/3) quadratic relations whose fifth graded component vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .freealg import Generator, GWord, Polynomial, XFAM, YFAM
from .presentation import CATALOG, Presentation, builtin, render_expression
from .scalar import FieldSpec, Scalar


class InflationError(ValueError):
    """The presentation does not have the bi-graded shape."""


@dataclass(frozen=True)
class BiSeed:
    """Coefficient tensors of a bi-graded quadratic presentation.

    c_xx[p][j][l] multiplies x_j x_l in the p-th X.X relation; c_xy[r][j][k]
    and c_yx[r][k][j] multiply x_j y_k and y_k x_j in the r-th mixed
    relation; c_yy[q][k][w] multiplies y_k y_w.
    """

    fieldspec: FieldSpec
    x_names: tuple[str, ...]
    y_names: tuple[str, ...]
    c_xx: tuple
    c_yy: tuple
    c_xy: tuple
    c_yx: tuple
    label: str | None = None

    def __post_init__(self) -> None:
        gx, gy = self.g_x, self.g_y
        for name, tensor, rows, cols in (
            ("c_xx", self.c_xx, gx, gx),
            ("c_yy", self.c_yy, gy, gy),
            ("c_xy", self.c_xy, gx, gy),
            ("c_yx", self.c_yx, gy, gx),
        ):
            for sl in tensor:
                if len(sl) != rows or any(len(r) != cols for r in sl):
                    raise InflationError(f"{name} tensor has wrong dimensions")
        if len(self.c_xy) != len(self.c_yx):
            raise InflationError("mixed tensors disagree on relation count")
        for tensors in (self.c_xx, self.c_yy):
            for i, sl in enumerate(tensors, 1):
                if not any(any(r) for r in sl):
                    raise InflationError(f"relation slice {i} is zero")
        for i, (sl1, sl2) in enumerate(zip(self.c_xy, self.c_yx), 1):
            if not (any(any(r) for r in sl1) or any(any(r) for r in sl2)):
                raise InflationError(f"mixed relation slice {i} is zero")

    @property
    def g_x(self) -> int:
        return len(self.x_names)

    @property
    def g_y(self) -> int:
        return len(self.y_names)

    @property
    def r_xx(self) -> int:
        return len(self.c_xx)

    @property
    def r_yy(self) -> int:
        return len(self.c_yy)

    @property
    def r_xy(self) -> int:
        return len(self.c_xy)


def split_seed(pres: Presentation, x_labels, y_labels) -> BiSeed:
    """Classify the relations of a quadratic presentation by X/Y support."""
    x_labels = tuple(x_labels)
    y_labels = tuple(y_labels)
    labels = [g.label for g in pres.generators]
    if sorted(x_labels + y_labels) != sorted(labels):
        raise InflationError(
            f"X {x_labels} and Y {y_labels} must partition the generators "
            f"{tuple(labels)}")
    side = {}
    for j, name in enumerate(x_labels):
        side[pres.index_of[name]] = ("x", j)
    for k, name in enumerate(y_labels):
        side[pres.index_of[name]] = ("y", k)
    zero = pres.fieldspec.zero
    gx, gy = len(x_labels), len(y_labels)
    c_xx, c_yy, c_xy, c_yx = [], [], [], []
    for rel in pres.relations:
        if rel.degree() != 2:
            raise InflationError(
                f"relation {render_expression(rel, pres)} is not quadratic")
        kinds = set()
        for (u, v), _ in rel.terms:
            a, b = side[u][0], side[v][0]
            kinds.add("xy" if a != b else a + b)
        if len(kinds) != 1:
            raise InflationError(
                f"relation {render_expression(rel, pres)} mixes "
                f"{' and '.join(sorted(kinds))} terms")
        kind = kinds.pop()
        if kind == "xx":
            sl = [[zero] * gx for _ in range(gx)]
            for (u, v), c in rel.terms:
                sl[side[u][1]][side[v][1]] = c
            c_xx.append(tuple(tuple(r) for r in sl))
        elif kind == "yy":
            sl = [[zero] * gy for _ in range(gy)]
            for (u, v), c in rel.terms:
                sl[side[u][1]][side[v][1]] = c
            c_yy.append(tuple(tuple(r) for r in sl))
        else:
            sxy = [[zero] * gy for _ in range(gx)]
            syx = [[zero] * gx for _ in range(gy)]
            for (u, v), c in rel.terms:
                if side[u][0] == "x":
                    sxy[side[u][1]][side[v][1]] = c
                else:
                    syx[side[u][1]][side[v][1]] = c
            c_xy.append(tuple(tuple(r) for r in sxy))
            c_yx.append(tuple(tuple(r) for r in syx))
    return BiSeed(
        fieldspec=pres.fieldspec,
        x_names=x_labels,
        y_names=y_labels,
        c_xx=tuple(c_xx),
        c_yy=tuple(c_yy),
        c_xy=tuple(c_xy),
        c_yx=tuple(c_yx),
        label=pres.label,
    )


@dataclass(frozen=True)
class RelationId:
    """Which relation family and which copy indices: f^{cls}_{index,i1,i2}."""

    cls: str  # "xx" | "yy" | "xy"
    index: int  # 1-based within the family
    i1: int = 1
    i2: int = 1


@dataclass(frozen=True)
class InflationResult:
    presentation: Presentation
    alpha: int
    beta: int
    generator_count: int
    relation_count: int


def _x_gen(seed: BiSeed, j: int, s: int) -> Generator:
    return Generator(seed.x_names[j], XFAM, s)


def _y_gen(seed: BiSeed, k: int, t: int) -> Generator:
    return Generator(seed.y_names[k], YFAM, t)


def relation_gword_terms(seed: BiSeed, rel: RelationId) -> dict[GWord, Scalar]:
    """The relation as a generator-word combination, alphabet-free."""
    p = rel.index - 1
    acc: dict[GWord, Scalar] = {}
    if rel.cls == "xx":
        for j in range(seed.g_x):
            for l in range(seed.g_x):
                c = seed.c_xx[p][j][l]
                if c:
                    acc[(_x_gen(seed, j, rel.i1), _x_gen(seed, l, rel.i2))] = c
    elif rel.cls == "yy":
        for k in range(seed.g_y):
            for w in range(seed.g_y):
                c = seed.c_yy[p][k][w]
                if c:
                    acc[(_y_gen(seed, k, rel.i1), _y_gen(seed, w, rel.i2))] = c
    elif rel.cls == "xy":
        for j in range(seed.g_x):
            for k in range(seed.g_y):
                c = seed.c_xy[p][j][k]
                if c:
                    acc[(_x_gen(seed, j, rel.i1), _y_gen(seed, k, rel.i2))] = c
                c = seed.c_yx[p][k][j]
                if c:
                    acc[(_y_gen(seed, k, rel.i2), _x_gen(seed, j, rel.i1))] = c
    else:
        raise ValueError(f"unknown relation class {rel.cls!r}")
    return acc


def inflate(seed: BiSeed, alpha: int, beta: int) -> InflationResult:
    """The inflated presentation over alpha X-copies and beta Y-copies."""
    if alpha < 0 or beta < 0:
        raise InflationError("copy counts must be non-negative")
    if alpha + beta == 0:
        raise InflationError("alpha + beta must be at least 1 (empty alphabet)")
    gens: list[Generator] = []
    index: dict[Generator, int] = {}
    for j in range(seed.g_x):
        for s in range(1, alpha + 1):
            g = _x_gen(seed, j, s)
            index[g] = len(gens)
            gens.append(g)
    for k in range(seed.g_y):
        for t in range(1, beta + 1):
            g = _y_gen(seed, k, t)
            index[g] = len(gens)
            gens.append(g)

    field = seed.fieldspec
    relations: list[Polynomial] = []
    rel_ids: list[RelationId] = []
    for p in range(1, seed.r_xx + 1):
        for a in range(1, alpha + 1):
            for b in range(1, alpha + 1):
                rel_ids.append(RelationId("xx", p, a, b))
    for q in range(1, seed.r_yy + 1):
        for s in range(1, beta + 1):
            for t in range(1, beta + 1):
                rel_ids.append(RelationId("yy", q, s, t))
    for r in range(1, seed.r_xy + 1):
        for a in range(1, alpha + 1):
            for s in range(1, beta + 1):
                rel_ids.append(RelationId("xy", r, a, s))
    seen: set = set()
    for rid in rel_ids:
        gterms = relation_gword_terms(seed, rid)
        terms = {tuple(index[g] for g in w): c for w, c in gterms.items()}
        poly = Polynomial.from_dict(terms, field)
        if poly.terms in seen:
            raise InflationError(
                f"inflation produced a duplicate relation at {rid}")
        seen.add(poly.terms)
        relations.append(poly)

    expected = (alpha * alpha * seed.r_xx + beta * beta * seed.r_yy
                + alpha * beta * seed.r_xy)
    if len(relations) != expected:
        raise InflationError("relation count disagrees with the formula")
    label = f"{seed.label or 'seed'}^({alpha},{beta})"
    pres = Presentation(field, tuple(gens), tuple(relations), label=label)
    return InflationResult(
        presentation=pres,
        alpha=alpha,
        beta=beta,
        generator_count=len(gens),
        relation_count=len(relations),
    )


def lift_product(
    seed: BiSeed,
    U: GWord,
    rel: RelationId,
    V: GWord,
    s: tuple[int, ...],
    t: tuple[int, ...],
    alpha: int,
    beta: int,
) -> tuple[GWord, RelationId, GWord]:
    """Unique lift of U*f*V into the (s, t) multihomogeneous component.

    U and V live over the copy-1 alphabet; the lift re-indexes their
    letters with the entries of s and t in order of occurrence and picks
    the member of f's indexed family that consumes the middle entries.
    """
    if rel.i1 != 1 or rel.i2 != 1:
        raise InflationError("the base relation must carry copy indices 1,1")
    for w in (U, V):
        for g in w:
            if g.copy != 1:
                raise InflationError("U and V must be copy-1 words")
    deg_f = 2
    n = len(U) + len(V) + deg_f
    fx = {"xx": 2, "yy": 0, "xy": 1}[rel.cls]
    n_x = (sum(1 for g in U if g.family == XFAM)
           + sum(1 for g in V if g.family == XFAM) + fx)
    if len(s) != n_x or len(t) != n - n_x:
        raise InflationError(
            f"index vectors have lengths {len(s)},{len(t)}; "
            f"expected {n_x},{n - n_x}")
    if any(not 1 <= v <= alpha for v in s) or any(not 1 <= v <= beta for v in t):
        raise InflationError("index vector entries exceed the copy bounds")

    def reindex(word: GWord, si: int, ti: int) -> tuple[GWord, int, int]:
        out = []
        for g in word:
            if g.family == XFAM:
                out.append(Generator(g.name, XFAM, s[si]))
                si += 1
            else:
                out.append(Generator(g.name, YFAM, t[ti]))
                ti += 1
        return tuple(out), si, ti

    U2, a, b = reindex(U, 0, 0)
    if rel.cls == "xx":
        rel2 = RelationId("xx", rel.index, s[a], s[a + 1])
        a += 2
    elif rel.cls == "yy":
        rel2 = RelationId("yy", rel.index, t[b], t[b + 1])
        b += 2
    else:
        rel2 = RelationId("xy", rel.index, s[a], t[b])
        a += 1
        b += 1
    V2, a, b = reindex(V, a, b)
    return U2, rel2, V2


def construct5(n: int, fieldspec: FieldSpec = FieldSpec(0)) -> Presentation:
    """n generators, ceil(n^2/3) quadratic relations, vanishing in degree 5.

    n = 3a uses a copies of the X-part of the 4-generator seed; n = 3a+1
    adds one Y-copy; n = 3a+2 switches to the 5-generator seed with one
    copy of its two-element Y-family.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    if n % 3 == 2:
        entry_key, alpha, beta = "R32", (n - 2) // 3, 1
    elif n % 3 == 1:
        entry_key, alpha, beta = "R31", (n - 1) // 3, 1
    else:
        entry_key, alpha, beta = "R31", n // 3, 0
    entry = CATALOG[entry_key]
    seed = split_seed(builtin(entry_key, fieldspec), entry.x_names, entry.y_names)
    result = inflate(seed, alpha, beta)
    pres = result.presentation
    if result.generator_count != n:
        raise InflationError(
            f"construct5({n}) produced {result.generator_count} generators")
    return Presentation(
        pres.fieldspec, pres.generators, pres.relations, label=f"nil5-{n}")
