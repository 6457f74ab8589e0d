"""Exact coefficient arithmetic over Q and over prime fields F_p.

Scalars are immutable values: a Fraction in characteristic 0, a reduced
residue in characteristic p.  All arithmetic is exact; characteristic-0
values use arbitrary-precision rationals so intermediate reductions can
never overflow silently.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm


class FieldError(ValueError):
    """Bad field specification, or arithmetic across distinct fields."""


def is_prime(n: int) -> bool:
    """Deterministic trial division; characteristics stay desk-sized."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The coefficient field: characteristic 0 means Q, p means F_p."""

    characteristic: int = 0

    def __post_init__(self) -> None:
        c = self.characteristic
        if c != 0 and not is_prime(c):
            raise FieldError(f"characteristic must be 0 or prime, got {c}")

    def __repr__(self) -> str:
        return f"FieldSpec({self.characteristic})"

    @property
    def is_rational(self) -> bool:
        return self.characteristic == 0

    def scalar(self, value: int | Fraction) -> "Scalar":
        """Map an integer (or exact rational in char 0) into the field."""
        p = self.characteristic
        if p == 0:
            return Scalar(Fraction(value), 0)
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise FieldError(f"denominator of {value} vanishes mod {p}")
            value = value.numerator * pow(value.denominator, -1, p)
        return Scalar(value % p, p)

    @property
    def zero(self) -> "Scalar":
        return self.scalar(0)

    @property
    def one(self) -> "Scalar":
        return self.scalar(1)


class Scalar:
    """An exact field element together with its characteristic."""

    __slots__ = ("value", "char")

    def __init__(self, value, char: int):
        self.value = value
        self.char = char

    @property
    def fieldspec(self) -> FieldSpec:
        return FieldSpec(self.char)

    def _check(self, other: "Scalar") -> None:
        if not isinstance(other, Scalar):
            raise TypeError(f"expected Scalar, got {type(other).__name__}")
        if self.char != other.char:
            raise FieldError(
                f"mixed-field operands: char {self.char} vs char {other.char}"
            )

    def __add__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        v = self.value + other.value
        return Scalar(v % self.char if self.char else v, self.char)

    def __sub__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        v = self.value - other.value
        return Scalar(v % self.char if self.char else v, self.char)

    def __mul__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        v = self.value * other.value
        return Scalar(v % self.char if self.char else v, self.char)

    def __truediv__(self, other: "Scalar") -> "Scalar":
        self._check(other)
        return self * other.inverse()

    def __neg__(self) -> "Scalar":
        v = -self.value
        return Scalar(v % self.char if self.char else v, self.char)

    def inverse(self) -> "Scalar":
        if not self.value:
            raise ZeroDivisionError("division by zero in the coefficient field")
        if self.char:
            return Scalar(pow(self.value, -1, self.char), self.char)
        return Scalar(Fraction(1) / self.value, 0)

    def __bool__(self) -> bool:
        return bool(self.value)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Scalar)
            and self.char == other.char
            and self.value == other.value
        )

    def __hash__(self) -> int:
        return hash((self.value, self.char))

    def __repr__(self) -> str:
        if self.char:
            return f"{self.value} (mod {self.char})"
        return str(self.value)


def arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    """Exact field arithmetic; op is one of add, sub, mul, div."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def integer_normalize(coeffs) -> list[int]:
    """Clear denominators and divide out the content.

    Returns the unique primitive integer vector proportional to the input,
    signed so the first nonzero entry (the leading-coefficient slot) is
    positive.
    """
    vals = [Fraction(c) for c in coeffs]
    if not vals:
        raise ValueError("integer_normalize needs a nonempty coefficient list")
    if not any(vals):
        raise ValueError("integer_normalize of the zero vector is undefined")
    den = lcm(*(v.denominator for v in vals))
    ints = [int(v * den) for v in vals]
    content = 0
    for n in ints:
        content = gcd(content, n)
    ints = [n // content for n in ints]
    for n in ints:
        if n:
            if n < 0:
                ints = [-m for m in ints]
            break
    return ints


def reduce_mod(coeffs, p: int) -> list[int]:
    """Componentwise residues c + pZ for an integer coefficient vector."""
    if not is_prime(p):
        raise FieldError(f"modulus must be prime, got {p}")
    return [c % p for c in coeffs]
