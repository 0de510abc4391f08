"""Exact rational angles modulo 1 and their dynamics under doubling.

Angles are measured in turns. Everything here is exact integer arithmetic;
Python integers are unbounded, so denominators such as ``2**40 * (2**40 - 1)``
never overflow.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

__all__ = [
    "Angle",
    "PreperiodPeriod",
    "BinaryExpansion",
    "CircularArc",
    "AngleParseError",
    "angle",
    "parse_angle",
    "double",
    "halves",
    "minus",
    "preperiod_period",
    "binary_expansion",
    "from_expansion",
    "orbit",
    "orbit_avoids",
    "multiplicative_order",
]


class AngleParseError(ValueError):
    """Raised for malformed, unreduced or out-of-range angle text."""


@dataclass(frozen=True, order=False)
class Angle:
    """A rational angle ``num/den`` in ``[0, 1)``, always reduced."""

    num: int
    den: int

    def __post_init__(self) -> None:
        if self.den <= 0:
            raise ValueError(f"denominator must be positive, got {self.den}")
        if not 0 <= self.num < self.den:
            raise ValueError(f"numerator out of range: {self.num}/{self.den}")
        if gcd(self.num, self.den) != 1:
            raise ValueError(f"angle not reduced: {self.num}/{self.den}")

    @classmethod
    def of(cls, value: Fraction | int | str | "Angle") -> "Angle":
        """Coerce a fraction, integer or ``"num/den"`` string, reducing mod 1."""
        if isinstance(value, Angle):
            return value
        if isinstance(value, str):
            return parse_angle(value)
        f = Fraction(value) % 1
        return cls(f.numerator, f.denominator)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __lt__(self, other: "Angle") -> bool:
        return self.num * other.den < other.num * self.den

    def __le__(self, other: "Angle") -> bool:
        return self.num * other.den <= other.num * self.den

    def __gt__(self, other: "Angle") -> bool:
        return other < self

    def __ge__(self, other: "Angle") -> bool:
        return other <= self

    def __add__(self, other: "Angle | Fraction | int") -> "Angle":
        o = other.fraction if isinstance(other, Angle) else Fraction(other)
        return Angle.of(self.fraction + o)

    def __sub__(self, other: "Angle | Fraction | int") -> "Angle":
        o = other.fraction if isinstance(other, Angle) else Fraction(other)
        return Angle.of(self.fraction - o)

    def __str__(self) -> str:
        return "0" if self.num == 0 else f"{self.num}/{self.den}"

    def __repr__(self) -> str:
        return f"Angle({self})"

    def is_periodic(self) -> bool:
        return self.den % 2 == 1

    def is_dyadic(self) -> bool:
        return self.den & (self.den - 1) == 0


def angle(num: int, den: int = 1) -> Angle:
    """Build an angle from a possibly unreduced fraction, reducing mod 1."""
    return Angle.of(Fraction(num, den))


_DEC = re.compile(r"^\s*(\d+)\s*(?:/\s*(\d+))?\s*$")
_BIN = re.compile(r"^\s*p:([01]*):([01]+)\s*$")


def parse_angle(text: str) -> Angle:
    """Parse ``"num/den"`` (reduced, ``0 <= num < den``) or ``"p:pre:per"``."""
    m = _BIN.match(text)
    if m:
        return from_expansion(BinaryExpansion(m.group(1), m.group(2)))
    m = _DEC.match(text)
    if not m:
        raise AngleParseError(f"cannot parse angle {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise AngleParseError(f"zero denominator in {text!r}")
    if den == 1 and num == 0:
        return Angle(0, 1)
    if not num < den:
        raise AngleParseError(f"angle {text!r} is not in [0, 1)")
    if gcd(num, den) != 1:
        raise AngleParseError(f"angle {text!r} is not reduced")
    return Angle(num, den)


def double(a: Angle) -> Angle:
    """The doubling map ``a -> 2a mod 1``."""
    return Angle.of(2 * a.fraction)


def halves(a: Angle) -> tuple[Angle, Angle]:
    """Both preimages of ``a`` under doubling, ``a/2`` first."""
    f = a.fraction
    return Angle.of(f / 2), Angle.of((f + 1) / 2)


def minus(a: Angle) -> Angle:
    """Complex conjugation on angles, ``a -> -a mod 1``."""
    return Angle.of(-a.fraction)


def multiplicative_order(base: int, modulus: int) -> int:
    """Order of ``base`` modulo an odd ``modulus``; 1 for modulus 1."""
    if modulus == 1:
        return 1
    k, x = 1, base % modulus
    while x != 1:
        x = x * base % modulus
        k += 1
    return k


@dataclass(frozen=True)
class PreperiodPeriod:
    preperiod: int
    period: int


def preperiod_period(a: Angle) -> PreperiodPeriod:
    """Minimal preperiod and period of ``a`` under doubling.

    Dyadic angles land on the fixed angle 0 and get period 1.
    """
    den, pre = a.den, 0
    while den % 2 == 0:
        den //= 2
        pre += 1
    return PreperiodPeriod(pre, multiplicative_order(2, den))


@dataclass(frozen=True)
class BinaryExpansion:
    """Binary digits ``.pre (per)^∞`` as two bit strings."""

    pre: str
    per: str

    def __str__(self) -> str:
        return f"p:{self.pre}:{self.per}"


def binary_expansion(a: Angle) -> BinaryExpansion:
    """Exact minimal binary expansion, found by long division."""
    pp = preperiod_period(a)
    bits = []
    x = a.fraction
    for _ in range(pp.preperiod + pp.period):
        x *= 2
        bits.append("1" if x >= 1 else "0")
        x %= 1
    s = "".join(bits)
    return BinaryExpansion(s[: pp.preperiod], s[pp.preperiod :])


def from_expansion(e: BinaryExpansion) -> Angle:
    """Evaluate ``.pre (per)^∞`` exactly."""
    if not e.per:
        raise AngleParseError("periodic word must be non-empty")
    lp, k = len(e.pre), len(e.per)
    pre = int(e.pre, 2) if e.pre else 0
    per = int(e.per, 2)
    return Angle.of(Fraction(pre, 2**lp) + Fraction(per, 2**lp * (2**k - 1)))


def orbit(a: Angle) -> list[Angle]:
    """``a, 2a, 4a, ...`` up to (excluding) the first repetition."""
    seen: set[Angle] = set()
    out: list[Angle] = []
    while a not in seen:
        seen.add(a)
        out.append(a)
        a = double(a)
    return out


@dataclass(frozen=True)
class CircularArc:
    """The counterclockwise arc from ``start`` to ``end``.

    Endpoints are excluded unless the matching ``closed_*`` flag is set.
    An arc with ``start == end`` is the full circle minus that point.
    """

    start: Angle
    end: Angle
    closed_start: bool = False
    closed_end: bool = False

    def __contains__(self, x: Angle) -> bool:
        if x == self.start:
            return self.closed_start
        if x == self.end:
            return self.closed_end
        s, e = self.start, self.end
        if s < e:
            return s < x < e
        return x > s or x < e

    def __str__(self) -> str:
        lb = "[" if self.closed_start else "("
        rb = "]" if self.closed_end else ")"
        return f"{lb}{self.start}, {self.end}{rb}"


def orbit_avoids(a: Angle, arc: CircularArc) -> bool:
    """True iff no element of ``orbit(a)`` lies in ``arc``."""
    return not any(x in arc for x in orbit(a))
