"""Parameter-plane combinatorics: roots, conjugate angles, wakes and limbs.

Periodic angles of ray period ``n`` are handled internally as integers ``j``
standing for ``j / (2**n - 1)``; doubling is ``j -> 2j mod (2**n - 1)``.
The public functions take and return :class:`~artifact.angles.Angle`.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Union

import numpy as np

from ._kernels import lavaurs_stack
from .angles import Angle, angle, preperiod_period

__all__ = [
    "RootPair",
    "Limb",
    "Center",
    "Misiurewicz",
    "ParameterSpec",
    "LAVAURS_MAX_PERIOD",
    "conjugate_angle",
    "conjugate_int",
    "lavaurs_partners",
    "roots_of_period",
    "root_pair",
    "root_of",
    "parse_root",
    "is_satellite",
    "wake_angles",
    "limb_of",
    "alpha_cycle",
    "minus_alpha_angles",
    "preperiod_one_angle",
    "douady_magic",
    "wake_contains",
    "at_or_behind",
    "valid_pair",
    "int_orbit",
    "exact_period_mask",
]

# Largest period for which the global Lavaurs table is built on demand.
LAVAURS_MAX_PERIOD = 24


# --------------------------------------------------------------------------
# Domain types


@dataclass(frozen=True)
class RootPair:
    """Characteristic angles ``lo < hi`` of a root of ray period ``ray_period``."""

    lo: Angle
    hi: Angle
    ray_period: int
    satellite: bool

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ValueError(f"root angles out of order: {self.lo}, {self.hi}")

    def __str__(self) -> str:
        return f"({self.lo}, {self.hi})"

    @property
    def den(self) -> int:
        return 2**self.ray_period - 1

    def ints(self) -> tuple[int, int]:
        """Numerators over ``2**ray_period - 1``."""
        d = self.den
        return self.lo.num * (d // self.lo.den), self.hi.num * (d // self.hi.den)


@dataclass(frozen=True)
class Limb:
    """The ``k/r``-limb of the main cardioid."""

    k: int
    r: int

    def __post_init__(self) -> None:
        if not (0 < self.k < self.r and gcd(self.k, self.r) == 1):
            raise ValueError(f"invalid rotation number {self.k}/{self.r}")

    def __str__(self) -> str:
        return f"{self.k}/{self.r}"


@dataclass(frozen=True)
class Center:
    """Center of the hyperbolic component whose root is ``root``."""

    root: RootPair

    def __str__(self) -> str:
        return f"c:{self.root.lo}/{self.root.hi}" if self.root.lo.den > 1 else "c:0"


@dataclass(frozen=True)
class Misiurewicz:
    """Landing point of the strictly preperiodic parameter ray ``angle``."""

    angle: Angle

    def __post_init__(self) -> None:
        if preperiod_period(self.angle).preperiod == 0:
            raise ValueError(f"Misiurewicz angle must be preperiodic: {self.angle}")

    def __str__(self) -> str:
        return f"m:{self.angle}"


ParameterSpec = Union[Center, Misiurewicz]


# --------------------------------------------------------------------------
# Integer kernels


def int_orbit(j: int, n: int) -> list[int]:
    """Orbit of ``j`` under doubling mod ``2**n - 1`` (length ``n``)."""
    d = (1 << n) - 1
    out = [j]
    for _ in range(n - 1):
        j = 2 * j % d
        out.append(j)
    return out


def _linked(a: int, b: int, c: int, d: int) -> bool:
    """Chords ``{a,b}`` and ``{c,d}`` (``a<b``, ``c<d``) cross in the disk.

    Sharing an endpoint does not count as crossing.
    """
    if a in (c, d) or b in (c, d):
        return False
    return (a < c < b) != (a < d < b)


def valid_pair(a: int, b: int, n: int) -> bool:
    """Whether ``{a, b}`` can be the characteristic chord of a period-``n`` portrait.

    The forward images must be pairwise unlinked, none may enter the open
    arc ``(a, b)``, and none may be shorter than the chord itself.
    """
    d = (1 << n) - 1
    if a > b:
        a, b = b, a
    chords = []
    x, y = a, b
    for _ in range(n):
        chords.append((min(x, y), max(x, y)))
        x, y = 2 * x % d, 2 * y % d
    w = b - a
    for c, e in chords[1:]:
        if a < c < b or a < e < b:
            return False
        if min(e - c, d - (e - c)) < w:
            return False
    for i in range(n):
        for k in range(i + 1, n):
            if _linked(*chords[i], *chords[k]):
                return False
    return True


def _itinerary(m: int, j: int, n: int) -> list[int]:
    """Itinerary of ``m/D`` relative to the diameter through ``j/(2D)``.

    Symbol 1 on the open arc ``(θ/2, (θ+1)/2)``, 0 on the complement, 2 on
    the diameter itself.
    """
    d = (1 << n) - 1
    out = []
    y = m
    for _ in range(n):
        t = 2 * y
        if t == j or t == j + d:
            out.append(2)
        elif j < t < j + d:
            out.append(1)
        else:
            out.append(0)
        y = 2 * y % d
    return out


def _intersect(a: int, b: int, c: int, e: int, turn: int) -> list[tuple[int, int]]:
    out = []
    for sh in (-turn, 0, turn):
        lo, hi = max(a, c + sh), min(b, e + sh)
        if lo <= hi:
            out.append((lo, hi))
    return out


def _point_with_itinerary(seq: list[int], j: int, n: int) -> int | None:
    """The unique period-``n`` numerator whose itinerary is ``seq``, if any."""
    d = (1 << n) - 1
    # arc endpoints in units of 1 / (2d * 2**(2n)) of a turn, so every halving stays exact
    unit = 1 << (2 * n)
    turn = 2 * d * unit
    halfcircle = {1: (j * unit, (j + d) * unit), 0: ((j + d) * unit, j * unit + turn)}
    word = list(seq) * 2
    arcs = [halfcircle[word[-1]]]
    for sym in reversed(word[:-1]):
        c, e = halfcircle[sym]
        new = []
        for a, b in arcs:
            for pa, pb in ((a // 2, b // 2), ((a + turn) // 2, (b + turn) // 2)):
                new.extend(_intersect(pa, pb, c, e, turn))
        arcs = new
    cands = set()
    scale = 2 * unit
    for a, b in arcs:
        for m in range(-(-a // scale), b // scale + 1):
            cands.add(m % d)
    good = [m for m in cands if _itinerary(m, j, n) == list(seq)]
    return good[0] if len(good) == 1 else None


def _conjugate_local(j: int, n: int) -> int:
    """Partner of ``j/(2**n-1)`` without building the global pairing."""
    it = _itinerary(j, j, n)
    orb = int_orbit(j, n)
    in_orbit = set(orb)
    found = []
    for c in (0, 1):
        x = _point_with_itinerary(it[:-1] + [c], j, n)
        if x is not None and x not in in_orbit and valid_pair(j, x, n):
            found.append(x)
    if len(found) == 1:
        return found[0]
    # satellite: partner is a circular neighbour within the orbit
    s = sorted(orb)
    i = s.index(j)
    good = {x for x in (s[(i + 1) % n], s[i - 1]) if x != j and valid_pair(j, x, n)}
    if len(good) != 1:
        raise RuntimeError(f"no unique conjugate for {j}/{(1 << n) - 1}")
    return good.pop()


def exact_period_mask(n: int) -> np.ndarray:
    """Boolean mask over ``0..2**n-2`` of numerators with exact period ``n``."""
    d = (1 << n) - 1
    mask = np.ones(d, dtype=bool)
    if n == 1:
        return mask
    mask[0] = False
    for k in range(1, n):
        if n % k == 0:
            mask[:: d // ((1 << k) - 1)] = False
    return mask


def _sort_keys(idx: np.ndarray, k: int, bits: int) -> np.ndarray:
    """First ``bits`` binary digits of ``(idx / (2**k-1))`` as integers."""
    i = idx.astype(np.uint64)
    key = np.zeros_like(i)
    s = bits
    while s >= k:
        s -= k
        key |= i << np.uint64(s)
    if s > 0:
        key |= i >> np.uint64(k - s)
    return key


_lavaurs: dict[int, np.ndarray] = {}
_lavaurs_lock = threading.Lock()


def _lavaurs_period(n: int) -> np.ndarray:
    # Every chord of lower period is an opening or closing parenthesis; new
    # angles of period n pair consecutively inside each region.
    bits = 2 * n  # Fine-Wilf: 2n digits separate distinct words of period <= n
    keys, kinds, vals = [], [], []
    for k in range(2, n):
        p = _lavaurs[k]
        idx = np.nonzero(p >= 0)[0]
        keys.append(_sort_keys(idx, k, bits))
        kinds.append(np.where(idx < p[idx], 0, 1).astype(np.int8))
        vals.append(idx)
    new = np.nonzero(exact_period_mask(n))[0]
    keys.append(_sort_keys(new, n, bits))
    kinds.append(np.full(len(new), 2, np.int8))
    vals.append(new)
    order = np.argsort(np.concatenate(keys), kind="stable")
    kinds_s = np.concatenate(kinds)[order]
    vals_s = np.concatenate(vals)[order]
    del order
    part = np.full((1 << n) - 1, -1, dtype=np.int64 if n > 30 else np.int32)
    lavaurs_stack(kinds_s, vals_s, part)
    return part


def lavaurs_partners(n: int) -> np.ndarray:
    """Partner table for period ``n``: ``part[j]`` pairs with ``j`` or is -1.

    Entries are -1 exactly for numerators whose exact period is below ``n``.
    Tables are built once per process and shared read-only.
    """
    if not 2 <= n <= LAVAURS_MAX_PERIOD:
        raise ValueError(f"Lavaurs table supports periods 2..{LAVAURS_MAX_PERIOD}, got {n}")
    with _lavaurs_lock:
        for k in range(2, n + 1):
            if k not in _lavaurs:
                t = _lavaurs_period(k)
                t.setflags(write=False)
                _lavaurs[k] = t
        return _lavaurs[n]


def conjugate_int(j: int, n: int) -> int:
    """Partner numerator of ``j/(2**n-1)``; ``j`` must have exact period ``n``."""
    if n <= 16:
        return int(lavaurs_partners(n)[j])
    return _conjugate_local(j, n)


# --------------------------------------------------------------------------
# Public operations


def _periodic_int(a: Angle) -> tuple[int, int]:
    pp = preperiod_period(a)
    if pp.preperiod != 0 or a.num == 0:
        raise ValueError(f"{a} is not a non-zero periodic angle")
    n = pp.period
    return a.num * (((1 << n) - 1) // a.den), n


def conjugate_angle(a: Angle) -> Angle:
    """The other characteristic angle of the root having ``a`` as one of its angles.

    Small periods read the Lavaurs table; larger periods use an exact local
    itinerary search, which needs no global pairing.
    """
    j, n = _periodic_int(a)
    if n == 1:
        raise ValueError("angle 0 has no conjugate")
    return angle(conjugate_int(j, n), (1 << n) - 1)


def root_pair(a: int, b: int, n: int) -> RootPair:
    """Build a :class:`RootPair` from numerators over ``2**n - 1``."""
    if a > b:
        a, b = b, a
    d = (1 << n) - 1
    sat = b in int_orbit(a, n)
    return RootPair(angle(a, d), angle(b, d), n, sat)


def roots_of_period(k: int) -> tuple[RootPair, ...]:
    """All roots of ray period exactly ``k``, ordered by ``lo``."""
    if k == 1:
        return ()
    part = lavaurs_partners(k)
    idx = np.nonzero(part >= 0)[0]
    lo = idx[idx < part[idx]]
    return tuple(root_pair(int(a), int(part[a]), k) for a in lo)


def is_satellite(rp: RootPair) -> bool:
    a, b = rp.ints()
    return b in int_orbit(a, rp.ray_period)


def _alpha_ints(k: int, r: int) -> list[int]:
    # smallest angle of the rotation-k/r cycle, read off its binary word
    y0 = sum(1 << (r - 1 - t) for t in range(r) if (t * k) % r >= r - k)
    return int_orbit(y0, r)


def alpha_cycle(limb: Limb) -> frozenset[Angle]:
    """Angles of the ``r`` rays landing at the alpha fixed point in ``limb``."""
    d = (1 << limb.r) - 1
    return frozenset(angle(x, d) for x in _alpha_ints(limb.k, limb.r))


def wake_angles(limb: Limb) -> RootPair:
    """Root of the ``k/r`` satellite of the main cardioid."""
    s = sorted(_alpha_ints(limb.k, limb.r))
    for x, y in zip(s, s[1:]):
        if y - x == 1:
            return root_pair(x, y, limb.r)
    raise AssertionError("rotation cycle has no adjacent pair")


def minus_alpha_angles(limb: Limb) -> frozenset[Angle]:
    """Angles landing at ``-alpha``: the alpha cycle shifted by one half."""
    return frozenset(a + Fraction(1, 2) for a in alpha_cycle(limb))


def preperiod_one_angle(limb: Limb) -> Angle:
    """Midpoint of the wake, an angle of preperiod 1 and period ``r``."""
    w = wake_angles(limb)
    return Angle.of((w.lo.fraction + w.hi.fraction) / 2)


def douady_magic(theta: Angle) -> Angle:
    """Real-axis angle ``1/2 + θ/4`` for a cardioid angle ``θ`` in ``[0, 1/3]``."""
    if theta.fraction > Fraction(1, 3):
        raise ValueError(f"douady_magic needs θ in [0, 1/3], got {theta}")
    return Angle.of(Fraction(1, 2) + theta.fraction / 4)


def wake_contains(rp: RootPair, a: Angle) -> bool:
    """True iff ``a`` lies strictly inside the arc ``(lo, hi)``."""
    return rp.lo < a < rp.hi


def at_or_behind(rp: RootPair, a: Angle) -> bool:
    """Like :func:`wake_contains` but also true on the two root angles."""
    return rp.lo <= a <= rp.hi


def limb_of(a: Angle) -> Limb | None:
    """The limb whose wake contains ``a``, by Stern-Brocot descent.

    Angles equal to a wake boundary, and the angle 0, give ``None``.
    """
    if a.num == 0:
        return None
    lo, hi = (0, 1), (1, 1)
    cap = max(64, 4 * a.den.bit_length())
    while True:
        k, r = lo[0] + hi[0], lo[1] + hi[1]
        if r > cap:
            return None
        w = wake_angles(Limb(k, r))
        if w.lo < a < w.hi:
            return Limb(k, r)
        if a == w.lo or a == w.hi:
            return None
        if a < w.lo:
            hi = (k, r)
        else:
            lo = (k, r)


def root_of(a: Angle) -> RootPair:
    """The root having the periodic angle ``a`` as one of its two angles."""
    j, n = _periodic_int(a)
    return root_pair(j, conjugate_int(j, n), n)


def parse_root(lo: str | Angle, hi: str | Angle) -> RootPair:
    """Validate that ``lo`` and ``hi`` are the two angles of one root."""
    a, b = Angle.of(lo), Angle.of(hi)
    rp = root_of(a)
    if {rp.lo, rp.hi} != {a, b}:
        raise ValueError(f"{a} and {b} are not the angles of one root (partner of {a} is {rp.hi if rp.lo == a else rp.lo})")
    return rp
