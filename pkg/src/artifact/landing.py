"""Which rational dynamic rays land together for a postcritically finite parameter.

Periodic rays co-land according to the orbit portraits of the roots at or
before the parameter. Preperiodic rays are pulled back one step at a time:
two angles co-land iff their doubles do and no critical curve separates them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from typing import Iterable

from .angles import Angle, CircularArc, angle, double, halves, minus, orbit, preperiod_period
from .params import (
    Center,
    Limb,
    Misiurewicz,
    ParameterSpec,
    RootPair,
    conjugate_int,
    int_orbit,
    wake_angles,
)

__all__ = [
    "LandingClass",
    "ForbiddenIntervals",
    "CatalogMiss",
    "BoundedCheck",
    "colands",
    "landing_set",
    "landing_class",
    "forbidden_intervals",
    "bounded_connection_check",
    "is_before",
    "is_real",
    "hubbard_tree_angles",
]


class CatalogMiss(LookupError):
    """The parameter is outside the forbidden-interval catalog."""


@dataclass(frozen=True)
class LandingClass:
    angles: frozenset[Angle]
    point_preperiod: int
    point_period: int

    def sorted(self) -> list[Angle]:
        return sorted(self.angles)


# --------------------------------------------------------------------------
# Parameter position


def _root_before(r_lo: int, r_hi: int, n: int, c: ParameterSpec) -> bool:
    """Whether the period-``n`` root ``(r_lo, r_hi)`` is at or before ``c``."""
    d = (1 << n) - 1
    lo, hi = Fraction(r_lo, d), Fraction(r_hi, d)
    if isinstance(c, Center):
        c_lo, c_hi = c.root.lo.fraction, c.root.hi.fraction
        return lo <= c_lo and c_hi <= hi
    t = c.angle.fraction
    return lo < t < hi


def is_before(rp: RootPair, c: ParameterSpec) -> bool:
    """True iff ``c`` lies in the closed wake of ``rp`` (``c`` at or behind ``rp``)."""
    a, b = rp.ints()
    return _root_before(a, b, rp.ray_period, c)


# --------------------------------------------------------------------------
# Periodic co-landing


def _portrait_point(a: int, b: int, n: int, x: int) -> frozenset[int]:
    """Rays at the point of root ``(a, b)``'s portrait that carries ``x``."""
    d = (1 << n) - 1
    orb_a = int_orbit(a, n)
    if b in orb_a:
        s = orb_a.index(b)
        m = _gcd(s, n)
        pts = [x]
        y = x
        for _ in range(n // m - 1):
            for _ in range(m):
                y = 2 * y % d
            pts.append(y)
        return frozenset(pts)
    y, z = a, b
    for _ in range(n):
        if y == x:
            return frozenset((x, z))
        if z == x:
            return frozenset((x, y))
        y, z = 2 * y % d, 2 * z % d
    return frozenset((x,))


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


@lru_cache(maxsize=4096)
def _periodic_class(c: ParameterSpec, j: int, n: int) -> frozenset[int]:
    # Each angle of the orbit is a characteristic angle of exactly one root;
    # those roots are the only ones whose portraits can contain j.
    out = {j}
    todo = [j]
    while todo:
        x = todo.pop()
        for y in int_orbit(x, n):
            partner = conjugate_int(y, n)
            a, b = min(y, partner), max(y, partner)
            if _root_before(a, b, n, c):
                new = _portrait_point(a, b, n, x) - out
                out |= new
                todo.extend(new)
    return frozenset(out)


def _periodic_int(a: Angle) -> tuple[int, int]:
    n = preperiod_period(a).period
    return a.num * (((1 << n) - 1) // a.den), n


# --------------------------------------------------------------------------
# Preperiodic pullback


def _side(x: Angle, start: Angle) -> int:
    """0 on the open half-circle ``(start, start+1/2)``, 1 on the other, -1 on its ends."""
    f = (x.fraction - start.fraction) % 1
    if f == 0 or f == Fraction(1, 2):
        return -1
    return 0 if f < Fraction(1, 2) else 1


def _separated_center(root: RootPair, a: Angle, b: Angle) -> bool:
    lo, hi = root.lo, root.hi
    d_lo = Angle.of(lo.fraction / 2)
    d_hi = Angle.of(hi.fraction / 2)
    for start in (d_lo, d_hi):
        sa, sb = _side(a, start), _side(b, start)
        if sa >= 0 and sb >= 0:
            return sa != sb
    # one angle on each diameter: only the two critical chords co-land
    chords = {
        frozenset((d_lo, Angle.of((hi.fraction + 1) / 2))),
        frozenset((d_hi, Angle.of((lo.fraction + 1) / 2))),
    }
    return frozenset((a, b)) not in chords


def landing_set(c: ParameterSpec, a: Angle) -> frozenset[Angle]:
    """All rational angles whose dynamic rays land with ``R_c(a)``."""
    return _landing_set(c, a)


@lru_cache(maxsize=65536)
def _landing_set(c: ParameterSpec, a: Angle) -> frozenset[Angle]:
    pp = preperiod_period(a)
    if pp.preperiod == 0:
        if a.num == 0:
            return frozenset((a,))
        j, n = _periodic_int(a)
        d = (1 << n) - 1
        return frozenset(angle(x, d) for x in _periodic_class(c, j, n))
    image = _landing_set(c, double(a))
    if isinstance(c, Misiurewicz) and c.angle in image:
        # the critical point: every preimage of a critical-value ray lands there
        return frozenset(h for y in image for h in halves(y))
    out = set()
    for y in image:
        for h in halves(y):
            if h == a or not _separated(c, a, h):
                out.add(h)
    return frozenset(out)


def _separated(c: ParameterSpec, a: Angle, b: Angle) -> bool:
    if isinstance(c, Center):
        return _separated_center(c.root, a, b)
    start = Angle.of(c.angle.fraction / 2)
    sa, sb = _side(a, start), _side(b, start)
    return sa >= 0 and sb >= 0 and sa != sb


def colands(c: ParameterSpec, a: Angle, b: Angle) -> bool:
    """True iff the dynamic rays ``R_c(a)`` and ``R_c(b)`` land at one point."""
    if a == b:
        return True
    if preperiod_period(a) != preperiod_period(b):
        return False
    return b in _landing_set(c, a)


def landing_class(c: ParameterSpec, a: Angle) -> LandingClass:
    """The landing class of ``a`` with the preperiod and period of its landing point."""
    angles = _landing_set(c, a)
    pp = preperiod_period(a)
    x = a
    for _ in range(pp.preperiod):
        x = double(x)
    base = _landing_set(c, x)
    m, y = 1, double(x)
    while y not in base:
        y = double(y)
        m += 1
    return LandingClass(angles, pp.preperiod, m)


# --------------------------------------------------------------------------
# Hubbard tree


def _sector(cls: frozenset[Angle], a: Angle) -> int:
    s = sorted(cls)
    for i, x in enumerate(s):
        y = s[(i + 1) % len(s)]
        if (a.fraction - x.fraction) % 1 < ((y.fraction - x.fraction) % 1 or 1):
            return i
    raise AssertionError("unreachable")


def hubbard_tree_angles(c: Misiurewicz, angles: Iterable[Angle]) -> set[Angle]:
    """Those ``angles`` whose rays land at branch or interior points of the Hubbard tree.

    A point where two or more rays land is on the tree iff it is marked (on the
    critical orbit) or the marked points meet at least two of its sectors.
    """
    if not isinstance(c, Misiurewicz):
        raise TypeError("Hubbard tree angles are implemented for Misiurewicz parameters")
    marks = {landing_set(c, x) for x in orbit(c.angle)}
    marks.add(landing_set(c, halves(c.angle)[0]))
    reps = [min(mk) for mk in marks]
    out = set()
    for a in angles:
        cls = landing_set(c, a)
        if len(cls) < 2:
            continue
        if cls in marks or len({_sector(cls, r) for r in reps}) >= 2:
            out.add(a)
    return out


# --------------------------------------------------------------------------
# Forbidden intervals catalog


@dataclass(frozen=True)
class ForbiddenIntervals:
    parameter: ParameterSpec
    family: str
    arcs: tuple[CircularArc, ...]


_AIRPLANE_LO = Fraction(3, 7)


def is_real(c: ParameterSpec) -> bool:
    """Whether ``c`` lies on the real axis."""
    if isinstance(c, Center):
        return c.root.lo.fraction + c.root.hi.fraction == 1
    t = c.angle
    return t == minus(t) or colands(c, t, minus(t))


def _behind_angle(c: ParameterSpec, target: Angle) -> bool:
    """Whether ``c`` lies on the vein from 0 to the Misiurewicz point ``target``."""
    if isinstance(c, Center):
        return c.root.lo < target < c.root.hi
    if c.angle == target:
        return True
    s = sorted(_landing_set(c, c.angle))
    return any(x < target < y for x, y in zip(s, s[1:]))


def forbidden_intervals(c: ParameterSpec) -> ForbiddenIntervals:
    """Forbidden arc for the mirrored Hubbard tree of ``c``, from a fixed catalog."""
    if is_real(c):
        t = c.root.lo.fraction if isinstance(c, Center) else min(c.angle, minus(c.angle)).fraction
        if t <= _AIRPLANE_LO:
            return ForbiddenIntervals(c, "real-before-airplane", (CircularArc(angle(6, 7), angle(1, 7)),))
    if _behind_angle(c, angle(1, 6)):
        return ForbiddenIntervals(c, "vein-1/6", (CircularArc(angle(13, 14), angle(3, 14)),))
    if _behind_angle(c, angle(1, 4)):
        return ForbiddenIntervals(c, "vein-1/4", (CircularArc(angle(3, 14), angle(5, 14)),))
    raise CatalogMiss(f"no forbidden-interval entry for {c}")


@dataclass(frozen=True)
class BoundedCheck:
    """Outcome of the one-sided forbidden-angle test.

    ``verdict`` is ``"holds"``, ``"fails"`` or ``"out-of-catalog"``; ``side``
    names the side of ``[alpha_p, -alpha_p]`` that fits, and ``boundary`` is
    set when it only fits up to an endpoint (a preimage of alpha).
    """

    verdict: str
    side: str | None = None
    boundary: bool = False
    periodic_diameter_bound: int | None = None
    diameter_bound: int | None = None


def _arc_fits(lo: Fraction, hi: Fraction, arc: CircularArc) -> tuple[bool, bool]:
    """Whether the closed angle range ``[lo, hi]`` fits in ``arc``; second flag marks a touching endpoint."""
    inner_lo, inner_hi = angle(lo.numerator, lo.denominator), angle(hi.numerator, hi.denominator)
    closed = CircularArc(arc.start, arc.end, True, True)

    def inside(x: Angle) -> bool:
        return x in closed

    # the range, read counterclockwise from lo to hi, must avoid the complement
    span = (hi - lo) % 1
    arc_span = (arc.end.fraction - arc.start.fraction) % 1
    off = (lo - arc.start.fraction) % 1
    ok = inside(inner_lo) and inside(inner_hi) and off + span <= arc_span
    touch = ok and (inner_lo in (arc.start, arc.end) or inner_hi in (arc.start, arc.end))
    return ok, touch


def bounded_connection_check(p_limb: Limb, q: ParameterSpec) -> BoundedCheck:
    """Test the one-sided forbidden-angle hypothesis for ``p`` in ``p_limb``.

    The upper side of ``[alpha_p, -alpha_p]`` carries angles in ``[0, θ+/2]``,
    the lower side angles in ``[(θ-+1)/2, 1]``.
    """
    try:
        fi = forbidden_intervals(q)
    except CatalogMiss:
        return BoundedCheck("out-of-catalog")
    w = wake_angles(p_limb)
    sides = {
        "upper": (Fraction(0), w.hi.fraction / 2),
        "lower": ((w.lo.fraction + 1) / 2, Fraction(1)),
    }
    best = None
    for name, (lo, hi) in sides.items():
        for arc in fi.arcs:
            ok, touch = _arc_fits(lo % 1, hi % 1, arc)
            if ok and (best is None or (best[1] and not touch)):
                best = (name, touch)
    if best is None:
        return BoundedCheck("fails")
    return BoundedCheck("holds", best[0], best[1], 4, 8)
