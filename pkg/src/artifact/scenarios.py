"""Registered verification scenarios for the named examples.

Each scenario computes its witnesses from the library alone and returns a
:class:`RunReport`. Failing reports carry the smallest offending data found.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from pathlib import Path
from typing import Callable

from .angles import Angle, CircularArc, angle, double, minus, orbit, orbit_avoids, preperiod_period
from .landing import bounded_connection_check, colands, hubbard_tree_angles, landing_class, landing_set
from .mating import (
    AngleUniverse,
    MatingSpec,
    build_classes,
    class_of,
    connection_between_critical_values,
    pullback_connection,
    universe_angles,
)
from .miner import NAMED_EXAMPLES, find_named_example, max_connections
from .params import (
    Center,
    Limb,
    Misiurewicz,
    alpha_cycle,
    douady_magic,
    minus_alpha_angles,
    root_of,
    wake_angles,
)

__all__ = ["Scenario", "RunReport", "SCENARIOS", "REFERENCE_COUNTS", "run_scenario", "scenario_names"]

AIRPLANE = Center(root_of(angle(3, 7)))
BASILICA = Center(root_of(angle(1, 3)))
KOKOPELLI = Center(root_of(angle(3, 15)))
QUARTER = Misiurewicz(angle(1, 4))

# period -> {length: (primitive, satellite)}
REFERENCE_COUNTS: dict[int, dict[int, tuple[int, int]]] = {
    10: {5: (32, 0), 6: (14, 88), 8: (0, 2)},
    11: {5: (76, 0), 6: (20, 0)},
    12: {5: (46, 0), 6: (24, 264)},
    13: {5: (226, 0), 6: (72, 0), 7: (2, 0), 8: (2, 0)},
    14: {5: (285, 0), 6: (102, 484), 7: (4, 0), 8: (0, 14), 10: (0, 2)},
    15: {5: (540, 0), 6: (192, 184)},
    16: {5: (958, 0), 6: (338, 1060), 7: (4, 0), 8: (2, 10), 10: (0, 4)},
    17: {5: (1872, 0), 6: (584, 0), 7: (14, 0), 8: (2, 0)},
    18: {5: (2814, 0), 6: (884, 2672), 7: (22, 0), 8: (6, 24), 10: (0, 8)},
    19: {5: (5856, 0), 6: (1650, 0), 7: (26, 0), 8: (6, 0)},
    20: {5: (9534, 0), 6: (2890, 5244), 7: (58, 0), 8: (4, 42), 10: (0, 8)},
    21: {5: (16978, 0), 6: (4900, 898), 7: (64, 0), 8: (4, 0)},
    22: {5: (30180, 0), 6: (8423, 10928), 7: (126, 0), 8: (18, 132), 10: (0, 20), 12: (0, 2)},
    23: {5: (55676, 0), 6: (15300, 0), 7: (172, 0), 8: (18, 0)},
    24: {5: (95830, 0), 6: (25968, 25312), 7: (242, 0), 8: (24, 96), 10: (0, 28)},
}
BASE_PERIODS = range(10, 17)
EXTENDED_PERIODS = range(17, 25)


@dataclass(frozen=True)
class Scenario:
    name: str
    inputs: dict
    expectation: str
    citation: str
    check: Callable[..., tuple[bool, dict]] = field(repr=False, compare=False)


@dataclass
class RunReport:
    name: str
    passed: bool
    witness: dict
    seconds: float

    def to_dict(self) -> dict:
        return {"scenario": self.name, "passed": self.passed, "witness": self.witness, "seconds": round(self.seconds, 3)}


def _s(xs) -> list[str]:
    return [str(a) for a in sorted(xs)]


# --------------------------------------------------------------------------
# Checks. Each returns (passed, witness).


def _milnor_quarter(**_) -> tuple[bool, dict]:
    u = AngleUniverse(6, 8)
    m = MatingSpec(QUARTER, QUARTER)
    classes = build_classes(m, u)
    bad = [c for c in classes if c.shape != "tree" or c.diameter > 3]
    tree = hubbard_tree_angles(QUARTER, universe_angles(u))
    common = {a for a in tree if minus(a) in tree}
    cycle = set(orbit(angle(3, 15)))
    stray = sorted(a for a in common if not cycle & set(orbit(a)))
    ok = not bad and cycle <= common and not stray
    return ok, {
        "classes": len(classes),
        "max_diameter": max(c.diameter for c in classes),
        "non_tree_or_long": [c.to_dict() for c in bad[:1]],
        "common_periodic": _s(a for a in common if preperiod_period(a).preperiod == 0),
        "common_count": len(common),
        "stray": _s(stray[:5]),
    }


def _kokopelli_airplane(**_) -> tuple[bool, dict]:
    u = AngleUniverse(6, 8)
    classes = build_classes(MatingSpec(KOKOPELLI, AIRPLANE), u)
    periodic = [c for c in classes if all(preperiod_period(a).preperiod == 0 for a in c.rays)]
    cyc = [c for c in classes if c.shape != "tree"]
    checks = {str(lb): bounded_connection_check(lb, AIRPLANE) for lb in (Limb(1, 4), Limb(1, 3))}
    max_all = max(c.diameter for c in classes)
    max_per = max(c.diameter for c in periodic)
    ok = not cyc and max_per <= 4 and max_all <= 8 and checks["1/4"].verdict == "holds"
    return ok, {
        "classes": len(classes),
        "max_diameter": max_all,
        "max_periodic_diameter": max_per,
        "cycle_bearing": [c.to_dict() for c in cyc[:1]],
        "bounded_check": {k: {"verdict": v.verdict, "side": v.side, "boundary": v.boundary} for k, v in checks.items()},
    }


def _endpoint_pairs(m: MatingSpec, rays) -> tuple[tuple[Angle, Angle], tuple[Angle, Angle]]:
    """Outermost and innermost P-side points whose angles straddle 1/2."""
    nodes = {landing_set(m.p, a) for a in rays}
    span = sorted((min(n), max(n)) for n in nodes if min(n).fraction < Fraction(1, 2) < max(n).fraction)
    return span[0], span[-1]


def _monotone(xs: list[Fraction], limit: Fraction) -> bool:
    gaps = [x - limit for x in xs]
    same_side = all(g > 0 for g in gaps) or all(g < 0 for g in gaps)
    return same_side and all(abs(a) > abs(b) for a, b in zip(gaps, gaps[1:]))


def _airplane_basilica(steps: int = 6, **_) -> tuple[bool, dict]:
    m = MatingSpec(AIRPLANE, BASILICA)
    c0 = class_of(m, angle(5, 12))
    chain = [c0.rays, *pullback_connection(m, c0.rays, steps)]
    rays = [len(c) for c in chain]
    hits = [len({landing_set(m.p, a) for a in c}) for c in chain]
    ends = [_endpoint_pairs(m, c) for c in chain[1:]]
    limits = [
        ("outer lo", [e[0][0] for e in ends], Fraction(3, 7)),
        ("outer hi", [e[0][1] for e in ends], Fraction(4, 7)),
        ("inner lo", [e[1][0] for e in ends], Fraction(25, 56)),
        ("inner hi", [e[1][1] for e in ends], Fraction(31, 56)),
    ]
    mono = {name: _monotone([a.fraction for a in xs], lim) for name, xs, lim in limits}
    apart = angle(25, 56) not in class_of(m, angle(3, 7)).rays
    ok = (
        c0.shape == "cycle-bearing"
        and rays == [2 ** (k + 1) for k in range(steps + 1)]
        and hits == [2**k for k in range(steps + 1)]
        and all(mono.values())
        and apart
    )
    return ok, {
        "c0": _s(c0.rays),
        "c0_shape": c0.shape,
        "ray_counts": rays,
        "kp_intersections": hits,
        "outer_endpoints": [[str(x), str(y)] for (x, y), _ in ends],
        "inner_endpoints": [[str(x), str(y)] for _, (x, y) in ends],
        "monotone": mono,
        "limits_in_distinct_classes": apart,
    }


def _length_six(**_) -> tuple[bool, dict]:
    p, q = Center(root_of(angle(13, 63))), Center(root_of(angle(28, 63)))
    classes = build_classes(MatingSpec(p, q), AngleUniverse(0, 6))
    best = max(classes, key=lambda c: (c.diameter, sorted(c.rays)))
    return best.diameter >= 6, {"p": str(p), "q": str(q), "longest": best.to_dict()}


def _table(periods, jobs: int = 1, cache: Path | None = None) -> tuple[bool, dict]:
    rows, wrong = [], {}
    for n in periods:
        got = max_connections(n, jobs=jobs, cache=cache).counts
        rows += [[n, length, *got[length]] for length in sorted(got)]
        if got != REFERENCE_COUNTS[n]:
            wrong[n] = {"expected": REFERENCE_COUNTS[n], "got": got}
    return not wrong, {"rows": rows, "mismatches": {str(k): v for k, v in wrong.items()}}


def _table1(extended: bool = False, jobs: int = 1, cache: Path | None = None, **_) -> tuple[bool, dict]:
    periods = list(BASE_PERIODS) + (list(EXTENDED_PERIODS) if extended else [])
    return _table(periods, jobs, cache)


def _named(name: str, length: int) -> Callable[..., tuple[bool, dict]]:
    def check(**_) -> tuple[bool, dict]:
        n, p_ints, q_ints = NAMED_EXAMPLES[name]
        ch = find_named_example(name)
        ok = (
            ch.p_root.ray_period == n
            and ch.p_root.ints() == p_ints
            and ch.q_root.ints() == q_ints
            and ch.length == length
            and ch.satellite
        )
        return ok, ch.to_dict()

    return check


def _douady_magic(max_r: int = 10, **_) -> tuple[bool, dict]:
    checked, bad = 0, []
    for r in range(2, max_r + 1):
        for k in range(1, r):
            try:
                w = wake_angles(Limb(k, r))
            except ValueError:
                continue
            for t in (w.lo, w.hi):
                if t.fraction > Fraction(1, 3):
                    continue
                arc = CircularArc(Angle.of((t.fraction + 1) / 4), Angle.of((t.fraction + 2) / 4))
                checked += 1
                if not orbit_avoids(douady_magic(t), arc):
                    bad.append(str(t))
    return not bad, {"angles_checked": checked, "violations": bad[:5]}


def _chebyshev_shared(**_) -> tuple[bool, dict]:
    qs = sorted(minus(a) for a in minus_alpha_angles(Limb(2, 5)))
    together = [[str(a), str(b)] for a, b in permutations(qs, 2) if colands(Misiurewicz(a), a, b)]
    third = sorted(minus(a) for a in minus_alpha_angles(Limb(1, 3)))
    expected = [angle(3, 14), angle(5, 14), angle(13, 14)]
    ok = len(qs) == 5 and not together and third == expected
    return ok, {"q_2/5": _s(qs), "co_landing_pairs": together, "q_1/3": _s(third)}


def _shared_precapture(**_) -> tuple[bool, dict]:
    cases = [
        (Misiurewicz(angle(11, 24)), angle(43, 56), angle(41, 56)),
        (BASILICA, angle(17, 24), angle(19, 24)),
        (Misiurewicz(angle(59, 240)), angle(177, 240), angle(181, 240)),
        (Misiurewicz(angle(63, 240)), angle(177, 240), angle(181, 240)),
    ]
    results = {f"{c} {a}~{b}": colands(c, a, b) for c, a, b in cases}
    return all(results.values()), results


def _multiplicity(n: int) -> tuple[bool, dict]:
    limb = Limb((n - 1) // 2, n)
    w = wake_angles(limb)
    big = [None, douady_magic(w.hi)]
    for _ in range(n - 1):
        big.append(double(big[-1]))

    def theta(i: int) -> Fraction:
        return big[(i - 1) % n + 1].fraction

    seq = [Fraction(0), theta(2), Fraction(1, 6)]
    seq += [theta(i) for i in range(n, 2, -2)]
    seq += [Fraction(1, 3), Fraction(1, 2), theta(1), Fraction(7, 12)]
    seq += [theta(i) for i in range(n - 1, 3, -2)]
    seq += [Fraction(2, 3), Fraction(1)]
    ordered = all(a < b for a, b in zip(seq, seq[1:]))

    alpha = alpha_cycle(limb)
    den = (1 << (n + 1)) * ((1 << n) - 1)
    thetas = []
    for j in range(den):
        a = angle(j, den)
        if w.lo < a < w.hi and preperiod_period(a).preperiod == n + 1:
            x = a
            for _ in range(n + 1):
                x = double(x)
            if x in alpha:
                thetas.append(a)
    lc = landing_class(Misiurewicz(thetas[0]), thetas[0]) if thetas else None
    partners = []
    for t in thetas[1:]:
        other = landing_set(AIRPLANE, minus(t)) - {minus(t)}
        partners += [minus(x) for x in other]
    ok = (
        ordered
        and w.hi.fraction == theta(3)
        and w.lo.fraction == theta(5)
        and len(thetas) == n
        and lc is not None
        and lc.angles == frozenset(thetas)
        and (lc.point_preperiod, lc.point_period) == (n + 1, 1)
        and len(partners) == n - 1
        and len(set(partners)) == n - 1
        and all(w.lo < x < w.hi for x in partners)
    )
    return ok, {
        "Theta": [str(x) for x in big[1:]],
        "ordered": ordered,
        "wake": [str(w.lo), str(w.hi)],
        "thetas": _s(thetas),
        "point": [lc.point_preperiod, lc.point_period] if lc else None,
        "partners": [str(x) for x in partners],
    }


def _airplane_multiplicity(**_) -> tuple[bool, dict]:
    out = {n: _multiplicity(n) for n in (3, 5, 7)}
    return all(ok for ok, _ in out.values()), {str(n): w for n, (_, w) in out.items()}


def _discontinuity(max_n: int = 10, **_) -> tuple[bool, dict]:
    rows, ok = [], True
    for n in range(1, max_n + 1):
        num = (1 << (2 * n - 1)) + 1
        integral = num % 3 == 0
        t = angle(num // 3, 1 << (2 * n))
        gap = abs(t.fraction - Fraction(1, 6)) == Fraction(1, 3 << (2 * n))
        q = minus(double(t))
        q_gap = abs(q.fraction - Fraction(2, 3))
        path = connection_between_critical_values(MatingSpec(Misiurewicz(t), Misiurewicz(q)), q_point="critical")
        good = integral and gap and path is not None and len(path) == 1
        if rows and not q_gap < Fraction(rows[-1]["q_gap"]):
            good = False
        ok &= good
        rows.append({"n": n, "theta": str(t), "q": str(q), "q_gap": str(q_gap), "path": [str(a) for a in path or []]})
    return ok, {"rows": rows}


SCENARIOS: dict[str, Scenario] = {
    s.name: s
    for s in [
        Scenario("milnor-quarter", {"p": "m:1/4", "q": "m:1/4", "L": 6, "K": 8},
                 "all classes trees of diameter <= 3; common tree angles are the 3/15-cycle and preimages",
                 "Milnor's 1/4 self-mating", _milnor_quarter),
        Scenario("kokopelli-airplane", {"p": "kokopelli", "q": "airplane", "L": 6, "K": 8},
                 "trees; periodic diameter <= 4; diameter <= 8; bounded check holds for the 1/4-limb",
                 "bounded diameter for Kokopelli and Airplane", _kokopelli_airplane),
        Scenario("airplane-basilica", {"p": "airplane", "q": "basilica", "c0": "5/12", "steps": 6},
                 "cycle at 5/12; C_k has 2^(k+1) rays; endpoints monotone toward 3/7, 4/7 and 25/56, 31/56",
                 "unbounded cyclic connections", _airplane_basilica),
        Scenario("length-six", {"p": "c:13/63", "q": "c:28/63"},
                 "a connection of length six", "long connections behind the Airplane", _length_six),
        Scenario("table1", {"periods": "10-16", "extended": "17-24"},
                 "max_connections equals the reference counts", "table of maximal connections", _table1),
        Scenario("price22", {"name": "price22"}, "diameter 12, quoted roots, satellite",
                 "period-22 example", _named("price22", 12)),
        Scenario("satellite32", {"name": "satellite32"}, "diameter 14, quoted roots, satellite",
                 "period-32 example", _named("satellite32", 14)),
        Scenario("douady-magic", {"max_r": 10}, "orbit of 1/2 + θ/4 avoids ((θ+1)/4, (θ+2)/4)",
                 "Douady Magic Formula", _douady_magic),
        Scenario("chebyshev-shared", {"limbs": ["2/5", "1/3"]},
                 "five distinct Misiurewicz points for 2/5; angles 3/14, 5/14, 13/14 for 1/3",
                 "Chebyshev maps as matings", _chebyshev_shared),
        Scenario("shared-precapture", {"pairs": ["43/56~41/56", "17/24~19/24", "177/240~181/240"]},
                 "each pair co-lands", "shared precaptures", _shared_precapture),
        Scenario("airplane-multiplicity", {"n": [3, 5, 7]},
                 "ordering of Θ_i; n co-landing angles of preperiod n+1; n-1 distinct partners",
                 "Airplane matings of high multiplicity", _airplane_multiplicity),
        Scenario("discontinuity", {"max_n": 10},
                 "u_n integral; |θ_n - 1/6| = 1/(3*4^n); critical connection of length 1",
                 "discontinuity of mating", _discontinuity),
    ]
}


def scenario_names() -> list[str]:
    return list(SCENARIOS)


def run_scenario(name: str, *, extended: bool = False, jobs: int = 1, cache: Path | None = None) -> RunReport:
    """Run one registered scenario; raises ``KeyError`` for unknown names."""
    if name not in SCENARIOS:
        raise KeyError(f"unknown scenario {name!r}; known: {', '.join(SCENARIOS)}")
    t0 = time.perf_counter()
    ok, witness = SCENARIOS[name].check(extended=extended, jobs=jobs, cache=cache)
    return RunReport(name, bool(ok), witness, time.perf_counter() - t0)
