"""Exhaustive search for maximal periodic ray connections of a given ray period.

Work happens on integer numerators over ``2**n - 1``. The Q side is handled
through the conjugate parameter q̄, so a ray with angle θ joins the P point
carrying θ to the q̄ point carrying θ, and both sides share one table of roots.

For a P-side root ``A`` and a q̄-side root ``B`` the relevant connection is the
class of A's characteristic point when every root at or before ``A`` pinches
``K_p`` and every root at or before ``B`` pinches ``K_q̄``.
"""

from __future__ import annotations

import hashlib
import json
import os
import multiprocessing as mp
from collections import deque
from dataclasses import dataclass, field
from math import gcd
from pathlib import Path

import numpy as np

from ._kernels import explore_range, tally
from .angles import Angle, angle, minus
from .landing import is_before, landing_set
from .mating import MatingSpec, class_of
from .params import (
    LAVAURS_MAX_PERIOD,
    Center,
    RootPair,
    _alpha_ints,
    _periodic_int,
    int_orbit,
    lavaurs_partners,
    parse_root,
    root_of,
    root_pair,
)

__all__ = [
    "MIN_REPORTED_LENGTH",
    "Link",
    "ConnectionChain",
    "SearchResult",
    "PeriodTable",
    "max_connections",
    "chain_for_roots",
    "extend_chain",
    "find_named_example",
    "NAMED_EXAMPLES",
    "ResourceLimit",
]

MIN_REPORTED_LENGTH = 5
CACHE_VERSION = "1"


class ResourceLimit(RuntimeError):
    """The requested search is beyond what the tables support."""


# --------------------------------------------------------------------------
# Per-period tables


def _limb_wakes(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Sorted wake boundaries (as floats) of all limbs ``k/r`` with ``r <= n``.

    Limb wakes are disjoint, and distinct angles with denominators below
    ``2**24`` differ by far more than float64 rounding, so a float search is
    exact here; equal rationals round to equal floats.
    """
    lo, hi = [], []
    for r in range(2, n + 1):
        d = (1 << r) - 1
        for k in range(1, r):
            if gcd(k, r) != 1:
                continue
            s = sorted(_alpha_ints(k, r))
            for x, y in zip(s, s[1:]):
                if y - x == 1:
                    lo.append(x / d)
                    hi.append(y / d)
    order = np.argsort(lo)
    return np.array(lo)[order], np.array(hi)[order]


class PeriodTable:
    """All roots of one ray period as flat arrays.

    ``lo``/``hi`` are root numerators, ``m`` the period of the pinching point
    (``m < n`` for satellites), ``limb`` an index of the containing limb, and
    ``orb_ptr``/``orb_roots`` list for each doubling orbit the roots with an
    angle on it.
    """

    def __init__(self, n: int):
        if not 2 <= n <= LAVAURS_MAX_PERIOD:
            raise ResourceLimit(f"period {n} is outside 2..{LAVAURS_MAX_PERIOD}")
        self.n = n
        d = self.d = (1 << n) - 1
        part = lavaurs_partners(n)
        exact = part >= 0
        js = np.nonzero(exact)[0]
        self.lo = js[js < part[js]].astype(np.int64)
        self.hi = part[self.lo].astype(np.int64)
        nroots = len(self.lo)
        ids = np.arange(nroots, dtype=np.int64)
        rid = np.full(d, -1, dtype=np.int64)
        rid[self.lo] = ids
        rid[self.hi] = ids
        self.conj = rid[d - self.hi]
        x = np.arange(d, dtype=np.int64)
        rep = x.copy()
        for _ in range(n - 1):
            x = (2 * x) % d
            np.minimum(rep, x, out=rep)
        del x
        orb_id = np.full(d, -1, dtype=np.int64)
        _, orb_id[exact] = np.unique(rep[exact], return_inverse=True)
        del rep
        self.orb_id = orb_id
        olo, ohi = orb_id[self.lo], orb_id[self.hi]
        sat = olo == ohi
        keys = np.concatenate([olo, ohi[~sat]])
        vals = np.concatenate([ids, ids[~sat]])
        order = np.lexsort((vals, keys))
        self.orb_roots = vals[order]
        counts = np.bincount(keys, minlength=int(orb_id.max()) + 1)
        self.orb_ptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
        m = np.full(nroots, n, dtype=np.int64)
        shift = np.zeros(nroots, dtype=np.int64)
        y = self.lo.copy()
        for s in range(1, n):
            y = (2 * y) % d
            hit = sat & (shift == 0) & (y == self.hi)
            shift[hit] = s
        m[sat] = np.gcd(shift[sat], n)
        self.m = m
        wlo, whi = _limb_wakes(n)
        v = self.lo / d
        idx = np.searchsorted(wlo, v, side="right") - 1
        inside = (idx >= 0) & (v <= whi[np.maximum(idx, 0)])
        self.limb = np.where(inside, idx, -1).astype(np.int64)

    def __len__(self) -> int:
        return len(self.lo)

    def root_pair(self, r: int) -> RootPair:
        return root_pair(int(self.lo[r]), int(self.hi[r]), self.n)

    def explore(self, start: int, stop: int, min_len: int = MIN_REPORTED_LENGTH):
        return explore_range(
            self.n, self.d, self.lo, self.hi, self.m, self.limb,
            self.orb_id, self.orb_ptr, self.orb_roots, start, stop, min_len,
        )


# --------------------------------------------------------------------------
# Counting


@dataclass
class SearchResult:
    """Maximal connection counts for one ray period.

    ``counts`` maps length to (primitive-only, satellite-containing) counts of
    unordered parameter pairs in the table's layout. ``strict`` holds the same
    counts before ``half_arcs`` are added: each mirror pair of maximal
    satellite connections of length 2h also yields a primitive connection of
    length h, running from a chain end to the satellite point.
    """

    period: int
    counts: dict[int, tuple[int, int]]
    strict: dict[int, tuple[int, int]] = field(default_factory=dict)
    half_arcs: dict[int, int] = field(default_factory=dict)
    satellite_only: bool = False

    def rows(self) -> list[tuple[int, int, int, int]]:
        return [(self.period, L, p, s) for L, (p, s) in sorted(self.counts.items())]

    def to_dict(self) -> dict:
        return {
            "period": self.period,
            "satellite_only": self.satellite_only,
            "counts": {str(L): list(v) for L, v in sorted(self.counts.items())},
            "strict": {str(L): list(v) for L, v in sorted(self.strict.items())},
            "half_arcs": {str(L): v for L, v in sorted(self.half_arcs.items())},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SearchResult":
        def conv(m):
            return {int(k): tuple(v) for k, v in m.items()}

        return cls(
            d["period"],
            conv(d["counts"]),
            conv(d["strict"]),
            {int(k): v for k, v in d["half_arcs"].items()},
            d.get("satellite_only", False),
        )


_worker_table: PeriodTable | None = None


def _worker_explore(bounds: tuple[int, int]):
    assert _worker_table is not None
    return _worker_table.explore(*bounds)


def _explore_all(t: PeriodTable, jobs: int):
    nr = len(t)
    if jobs <= 1 or nr < 1024:
        return t.explore(0, nr)
    global _worker_table
    _worker_table = t
    # contiguous chunks merged in order, so results do not depend on jobs
    size = -(-nr // (jobs * 16))
    bounds = [(i, min(i + size, nr)) for i in range(0, nr, size)]
    ctx = mp.get_context("fork")
    try:
        with ctx.Pool(jobs) as pool:
            parts = pool.map(_worker_explore, bounds)
    finally:
        _worker_table = None
    return tuple(np.concatenate([p[i] for p in parts]) for i in range(4))


def _to_counts(arr: np.ndarray) -> dict[int, tuple[int, int]]:
    # tally returns doubled counts over ordered pairs
    return {L: (int(arr[L, 0]) // 2, int(arr[L, 1]) // 2) for L in range(len(arr)) if arr[L].any()}


def _search(period: int, jobs: int) -> tuple[SearchResult, SearchResult]:
    t = PeriodTable(period)
    ra, rb, rl, rf = _explore_all(t, jobs)
    ptr = np.searchsorted(ra, np.arange(len(t) + 1)).astype(np.int64)
    max_len = int(rl.max()) if len(rl) else MIN_REPORTED_LENGTH
    allc, halfc = tally(t.lo, t.hi, t.conj, ra, rb, rl, rf, ptr, max_len)
    strict = _to_counts(allc)
    half = {L // 2: s // 2 for L, (_, s) in strict.items() if L % 2 == 0 and L // 2 >= MIN_REPORTED_LENGTH and s}
    counts = {L: list(v) for L, v in strict.items()}
    for h, v in half.items():
        counts.setdefault(h, [0, 0])[0] += v
    full = SearchResult(period, {L: tuple(v) for L, v in counts.items()}, strict, half, False)
    hs = _to_counts(halfc)
    return full, SearchResult(period, hs, hs, {}, True)


def _cache_file(cache: Path, period: int, satellite_only: bool) -> Path:
    tag = "half-sat" if satellite_only else "all"
    return Path(cache) / f"table-{period}-{tag}-v{CACHE_VERSION}.json"


def _read_cache(f: Path) -> SearchResult | None:
    """A cached result, or ``None`` when missing or its hash does not match."""
    try:
        doc = json.loads(f.read_text())
        payload = json.dumps(doc["result"], sort_keys=True)
    except (OSError, ValueError, KeyError, TypeError):
        return None
    if hashlib.sha256(payload.encode()).hexdigest() != doc.get("sha256"):
        return None
    return SearchResult.from_dict(doc["result"])


def max_connections(
    period: int, jobs: int = 1, cache: str | os.PathLike | None = None, satellite_only: bool = False
) -> SearchResult:
    """Count maximal periodic ray connections of length at least 5.

    ``satellite_only`` keeps connections through a 1/2-satellite pinching
    point (no half-arc correction applies there). With ``cache``, results
    for both variants are stored per period and reused.
    """
    if not 2 <= period <= LAVAURS_MAX_PERIOD:
        raise ResourceLimit(f"exhaustive search supports periods 2..{LAVAURS_MAX_PERIOD}, got {period}")
    if cache is not None:
        hit = _read_cache(_cache_file(Path(cache), period, satellite_only))
        if hit is not None:
            return hit
    full, half = _search(period, jobs)
    if cache is not None:
        Path(cache).mkdir(parents=True, exist_ok=True)
        for res in (full, half):
            payload = json.dumps(res.to_dict(), sort_keys=True)
            doc = {"sha256": hashlib.sha256(payload.encode()).hexdigest(), "result": res.to_dict()}
            _cache_file(Path(cache), period, res.satellite_only).write_text(json.dumps(doc, sort_keys=True))
    return half if satellite_only else full


# --------------------------------------------------------------------------
# Chains for explicit roots (any period)


@dataclass(frozen=True)
class Link:
    """A pinching point of a chain and the deepest root creating it.

    ``shift`` is the least ``i`` with ``2**i`` times a root angle at the point.
    Q-side links carry roots of ``q`` itself, not of q̄.
    """

    side: str
    root: RootPair
    shift: int
    angles: frozenset[Angle]

    def to_dict(self) -> dict:
        return {
            "side": self.side,
            "root": [str(self.root.lo), str(self.root.hi)],
            "shift": self.shift,
            "angles": [str(a) for a in sorted(self.angles)],
        }


@dataclass(frozen=True)
class ConnectionChain:
    links: tuple[Link, ...]
    length: int
    satellite: bool
    p_root: RootPair
    q_root: RootPair

    def to_dict(self) -> dict:
        return {
            "p_root": [str(self.p_root.lo), str(self.p_root.hi)],
            "q_root": [str(self.q_root.lo), str(self.q_root.hi)],
            "length": self.length,
            "satellite": self.satellite,
            "links": [lk.to_dict() for lk in self.links],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _pinching_roots(c: Center, pts: frozenset[Angle]) -> list[RootPair]:
    out = set()
    for a in pts:
        j, n = _periodic_int(a)
        for y in int_orbit(j, n):
            r = root_of(angle(y, (1 << n) - 1))
            if is_before(r, c):
                out.add(r)
    return sorted(out, key=lambda r: (r.hi.fraction - r.lo.fraction, r.lo))


def _shift(r: RootPair, pts: frozenset[Angle]) -> int:
    a, b = r.lo, r.hi
    for i in range(r.ray_period):
        if a in pts or b in pts:
            return i
        a, b = Angle.of(2 * a.fraction), Angle.of(2 * b.fraction)
    raise ValueError("root does not reach the point")


def chain_for_roots(p_root: RootPair, q_root: RootPair) -> ConnectionChain:
    """The connection through p's characteristic point for the centers of two roots.

    Links follow a longest path of the class; each carries the deepest root
    that pinches at that point.
    """
    p, q = Center(p_root), Center(q_root)
    m = MatingSpec(p, q)
    cl = class_of(m, p_root.lo)
    adj: dict[tuple, list[tuple]] = {}
    for a in cl.rays:
        u, v = ("P", landing_set(p, a)), ("Q", landing_set(q, minus(a)))
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)

    def bfs(src):
        prev = {src: None}
        order = deque([src])
        last = src
        while order:
            last = order.popleft()
            for v in adj[last]:
                if v not in prev:
                    prev[v] = last
                    order.append(v)
        return last, prev

    end, _ = bfs(next(iter(adj)))
    other, prev = bfs(end)
    path = [other]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    links = []
    touched_sat = False
    for side, pts in path:
        c = p if side == "P" else q
        roots = _pinching_roots(c, pts) if len(pts) > 1 else []
        touched_sat |= any(r.satellite for r in roots)
        if roots:
            links.append(Link(side, roots[0], _shift(roots[0], pts), pts))
    for side, pts in adj:
        if len(pts) > 1:
            c = p if side == "P" else q
            touched_sat |= any(r.satellite for r in _pinching_roots(c, pts))
    return ConnectionChain(tuple(links), cl.diameter, touched_sat, p_root, q_root)


def extend_chain(ch: ConnectionChain, side: str) -> ConnectionChain | None:
    """Move the root on ``side`` one step deeper if that lengthens the connection.

    Candidates are the roots pinching at the open ends of the class on that
    side and lying behind the current root. Returns the longest extension, or
    ``None`` when the side is maximal.
    """
    if side not in ("P", "Q"):
        raise ValueError("side must be 'P' or 'Q'")
    base = ch.p_root if side == "P" else ch.q_root
    m = MatingSpec(Center(ch.p_root), Center(ch.q_root))
    cl = class_of(m, ch.p_root.lo)
    ends = cl.rays if side == "P" else frozenset(minus(a) for a in cl.rays)
    cands = set()
    for a in ends:
        j, n = _periodic_int(a)
        if n != base.ray_period:
            continue
        d = (1 << n) - 1
        for y in int_orbit(j, n):
            r = root_of(angle(y, d))
            if r != base and base.lo <= r.lo and r.hi <= base.hi:
                cands.add(r)
    best = None
    for r in sorted(cands, key=lambda r: r.lo):
        new = chain_for_roots(r, ch.q_root) if side == "P" else chain_for_roots(ch.p_root, r)
        if new.length > ch.length and (best is None or new.length > best.length):
            best = new
    return best


NAMED_EXAMPLES = {
    "price22": (22, (1955623, 1955624), (882259, 882276)),
    "satellite32": (32, (918089177, 918089186), (1998920775, 1998920776)),
}


def find_named_example(name: str) -> ConnectionChain:
    """Rebuild a named long connection from its quoted bounding roots."""
    try:
        n, (pl, ph), (ql, qh) = NAMED_EXAMPLES[name]
    except KeyError:
        raise KeyError(f"unknown example {name!r}; known: {', '.join(NAMED_EXAMPLES)}") from None
    d = (1 << n) - 1
    return chain_for_roots(
        parse_root(angle(pl, d), angle(ph, d)),
        parse_root(angle(ql, d), angle(qh, d)),
    )
