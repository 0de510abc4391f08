"""Ray-equivalence classes of the formal mating of two quadratic polynomials.

A ray with angle θ joins the point of ``K_p`` where ``R_p(θ)`` lands to the
point of ``K_q`` where ``R_q(-θ)`` lands. Points are represented by their
landing classes; a ray-equivalence class is a connected component of this
bipartite graph.
"""

from __future__ import annotations

import json
from collections import defaultdict, deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .angles import Angle, angle, minus, preperiod_period
from .landing import landing_class, landing_set
from .params import Center, Misiurewicz, ParameterSpec

__all__ = [
    "MatingSpec",
    "AngleUniverse",
    "RayClass",
    "ShapeReport",
    "UniverseTooLarge",
    "BranchAmbiguous",
    "build_classes",
    "class_of",
    "periodic_class_shape",
    "connection_between",
    "connection_between_critical_values",
    "pullback_connection",
    "universe_angles",
]

MAX_UNIVERSE = 2_000_000


class UniverseTooLarge(MemoryError):
    """The requested angle universe exceeds the memory budget."""


class BranchAmbiguous(ValueError):
    """No single preimage component surrounds the requested angle."""


@dataclass(frozen=True)
class MatingSpec:
    p: ParameterSpec
    q: ParameterSpec

    def __str__(self) -> str:
        return f"{self.p} ⊔ {self.q}"


@dataclass(frozen=True)
class AngleUniverse:
    """All angles of preperiod at most ``max_preperiod`` and period at most ``max_period``."""

    max_preperiod: int
    max_period: int

    def __contains__(self, a: Angle) -> bool:
        pp = preperiod_period(a)
        return pp.preperiod <= self.max_preperiod and pp.period <= self.max_period

    def size_bound(self) -> int:
        return sum((1 << self.max_preperiod) * ((1 << k) - 1) for k in range(1, self.max_period + 1))


def universe_angles(u: AngleUniverse) -> list[Angle]:
    """The angles of ``u`` in increasing order."""
    if u.size_bound() > MAX_UNIVERSE:
        raise UniverseTooLarge(f"universe L={u.max_preperiod}, K={u.max_period} has up to {u.size_bound()} angles")
    out: set[Angle] = set()
    scale = 1 << u.max_preperiod
    for k in range(1, u.max_period + 1):
        den = scale * ((1 << k) - 1)
        out.update(angle(j, den) for j in range(den))
    return sorted(out)


@dataclass(frozen=True)
class RayClass:
    """One ray-equivalence class.

    ``p_nodes`` hold ``K_p`` angles and ``q_nodes`` hold ``K_q`` angles, so a
    ray θ meets the q-node containing ``-θ``.
    """

    rays: frozenset[Angle]
    p_nodes: frozenset[frozenset[Angle]]
    q_nodes: frozenset[frozenset[Angle]]
    shape: str
    diameter: int

    @property
    def cycles(self) -> int:
        return len(self.rays) - len(self.p_nodes) - len(self.q_nodes) + 1

    def to_dict(self) -> dict:
        def node_list(nodes: Iterable[frozenset[Angle]]) -> list[list[str]]:
            return sorted(([str(a) for a in sorted(n)] for n in nodes), key=lambda n: n)

        return {
            "rays": [str(a) for a in sorted(self.rays)],
            "p_nodes": node_list(self.p_nodes),
            "q_nodes": node_list(self.q_nodes),
            "shape": self.shape,
            "diameter": self.diameter,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _p_node(m: MatingSpec, a: Angle) -> frozenset[Angle]:
    return landing_set(m.p, a)


def _q_node(m: MatingSpec, a: Angle) -> frozenset[Angle]:
    return landing_set(m.q, minus(a))


def _graph(rays: Iterable[Angle], m: MatingSpec) -> dict[tuple, list[tuple[Angle, tuple]]]:
    adj: dict[tuple, list[tuple[Angle, tuple]]] = defaultdict(list)
    for a in rays:
        u, v = ("P", _p_node(m, a)), ("Q", _q_node(m, a))
        adj[u].append((a, v))
        adj[v].append((a, u))
    return adj


def _bfs(adj: dict, start: tuple) -> dict[tuple, tuple[int, tuple | None, Angle | None]]:
    seen = {start: (0, None, None)}
    todo = deque([start])
    while todo:
        x = todo.popleft()
        d = seen[x][0]
        for ray, y in adj[x]:
            if y not in seen:
                seen[y] = (d + 1, x, ray)
                todo.append(y)
    return seen


def _make_class(rays: frozenset[Angle], m: MatingSpec) -> RayClass:
    adj = _graph(rays, m)
    p_nodes = frozenset(n for s, n in adj if s == "P")
    q_nodes = frozenset(n for s, n in adj if s == "Q")
    shape = "tree" if len(rays) == len(p_nodes) + len(q_nodes) - 1 else "cycle-bearing"
    diam = max(max(d for d, _, _ in _bfs(adj, x).values()) for x in adj)
    return RayClass(rays, p_nodes, q_nodes, shape, diam)


def class_of(m: MatingSpec, a: Angle, u: AngleUniverse | None = None) -> RayClass:
    """The ray-equivalence class of the ray with angle ``a``.

    Landing classes preserve preperiod and period, so the class never leaves
    any universe containing ``a`` and its diameter is exact.
    """
    if u is not None and a not in u:
        raise ValueError(f"{a} is outside the universe")
    rays = {a}
    todo = [a]
    while todo:
        x = todo.pop()
        for y in _p_node(m, x) | {minus(z) for z in _q_node(m, x)}:
            if y not in rays:
                rays.add(y)
                todo.append(y)
    return _make_class(frozenset(rays), m)


def build_classes(m: MatingSpec, u: AngleUniverse) -> list[RayClass]:
    """Partition every ray of ``u`` into ray-equivalence classes (union-find)."""
    angles = universe_angles(u)
    parent: dict[tuple, tuple] = {}

    def find(x: tuple) -> tuple:
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in angles:
        ra, rb = find(("P", _p_node(m, a))), find(("Q", _q_node(m, a)))
        if ra != rb:
            parent[ra] = rb
    groups: dict[tuple, set[Angle]] = defaultdict(set)
    for a in angles:
        groups[find(("P", _p_node(m, a)))].add(a)
    return [_make_class(frozenset(g), m) for g in groups.values()]


# --------------------------------------------------------------------------
# Shapes and paths


@dataclass(frozen=True)
class ShapeReport:
    ray_period: int
    kind: str  # "arc" or "star"
    branch_side: str | None = None
    branch_point: frozenset[Angle] | None = None
    r: int | None = None
    point_period: int | None = None


def periodic_class_shape(cl: RayClass, m: MatingSpec) -> ShapeReport:
    """Classify a periodic tree class as an arc or a star around one branch point."""
    periods = {preperiod_period(a) for a in cl.rays}
    if any(pp.preperiod for pp in periods):
        raise ValueError("class is not periodic")
    if cl.shape != "tree":
        raise ValueError("class is cycle-bearing, not a tree")
    if len({pp.period for pp in periods}) != 1:
        raise ValueError("rays of the class have different periods")
    period = periods.pop().period
    adj = _graph(cl.rays, m)
    branches = [x for x, e in adj.items() if len(e) > 2]
    if not branches:
        return ShapeReport(period, "arc")
    if len(branches) > 1:
        raise ValueError(f"class has {len(branches)} branch points")
    side, node = branches[0]
    rep = next(iter(node))
    lc = landing_class(m.p if side == "P" else m.q, rep)
    return ShapeReport(period, "star", side, node, period // lc.point_period, lc.point_period)


def connection_between(m: MatingSpec, p_angle: Angle, q_angle: Angle) -> list[Angle] | None:
    """Shortest ray path from the ``K_p`` point of ``p_angle`` to the ``K_q`` point of ``q_angle``."""
    start, goal = ("P", _p_node(m, p_angle)), ("Q", landing_set(m.q, q_angle))
    adj = _graph(class_of(m, p_angle).rays, m)
    seen = _bfs(adj, start)
    if goal not in seen:
        return None
    path = []
    x = goal
    while seen[x][1] is not None:
        path.append(seen[x][2])
        x = seen[x][1]
    return path[::-1]


def _critical_value_angle(c: ParameterSpec) -> Angle:
    # a center's critical value sits in a Fatou component; its root point stands in for it
    return c.angle if isinstance(c, Misiurewicz) else c.root.lo


def connection_between_critical_values(
    m: MatingSpec, u: AngleUniverse | None = None, q_point: str = "value"
) -> list[Angle] | None:
    """Shortest ray path from the critical value of ``p`` to a critical point of ``q``.

    ``q_point`` is ``"value"`` for the critical value of ``q`` or ``"critical"``
    for its critical point 0. A center is represented by the root point of its
    critical-value Fatou component. Returns ``None`` when no path exists.
    """
    a = _critical_value_angle(m.p)
    b = _critical_value_angle(m.q)
    if q_point == "critical":
        if isinstance(m.q, Center):
            raise ValueError("the critical point of a center lies in a Fatou component")
        b = Angle.of(b.fraction / 2)
    elif q_point != "value":
        raise ValueError(f"unknown q_point {q_point!r}")
    if u is not None and (a not in u or b not in u):
        return None
    return connection_between(m, a, b)


# --------------------------------------------------------------------------
# Pullback of closed connections


def _critical_period(c: ParameterSpec) -> int:
    if isinstance(c, Center):
        return c.root.ray_period
    raise ValueError("pullback along the critical orbit needs a periodic critical point")


def _components(rays: set[Angle], m: MatingSpec) -> list[frozenset[Angle]]:
    adj = _graph(rays, m)
    seen: set[tuple] = set()
    out = []
    for x in adj:
        if x in seen:
            continue
        comp = _bfs(adj, x)
        seen.update(comp)
        out.append(frozenset(r for node in comp for r, _ in adj[node]))
    return out


def _inside(rays: frozenset[Angle], a: Angle) -> bool:
    """Whether ``a`` lies in the smaller alternating family of arcs cut out by ``rays``."""
    s = sorted(rays)
    arcs = [(s[i], s[(i + 1) % len(s)]) for i in range(len(s))]
    lengths = [(y.fraction - x.fraction) % 1 or Fraction(1) for x, y in arcs]
    even = sum(lengths[0::2])
    start = 0 if even < 1 - even else 1
    for x, y in arcs[start::2]:
        if (a.fraction - x.fraction) % 1 < (y.fraction - x.fraction) % 1 and a != x:
            return True
    return False


def pullback_connection(
    m: MatingSpec, rays: Iterable[Angle], steps: int, around: Angle | None = None
) -> list[frozenset[Angle]]:
    """Pull a closed connection back along the critical orbit of ``p``.

    Each step takes preimages under the ``m``-th iterate, ``m`` the period of
    the critical point of ``p``, and keeps the component whose smaller side
    contains ``around``. The default is the lower root angle of ``p``, whose
    ray lands on the boundary of the critical-value Fatou component.
    """
    period = _critical_period(m.p)
    if around is None:
        around = m.p.root.lo
    cur = frozenset(Angle.of(r) for r in rays)
    out = []
    for _ in range(steps):
        pre = set(cur)
        for _ in range(period):
            pre = {Angle.of(h) for x in pre for h in (x.fraction / 2, (x.fraction + 1) / 2)}
        hits = [c for c in _components(pre, m) if _inside(c, around)]
        if len(hits) != 1:
            names = "; ".join(" ".join(str(a) for a in sorted(c)) for c in hits) or "none"
            raise BranchAmbiguous(f"{len(hits)} preimage components surround {around}: {names}")
        cur = hits[0]
        out.append(cur)
    return out

