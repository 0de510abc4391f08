import json

import pytest
from hypothesis import given, settings, strategies as st

from artifact.angles import angle, double, minus, preperiod_period
from artifact.landing import landing_set
from artifact.mating import (
    AngleUniverse,
    BranchAmbiguous,
    MatingSpec,
    UniverseTooLarge,
    build_classes,
    class_of,
    connection_between_critical_values,
    periodic_class_shape,
    pullback_connection,
    universe_angles,
)
from artifact.params import Center, Limb, Misiurewicz, alpha_cycle, root_of

AIRPLANE = Center(root_of(angle(3, 7)))
BASILICA = Center(root_of(angle(1, 3)))
RABBIT = Center(root_of(angle(1, 7)))
CORABBIT = Center(root_of(angle(5, 7)))
KOKOPELLI = Center(root_of(angle(3, 15)))
QUARTER = Misiurewicz(angle(1, 4))


def test_universe_membership_and_size():
    u = AngleUniverse(1, 2)
    got = universe_angles(u)
    assert got == sorted({angle(j, 2) for j in range(2)} | {angle(j, 6) for j in range(6)})
    assert all(a in u for a in got) and angle(1, 4) not in u
    with pytest.raises(UniverseTooLarge):
        universe_angles(AngleUniverse(12, 12))


def test_class_of_examples():
    m = MatingSpec(AIRPLANE, BASILICA)
    cl = class_of(m, angle(5, 12))
    assert cl.rays == {angle(5, 12), angle(7, 12)} and cl.shape == "cycle-bearing" and cl.cycles == 1
    zero = class_of(m, angle(0))
    assert zero.rays == {angle(0)} and zero.shape == "tree" and zero.diameter == 1


def test_chebyshev_star_at_alpha():
    m = MatingSpec(Center(root_of(angle(11, 31))), Misiurewicz(angle(19, 62)))
    cl = class_of(m, angle(22, 31))
    assert alpha_cycle(Limb(2, 5)) in cl.q_nodes
    rep = periodic_class_shape(cl, m)
    assert rep.kind == "star" and rep.r == 5 and rep.branch_side == "Q" and rep.point_period == 1


def test_shape_rejections():
    m = MatingSpec(AIRPLANE, BASILICA)
    with pytest.raises(ValueError):
        periodic_class_shape(class_of(m, angle(5, 12)), m)
    with pytest.raises(ValueError):
        periodic_class_shape(class_of(m, angle(1, 4)), m)
    arc = periodic_class_shape(class_of(m, angle(0)), m)
    assert arc.kind == "arc" and arc.ray_period == 1


def test_conjugate_limbs_give_cycles():
    m = MatingSpec(RABBIT, CORABBIT)
    assert class_of(m, angle(1, 7)).shape == "cycle-bearing"
    assert connection_between_critical_values(m) is not None


def test_critical_value_connections():
    assert connection_between_critical_values(MatingSpec(QUARTER, QUARTER), AngleUniverse(6, 8)) is None
    t = angle(3, 16)
    m = MatingSpec(Misiurewicz(t), Misiurewicz(minus(double(t))))
    assert connection_between_critical_values(m, q_point="critical") == [t]
    with pytest.raises(ValueError):
        connection_between_critical_values(MatingSpec(QUARTER, AIRPLANE), q_point="critical")
    with pytest.raises(ValueError):
        connection_between_critical_values(m, q_point="nowhere")


def test_pullback_counts():
    m = MatingSpec(AIRPLANE, BASILICA)
    cs = pullback_connection(m, {angle(5, 12), angle(7, 12)}, 4)
    assert [len(c) for c in cs] == [4, 8, 16, 32]
    assert [len({landing_set(m.p, a) for a in c}) for c in cs] == [2, 4, 8, 16]


def test_pullback_needs_a_surrounded_branch():
    m = MatingSpec(AIRPLANE, BASILICA)
    with pytest.raises(BranchAmbiguous):
        pullback_connection(m, {angle(5, 12), angle(7, 12)}, 1, around=angle(0))
    with pytest.raises(ValueError):
        pullback_connection(MatingSpec(QUARTER, BASILICA), {angle(5, 12)}, 1)


def test_json_dump_schema():
    d = json.loads(class_of(MatingSpec(AIRPLANE, BASILICA), angle(5, 12)).to_json())
    assert set(d) == {"rays", "p_nodes", "q_nodes", "shape", "diameter"}
    assert d["rays"] == ["5/12", "7/12"]


@pytest.mark.parametrize(
    "p, q, bound",
    [(QUARTER, QUARTER, 3), (KOKOPELLI, AIRPLANE, 8), (AIRPLANE, RABBIT, None)],
    ids=["quarter", "kokopelli-airplane", "airplane-rabbit"],
)
def test_build_classes_invariants(p, q, bound):
    m = MatingSpec(p, q)
    u = AngleUniverse(4, 6)
    classes = build_classes(m, u)
    rays = [a for c in classes for a in c.rays]
    assert sorted(rays) == universe_angles(u)
    for c in classes:
        assert c.shape == "tree" and c.cycles == 0
        for a in c.rays:
            assert landing_set(p, a) in c.p_nodes and landing_set(q, minus(a)) in c.q_nodes
        if bound:
            assert c.diameter <= bound


def test_forward_image_of_class_is_class():
    m = MatingSpec(KOKOPELLI, AIRPLANE)
    for c in build_classes(m, AngleUniverse(2, 4)):
        img = {double(a) for a in c.rays}
        target = class_of(m, next(iter(img)))
        assert img <= target.rays


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 4), st.integers(1, 6), st.integers(0, 10**6))
def test_class_of_matches_build(L, K, j):
    m = MatingSpec(AIRPLANE, BASILICA)
    d = (1 << L) * ((1 << K) - 1)
    a = angle(j % d, d)
    cl = class_of(m, a, AngleUniverse(L, K))
    pp = preperiod_period(a)
    assert all(preperiod_period(x) == pp for x in cl.rays)
