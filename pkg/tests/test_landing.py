import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from artifact.angles import CircularArc, angle, double, halves, minus, orbit, preperiod_period
from artifact.landing import (
    CatalogMiss,
    bounded_connection_check,
    colands,
    forbidden_intervals,
    hubbard_tree_angles,
    is_before,
    landing_class,
    landing_set,
)
from artifact.params import Center, Limb, Misiurewicz, alpha_cycle, root_of, wake_angles

AIRPLANE = Center(root_of(angle(3, 7)))
BASILICA = Center(root_of(angle(1, 3)))
RABBIT = Center(root_of(angle(1, 7)))
KOKOPELLI = Center(root_of(angle(3, 15)))
QUARTER = Misiurewicz(angle(1, 4))
NAMED = [AIRPLANE, BASILICA, RABBIT, KOKOPELLI, QUARTER]


def test_colands_examples():
    assert colands(AIRPLANE, angle(5, 12), angle(7, 12))
    assert colands(BASILICA, angle(1, 6), angle(5, 6))
    assert not colands(AIRPLANE, angle(1, 7), angle(2, 7))


@pytest.mark.parametrize("c", NAMED, ids=str)
def test_antipodal_periodic_angles_never_coland(c):
    for n in range(1, 7):
        d = (1 << n) - 1
        for j in range(d):
            a = angle(j, d)
            b = a + Fraction(1, 2)
            if preperiod_period(b).preperiod == 0:
                assert not colands(c, a, b)


def test_landing_class_examples():
    q = Misiurewicz(angle(19, 62))
    lc = landing_class(q, angle(9, 31))
    assert lc.angles == alpha_cycle(Limb(2, 5))
    assert (lc.point_preperiod, lc.point_period) == (0, 1)
    assert landing_class(AIRPLANE, angle(1, 3)).angles == {angle(1, 3), angle(2, 3)}
    for c in NAMED:
        assert landing_class(c, angle(0)).angles == {angle(0)}


def test_misiurewicz_critical_point_class():
    # every preimage of the critical-value rays lands at the critical point
    c = Misiurewicz(angle(1, 4))
    assert landing_set(c, angle(1, 8)) == {angle(1, 8), angle(5, 8)}


def test_is_before():
    assert is_before(root_of(angle(1, 3)), AIRPLANE)
    assert is_before(root_of(angle(3, 7)), AIRPLANE)
    assert not is_before(root_of(angle(1, 7)), AIRPLANE)
    assert is_before(wake_angles(Limb(1, 3)), QUARTER)


def test_forbidden_interval_catalog():
    fi = forbidden_intervals(AIRPLANE)
    assert fi.family == "real-before-airplane" and fi.arcs == (CircularArc(angle(6, 7), angle(1, 7)),)
    assert forbidden_intervals(BASILICA).family == "real-before-airplane"
    assert forbidden_intervals(Misiurewicz(angle(1, 6))).arcs == (CircularArc(angle(13, 14), angle(3, 14)),)
    assert forbidden_intervals(Center(root_of(angle(1, 7)))).family == "vein-1/6"
    assert forbidden_intervals(Misiurewicz(angle(1, 4))).arcs == (CircularArc(angle(3, 14), angle(5, 14)),)
    assert forbidden_intervals(KOKOPELLI).family == "vein-1/4"
    with pytest.raises(CatalogMiss):
        forbidden_intervals(Misiurewicz(angle(1, 2)))


def test_airplane_tree_angles_avoid_forbidden_arc():
    arc = forbidden_intervals(AIRPLANE).arcs[0]
    tree = {angle(1, 3), angle(2, 3)} | set(orbit(angle(3, 7)))
    for a in tree:
        for b in landing_set(AIRPLANE, a):
            assert all(x not in arc for x in orbit(b))


def test_bounded_check():
    assert bounded_connection_check(Limb(1, 4), AIRPLANE).verdict == "holds"
    third = bounded_connection_check(Limb(1, 3), AIRPLANE)
    assert third.verdict == "holds" and third.boundary and third.periodic_diameter_bound == 4
    assert bounded_connection_check(Limb(1, 2), AIRPLANE).verdict == "fails"
    assert bounded_connection_check(Limb(1, 3), Misiurewicz(angle(1, 2))).verdict == "out-of-catalog"


def test_hubbard_tree_of_quarter():
    pts = [angle(j, 15) for j in range(15)] + [angle(j, 8) for j in range(8)]
    tree = hubbard_tree_angles(QUARTER, pts)
    assert angle(1, 5) in tree and angle(0) not in tree
    with pytest.raises(TypeError):
        hubbard_tree_angles(AIRPLANE, pts)


def _universe(L, K):
    return sorted({angle(j, (1 << L) * ((1 << k) - 1)) for k in range(1, K + 1) for j in range((1 << L) * ((1 << k) - 1))})


@pytest.mark.parametrize("c", NAMED, ids=str)
def test_landing_sets_partition_universe(c):
    seen = {}
    for a in _universe(3, 6):
        s = landing_set(c, a)
        assert a in s
        for b in s:
            assert seen.setdefault(b, s) == s
        # forward invariance
        assert {double(b) for b in s} <= landing_set(c, double(a))


@pytest.mark.parametrize("c", NAMED, ids=str)
def test_class_sizes_along_orbits(c):
    # sizes are constant along orbits except where a critical class doubles them
    for a in _universe(2, 5):
        n, m = len(landing_set(c, a)), len(landing_set(c, double(a)))
        assert n == m or n == 2 * m


angle_pairs = st.tuples(st.sampled_from(NAMED), st.integers(0, 3), st.integers(1, 7), st.integers(0, 10**6), st.integers(0, 10**6))


@settings(max_examples=200)
@given(angle_pairs)
def test_colands_symmetric_and_forward(data):
    c, L, K, i, j = data
    d = (1 << L) * ((1 << K) - 1)
    a, b = angle(i % d, d), angle(j % d, d)
    assert colands(c, a, b) == colands(c, b, a)
    if colands(c, a, b):
        assert colands(c, double(a), double(b))
        assert all(colands(c, a, x) for x in landing_set(c, b))


def test_transitivity_on_small_universe():
    for c in (AIRPLANE, QUARTER):
        u = _universe(2, 4)
        for a, b, e in itertools.product(u[:40], repeat=3):
            if colands(c, a, b) and colands(c, b, e):
                assert colands(c, a, e)


def test_minus_symmetry_for_real_parameters():
    for c in (AIRPLANE, BASILICA):
        for a in _universe(2, 5):
            assert landing_set(c, minus(a)) == {minus(x) for x in landing_set(c, a)}


def test_halves_of_critical_value_class_for_center():
    # the two majors of the Airplane co-land
    lo, hi = AIRPLANE.root.lo, AIRPLANE.root.hi
    assert colands(AIRPLANE, halves(lo)[0], halves(hi)[1])
