from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from artifact.angles import angle, double, orbit, preperiod_period
from artifact.params import (
    Limb,
    Misiurewicz,
    _conjugate_local,
    alpha_cycle,
    conjugate_angle,
    conjugate_int,
    douady_magic,
    is_satellite,
    limb_of,
    minus_alpha_angles,
    parse_root,
    preperiod_one_angle,
    root_of,
    roots_of_period,
    wake_angles,
    wake_contains,
)

from oracles import exact_period, lavaurs_greedy


def A(s: str):
    return angle(*map(int, s.split("/")))


@pytest.mark.parametrize("a, b", [("9/31", "10/31"), ("3/7", "4/7"), ("1/3", "2/3")])
def test_conjugate_examples(a, b):
    assert conjugate_angle(A(a)) == A(b)
    assert conjugate_angle(A(b)) == A(a)


@pytest.mark.parametrize("a", [angle(0), angle(1, 4), angle(1, 6)])
def test_conjugate_rejects_non_periodic(a):
    with pytest.raises(ValueError):
        conjugate_angle(a)


def test_roots_small_periods():
    assert roots_of_period(1) == ()
    assert [(str(r.lo), str(r.hi)) for r in roots_of_period(2)] == [("1/3", "2/3")]
    assert [(str(r.lo), str(r.hi)) for r in roots_of_period(3)] == [("1/7", "2/7"), ("3/7", "4/7"), ("5/7", "6/7")]


def test_roots_match_greedy_lavaurs():
    greedy = lavaurs_greedy(8)
    for n in range(2, 9):
        assert {(r.lo.fraction, r.hi.fraction) for r in roots_of_period(n)} == greedy[n]


@pytest.mark.parametrize("n", range(2, 13))
def test_pairing_is_perfect_matching(n):
    d = (1 << n) - 1
    covered = [a for r in roots_of_period(n) for a in r.ints()]
    assert sorted(covered) == [j for j in range(1, d) if exact_period(j, n)]


@pytest.mark.parametrize("n", range(2, 14))
def test_local_conjugate_agrees_with_table(n):
    d = (1 << n) - 1
    for j in range(1, d):
        if exact_period(j, n):
            assert _conjugate_local(j, n) == conjugate_int(j, n)


def test_long_period_conjugates():
    d22, d32 = (1 << 22) - 1, (1 << 32) - 1
    assert conjugate_angle(angle(1955623, d22)) == angle(1955624, d22)
    assert conjugate_angle(angle(882259, d22)) == angle(882276, d22)
    assert conjugate_angle(angle(918089177, d32)) == angle(918089186, d32)


@pytest.mark.parametrize("n", range(2, 11))
def test_orbit_portraits_unlinked(n):
    d = (1 << n) - 1
    for r in roots_of_period(n):
        a, b = r.ints()
        chords = []
        for _ in range(n):
            chords.append((min(a, b), max(a, b)))
            a, b = 2 * a % d, 2 * b % d
        for i, (x, y) in enumerate(chords):
            for u, v in chords[i + 1:]:
                assert not (x < u < y < v or u < x < v < y)


@pytest.mark.parametrize("lo, hi, sat", [("1/7", "2/7", True), ("3/7", "4/7", False), ("1/3", "2/3", True)])
def test_is_satellite(lo, hi, sat):
    rp = parse_root(A(lo), A(hi))
    assert is_satellite(rp) is sat and rp.satellite is sat


def test_parse_root_names_true_partner():
    with pytest.raises(ValueError, match="2/3"):
        parse_root(A("1/3"), A("1/2"))


@pytest.mark.parametrize("k, r, lo, hi", [(1, 3, "1/7", "2/7"), (2, 5, "9/31", "10/31"), (1, 2, "1/3", "2/3")])
def test_wake_angles(k, r, lo, hi):
    w = wake_angles(Limb(k, r))
    assert (w.lo, w.hi) == (A(lo), A(hi))


@pytest.mark.parametrize("a, limb", [("19/62", (2, 5)), ("1/4", (1, 3)), ("5/12", (1, 2)), ("9/31", None)])
def test_limb_of(a, limb):
    got = limb_of(A(a))
    assert (got.k, got.r) == limb if limb else got is None


def test_alpha_cycles():
    assert alpha_cycle(Limb(1, 3)) == {A("1/7"), A("2/7"), A("4/7")}
    assert alpha_cycle(Limb(2, 5)) == {A(x) for x in ("5/31", "9/31", "10/31", "18/31", "20/31")}
    assert alpha_cycle(Limb(1, 2)) == {A("1/3"), A("2/3")}


def test_minus_alpha_angles():
    assert minus_alpha_angles(Limb(1, 2)) == {A("5/6"), A("1/6")}
    assert minus_alpha_angles(Limb(2, 5)) == {A(x) for x in ("5/62", "9/62", "41/62", "49/62", "51/62")}
    assert minus_alpha_angles(Limb(1, 3)) == {A("9/14"), A("11/14"), A("1/14")}


@pytest.mark.parametrize("k, r, a", [(1, 3, "3/14"), (2, 5, "19/62"), (1, 2, "1/2")])
def test_preperiod_one_angle(k, r, a):
    t = preperiod_one_angle(Limb(k, r))
    assert t == A(a)
    if r > 2:
        assert preperiod_period(t).preperiod == 1 and preperiod_period(t).period == r


@pytest.mark.parametrize("t, big", [("1/3", "7/12"), ("0", "1/2"), ("1/7", "15/28")])
def test_douady_magic(t, big):
    assert douady_magic(A(t) if t != "0" else angle(0)) == A(big)


def test_douady_magic_rejects_large():
    with pytest.raises(ValueError):
        douady_magic(A("1/2"))


def test_wake_contains():
    assert wake_contains(parse_root(A("9/31"), A("10/31")), A("19/62"))
    assert not wake_contains(parse_root(A("1/3"), A("2/3")), angle(0))
    assert not wake_contains(parse_root(A("3/7"), A("4/7")), A("5/12"))


def test_misiurewicz_requires_preperiodic():
    with pytest.raises(ValueError):
        Misiurewicz(A("1/3"))


@pytest.mark.parametrize("r", range(2, 13))
def test_alpha_cycle_rotates_rigidly(r):
    for k in range(1, r):
        if Fraction(k, r).denominator != r:
            continue
        cyc = sorted(alpha_cycle(Limb(k, r)))
        idx = {a: i for i, a in enumerate(cyc)}
        assert all(idx[double(a)] == (i + k) % r for i, a in enumerate(cyc))
        w = wake_angles(Limb(k, r))
        assert w.hi.num * (((1 << r) - 1) // w.hi.den) - w.lo.num * (((1 << r) - 1) // w.lo.den) == 1


periodic = st.integers(2, 14).flatmap(
    lambda n: st.integers(1, (1 << n) - 2).filter(lambda j: exact_period(j, n)).map(lambda j: angle(j, (1 << n) - 1))
)


@given(periodic)
def test_conjugate_is_fixed_point_free_involution(a):
    b = conjugate_angle(a)
    assert b != a and conjugate_angle(b) == a
    assert preperiod_period(b) == preperiod_period(a)
    assert root_of(a) == root_of(b)
    assert root_of(a).satellite == (b in orbit(a))
