import json

import pytest

from artifact.angles import angle
from artifact.miner import (
    ResourceLimit,
    SearchResult,
    chain_for_roots,
    extend_chain,
    find_named_example,
    max_connections,
)
from artifact.params import parse_root

from oracles import oracle_table


@pytest.mark.parametrize("n", range(5, 12))
def test_counts_match_oracle(n):
    assert max_connections(n).strict == oracle_table(n)


def test_small_periods_have_no_long_connections():
    assert max_connections(5).counts == {}
    assert max_connections(3).counts == {}


@pytest.mark.parametrize("n", range(6, 15))
def test_length_shape(n):
    res = max_connections(n)
    assert 9 not in res.counts and 11 not in res.counts
    for L, (_, sat) in res.strict.items():
        assert sat == 0 or L % 2 == 0


def test_half_arcs_shift_into_primitive():
    res = max_connections(16)
    assert res.half_arcs == {5: 2}
    assert res.counts[5][0] == res.strict[5][0] + 2


def test_jobs_do_not_change_result():
    assert max_connections(14, jobs=1).to_dict() == max_connections(14, jobs=2).to_dict()


def test_out_of_range_period():
    for n in (1, 25):
        with pytest.raises(ResourceLimit):
            max_connections(n)


def test_rows_and_round_trip():
    res = max_connections(10)
    assert res.rows() == [(10, 5, 32, 0), (10, 6, 14, 88), (10, 8, 0, 2)]
    assert SearchResult.from_dict(json.loads(json.dumps(res.to_dict()))) == res


def test_cache_round_trip_and_corruption(tmp_path):
    first = max_connections(12, cache=tmp_path)
    files = sorted(tmp_path.iterdir())
    assert len(files) == 2
    assert max_connections(12, cache=tmp_path) == first
    sat = max_connections(12, cache=tmp_path, satellite_only=True)
    assert sat.satellite_only and sat.half_arcs == {}
    # a tampered result fails its hash and is recomputed
    f = next(p for p in files if "-all-" in p.name)
    doc = json.loads(f.read_text())
    doc["result"]["counts"]["5"] = [0, 0]
    f.write_text(json.dumps(doc))
    assert max_connections(12, cache=tmp_path) == first
    f.write_text("not json")
    assert max_connections(12, cache=tmp_path) == first


def test_named_examples():
    ch = find_named_example("price22")
    assert ch.length == 12 and ch.satellite
    assert all(lk.root.ray_period == 22 for lk in ch.links)
    d = json.loads(ch.to_json())
    assert d["p_root"] == ["1955623/4194303", "1955624/4194303"]
    with pytest.raises(KeyError):
        find_named_example("nope")


def test_satellite_example():
    ch = find_named_example("satellite32")
    assert ch.length == 14 and ch.satellite


def test_extend_chain():
    ch = chain_for_roots(parse_root(angle(1, 3), angle(2, 3)), parse_root(angle(1, 3), angle(2, 3)))
    with pytest.raises(ValueError):
        extend_chain(ch, "X")
    assert extend_chain(find_named_example("price22"), "P") is None
