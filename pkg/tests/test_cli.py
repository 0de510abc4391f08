import json

import pytest
from click.testing import CliRunner

from artifact.angles import angle
from artifact.cli import cli, parse_param
from artifact.params import Center, Misiurewicz


def run(*args):
    return CliRunner().invoke(cli, list(args))


def test_angle_summary():
    r = run("angle", "7/12")
    assert r.exit_code == 0
    assert "binary: p:10:01" in r.output and "limb: 1/2" in r.output


def test_conj():
    r = run("conj", "9/31")
    assert r.exit_code == 0 and r.output.strip() == "10/31"


@pytest.mark.parametrize("spec, a, b, want", [("airplane", "5/12", "7/12", "true"), ("quarter", "1/8", "5/8", "true"), ("basilica", "1/7", "2/7", "false")])
def test_coland(spec, a, b, want):
    r = run("coland", "--param", spec, a, b)
    assert r.exit_code == 0 and r.output.strip() == want


def test_class_formats():
    j = json.loads(run("class", "--p", "airplane", "--q", "basilica", "--angle", "5/12", "--format", "json").output)
    assert j["rays"] == ["5/12", "7/12"] and j["shape"] == "cycle-bearing"
    csv = run("--format", "csv", "class", "--p", "airplane", "--q", "basilica", "--angle", "5/12").output.splitlines()
    assert csv[0] == "ray,p_node,q_node" and len(csv) == 3


def test_search_csv():
    r = run("search", "--period", "10")
    assert r.exit_code == 0
    assert r.output.splitlines() == ["period,length,primitive,satellite", "10,5,32,0", "10,6,14,88", "10,8,0,2"]


def test_search_range_and_cache(tmp_path):
    r = run("--cache", str(tmp_path), "search", "--period", "9", "--max-period", "10")
    assert r.exit_code == 0 and r.output.count("\n") == 1 + 2 + 3
    assert any(tmp_path.iterdir())


def test_verify_json():
    r = run("verify", "douady-magic", "--format", "json")
    assert r.exit_code == 0
    d = json.loads(r.output)
    assert d["scenario"] == "douady-magic" and d["passed"]


def test_verify_is_deterministic():
    outs = []
    for _ in range(2):
        d = json.loads(run("verify", "airplane-multiplicity", "--format", "json").output)
        d.pop("seconds")
        outs.append(d)
    assert outs[0] == outs[1]


@pytest.mark.parametrize(
    "args, code",
    [
        (("conj", "2/4"), 2),
        (("conj", "1/4"), 2),
        (("verify", "bogus"), 2),
        (("coland", "--param", "c:1/2", "1/3", "2/3"), 2),
        (("search", "--period", "25"), 3),
    ],
)
def test_exit_codes(args, code):
    assert run(*args).exit_code == code


def test_param_specs():
    assert parse_param("airplane") == Center(parse_param("c:3/7").root)
    assert parse_param("c:3/7/4/7") == parse_param("c:3/7")
    assert parse_param("m:1/4") == Misiurewicz(angle(1, 4))
    assert parse_param("quarter") == Misiurewicz(angle(1, 4))
    with pytest.raises(ValueError):
        parse_param("z:1/3")
