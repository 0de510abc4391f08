"""Command-line interface: ``artifact <command> ...``.

Exit codes: 0 success, 1 failed verification, 2 usage error, 3 resource limit.
"""

from __future__ import annotations

import csv
import io
import json
import re
import sys
from pathlib import Path

import click

from .angles import Angle, AngleParseError, angle, binary_expansion, minus, orbit, parse_angle, preperiod_period
from .landing import colands, landing_class, landing_set
from .mating import AngleUniverse, MatingSpec, UniverseTooLarge, class_of
from .miner import ResourceLimit, max_connections
from .params import Center, Misiurewicz, ParameterSpec, conjugate_angle, limb_of, parse_root, root_of
from .scenarios import SCENARIOS, run_scenario

EXIT_FAIL = 1
EXIT_RESOURCE = 3

ALIASES = {
    "quarter": "m:1/4",
    "basilica": "c:1/3/2/3",
    "rabbit": "c:1/7/2/7",
    "airplane": "c:3/7/4/7",
    "kokopelli": "c:3/15",
}

_PARAM = re.compile(r"^([cm]):(\d+)/(\d+)(?:/(\d+)/(\d+))?$")


def parse_param(text: str) -> ParameterSpec:
    """Parse ``c:<lo>/<hi>``, ``c:<a>``, ``m:<a>`` or a named alias.

    Fractions may be unreduced here; they are reduced before use.
    """
    spec = ALIASES.get(text.strip().lower(), text.strip())
    m = _PARAM.match(spec)
    if not m:
        raise ValueError(f"cannot parse parameter {text!r}; expected c:<a>, c:<lo>/<hi>, m:<a> or an alias")
    kind, a, b, c, d = m.groups()
    if int(b) == 0 or (d is not None and int(d) == 0):
        raise ValueError(f"zero denominator in {text!r}")
    first = angle(int(a), int(b))
    if kind == "m":
        if c is not None:
            raise ValueError("a Misiurewicz parameter takes one angle")
        return Misiurewicz(first)
    if preperiod_period(first).preperiod:
        raise ValueError(f"center angle {first} is not periodic")
    if c is None:
        return Center(root_of(first))
    return Center(parse_root(first, angle(int(c), int(d))))


class AngleType(click.ParamType):
    name = "angle"

    def convert(self, value, param, ctx):
        if isinstance(value, Angle):
            return value
        try:
            return parse_angle(value)
        except AngleParseError as e:
            self.fail(str(e), param, ctx)


class ParamType(click.ParamType):
    name = "param"

    def convert(self, value, param, ctx):
        try:
            return parse_param(value)
        except ValueError as e:
            self.fail(str(e), param, ctx)


ANGLE = AngleType()
PARAM = ParamType()


class _Group(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except (ResourceLimit, UniverseTooLarge, MemoryError) as e:
            click.echo(f"resource limit: {e}", err=True)
            ctx.exit(EXIT_RESOURCE)


def _common(f):
    f = click.option("--format", "fmt", type=click.Choice(["json", "csv", "text"]), default=None)(f)
    f = click.option("--jobs", type=click.IntRange(min=1), default=None)(f)
    f = click.option("--cache", type=click.Path(file_okay=False, path_type=Path), default=None)(f)
    return f


def _settings(ctx: click.Context, fmt, jobs, cache, default_fmt: str = "text") -> tuple[str, int, Path | None]:
    g = ctx.find_root().obj or {}
    return (
        fmt or g.get("fmt") or default_fmt,
        jobs or g.get("jobs") or 1,
        cache or g.get("cache"),
    )


def _emit_csv(header: list[str], rows: list[list]) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    click.echo(buf.getvalue(), nl=False)


@click.group(cls=_Group)
@_common
@click.pass_context
def cli(ctx, fmt, jobs, cache):
    """Combinatorics of rays, roots and matings of quadratic polynomials."""
    ctx.obj = {"fmt": fmt, "jobs": jobs, "cache": cache}


@cli.command("angle")
@click.argument("a", type=ANGLE)
@_common
@click.pass_context
def angle_cmd(ctx, a, fmt, jobs, cache):
    """Describe an angle: expansion, orbit and parameter-space data."""
    fmt, _, _ = _settings(ctx, fmt, jobs, cache)
    pp = preperiod_period(a)
    be = binary_expansion(a)
    info = {
        "angle": str(a),
        "preperiod": pp.preperiod,
        "period": pp.period,
        "binary": str(be),
        "orbit": [str(x) for x in orbit(a)],
    }
    if pp.preperiod == 0 and a.num:
        info["conjugate"] = str(conjugate_angle(a))
    lb = limb_of(a)
    info["limb"] = str(lb) if lb else None
    if fmt == "json":
        click.echo(json.dumps(info))
    elif fmt == "csv":
        _emit_csv(list(info), [[" ".join(v) if isinstance(v, list) else v for v in info.values()]])
    else:
        for k, v in info.items():
            click.echo(f"{k}: {' '.join(v) if isinstance(v, list) else v}")


@cli.command("conj")
@click.argument("a", type=ANGLE)
@_common
@click.pass_context
def conj_cmd(ctx, a, fmt, jobs, cache):
    """Print the conjugate angle of a periodic angle."""
    fmt, _, _ = _settings(ctx, fmt, jobs, cache)
    if preperiod_period(a).preperiod or a.num == 0:
        raise click.BadParameter(f"{a} is not a periodic angle in (0, 1)", param_hint="A")
    b = conjugate_angle(a)
    if fmt == "json":
        click.echo(json.dumps({"angle": str(a), "conjugate": str(b)}))
    elif fmt == "csv":
        _emit_csv(["angle", "conjugate"], [[str(a), str(b)]])
    else:
        click.echo(str(b))


@cli.command("coland")
@click.option("--param", "c", type=PARAM, required=True, help="c:<lo>/<hi>, c:<a>, m:<a> or an alias.")
@click.argument("a", type=ANGLE)
@click.argument("b", type=ANGLE)
@_common
@click.pass_context
def coland_cmd(ctx, c, a, b, fmt, jobs, cache):
    """Whether the dynamic rays with angles A and B land together."""
    fmt, _, _ = _settings(ctx, fmt, jobs, cache)
    together = colands(c, a, b)
    lc = landing_class(c, a)
    if fmt == "json":
        click.echo(json.dumps({
            "param": str(c),
            "a": str(a),
            "b": str(b),
            "colands": together,
            "class_of_a": [str(x) for x in lc.sorted()],
        }))
    elif fmt == "csv":
        _emit_csv(["param", "a", "b", "colands"], [[str(c), str(a), str(b), str(together).lower()]])
    else:
        click.echo(str(together).lower())


@cli.command("class")
@click.option("--p", "p", type=PARAM, required=True)
@click.option("--q", "q", type=PARAM, required=True)
@click.option("--angle", "a", type=ANGLE, required=True)
@click.option("--preperiod", "L", type=click.IntRange(min=0), default=None)
@click.option("--period", "K", type=click.IntRange(min=1), default=None)
@_common
@click.pass_context
def class_cmd(ctx, p, q, a, L, K, fmt, jobs, cache):
    """Ray-equivalence class of a ray in the formal mating of P and Q."""
    fmt, _, _ = _settings(ctx, fmt, jobs, cache)
    u = None
    if L is not None or K is not None:
        pp = preperiod_period(a)
        u = AngleUniverse(pp.preperiod if L is None else L, pp.period if K is None else K)
        if a not in u:
            raise click.BadParameter(f"{a} is outside the universe L={u.max_preperiod}, K={u.max_period}")
    m = MatingSpec(p, q)
    cl = class_of(m, a, u)
    d = cl.to_dict()
    if fmt == "json":
        click.echo(json.dumps(d))
    elif fmt == "csv":
        _emit_csv(["ray", "p_node", "q_node"], [
            [str(r), " ".join(map(str, sorted(landing_set(p, r)))), " ".join(map(str, sorted(landing_set(q, minus(r)))))]
            for r in sorted(cl.rays)
        ])
    else:
        click.echo(f"rays: {' '.join(d['rays'])}")
        click.echo("p_nodes: " + " | ".join(" ".join(n) for n in d["p_nodes"]))
        click.echo("q_nodes: " + " | ".join(" ".join(n) for n in d["q_nodes"]))
        click.echo(f"shape: {d['shape']}")
        click.echo(f"diameter: {d['diameter']}")


@cli.command("search")
@click.option("--period", "period", type=click.IntRange(min=2), required=True)
@click.option("--max-period", "max_period", type=click.IntRange(min=2), default=None,
              help="Search every period from --period to this one.")
@click.option("--satellite-only", is_flag=True, help="Only connections through a 1/2-satellite point.")
@_common
@click.pass_context
def search_cmd(ctx, period, max_period, satellite_only, fmt, jobs, cache):
    """Count maximal periodic ray connections of length at least 5."""
    fmt, jobs, cache = _settings(ctx, fmt, jobs, cache, default_fmt="csv")
    last = max_period or period
    if last < period:
        raise click.BadParameter("--max-period is below --period")
    results = [max_connections(n, jobs=jobs, cache=cache, satellite_only=satellite_only) for n in range(period, last + 1)]
    if fmt == "json":
        click.echo(json.dumps([r.to_dict() for r in results]))
        return
    rows = [list(row) for r in results for row in r.rows()]
    if fmt == "csv":
        _emit_csv(["period", "length", "primitive", "satellite"], rows)
    else:
        for n, L, pc, sc in rows:
            click.echo(f"period {n}  length {L}: {pc} + {sc}")


@cli.command("verify")
@click.argument("scenario")
@click.option("--extended", is_flag=True, help="Include the slow periods of the table scenario.")
@_common
@click.pass_context
def verify_cmd(ctx, scenario, extended, fmt, jobs, cache):
    """Run a registered scenario, or all of them."""
    fmt, jobs, cache = _settings(ctx, fmt, jobs, cache)
    names = list(SCENARIOS) if scenario == "all" else [scenario]
    for n in names:
        if n not in SCENARIOS:
            raise click.BadParameter(f"unknown scenario {n!r}; known: all, {', '.join(SCENARIOS)}", param_hint="SCENARIO")
    reports = [run_scenario(n, extended=extended, jobs=jobs, cache=cache) for n in names]
    if fmt == "json":
        out = [r.to_dict() for r in reports]
        click.echo(json.dumps(out[0] if len(out) == 1 else out))
    elif fmt == "csv":
        _emit_csv(["scenario", "passed", "seconds"], [[r.name, str(r.passed).lower(), f"{r.seconds:.3f}"] for r in reports])
    else:
        for r in reports:
            click.echo(f"{'PASS' if r.passed else 'FAIL'} {r.name} ({r.seconds:.2f}s)")
            if not r.passed:
                click.echo("  " + json.dumps(r.witness))
    if not all(r.passed for r in reports):
        ctx.exit(EXIT_FAIL)


def main() -> None:
    sys.exit(cli.main(prog_name="artifact", standalone_mode=True))
