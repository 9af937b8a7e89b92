"""Command-line front end.

Usage:
    napkin exact --n 3 --p 1/2              # joint law of (napkinless, frustrated)
    napkin exact --n 5 --table straight --format csv
    napkin stats --n 48                     # moments and per-guest slopes
    napkin verify --order 12 --p 1/3        # identity suite; exit 3 on failure
    napkin simulate --n 10000 --trials 100000 --seed 42
    napkin encode --perm 9,1,-3,2,5,6,-4,-7,8
    napkin series --name C --order 6

Exact rationals are written as "num/den" strings in JSON; ``--float`` adds
decimal renderings.  Exit codes: 0 success, 2 usage error, 3 verification
failure.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from fractions import Fraction

import click

from . import __version__
from . import bipartition as bp
from .genfun import build_full, verify_identities
from .model import Params, SignedPermutation, replay_circular, replay_linear
from .oracle import MAX_N, JointDistribution, enumerate_table
from .series import ZSeries
from .stats import asymptotic_slopes, moments

__all__ = ["main"]

EXIT_VERIFY = 3
SERIES_NAMES = ("C", "S", "N", "L", "R", "B", "H", "Hbar")


class RationalType(click.ParamType):
    name = "a/b"

    def convert(self, value, param, ctx):
        if isinstance(value, Params):
            return value
        try:
            return Params(str(value))
        except (ValueError, ZeroDivisionError) as exc:
            self.fail(f"{value!r} is not a probability written as a/b ({exc})", param, ctx)


RATIONAL = RationalType()


class PermType(click.ParamType):
    name = "perm"

    def convert(self, value, param, ctx):
        if isinstance(value, SignedPermutation):
            return value
        try:
            return SignedPermutation.parse(value)
        except ValueError as exc:
            self.fail(str(exc), param, ctx)


def _frac(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


def _emit(ctx: click.Context, text: str) -> None:
    out = ctx.obj["output"]
    if not text.endswith("\n"):
        text += "\n"
    if out is None:
        click.echo(text, nl=False)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2)


def _common(f):
    f = click.option("--format", "fmt", type=click.Choice(["pretty", "json", "csv"]),
                     default="pretty", show_default=True)(f)
    f = click.option("--float", "with_float", is_flag=True,
                     help="Add decimal renderings next to exact values.")(f)
    return f


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("-o", "--output", type=click.Path(dir_okay=False, writable=True),
              default=None, help="Write here instead of standard output.")
@click.version_option(version=__version__)
@click.pass_context
def main(ctx: click.Context, output):
    """Napkinless and frustrated guests at round and straight tables."""
    ctx.ensure_object(dict)
    ctx.obj["output"] = output


# exact ---------------------------------------------------------------------

def _from_series(n: int, params: Params, order: int, table: str) -> JointDistribution:
    g = build_full(params, order)
    if table == "circular":
        return JointDistribution(n, params.p, table, dict(g.C[n].terms))
    by_class = {}
    for c, s in zip("NLRB", (g.N_, g.L, g.R, g.B)):
        if s[n].terms:
            by_class[c] = dict(s[n].terms)
    return JointDistribution(n, params.p, "linear", dict(g.S[n].terms), by_class)


def _pretty_distribution(d: JointDistribution, with_float: bool) -> str:
    lines = [f"{d.table} table, n={d.n}, p={_frac(d.p)}", ""]
    head = f"{'i':>4} {'j':>4}  probability"
    lines.append(head)
    for _, i, j, pr in d.rows():
        row = f"{i:>4} {j:>4}  {_frac(pr)}"
        if with_float:
            row += f"  ({float(pr):.12g})"
        lines.append(row)
    lines.append("")
    lines.append(f"E[napkinless] = {_frac(d.mean('o'))}   E[frustrated] = {_frac(d.mean('m'))}")
    return "\n".join(lines)


@main.command()
@click.option("--n", "n", type=click.IntRange(min=1), required=True, help="Number of guests.")
@click.option("--p", "params", type=RATIONAL, default="1/2", show_default=True,
              help="Probability of preferring the left napkin.")
@click.option("--order", type=click.IntRange(min=0), default=12, show_default=True,
              help="Truncation order of the series.")
@click.option("--table", type=click.Choice(["circular", "straight"]), default="circular",
              show_default=True)
@click.option("--oracle", is_flag=True, help=f"Enumerate every signed permutation (n <= {MAX_N}).")
@_common
@click.pass_context
def exact(ctx, n, params, order, table, oracle, fmt, with_float):
    """Exact probabilities P(i napkinless, j frustrated) for n guests."""
    if oracle:
        if n > MAX_N:
            raise click.UsageError(f"--oracle enumerates 2^n n! cases; n must be <= {MAX_N}")
        d = enumerate_table(n, params, table)
    else:
        if n > order:
            raise click.UsageError(f"n={n} exceeds --order {order}; raise --order or pass --oracle")
        d = _from_series(n, params, order, table)
    if fmt == "json":
        _emit(ctx, _dump(d.to_json(with_float)))
    elif fmt == "csv":
        _emit(ctx, d.to_csv(with_float))
    else:
        _emit(ctx, _pretty_distribution(d, with_float))


# stats ---------------------------------------------------------------------

@main.command()
@click.option("--n", "n", type=click.IntRange(min=1), required=True)
@click.option("--p", "params", type=RATIONAL, default="1/2", show_default=True)
@click.option("--dps", type=click.IntRange(min=15), default=50, show_default=True,
              help="Working digits for the asymptotic slopes.")
@_common
@click.pass_context
def stats(ctx, n, params, dps, fmt, with_float):
    """Exact means, variances and covariance at n guests, plus slopes."""
    rep = moments(build_full(params, n), n)
    if 0 < params.p < 1:
        rep.slopes = asymptotic_slopes(params, dps)
    if fmt == "json":
        _emit(ctx, _dump(rep.to_json(with_float)))
    elif fmt == "csv":
        _emit(ctx, rep.to_csv(with_float))
    else:
        lines = [f"round table, n={n}, p={_frac(params.p)}", ""]
        width = max(len(f) for f in rep._FIELDS)
        for name in rep._FIELDS:
            v = getattr(rep, name)
            lines.append(f"{name:<{width}}  {_frac(v)}  ({float(v):.12g})")
        if rep.slopes is not None:
            lines += ["", "per-guest slopes (n -> infinity)"]
            for k, v in rep.slopes.to_json().items():
                if k in rep._FIELDS and v is not None:
                    lines.append(f"{k:<{width}}  {v}")
        _emit(ctx, "\n".join(lines))


# verify --------------------------------------------------------------------

def _oracle_checks(g, upto: int) -> list[dict]:
    """Coefficient-by-coefficient comparison against enumeration."""
    out = []
    for table, main_series in (("circular", g.C), ("linear", g.S)):
        first = None
        for n in range(1 if table == "circular" else 0, upto + 1):
            d = enumerate_table(n, g.params, table)
            ok = main_series[n] == d.poly()
            if ok and table == "linear":
                parts = dict(zip("NLRB", (g.N_, g.L, g.R, g.B)))
                ok = all(parts[c][n] == d.poly(c) for c in "NLRB")
            if not ok:
                first = n
                break
        out.append({"name": f"oracle agreement ({table})", "passed": first is None,
                    "first_failure": first, "informational": False})
    return out


@main.command()
@click.option("--order", type=click.IntRange(min=0), default=12, show_default=True)
@click.option("--p", "params", type=RATIONAL, default="1/2", show_default=True)
@click.option("--oracle", is_flag=True, help=f"Also compare with enumeration up to n={min(7, MAX_N)}.")
@_common
@click.pass_context
def verify(ctx, order, params, oracle, fmt, with_float):
    """Run the generating-function identity suite."""
    g = build_full(params, order)
    report = verify_identities(g).to_json()
    if oracle:
        report["checks"] += _oracle_checks(g, min(order, 7))
        report["all_passed"] = all(c["passed"] for c in report["checks"] if not c["informational"])
    if fmt == "json":
        _emit(ctx, _dump(report))
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "passed", "first_failure", "informational"])
        for c in report["checks"]:
            w.writerow([c["name"], c["passed"], "" if c["first_failure"] is None else c["first_failure"],
                        c["informational"]])
        _emit(ctx, buf.getvalue())
    else:
        lines = [f"identity suite, order {order}, p={report['p']}", ""]
        for c in report["checks"]:
            mark = "ok  " if c["passed"] else "FAIL"
            note = "" if c["passed"] else f"  (first differs at z^{c['first_failure']})"
            if c["informational"]:
                mark, note = mark.lower(), note + "  [informational]"
            lines.append(f"{mark}  {c['name']}{note}")
        lines += ["", "all passed" if report["all_passed"] else "FAILED"]
        _emit(ctx, "\n".join(lines))
    if not report["all_passed"]:
        ctx.exit(EXIT_VERIFY)


# simulate ------------------------------------------------------------------

@main.command()
@click.option("--n", "n", type=click.IntRange(min=1), default=1000, show_default=True)
@click.option("--p", "params", type=RATIONAL, default="1/2", show_default=True)
@click.option("--trials", type=click.IntRange(min=1), default=10000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@_common
@click.pass_context
def simulate(ctx, n, params, trials, seed, fmt, with_float):
    """Monte Carlo estimate of the napkinless, frustrated and happy fractions."""
    from .montecarlo import montecarlo

    res = montecarlo(n, params, trials, seed)
    data = res.to_json()
    if fmt == "json":
        _emit(ctx, _dump(data))
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "p", "trials", "seed", "statistic", "mean_fraction", "std_error"])
        for k in ("napkinless", "frustrated", "happy"):
            w.writerow([n, data["p"], trials, seed, k, repr(data[k]["mean_fraction"]),
                        repr(data[k]["std_error"])])
        _emit(ctx, buf.getvalue())
    else:
        lines = [f"round table, n={n}, p={data['p']}, {trials} trials, seed {seed} ({data['rng']})", ""]
        for k in ("napkinless", "frustrated", "happy"):
            lines.append(f"{k:<11} {data[k]['mean_fraction']:.8f} +- {data[k]['std_error']:.2g}")
        _emit(ctx, "\n".join(lines))


# encode --------------------------------------------------------------------

@main.command()
@click.option("--perm", type=PermType(), required=True,
              help="Signed permutation such as 2,-3,4,-1.")
@click.option("--table", type=click.Choice(["straight", "circular"]), default="straight",
              show_default=True)
@click.option("--format", "fmt", type=click.Choice(["pretty", "json", "csv"]),
              default="pretty", show_default=True)
@click.pass_context
def encode(ctx, perm, table, fmt):
    """Encode a signed permutation as an ordered or cyclic bipartition."""
    if len(perm) == 0:
        raise click.UsageError("the permutation is empty")
    if table == "circular":
        enc = bp.encode_circular(perm)
        o, m, neg, pos = bp.cyclic_stats(enc)
        out = replay_circular(perm)
        end = None
    else:
        enc = bp.encode_linear(perm)
        o, m, neg, pos = bp.stats_from_bipartition(enc)
        out = replay_linear(perm)
        end = bp.end_class_of(enc)
    # the dictionary and the replay must agree; anything else is a bug
    if (o, m, neg, pos, end) != (out.o, out.m, out.neg_count, out.pos_count, out.end_class):
        raise click.ClickException("bipartition statistics disagree with the replay")
    data = {"perm": str(perm), "table": table, "bipartition": str(enc),
            "napkinless": o, "frustrated": m, "negatives": neg, "positives": pos,
            "end_class": end}
    if fmt == "json":
        _emit(ctx, _dump(data))
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(list(data))
        w.writerow(["" if v is None else v for v in data.values()])
        _emit(ctx, buf.getvalue())
    else:
        lines = [data["bipartition"],
                 f"napkinless={o} frustrated={m} negatives={neg} positives={pos}"]
        if end is not None:
            lines[-1] += f" end_class={end}"
        _emit(ctx, "\n".join(lines))


# series --------------------------------------------------------------------

def _series_rows(s: ZSeries):
    for n, c in enumerate(s.coeffs):
        for (i, j), v in sorted(c.terms.items()):
            yield n, i, j, v


@main.command()
@click.option("--name", type=click.Choice(SERIES_NAMES), default="C", show_default=True)
@click.option("--order", type=click.IntRange(min=0), default=12, show_default=True)
@click.option("--p", "params", type=RATIONAL, default="1/2", show_default=True)
@_common
@click.pass_context
def series(ctx, name, order, params, fmt, with_float):
    """Coefficients of a generating function; [z^n] is a probability polynomial."""
    g = build_full(params, order)
    s = g.series()[name]
    if fmt == "json":
        rows = []
        for n, i, j, v in _series_rows(s):
            r = {"n": n, "i": i, "j": j, "coeff": _frac(v), "num": v.numerator, "den": v.denominator}
            if with_float:
                r["float"] = float(v)
            rows.append(r)
        _emit(ctx, _dump({"name": name, "p": _frac(params.p), "order": order, "rows": rows}))
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "i", "j", "num", "den"] + (["float"] if with_float else []))
        for n, i, j, v in _series_rows(s):
            w.writerow([n, i, j, v.numerator, v.denominator] + ([float(v)] if with_float else []))
        _emit(ctx, buf.getvalue())
    else:
        lines = [f"{name}(p={_frac(params.p)}) to order {order}; coefficient of x^i y^j z^n", ""]
        for n, i, j, v in _series_rows(s):
            lines.append(f"{n:>3} {i:>3} {j:>3}  {_frac(v)}")
        _emit(ctx, "\n".join(lines))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
