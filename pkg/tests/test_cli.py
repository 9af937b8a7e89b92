import json
from fractions import Fraction
from importlib import resources

import jsonschema
import mpmath
import pytest
from click.testing import CliRunner

from napkin.cli import main

SLOPE_HALF = float((2 - mpmath.sqrt(mpmath.e)) ** 2)


def schema(name):
    text = resources.files("napkin").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def run(*args, code=0):
    res = CliRunner().invoke(main, [str(a) for a in args])
    assert res.exit_code == code, res.output
    return res.output


def run_json(kind, *args):
    data = json.loads(run(*args, "--format", "json"))
    jsonschema.validate(data, schema(kind))
    return data


def rows(data):
    return {(r["i"], r["j"]): r["prob"] for r in data["rows"]}


def test_schemas_are_valid():
    for name in ("distribution", "stats", "verify", "simulate", "encode", "series"):
        jsonschema.Draft202012Validator.check_schema(schema(name))


def test_exact_examples():
    d = run_json("distribution", "exact", "--n", 3, "--p", "1/2")
    assert rows(d)[(1, 0)] == "1/4"
    assert rows(run_json("distribution", "exact", "--n", 1)) == {(0, 0): "1/1"}
    assert rows(run_json("distribution", "exact", "--n", 2, "--p", "1/3"))[(0, 1)] == "4/9"


def test_exact_series_equals_oracle():
    for table in ("circular", "straight"):
        a = run("exact", "--n", 5, "--p", "2/7", "--table", table, "--format", "json")
        b = run("exact", "--n", 5, "--p", "2/7", "--table", table, "--format", "json", "--oracle")
        assert a == b


def test_exact_float_and_csv():
    d = run_json("distribution", "exact", "--n", 3, "--float")
    assert d["rows"][0]["float"] == 0.25
    csv = run("exact", "--n", 3, "--format", "csv").splitlines()
    assert csv[0] == "n,i,j,num,den" and "3,1,0,1,4" in csv
    assert "1/4" in run("exact", "--n", 3)


@pytest.mark.parametrize("args", [
    ("exact", "--n", 13),
    ("exact", "--n", 9, "--oracle"),
    ("exact", "--n", 3, "--p", "half"),
    ("exact", "--n", 3, "--p", "3/2"),
    ("exact", "--n", 0),
    ("exact",),
    ("encode", "--perm", "1,1"),
    ("nonsense",),
])
def test_usage_errors(args):
    run(*args, code=2)


def test_stats_examples():
    d = run_json("stats", "stats", "--n", 48)
    assert d["n"] == 48
    num, den = map(int, d["exact"]["E_napkinless"].split("/"))
    assert abs(float(Fraction(num, den) / 48) - SLOPE_HALF) < 1e-9
    one = run_json("stats", "stats", "--n", 1)["exact"]
    assert one["E_happy"] == "1/1"
    assert all(v == "0/1" for k, v in one.items() if k != "E_happy")
    assert run_json("stats", "stats", "--n", 3, "--p", "69/100")["exact"]["E_napkinless"] == "2139/10000"
    assert "asymptotic" not in run_json("stats", "stats", "--n", 3, "--p", "1")


def test_verify():
    for p in ("1/2", "1/3"):
        d = run_json("verify", "verify", "--order", 12, "--p", p)
        assert d["all_passed"]
    assert run_json("verify", "verify", "--order", 2)["all_passed"]
    d = run_json("verify", "verify", "--order", 5, "--oracle")
    assert any(c["name"].startswith("oracle") for c in d["checks"])
    assert run("verify", "--order", 3, "--format", "csv").startswith("name,passed")


def test_verify_failure_exit_code(monkeypatch):
    import napkin.cli as cli
    from napkin.genfun import IdentityCheck, IdentityReport

    def broken(g):
        return IdentityReport(g.params.p, g.order, [IdentityCheck("x", False, 1)])

    monkeypatch.setattr(cli, "verify_identities", broken)
    out = run("verify", "--order", 2, code=3)
    assert "FAIL" in out


def test_simulate_deterministic():
    a = run("simulate", "--seed", 42, "--n", 300, "--trials", 2000, "--format", "json")
    b = run("simulate", "--seed", 42, "--n", 300, "--trials", 2000, "--format", "json")
    assert a == b
    jsonschema.validate(json.loads(a), schema("simulate"))
    assert run("simulate", "--seed", 42) == run("simulate", "--seed", 42)


def test_encode_examples():
    assert run("encode", "--perm", "9,1,-3,2,5,6,-4,-7,8", "--table", "straight").splitlines()[0] \
        == "u{9} u{1,3} u{2} u{5} {6,4} {7} u{8}"
    assert run("encode", "--perm", "-7,1,-3,4,-2,5,-6", "--table", "circular").splitlines()[0] \
        == "u{5,6,(7)} u{1,3} {4,2}"
    assert run("encode", "--perm", "-1").splitlines()[0] == "{1}"
    d = run_json("encode", "encode", "--perm", "2,-3,4,-1", "--table", "circular")
    assert d["bipartition"] == "u{(2),3} {4,1}" and d["napkinless"] == 1


def test_series_output():
    d = run_json("series", "series", "--name", "H", "--order", 3)
    assert [r["coeff"] for r in d["rows"]] == ["1/2", "1/8", "1/48"]
    csv = run("series", "--name", "C", "--order", 2, "--format", "csv").splitlines()
    assert csv[0] == "n,i,j,num,den"


def test_output_file(tmp_path):
    out = tmp_path / "d.json"
    run("--output", out, "exact", "--n", 2, "--format", "json")
    jsonschema.validate(json.loads(out.read_text()), schema("distribution"))
