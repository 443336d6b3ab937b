import json
from pathlib import Path

import jsonschema
import pytest

from divring import cli, verify
from divring.verify import Campaign, CheckSpec, ConfigError, run_campaign, strip_timing

SCHEMA = json.loads((Path(__file__).parent.parent / "docs" / "report.schema.json").read_text())


def run_cli(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_empty_campaign_passes():
    report = run_campaign(Campaign("empty", 0, []))
    assert report["checks"] == [] and report["summary"]["total"] == 0
    assert verify.exit_code(report) == 0
    jsonschema.validate(report, SCHEMA)


def test_failures_do_not_abort(monkeypatch):
    def boom(params, rng):
        raise RuntimeError("broken")

    monkeypatch.setitem(verify.CHECKS, "boom", boom)
    monkeypatch.setitem(verify.CHECKS, "nope", lambda params, rng: (False, {"k": 1}, {}))
    c = Campaign("mixed", 1, [CheckSpec("a", "boom"), CheckSpec("b", "nope"),
                              CheckSpec("c", "artin-schreier", {"field": (2, 2)})])
    report = run_campaign(c)
    statuses = [r["status"] for r in report["checks"]]
    assert statuses == ["fail", "fail", "pass"]
    assert "RuntimeError" in report["checks"][0]["reason"]
    assert verify.exit_code(report) == 1
    jsonschema.validate(report, SCHEMA)


def test_unknown_check_kind_is_config_error():
    with pytest.raises(ConfigError):
        run_campaign(Campaign("bad", 0, [CheckSpec("x", "no-such-check")]))


def test_check_seeds_are_independent_of_order():
    a = verify.check_rng(5, "metro").random()
    assert a == verify.check_rng(5, "metro").random()
    assert a != verify.check_rng(6, "metro").random()
    assert a != verify.check_rng(5, "inverse").random()


def test_ex1_campaign_report(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, stdout, _ = run_cli(["ex1", "--p", "3", "--samples", "3", "--seed", "1",
                               "--out", str(out)], capsys)
    assert code == 0 and "7 passed" in stdout
    report = json.loads(out.read_text())
    jsonschema.validate(report, SCHEMA)
    assert report["campaign"]["seed"] == 1
    kinds = {r["kind"] for r in report["checks"]}
    assert {"construction", "ring-axioms", "norm-obstruction", "metro"} <= kinds


def test_ex1_p2_selects_degree_three(capsys):
    code, stdout, _ = run_cli(["ex1", "--p", "2", "--samples", "2"], capsys)
    report = json.loads(stdout)
    construction = next(r for r in report["checks"] if r["kind"] == "construction")
    assert construction["counters"]["s"] == 3 and construction["counters"]["dimension"] == 9
    assert code == 0


def test_reports_are_reproducible(capsys):
    runs = []
    for _ in range(2):
        code, stdout, _ = run_cli(["ore-selftest", "--samples", "3", "--seed", "4"], capsys)
        assert code == 0
        runs.append(json.dumps(strip_timing(json.loads(stdout)), sort_keys=True))
    assert runs[0] == runs[1]


def test_gbar_dependent_pair_is_not_radical(capsys):
    code, stdout, _ = run_cli(["gbar", "--b", "1,1", "--field", "3,2"], capsys)
    report = json.loads(stdout)
    assert code == 0
    assert report["checks"][0]["counters"]["radical"] is False
    code, stdout, _ = run_cli(["gbar", "--b", "1,[0,1]", "--field", "3,2"], capsys)
    assert json.loads(stdout)["checks"][0]["counters"]["radical"] is True


def test_markdown_rendering(capsys):
    code, stdout, _ = run_cli(["report", "--campaign", "empty", "--format", "md"], capsys)
    assert code == 0
    assert stdout.startswith("# Campaign `empty`")
    assert "0 passed, 0 failed" in stdout


@pytest.mark.parametrize("argv", [
    ["ex1", "--p", "4"],
    ["gbar", "--b", "1,0", "--field", "3,2"],
    ["gbar", "--b", "1,1", "--field", "4,2"],
    ["ex1", "--p", "3", "--samples", "-1"],
])
def test_configuration_errors_exit_2(argv, capsys):
    code, _, err = run_cli(argv, capsys)
    assert code == 2 and "error" in err


@pytest.mark.parametrize("argv", [
    ["ex1", "--p", "3", "--bogus"],
    ["ex1"],
    ["gbar", "--b", "[1,1"],
    ["frobnicate"],
])
def test_malformed_arguments_exit_2_with_usage(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2
    assert "usage" in capsys.readouterr().err


def test_unwritable_output_exits_2(capsys, tmp_path):
    code, _, err = run_cli(["report", "--campaign", "empty", "--out",
                            str(tmp_path / "missing" / "r.json")], capsys)
    assert code == 2 and "cannot write" in err


def test_list_splitting():
    assert cli._split_list("1,[0,1],2") == ["1", "[0,1]", "2"]


def test_environment_overrides(monkeypatch):
    from fractions import Fraction

    from divring import config
    from divring.hahn import nested_field

    monkeypatch.setenv("DIVRING_PRECISION", "17/3")
    monkeypatch.setenv("DIVRING_ENUM_BOUND", "81")
    assert config.default_precision() == Fraction(17, 3)
    assert nested_field(3).prec == Fraction(17, 3)
    assert config.enum_bound() == 81
    monkeypatch.setenv("DIVRING_PRECISION", "-1")
    with pytest.raises(ValueError):
        config.default_precision()
