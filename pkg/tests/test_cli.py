import json
from importlib import resources

import jsonschema
import pytest

from sixfold.cli import EXIT_CODES, EXIT_USAGE, RunConfig, UsageError, main, parse_range


def schema(name):
    return json.loads(resources.files("sixfold").joinpath(f"schemas/{name}.schema.json").read_text())


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_parse_range():
    assert parse_range("2..5") == (2, 3, 4, 5)
    assert parse_range("7") == (7,)
    assert parse_range("4..3") == ()
    with pytest.raises(UsageError):
        parse_range("two")


def test_config_bounds():
    with pytest.raises(UsageError):
        RunConfig(genera=(21,))
    with pytest.raises(UsageError):
        RunConfig(primes=(7,))


def test_table(capsys):
    code, out = run(capsys, "table", "--g", "2..7")
    data = json.loads(out.out)
    jsonschema.validate(data, schema("table"))
    assert code == 0
    assert [r["g"] for r in data["rows"]] == [2, 3, 4, 5, 6, 7]
    assert [r["g"] for r in data["rows"] if r["hyperelliptic"]] == [3]


def test_empty_table(capsys):
    code, out = run(capsys, "table", "--g", "5..4")
    assert code == 0
    assert json.loads(out.out) == {"rows": []}


def test_env_override(capsys, monkeypatch):
    monkeypatch.setenv("SIXFOLD_G", "4")
    _, out = run(capsys, "table")
    assert [r["g"] for r in json.loads(out.out)["rows"]] == [4]
    _, out = run(capsys, "table", "--g", "6")
    assert [r["g"] for r in json.loads(out.out)["rows"]] == [6]


def test_bad_range_is_usage_error(capsys):
    code, out = run(capsys, "table", "--g", "1..3")
    assert code == EXIT_USAGE
    assert "error" in out.err


@pytest.mark.parametrize("target", ["rh", "model", "g2"])
def test_verify_report(capsys, target):
    code, out = run(capsys, "verify", target, "--g", "2..6")
    report = json.loads(out.out)
    jsonschema.validate(report, schema("verify"))
    assert code == 0 and report["pass"]
    assert "PASS" in out.err


def test_verify_closure(capsys):
    code, out = run(capsys, "verify", "closure", "--g", "2", "--p", "3")
    report = json.loads(out.out)
    (r,) = report["checks"][0]["detail"]["reports"]
    assert code == 0
    assert (r["order"], r["is_full"]) == (51840, True)


def test_exit_codes_distinct():
    assert len(set(EXIT_CODES.values())) == len(EXIT_CODES)
    assert EXIT_USAGE not in EXIT_CODES.values() and 0 not in EXIT_CODES.values()


def test_prove_writes_files(capsys, tmp_path):
    code, out = run(capsys, "prove", "--g", "2..4", "--out", str(tmp_path))
    assert code == 0
    summary = json.loads((tmp_path / "proof-summary.json").read_text())
    jsonschema.validate(summary, schema("proof-summary"))
    assert sorted(p.name for p in tmp_path.glob("proof-g*.json")) == [
        "proof-g2.json", "proof-g3.json", "proof-g4.json"]
    assert all(row["ok"] for row in summary["summary"])


def test_render_command(capsys, tmp_path):
    args = ("render", "--g", "5", "--curves", "lemma3.2", "--out", str(tmp_path))
    assert run(capsys, *args)[0] == 0
    first = (tmp_path / "model-g5-lemma3.2.svg").read_bytes()
    run(capsys, *args)
    assert (tmp_path / "model-g5-lemma3.2.svg").read_bytes() == first


def test_render_unknown_curve(capsys, tmp_path):
    code, out = run(capsys, "render", "--g", "5", "--curves", "nope", "--out", str(tmp_path))
    assert code == EXIT_USAGE
    assert "no such curve" in out.err
