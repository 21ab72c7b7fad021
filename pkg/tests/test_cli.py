import csv
import io
import json

import pytest

from heisenweyl.cli import main
from heisenweyl.suites import SEED_ENV, ConfigError, SuiteConfig


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def strip_time(text):
    data = json.loads(text)
    data.pop("wall_time")
    return data


def test_verify_combinatorics_passes(capsys):
    code, out, _ = run(capsys, "verify", "combinatorics")
    data = json.loads(out)
    assert code == 0 and data["status"] == "pass"
    assert all(r["passed"] for r in data["records"])


def test_haar_consistency_is_deterministic(capsys):
    args = ("verify", "haar-consistency", "--m", "2", "--samples", "2000", "--seed", "7")
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    assert strip_time(out1) == strip_time(out2)
    rows = [r for r in json.loads(out1)["records"] if r["kind"] == "consistency"]
    assert [r["m"] for r in rows] == [2]
    assert rows[0]["seed"] == 7


def test_norms_tabloid_audit(capsys):
    code, out, _ = run(capsys, "verify", "norms", "--tabloid", "1,2:1,1", "--samples", "20000")
    data = json.loads(out)
    assert code == 0 and data["status"] == "audit_only"
    (rec,) = data["records"]
    assert rec["kind"] == "audit" and rec["identity"] == "monomial_norm"
    assert rec["paper_value"]["re"] == pytest.approx(1 / 6)
    assert set(rec["mc"]) == {"mean_re", "mean_im", "stderr", "n", "seed"}


def test_csv_and_json_encode_the_same_records(capsys, tmp_path):
    base = ("verify", "weyl", "--seed", "3")
    _, out_json, _ = run(capsys, *base, "--format", "json")
    _, out_csv, _ = run(capsys, *base, "--format", "csv")
    records = json.loads(out_json)["records"]
    rows = list(csv.DictReader(io.StringIO(out_csv)))
    assert [json.loads(r["record"]) for r in rows] == records


def test_text_format_and_out_file(capsys, tmp_path):
    target = tmp_path / "report.txt"
    code, out, _ = run(capsys, "verify", "heat", "--format", "text", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("suite heat: pass")


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv(SEED_ENV, "123")
    _, out, _ = run(capsys, "verify", "weyl")
    assert json.loads(out)["config"]["seed"] == 123
    monkeypatch.setenv(SEED_ENV, "abc")
    code, _, err = run(capsys, "verify", "weyl")
    assert code == 2 and SEED_ENV in err


def test_usage_errors_exit_2(capsys, tmp_path):
    with pytest.raises(SystemExit) as info:
        main(["verify", "nonsense"])
    assert info.value.code == 2
    code, _, err = run(capsys, "verify", "norms", "--samples", "0")
    assert code == 2
    code, _, _ = run(capsys, "verify", "norms", "--tabloid", "2,1:1")
    assert code == 2
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"samples": 100, "colour": "blue"}))
    code, _, err = run(capsys, "verify", "weyl", "--config", str(cfg))
    assert code == 2 and "colour" in err


def test_config_file_is_overridden_by_flags(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"samples": 3000, "seed": 5}))
    _, out, _ = run(capsys, "verify", "weyl", "--config", str(cfg), "--seed", "9")
    conf = json.loads(out)["config"]
    assert conf["samples"] == 3000 and conf["seed"] == 9


def test_failing_check_exits_1(capsys):
    # U(3) characters at this sample size leave several pairs above the stderr limit
    code, out, _ = run(capsys, "verify", "characters", "--dim", "3", "--samples", "2000")
    data = json.loads(out)
    assert code == 1 and data["status"] == "fail"
    assert any(r["gating"] and not r["passed"] for r in data["records"])


def test_suite_config_validation():
    with pytest.raises(ConfigError):
        SuiteConfig("bogus")
    with pytest.raises(ConfigError):
        SuiteConfig.from_dict({"suite": "weyl", "extra": 1})
    with pytest.raises(ConfigError):
        SuiteConfig("weyl", tol=-1.0)
    assert SuiteConfig("norms", tabloid=("1:1",)).echo()["tabloid"] == ["1:1"]


def test_dump_sample(capsys):
    code, out, _ = run(capsys, "dump-sample", "--level", "3", "--seed", "4")
    data = json.loads(out)
    assert code == 0
    assert [m["dimension"] for m in data["chain"]] == [1, 2, 3]
    assert len(data["phis"]) == 3
    _, again, _ = run(capsys, "dump-sample", "--level", "3", "--seed", "4")
    assert again == out
