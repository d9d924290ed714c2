from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import pytest

from dds import __version__
from dds.cache import ResultCache, cache_key
from dds.cli import main
from dds.config import ConfigError, RunConfig, load_config, parse_config_text
from dds.envelope import ResultEnvelope, dumps
from dds.precision.constants import PI_DIGITS


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, "--format", "json", *argv)
    return code, json.loads(out)


COMMANDS = [
    ("sum", "--to", "50"),
    ("lambda", "--sigma", "101"),
    ("reconstruct", "--sigma", "101"),
    ("bounds", "--sigma", "101", "--pq-x", "2"),
    ("holder", "--p", "2", "--n", "10"),
    ("fermi", "--p", "2", "--x", "-1", "--n", "20"),
    ("spikes", "--n-max", "400"),
    ("convergents", "--count", "6"),
    ("elliptic", "--to", "100"),
    ("slope-field", "--t-lo", "1", "--t-hi", "10", "--steps", "4"),
]


@pytest.mark.parametrize("argv", COMMANDS, ids=[c[0] for c in COMMANDS])
def test_json_envelope_round_trip(capsys, argv):
    code, out, _ = run(capsys, "--format", "json", "--no-cache", *argv)
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"command", "params", "results", "diagnostics", "tool_version"}
    assert doc["command"] == argv[0] and doc["tool_version"] == __version__
    env = ResultEnvelope.from_dict(doc)
    assert json.loads(env.to_json()) == doc
    assert env.to_json() == out


def test_seventeen_digit_numbers():
    text = dumps({"x": 0.1, "y": 78.116080638675598, "n": 3, "z": 1e-300})
    assert '"x": 0.10000000000000001' in text
    assert '"y": 78.116080638675598' in text
    assert json.loads(text)["z"] == 1e-300


def test_lambda_golden(capsys):
    code, doc = run_json(capsys, "lambda", "--sigma", "10001")
    assert code == 0
    r = doc["results"]
    assert abs(r["lambda"] - 78.1160806386) < 1e-4
    assert r["path_rel_diff"] <= 1e-12
    assert doc["diagnostics"]["imag_residue"] < 1e-12


def test_sum_examples(capsys):
    _, doc = run_json(capsys, "sum", "--kernel", "csc", "--v", "2", "--s", "3", "--from", "1", "--to", "10000")
    _, rec = run_json(capsys, "reconstruct", "--sigma", "10001")
    assert abs(doc["results"]["value"] - rec["results"]["psi"]) <= 1e-9
    assert [s[0] for s in doc["diagnostics"]["spikes"]][:5] == [1, 3, 22, 333, 355]
    code, doc = run_json(capsys, "sum", "--kernel", "sec", "--to", "1000")
    assert code == 0
    _, doc = run_json(capsys, "sum", "--kernel", "cot", "--to", "1")
    assert doc["results"]["value"] == pytest.approx(0.41228292743739192, rel=1e-15)


def test_fast_precision(capsys):
    _, ext = run_json(capsys, "sum", "--to", "1000")
    _, fast = run_json(capsys, "--precision", "fast", "sum", "--to", "1000")
    assert fast["params"]["precision"] == "fast"
    assert fast["results"]["value"] == pytest.approx(ext["results"]["value"], rel=1e-11)


def test_bounds_triple(capsys):
    _, doc = run_json(capsys, "bounds", "--sigma", "10001")
    r = doc["results"]
    assert {"lower", "upper", "psi"} <= set(r)
    assert r["lower"] <= r["psi"] <= r["upper"]


def test_convergents_output(capsys):
    _, doc = run_json(capsys, "convergents", "--count", "6")
    nums = [row["p"] for row in doc["results"]["rows"]]
    assert 355 in nums and 103993 in nums
    assert len(doc["results"]["historical_mu_pi"]) == 5


def test_slope_field_csv(capsys):
    code, out, _ = run(capsys, "--format", "csv", "slope-field", "--t-lo", "1", "--t-hi", "10001", "--steps", "2")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 2
    assert list(rows[0]) == ["t", "lambda_prime"]
    assert all(float(r["lambda_prime"]) < 0 for r in rows)
    assert abs(float(rows[-1]["lambda_prime"])) <= 1e-10


def test_csv_key_value_header(capsys):
    code, out, _ = run(capsys, "--format", "csv", "holder", "--p", "2", "--n", "5")
    assert out.splitlines()[0] == "key,value"


def test_table_is_default(capsys):
    code, out, _ = run(capsys, "holder", "--p", "2", "--n", "5")
    assert out.startswith("# holder")


def test_exit_codes(capsys):
    assert run(capsys, "lambda", "--sigma", "0")[0] == 2
    assert run(capsys, "sum", "--phase-pi", "1/3", "--to", "10")[0] == 3
    assert run(capsys, "verify", "--suite", "")[0] == 64
    assert run(capsys, "frobnicate")[0] == 64
    assert run(capsys, "sum")[0] == 64
    assert run(capsys, "convergents", "--count", "500")[0] == 2
    assert run(capsys, "slope-field", "--t-lo", "2", "--t-hi", "1")[0] == 2


def test_json_error_object(capsys):
    code, doc = run_json(capsys, "sum", "--phase-pi", "1/3", "--to", "10")
    assert code == 3
    assert doc["error"]["type"] == "PoleError" and doc["error"]["exit_code"] == 3
    code, doc = run_json(capsys, "fermi", "--p", "2", "--x", "1")
    assert code == 2 and doc["error"]["type"] == "DomainError"


def test_cache_hit_is_byte_identical(capsys, tmp_path):
    cache = str(tmp_path / "c")
    code1, out1, _ = run(capsys, "--format", "json", "--cache-dir", cache, "lambda", "--sigma", "501")
    code2, out2, _ = run(capsys, "--format", "json", "--cache-dir", cache, "lambda", "--sigma", "501")
    d1, d2 = json.loads(out1), json.loads(out2)
    assert d1["diagnostics"]["cache_hit"] is False and d2["diagnostics"]["cache_hit"] is True
    assert dumps(d1["results"]) == dumps(d2["results"])
    assert len(list((tmp_path / "c").glob("*.json"))) == 1
    _, out3, _ = run(capsys, "--format", "json", "--cache-dir", cache, "--no-cache", "lambda", "--sigma", "501")
    assert json.loads(out3)["diagnostics"]["cache_hit"] is False


def test_cache_key_and_atomic_store(tmp_path):
    k1 = cache_key("lambda", {"sigma": 5, "precision": "extended"}, "1")
    assert k1 == cache_key("lambda", {"precision": "extended", "sigma": 5}, "1")
    assert k1 != cache_key("lambda", {"sigma": 5, "precision": "extended"}, "2")
    c = ResultCache(tmp_path)
    c.put(k1, {"a": 1.5})
    assert c.get(k1) == {"a": 1.5}
    assert not list(tmp_path.glob(".tmp-*"))
    assert c.get("missing") is None


def test_config_precedence(tmp_path, monkeypatch):
    (tmp_path / "dds.conf").write_text("# local\nformat = json\nprecision = fast\n")
    cfg = load_config(cwd=tmp_path, env={})
    assert (cfg.format, cfg.precision) == ("json", "fast")
    cfg = load_config({"format": "csv"}, cwd=tmp_path, env={})
    assert (cfg.format, cfg.precision) == ("csv", "fast")
    other = tmp_path / "elsewhere.conf"
    other.write_text("format = csv\n")
    empty = tmp_path / "empty"
    empty.mkdir()
    assert load_config(cwd=empty, env={"DDS_CONFIG": str(other)}).format == "csv"
    assert load_config(cwd=empty, env={}) == RunConfig()


def test_config_errors():
    with pytest.raises(ConfigError):
        parse_config_text("colour = blue\n")
    with pytest.raises(ConfigError):
        parse_config_text("just words\n")
    with pytest.raises(ConfigError):
        RunConfig(format="xml")


def test_config_file_drives_cli(capsys, tmp_path):
    (tmp_path / "dds.conf").write_text("format = json\nno_cache = true\n")
    code, out, _ = run(capsys, "holder", "--p", "2", "--n", "3")
    assert json.loads(out)["command"] == "holder"


def test_bad_config_is_usage_error(capsys, tmp_path):
    (tmp_path / "dds.conf").write_text("colour = blue\n")
    assert run(capsys, "holder", "--p", "2", "--n", "3")[0] == 64


def test_pi_digits_override(capsys, tmp_path, monkeypatch):
    digits = tmp_path / "sqrt2.txt"
    digits.write_text("# sqrt 2\n1.41421356237309504880168872420969807856967187537694807317667973799073247846\n")
    monkeypatch.setenv("DDS_PI_DIGITS", str(digits))
    _, doc = run_json(capsys, "convergents", "--count", "5")
    assert [r["p"] for r in doc["results"]["rows"]] == [1, 3, 7, 17, 41]
    assert "digits_sha256" in doc["params"]
    pi_file = tmp_path / "pi.txt"
    pi_file.write_text(PI_DIGITS + "\n")
    _, doc = run_json(capsys, "--pi-digits", str(pi_file), "convergents", "--count", "5")
    assert doc["results"]["rows"][-1]["p"] == 103993


def test_out_path(capsys, tmp_path):
    target = tmp_path / "res.json"
    code, out, _ = run(capsys, "--format", "json", "--out", str(target), "holder", "--p", "2", "--n", "3")
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["command"] == "holder"


def test_global_flags_after_subcommand(capsys):
    code, out, _ = run(capsys, "holder", "--p", "2", "--n", "3", "--format", "json")
    assert code == 0 and json.loads(out)["command"] == "holder"


def test_verify_identities_via_module():
    proc = subprocess.run([sys.executable, "-m", "dds", "verify", "--suite", "identities"], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stdout[-2000:]
    assert "FAIL" not in proc.stdout


def test_verify_golden_json(capsys):
    code, doc = run_json(capsys, "verify", "--suite", "golden")
    assert code == 0
    summary = doc["results"]["summary"]
    assert summary["passed"] and summary["n_failed"] == 0
    kinds = {r["kind"] for r in doc["results"]["rows"]}
    assert "erratum" in kinds
