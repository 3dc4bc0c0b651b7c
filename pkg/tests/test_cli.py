import csv
import io
import json
import subprocess
import sys

import pytest

from geoperiod.cli import (CSV_HEADER, ConfigError, RunConfig, build_config, build_parser, main,
                           parse_complex, read_config_file)


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("text,value", [("3", 3), ("7i", 7j), ("0+7i", 7j), ("-1.5-2e-1i", -1.5 - 0.2j),
                                        ("i", 1j), ("-i", -1j), ("2.5+i", 2.5 + 1j), ("1e-3", 1e-3),
                                        ("0.5j", 0.5j)])
def test_parse_complex(text, value):
    assert parse_complex(text) == value


@pytest.mark.parametrize("text", ["", "abc", "1+x", "1+2i+3", "i1"])
def test_parse_complex_rejects(text):
    with pytest.raises(ConfigError):
        parse_complex(text)


def test_config_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\ntol_1d=1e-8\nseed=42\neval_budget=1e5\n")
    assert read_config_file(cfg)["seed"] == 42
    args = build_parser().parse_args(["verify", "--seed", "7"])
    c = build_config(args, environ={"GEOPERIOD_CONFIG": str(cfg)})
    assert c == RunConfig(tol_1d=1e-8, seed=7, eval_budget=100000)
    args = build_parser().parse_args(["verify", "--config", str(cfg)])
    assert build_config(args, environ={}).seed == 42
    (tmp_path / "bad.cfg").write_text("colour=blue\n")
    with pytest.raises(ConfigError):
        read_config_file(tmp_path / "bad.cfg")


@pytest.mark.parametrize("flags", [["--tol-1d", "2.0"], ["--tol-nd", "0"], ["--eval-budget", "100"]])
def test_verify_config_errors_exit_2(flags, capsys):
    code, _, err = run(["verify", "--suite", "appendix"] + flags, capsys)
    assert code == 2 and "error" in err


def test_verify_appendix_small(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, _, err = run(["verify", "--suite", "appendix", "--draws", "4", "-o", str(out)], capsys)
    assert code == 0
    reps = json.loads(out.read_text())
    assert len(reps) == 20 and all(r["pass"] for r in reps)
    assert {r["identity_id"] for r in reps} == {"A1", "A2", "A3", "A4", "A5"}
    # byte-identical on rerun
    out2 = tmp_path / "r2.json"
    main(["verify", "--suite", "appendix", "--draws", "4", "-o", str(out2)])
    assert out.read_bytes() == out2.read_bytes()


def test_verify_loose_tolerance_honoured(capsys):
    code, out, _ = run(["verify", "--suite", "appendix", "--draws", "2", "--tol-1d", "1e-3",
                        "--format", "csv"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert {float(r["tol"]) for r in rows} == {1e-3, 1e-2}


def test_failed_check_exit_1(capsys):
    code, out, _ = run(["invariance", "-n", "3", "-m", "2", "--nu", "1", "--nuprime", "0.3",
                        "--count", "2", "--tol-nd", "1e-14"], capsys)
    assert code == 1 and not all(r["pass"] for r in json.loads(out))


def test_special_value_region(capsys):
    code, out, _ = run(["special-value", "-n", "3", "-m", "2", "--nu", "3", "--nuprime", "1"],
                       capsys)
    rec = json.loads(out)
    assert code == 0 and rec["in_convergence_region"] and rec["residual"] < 1e-4


def test_special_value_continuation_only(capsys):
    code, out, _ = run(["special-value", "-n", "3", "-m", "2", "--nu", "3", "--nuprime", "0+7i"],
                       capsys)
    rec = json.loads(out)
    assert code == 0 and "no direct oracle" in rec["note"] and "residual" not in rec


def test_special_value_pole_names_factor(capsys):
    code, _, err = run(["special-value", "-n", "3", "-m", "2", "--nu=-2.5", "--nuprime", "0"],
                       capsys)
    assert code == 2 and "Gamma((nu+rho" in err


def test_decay_table(capsys):
    code, out, _ = run(["decay", "-n", "3", "-m", "2", "--nu", "0i"], capsys)
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and tuple(rows[0]) == CSV_HEADER and len(rows) == 72
    r = rows[-1]
    assert float(r[1]) == 40.0 and float(r[0]) == pytest.approx(0.25 + 1600)
    assert len(r[5].replace(".", "").replace("-", "").split("e")[0].lstrip("0")) <= 12
    ratios = [float(x[5]) for x in rows[1:]]
    tail = ratios[44:]
    assert (max(tail) - min(tail)) / max(tail) < 0.05


def test_decay_empty_grid(capsys):
    code, _, err = run(["decay", "-n", "3", "-m", "2", "--nu", "0", "--t-min", "9", "--t-max", "5"],
                       capsys)
    assert code == 2 and "empty grid" in err


def test_chain_and_invariance(capsys):
    code, out, _ = run(["chain", "-n", "3", "-m", "2", "--nu", "0.1", "--nuprime", "0.1"], capsys)
    steps = json.loads(out)
    assert code == 0 and len(steps) == 4 and max(s["residual"] for s in steps) < 1e-8
    code, _, _ = run(["chain", "-n", "3", "-m", "2", "--nu", "3", "--nuprime", "1"], capsys)
    assert code == 2
    code, out, _ = run(["invariance", "-n", "3", "-m", "2", "--nu", "1", "--nuprime", "0.3",
                        "--count", "2"], capsys)
    assert code == 0 and len(json.loads(out)) == 2


def test_console_module_entry():
    res = subprocess.run([sys.executable, "-m", "geoperiod", "decay", "-n", "4", "-m", "2",
                          "--nu", "0", "--t-min", "5", "--t-max", "6"],
                         capture_output=True, text=True, timeout=120)
    assert res.returncode == 0 and res.stdout.splitlines()[0] == ",".join(CSV_HEADER)
    res = subprocess.run([sys.executable, "-m", "geoperiod", "verify", "--suite", "nope"],
                         capture_output=True, text=True, timeout=120)
    assert res.returncode == 2
