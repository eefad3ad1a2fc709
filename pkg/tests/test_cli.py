import json
import subprocess
import sys

import numpy as np
import pytest

from gcwhitham.cli import EXIT_ARGS, EXIT_OK, EXIT_VALIDATION, RunConfig, dumps, main, parse_range


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_range():
    assert parse_range("0:0.03:0.01") == [0.0, 0.01, 0.02, 0.03]
    assert parse_range("1:0:0.1") == []
    assert parse_range("2.5") == [2.5]


def test_curves_c2(capsys):
    code, out, _ = run(["curves", "--c2", "--s", "0.5:1.5:0.5"], capsys)
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == "s,beta,alpha,tau0,c0" and len(lines) == 4
    for row in lines[1:]:
        s, beta, alpha, tau0, c0 = map(float, row.split(","))
        assert alpha > 1 and 0 < tau0 < 1 / 3 and c0 < 1


def test_curves_c3_and_empty(capsys):
    code, out, _ = run(["curves", "--c3", "--beta", "0:0.02:0.01"], capsys)
    assert code == EXIT_OK and out.splitlines()[1:] == ["0,1", "0.01,1", "0.02,1"]
    code, out, _ = run(["curves", "--c3", "--beta", "0.3:0.1:0.01"], capsys)
    assert code == EXIT_OK and out == "beta,alpha\n"


def test_curves_needs_group(capsys):
    with pytest.raises(SystemExit) as err:
        main(["curves"])
    assert err.value.code == EXIT_ARGS


def test_winding(capsys):
    code, out, _ = run(["winding", "--tau", "0.2", "--c0", "1", "--eta", "auto"], capsys)
    assert code == EXIT_OK and out == "4\n"


def test_coeffs_c2(capsys):
    code, out, _ = run(["coeffs", "--curve", "c2", "--s", "1"], capsys)
    rep = json.loads(out)
    assert code == EXIT_OK and rep["psi10200_reading"]["verdict"] == "bd"
    assert rep["nf"]["q0"] < 0 and rep["nf"]["q1"] < 0


def test_verify_fredholm(capsys):
    code, out, _ = run(["verify", "--suite", "fredholm"], capsys)
    assert code == EXIT_OK and json.loads(out)["passed"]


def test_wave_residual_refine_round_trip(tmp_path, capsys):
    wave = tmp_path / "msw.csv"
    code, _, _ = run(["wave", "msw", "--s", "1", "--mu=-1e-3", "--N", "1024", "--L", "400", "--out", str(wave)], capsys)
    assert code == EXIT_OK
    side = json.loads(wave.with_suffix(".json").read_text())
    assert side["kind"] == "msw" and side["N"] == 1024

    code, out, _ = run(["residual", "--input", str(wave)], capsys)
    rep = json.loads(out)
    assert code == EXIT_OK and rep["accepted"] and rep["sup"] < 1e-3

    ref = tmp_path / "ref.csv"
    code, _, err = run(["refine", "--input", str(wave), "--out", str(ref)], capsys)
    assert code == EXIT_OK
    log = json.loads(ref.with_suffix(".log.json").read_text())
    assert log["final_residual"] < 1e-11 and json.loads(err) == log
    code, out, _ = run(["residual", "--input", str(ref)], capsys)
    assert json.loads(out)["sup"] < 1e-11


def test_csv_full_precision(capsys):
    code, out, _ = run(["wave", "msw", "--mu=-1e-3", "--N", "8", "--L", "40"], capsys)
    rows = [r.split(",") for r in out.strip().splitlines()[1:]]
    assert len(rows) == 8
    x = np.array([float(r[0]) for r in rows])
    assert np.array_equal(x, -20 + 40 * np.arange(8) / 8)


def test_validation_exit(capsys):
    code, _, err = run(["wave", "gsw", "--mu", "1e-2", "--kprime", "0.5"], capsys)
    assert code == EXIT_VALIDATION and "PersistenceViolation" in err
    code, _, err = run(["wave", "gsw", "--mu", "0.2"], capsys)
    assert code == EXIT_VALIDATION and "CeilingViolation" in err


def test_bad_arguments(capsys):
    code, _, _ = run(["wave", "msw", "--mu", "1e-3"], capsys)
    assert code == EXIT_ARGS
    with pytest.raises(SystemExit) as err:
        main(["wave", "gsw"])
    assert err.value.code == EXIT_ARGS
    with pytest.raises(SystemExit) as err:
        main(["nosuch"])
    assert err.value.code == EXIT_ARGS


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# overrides\nc0 = 1\n")
    code, out, _ = run(["--config", str(cfg), "winding", "--tau", "0.2", "--c0", "0.5"], capsys)
    assert code == EXIT_OK and out == "4\n"
    cfg.write_text(json.dumps({"nonsense": 1}))
    code, _, _ = run(["--config", str(cfg), "winding", "--tau", "0.2"], capsys)
    assert code == EXIT_ARGS


def test_run_config_round_trip():
    rc = RunConfig("wave", params={"mu": -1e-3, "s": 1.0}, grid={"N": 4096, "L": 400.0})
    assert RunConfig.from_json(rc.to_json()) == rc


def test_dumps_is_canonical():
    a = dumps({"b": 0.1, "a": [1, 2.5]})
    assert a == dumps({"a": [1, 2.5], "b": 0.1})
    assert json.loads(a)["b"] == 0.1


def test_console_script():
    out = subprocess.run(
        [sys.executable, "-m", "gcwhitham.cli", "curves", "--c4", "--beta", "0.4:0.5:0.1"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout == "beta,alpha\n0.40000000000000002,1\n0.5,1\n"
