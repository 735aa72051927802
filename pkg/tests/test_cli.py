import csv
import json

import pytest

from main import EXIT_FAIL, EXIT_INVALID, EXIT_PASS, main

ZERO_NAVIER = {"family": "navier", "s": 1.0, "p": 4, "N": 16, "T": 0.001, "dt": 0.0001}


def _config(tmp_path, payload) -> str:
    path = tmp_path / "run.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def _rows(path):
    with open(path, newline="", encoding="utf-8") as handle:
        return list(csv.reader(handle))


def test_lambda4_run_writes_every_format(tmp_path):
    out = tmp_path / "out"
    code = main(["lambda4", "--config", _config(tmp_path, {"lambda4": {"K": 5}}), "--out", str(out)])
    assert code == EXIT_PASS
    assert {"lambda4.csv", "lambda4.dat", "summary.json"} <= {p.name for p in out.iterdir()}
    rows = _rows(out / "lambda4.csv")
    assert rows[0][0] == "anchor"
    assert rows[1] == ["multiplicity", "buckets"]
    summary = json.loads((out / "summary.json").read_text(encoding="utf-8"))
    assert summary["status"] == "pass"
    assert summary["checks"] == {"multiplicity_at_most_3": True}
    assert summary["diagnostics"]["diagonal"] == 11


def test_first_csv_line_is_the_anchor(tmp_path):
    out = tmp_path / "out"
    main(["lambda4", "--config", _config(tmp_path, {"lambda4": {"K": 3}}), "--out", str(out)])
    first = (out / "lambda4.csv").read_text(encoding="utf-8").splitlines()[0]
    assert first.startswith("anchor,")


def test_zero_data_solve_passes(tmp_path):
    out = tmp_path / "out"
    code = main(["solve", "--config", _config(tmp_path, {"problem": ZERO_NAVIER}), "--out", str(out)])
    assert code == EXIT_PASS
    rows = _rows(out / "norms.csv")
    assert rows[1] == ["t", "l2", "hs"]
    assert all(float(row[1]) == 0.0 for row in rows[2:])
    traces = _rows(out / "traces.csv")
    assert "h1_recovered_re" in traces[1] and "h1_recovered_im" in traces[1]


def test_emit_selects_formats(tmp_path):
    out = tmp_path / "out"
    payload = {"lambda4": {"K": 3}, "emit": ["csv"]}
    assert main(["lambda4", "--config", _config(tmp_path, payload), "--out", str(out)]) == EXIT_PASS
    assert {p.name for p in out.iterdir()} == {"lambda4.csv"}


def test_constraint_violation_is_invalid_and_writes_nothing(tmp_path, capsys):
    out = tmp_path / "out"
    payload = {"problem": {"family": "dirichlet", "s": 1.2, "p": 4}}
    code = main(["solve", "--config", _config(tmp_path, payload), "--out", str(out)])
    assert code == EXIT_INVALID
    assert not out.exists()
    record = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert record["status"] == "invalid"
    assert record["context"]["constraint"] == "dirichlet:s>10/7"


def test_malformed_config_is_invalid(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{ not json", encoding="utf-8")
    out = tmp_path / "out"
    assert main(["lambda4", "--config", str(path), "--out", str(out)]) == EXIT_INVALID
    assert not out.exists()


def test_solver_error_writes_an_error_record(tmp_path):
    out = tmp_path / "out"
    problem = dict(ZERO_NAVIER, h1={"kind": "series", "terms": {"0": [1.0, 0.0]}})
    code = main(["solve", "--config", _config(tmp_path, {"problem": problem}), "--out", str(out)])
    assert code == EXIT_FAIL
    record = json.loads((out / "error.json").read_text(encoding="utf-8"))
    assert record["status"] == "error"
    assert record["error_type"] == "CompatibilityError"
    assert record["context"]["mode"] == "solve"


def test_failed_check_exits_with_one(tmp_path):
    out = tmp_path / "out"
    sweep = {"s_grid": [1.0], "ensemble": 8, "modes": 128, "tolerance": 0.001}
    code = main(["kato_sweep", "--config", _config(tmp_path, {"sweep": sweep}), "--out", str(out), "--seed", "7"])
    assert code == EXIT_FAIL
    summary = json.loads((out / "summary.json").read_text(encoding="utf-8"))
    assert summary["status"] == "fail"
    assert summary["checks"]["exponents_within_tolerance"] is False


def test_unknown_mode_is_rejected_by_the_parser(tmp_path):
    with pytest.raises(SystemExit) as info:
        main(["bogus", "--config", _config(tmp_path, {})])
    assert info.value.code == 2


@pytest.mark.slow
def test_default_optimality_run_passes(tmp_path):
    out = tmp_path / "out"
    assert main(["optimality", "--config", _config(tmp_path, {}), "--out", str(out)]) == EXIT_PASS
    assert (out / "ratios.csv").exists()
