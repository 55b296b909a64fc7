"""CLI: configuration ingestion, the five modes, exit codes, and the
report/CSV contracts."""

import json

from tnindex.cli import (EXIT_NUMERICAL, EXIT_OK, EXIT_PARSE,
                         EXIT_VALIDATION, main)


def write_config(tmp_path, payload, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


INDEX_CONFIG = {
    "mode": "index",
    "grav": "lemma",
    "route": "bernoulli",
    "instanton": {"channels": [
        {"lam": 1.3, "mcharge": 1.3, "chern": 0},
        {"lam": 0.3, "mcharge": 0.3, "chern": 1},
    ]},
    "quad": {"n_r": 64},
}


def test_index_mode_flat_channels(tmp_path, capsys):
    cfg = write_config(tmp_path, INDEX_CONFIG)
    out = tmp_path / "out"
    assert main(["--config", cfg, "--out", str(out)]) == EXIT_OK
    report = json.loads((out / "index_report.json").read_text())
    assert abs(report["bulk"]) < 1e-8
    assert report["schema"] == "index-report/1"
    assert report["grav_mode"] == "lemma"


def test_index_report_deterministic(tmp_path):
    cfg = write_config(tmp_path, INDEX_CONFIG)
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["--config", cfg, "--out", str(out1)]) == EXIT_OK
    assert main(["--config", cfg, "--out", str(out2)]) == EXIT_OK
    assert (out1 / "index_report.json").read_bytes() == \
        (out2 / "index_report.json").read_bytes()


def test_eta_mode_half_lambda(tmp_path):
    cfg = write_config(tmp_path, {"mode": "eta", "lambdas": [0.5],
                                  "route": "all"})
    out = tmp_path / "out"
    assert main(["--config", cfg, "--out", str(out)]) == EXIT_OK
    lines = (out / "eta_routes.csv").read_text().splitlines()
    assert lines[0] == "lambda,route,a0,a2coeff,integrated,error"
    assert len(lines) == 4
    for line in lines[1:]:
        assert abs(float(line.split(",")[2])) < 1e-6


def test_geometry_check_mode(tmp_path):
    out = tmp_path / "out"
    assert main(["--mode", "geometry-check", "--out", str(out)]) == EXIT_OK
    lines = (out / "geometry_check.csv").read_text().splitlines()
    assert lines[0] == "check,residual,bound,pass"
    assert all(line.endswith(",true") for line in lines[1:])


def test_pontryagin_mode_hits_target(tmp_path):
    cfg = write_config(tmp_path, {"mode": "pontryagin",
                                  "sweep": [64, 128]})
    out = tmp_path / "out"
    assert main(["--config", cfg, "--out", str(out)]) == EXIT_OK
    lines = (out / "pontryagin_convergence.csv").read_text().splitlines()
    final = float(lines[-1].split(",")[1])
    assert abs(final - 1.0 / 12.0) < 1e-3


def test_convergence_mode(tmp_path):
    cfg = write_config(tmp_path, {"mode": "convergence",
                                  "sweep": [32, 64, 128]})
    out = tmp_path / "out"
    assert main(["--config", cfg, "--out", str(out)]) == EXIT_OK
    lines = (out / "convergence_sweep.csv").read_text().splitlines()
    assert len(lines) == 4


def test_parse_error_exit_and_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["--config", str(bad), "--mode", "eta"]) == EXIT_PARSE
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "ParseError"


def test_validation_error_exit_and_json(capsys):
    assert main(["--mode", "index"]) == EXIT_VALIDATION
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "ValidationError"


def test_unknown_mode_rejected(tmp_path, capsys):
    cfg = write_config(tmp_path, {"mode": "frobnicate"})
    assert main(["--config", cfg]) == EXIT_VALIDATION


def test_numerical_failure_exit(tmp_path, capsys):
    # genericity violation surfaces as a numerical-domain failure (exit 1)
    cfg = write_config(tmp_path, {
        "mode": "index", "grav": "lemma",
        "instanton": {"channels": [{"lam": 1.0, "mcharge": 0.0}]},
        "quad": {"n_r": 64}})
    out = tmp_path / "out"
    assert main(["--config", cfg, "--out", str(out)]) == EXIT_NUMERICAL
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "GenericityError"


def test_threads_env_fallback_validation(monkeypatch, capsys):
    monkeypatch.setenv("TN_INDEX_THREADS", "zero")
    assert main(["--mode", "eta"]) == EXIT_VALIDATION
    monkeypatch.setenv("TN_INDEX_THREADS", "-3")
    assert main(["--mode", "eta"]) == EXIT_VALIDATION


def test_eta_report_round_trips(tmp_path):
    cfg = write_config(tmp_path, INDEX_CONFIG)
    out = tmp_path / "out"
    assert main(["--config", cfg, "--out", str(out)]) == EXIT_OK
    text = (out / "index_report.json").read_text()
    doc = json.loads(text)
    assert {"bulk", "grav", "eta_contribution", "index_value",
            "nearest_integer", "integrality_defect", "errors",
            "quadrature", "series", "route", "grav_mode",
            "schema"} <= set(doc)
