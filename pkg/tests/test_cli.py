"""Command-line behaviour: exit codes, report schema, determinism and
format handling."""

import json

import pytest

from ewcontract.cli import (
    EXIT_CONFIG_ERROR,
    EXIT_OK,
    EXIT_SUITE_FAILURE,
    main,
)


def _load(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def test_verify_single_suite_passes(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["verify", "--suite", "algebra", "--seed", "42",
                 "--out", str(out)])
    assert code == EXIT_OK
    text = capsys.readouterr().out
    assert "suite algebra" in text and "pass" in text
    report = _load(out)
    assert report["schema_version"] == "1.0"
    assert report["seed"] == 42
    assert report["passed"] is True
    assert report["suites"]["algebra"]["passed"] is True


def test_verify_report_deterministic_modulo_timestamp(tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["verify", "--suite", "group", "--seed", "7"]
    assert main(argv + ["--out", str(out1)]) == EXIT_OK
    assert main(argv + ["--out", str(out2)]) == EXIT_OK
    r1, r2 = _load(out1), _load(out2)
    r1.pop("timestamp")
    r2.pop("timestamp")
    assert json.dumps(r1, sort_keys=True) == json.dumps(r2, sort_keys=True)


def test_verify_unknown_suite_is_config_error(capsys):
    assert main(["verify", "--suite", "nonsense"]) == EXIT_CONFIG_ERROR
    assert "unknown suite" in capsys.readouterr().err


def test_verify_empty_suite_list_is_config_error(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"suites": []}))
    assert main(["verify", "--config", str(cfg)]) == EXIT_CONFIG_ERROR
    assert "empty suite" in capsys.readouterr().err


def test_verify_failure_exit_code_with_impossible_tolerance(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"tolerances": {"group": 0.0},
                               "sample_counts": {"group": 5}}))
    out = tmp_path / "report.json"
    code = main(["verify", "--suite", "group", "--config", str(cfg),
                 "--out", str(out)])
    assert code == EXIT_SUITE_FAILURE
    # the report is still written on failure
    assert _load(out)["passed"] is False


def test_spectrum_table_and_json(tmp_path, capsys):
    out = tmp_path / "spectrum.json"
    code = main(["spectrum", "--g", "0.65", "--gp", "0.35", "--R", "0.5",
                 "--h-e", "2", "--out", str(out)])
    assert code == EXIT_OK
    text = capsys.readouterr().out
    assert "m_w" in text and "0.1625" in text
    report = _load(out)
    assert report["spectrum"]["m_w"] == pytest.approx(0.1625, abs=1e-10)
    assert report["spectrum"]["m_e"] == pytest.approx(1.0, abs=1e-10)


def test_spectrum_degenerate_hypercharge_coupling(capsys):
    assert main(["spectrum", "--gp", "0", "--g", "0.65", "--R", "0.5"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    mw = next(l for l in lines if l.startswith("m_w")).split()[1]
    mz = next(l for l in lines if l.startswith("m_z")).split()[1]
    assert mw == mz


def test_spectrum_rejects_nonpositive_couplings(capsys):
    assert main(["spectrum", "--g", "0"]) == EXIT_CONFIG_ERROR
    assert main(["spectrum", "--R", "-1"]) == EXIT_CONFIG_ERROR


def test_spectrum_csv_export(tmp_path, capsys):
    out = tmp_path / "spectrum.csv"
    code = main(["spectrum", "--format", "csv", "--out", str(out)])
    assert code == EXIT_OK
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "quantity,extracted,closed_form"
    assert lines[1].startswith("m_w,")


def test_expand_dumps_coefficients(tmp_path, capsys):
    out = tmp_path / "expand.json"
    code = main(["expand", "--n", "2", "--seed", "5", "--out", str(out)])
    assert code == EXIT_OK
    report = _load(out)
    coeffs = report["expansion"]["coefficients"]
    assert set(coeffs) == {"0", "1", "2"}
    assert report["expansion"]["residual"] <= 1e-10


def test_expand_order_above_limit_rejected(capsys):
    assert main(["expand", "--n", "7"]) == EXIT_CONFIG_ERROR


def test_expand_csv_not_supported(capsys):
    assert main(["expand", "--format", "csv"]) == EXIT_CONFIG_ERROR
    assert "spectrum table" in capsys.readouterr().err


def test_bad_mode_is_config_error(capsys):
    assert main(["verify", "--suite", "algebra", "--mode", "weird"]) \
        == EXIT_CONFIG_ERROR


def test_missing_config_file_is_config_error(capsys):
    assert main(["verify", "--config", "/nonexistent/cfg.json"]) \
        == EXIT_CONFIG_ERROR


def test_environment_variable_overrides_seed(tmp_path, monkeypatch):
    monkeypatch.setenv("EWCONTRACT_SEED", "99")
    out = tmp_path / "report.json"
    assert main(["verify", "--suite", "algebra", "--out", str(out)]) == EXIT_OK
    assert _load(out)["seed"] == 99
