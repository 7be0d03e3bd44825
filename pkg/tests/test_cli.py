"""End-to-end command-line tests: subcommands, outputs, and exit codes.

Everything runs in process through :func:`mfes.cli.main` so exit codes and
printed output can be asserted without subprocess overhead. Campaign-running
tests use a shrunken benchmark config written to a temp file.
"""

import numpy as np
import pytest
import yaml
from conftest import tiny_bench_config

from mfes import REAL, ModelFitError, config_to_dict, load_result_json, make_objective
from mfes.cli import EXIT_CONFIG, EXIT_IO, EXIT_MODEL_FIT, EXIT_OK, main
from mfes.fixtures import shipped_golden_path


def write_tiny_config(tmp_path, **term_overrides):
    cfg = tiny_bench_config(**term_overrides)
    path = tmp_path / "tiny.yaml"
    path.write_text(yaml.safe_dump(config_to_dict(cfg)))
    return path


# ---------------------------------------------------------------------------
# optimize / baseline-random


def test_optimize_writes_result_and_records(tmp_path):
    cfg_path = write_tiny_config(tmp_path)
    out = tmp_path / "run"
    code = main(["optimize", "--config", str(cfg_path), "--out", str(out)])
    assert code == EXIT_OK
    assert (out / "result.json").exists()
    assert (out / "records.csv").exists()
    result = load_result_json(out / "result.json")
    assert 0.0 <= result.x_opt[0] <= 1.0
    assert len(result.records) >= 4


def test_optimize_seed_override(tmp_path):
    cfg_path = write_tiny_config(tmp_path)
    out = tmp_path / "run"
    assert main(["optimize", "--config", str(cfg_path), "--seed", "7", "--out", str(out)]) == EXIT_OK
    result = load_result_json(out / "result.json")
    assert result.config.master_seed == 7


def test_baseline_outputs_coexist_with_optimize(tmp_path):
    # Both commands write into the same directory under different names so a
    # paired comparison needs only one --out.
    cfg_path = write_tiny_config(tmp_path)
    out = tmp_path / "run"
    assert main(["optimize", "--config", str(cfg_path), "--out", str(out)]) == EXIT_OK
    code = main(["baseline-random", "--config", str(cfg_path), "--budget", "3", "--out", str(out)])
    assert code == EXIT_OK
    assert {p.name for p in out.iterdir()} == {
        "result.json",
        "records.csv",
        "baseline_result.json",
        "baseline_records.csv",
    }
    baseline = load_result_json(out / "baseline_result.json")
    assert baseline.n_real == 3 and baseline.n_sim == 0


# ---------------------------------------------------------------------------
# evaluate


def test_evaluate_matches_direct_call(capsys):
    code = main(["evaluate", "--x", "18,2", "--scenario", "ankle2d", "--seed", "3"])
    assert code == EXIT_OK
    lines = dict(line.split(": ") for line in capsys.readouterr().out.strip().split("\n"))
    cb = make_objective("ankle2d").evaluate(np.array([18.0, 2.0]), REAL, 3)
    assert lines["fidelity"] == "real"
    assert lines["total"] == f"{cb.total:.15g}"
    assert lines["stability"] == f"{cb.stability:.15g}"
    assert lines["penalty"] == f"{cb.penalty:.15g}"
    assert lines["fell"] == "false"


def test_evaluate_sim_fidelity(capsys):
    assert main(["evaluate", "--x", "0.5", "--scenario", "bench1d", "--fidelity", "sim"]) == EXIT_OK
    lines = dict(line.split(": ") for line in capsys.readouterr().out.strip().split("\n"))
    assert lines["fidelity"] == "sim"


def test_evaluate_uses_config_scenario(tmp_path, capsys):
    cfg_path = write_tiny_config(tmp_path)
    code = main(["evaluate", "--x", "0.25", "--config", str(cfg_path)])
    assert code == EXIT_OK
    assert "total: " in capsys.readouterr().out


def test_evaluate_rejects_non_numeric_x(capsys):
    assert main(["evaluate", "--x", "1,abc"]) == EXIT_CONFIG
    assert "error:" in capsys.readouterr().err


def test_evaluate_rejects_wrong_dimension(capsys):
    assert main(["evaluate", "--x", "1,2,3", "--scenario", "ankle2d"]) == EXIT_CONFIG


# ---------------------------------------------------------------------------
# export


def test_export_after_optimize(tmp_path):
    cfg_path = write_tiny_config(tmp_path)
    out = tmp_path / "run"
    main(["optimize", "--config", str(cfg_path), "--out", str(out)])
    dest = tmp_path / "trace.csv"
    code = main(["export", "--result", str(out / "result.json"), "--format", "entropy_trace", "--out", str(dest)])
    assert code == EXIT_OK
    header = dest.read_text().split("\n")[0]
    assert header == "iteration,raw_dh,filtered_dh"


def test_export_missing_result_is_io_error(tmp_path, capsys):
    code = main(["export", "--result", str(tmp_path / "nope.json"), "--format", "records"])
    assert code == EXIT_IO


def test_export_rejects_unknown_format(tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["export", "--result", str(tmp_path / "r.json"), "--format", "sculpture"])
    assert exc.value.code == 2


# ---------------------------------------------------------------------------
# fixtures


def test_fixtures_regenerate_reproduces_shipped_file(tmp_path, capsys):
    dest = tmp_path / "golden.csv"
    assert main(["fixtures", "regenerate", "--out", str(dest)]) == EXIT_OK
    assert dest.read_bytes() == shipped_golden_path().read_bytes()
    assert "30 fixture rows" in capsys.readouterr().out


# ---------------------------------------------------------------------------
# exit codes


def test_missing_config_file_exits_config(capsys):
    assert main(["optimize", "--config", "/no/such/file.yaml"]) == EXIT_CONFIG
    assert "error:" in capsys.readouterr().err


def test_unknown_config_key_exits_config(tmp_path, capsys):
    cfg_path = write_tiny_config(tmp_path)
    raw = yaml.safe_load(cfg_path.read_text())
    raw["verbosity"] = 3
    cfg_path.write_text(yaml.safe_dump(raw))
    assert main(["optimize", "--config", str(cfg_path)]) == EXIT_CONFIG
    assert "verbosity" in capsys.readouterr().err


def test_malformed_yaml_exits_config(tmp_path):
    cfg_path = tmp_path / "bad.yaml"
    cfg_path.write_text("scenario: [unclosed\n")
    assert main(["optimize", "--config", str(cfg_path)]) == EXIT_CONFIG


def test_unwritable_output_dir_exits_io(capsys):
    # /proc rejects mkdir; the failure surfaces before any campaign work.
    assert main(["optimize", "--config", "bench1d", "--out", "/proc/mfes_cli_test"]) == EXIT_IO
    assert "error:" in capsys.readouterr().err


def test_model_fit_failure_exits_model_fit(tmp_path, monkeypatch, capsys):
    # A genuinely unfactorizable Gram matrix is impractical to provoke through
    # a valid config, so the campaign entry point is stubbed instead.
    def boom(cfg):
        raise ModelFitError("synthetic failure")

    monkeypatch.setattr("mfes.cli.run_mfes", boom)
    cfg_path = write_tiny_config(tmp_path)
    assert main(["optimize", "--config", str(cfg_path)]) == EXIT_MODEL_FIT
    assert "model fit failed" in capsys.readouterr().err


def test_unknown_subcommand_exits_usage():
    with pytest.raises(SystemExit) as exc:
        main(["discombobulate"])
    assert exc.value.code == 2
