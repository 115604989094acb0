import json

import pytest

from kmeasure.cli import main


def run_cli(args, capsys):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_estimate_exact_mode_model(capsys):
    code, out, _ = run_cli(
        [
            "estimate",
            "--model", "tfim", "--n", "4", "--periodic",
            "--k", "4", "--mode", "exact",
        ],
        capsys,
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["value"] == pytest.approx(payload["exact_expectation"], abs=1e-9)
    assert payload["groups"] == 2


def test_estimate_from_file(tmp_path, capsys):
    path = tmp_path / "h.txt"
    path.write_text("2\n1.0 ZI\n")
    code, out, _ = run_cli(
        ["estimate", "--hamiltonian", str(path), "--mode", "exact"], capsys
    )
    assert code == 0
    # Neel prep on 2 qubits is |01>; Z on qubit 0 still reads +1.
    assert json.loads(out)["value"] == pytest.approx(1.0)


def test_estimate_trotter_reports_evolved_reference(capsys):
    code, out, _ = run_cli(
        [
            "estimate",
            "--model", "tfim", "--n", "4", "--periodic",
            "--time", "0.1", "--trotter-steps", "2",
            "--mode", "exact", "--seed", "5",
        ],
        capsys,
    )
    assert code == 0
    payload = json.loads(out)
    assert "exact_evolved_expectation" in payload
    assert abs(payload["value"] - payload["exact_evolved_expectation"]) < 0.1


def test_config_file_with_flag_override(tmp_path, capsys):
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({"model": "tfim", "n": 4, "periodic": True, "mode": "exact", "k": [2]}))
    code, out, _ = run_cli(
        ["estimate", "--config", str(config), "--k", "4"], capsys
    )
    assert code == 0
    assert json.loads(out)["groups"] == 2


def test_missing_source_is_config_error(capsys):
    code, _, err = run_cli(["estimate", "--k", "2"], capsys)
    assert code == 2
    assert "config error" in err


def test_unknown_scheme_lists_valid_names(capsys):
    code, _, err = run_cli(
        ["estimate", "--model", "tfim", "--n", "4", "--scheme", "median"], capsys
    )
    assert code == 2
    for name in ("uniform", "max", "max_sq", "mean", "mean_sq"):
        assert name in err


def test_unreadable_hamiltonian_file(capsys):
    code, _, err = run_cli(["estimate", "--hamiltonian", "/nonexistent/x.txt"], capsys)
    assert code == 2


def test_bench_writes_outputs(tmp_path, capsys):
    code, out, _ = run_cli(
        [
            "bench", "k_sweep",
            "--model", "tfim", "--n", "6", "--periodic",
            "--k", "1,3,6", "--shots", "600", "--reps", "2",
            "--seed", "4", "--out", str(tmp_path),
        ],
        capsys,
    )
    assert code == 0
    assert (tmp_path / "k_sweep.csv").exists()
    assert (tmp_path / "k_sweep_summary.json").exists()
    summary = json.loads((tmp_path / "k_sweep_summary.json").read_text())
    assert len(summary["points"]) == 3


def test_bench_rejects_bad_k(capsys):
    code, _, err = run_cli(
        ["bench", "k_sweep", "--model", "tfim", "--n", "4", "--k", "0"], capsys
    )
    assert code == 2


def test_bench_unknown_experiment_exits_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bench", "nope", "--model", "tfim", "--n", "4"])
    assert exc.value.code == 2


def test_runtime_error_exits_three(tmp_path, capsys):
    # Budget below group count surfaces as a runtime failure, not config.
    code, _, err = run_cli(
        [
            "estimate",
            "--model", "tfim", "--n", "4",
            "--k", "1", "--shots", "1",
        ],
        capsys,
    )
    assert code == 3
    assert "error" in err
