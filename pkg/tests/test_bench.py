import csv
import json

import numpy as np
import pytest

from kmeasure.bench import (
    CSV_COLUMNS,
    ExperimentConfig,
    ExperimentKind,
    HamiltonianSource,
    generate_imbalanced_tfim,
    run_experiment,
    strip_timing_columns,
)
from kmeasure.errors import ConfigError
from kmeasure.estimator import EstimationMode
from kmeasure.grouping import sorted_insertion_grouping
from kmeasure.shots import WeightingScheme


def tfim_source(n=4, periodic=True):
    return HamiltonianSource(model="tfim", n=n, j=1.0, h=1.0, periodic=periodic)


def test_imbalanced_instance_properties():
    h = generate_imbalanced_tfim(6)
    coeffs = sorted(abs(c) for c in h.coefficients)
    assert coeffs[-1] / coeffs[0] >= 1e3
    grouping = sorted_insertion_grouping(h, 6)
    assert len(grouping.groups) == 2


def test_source_requires_exactly_one_origin(tmp_path):
    with pytest.raises(ConfigError):
        HamiltonianSource().load()
    with pytest.raises(ConfigError):
        HamiltonianSource(path="x", model="tfim", n=4).load()


def test_source_loads_file(tmp_path):
    path = tmp_path / "ham.txt"
    path.write_text("2\n0.5 XX\n-1.0 ZI\n")
    name, h = HamiltonianSource(path=str(path)).load()
    assert name == "ham.txt" and len(h.terms) == 2


def test_source_unknown_model():
    with pytest.raises(ConfigError, match="tfim"):
        HamiltonianSource(model="ising", n=4).load()


def test_config_rejects_bad_k():
    cfg = ExperimentConfig(
        kind=ExperimentKind.K_SWEEP, source=tfim_source(), k_list=(0,)
    )
    with pytest.raises(ConfigError, match="k="):
        run_experiment(cfg, persist=False)


def test_config_rejects_unsorted_shot_sweep():
    cfg = ExperimentConfig(
        kind=ExperimentKind.SHOT_SWEEP,
        source=tfim_source(),
        shot_list=(4000, 1000),
        repetitions=2,
    )
    with pytest.raises(ConfigError):
        run_experiment(cfg, persist=False)


def test_k_sweep_group_counts_and_rows(tmp_path):
    cfg = ExperimentConfig(
        kind=ExperimentKind.K_SWEEP,
        source=HamiltonianSource(model="tfim", n=12, j=1.0, h=1.0, periodic=True),
        k_list=(1, 6, 12),
        shot_list=(2000,),
        repetitions=2,
        seed=9,
        out_dir=str(tmp_path),
    )
    result = run_experiment(cfg)
    assert len(result.records) == 6
    by_k = {p["k"]: p for p in result.summary["points"]}
    assert by_k[12]["group_count"] == 2
    assert result.csv_path.exists() and result.summary_path.exists()
    with open(result.csv_path) as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == CSV_COLUMNS
    assert len(rows) == 7


def test_single_term_exact_mode_zero_error():
    path_free = HamiltonianSource(model="tfim", n=3, j=1.0, h=0.0, periodic=False)
    cfg = ExperimentConfig(
        kind=ExperimentKind.K_SWEEP,
        source=path_free,
        k_list=(3,),
        repetitions=2,
        mode=EstimationMode.EXACT_PROBABILITY,
    )
    result = run_experiment(cfg, persist=False)
    for rec in result.records:
        assert rec.diff == pytest.approx(0.0, abs=1e-9)
    assert result.summary["points"][0]["error_stddev"] == pytest.approx(0.0, abs=1e-9)


def test_rows_satisfy_diff_identity(tmp_path):
    cfg = ExperimentConfig(
        kind=ExperimentKind.SCHEME_COMPARE,
        source=tfim_source(),
        scheme_list=(WeightingScheme.UNIFORM, WeightingScheme.MEAN),
        shot_list=(500,),
        repetitions=3,
        seed=2,
        out_dir=str(tmp_path),
    )
    result = run_experiment(cfg)
    assert "winner" in result.summary
    for rec in result.records:
        assert rec.diff == pytest.approx(rec.estimate - rec.exact, abs=1e-12)


def test_scheme_compare_fixes_k_to_n():
    cfg = ExperimentConfig(
        kind=ExperimentKind.SCHEME_COMPARE,
        source=tfim_source(n=5),
        scheme_list=(WeightingScheme.MEAN,),
        shot_list=(300,),
        repetitions=2,
    )
    result = run_experiment(cfg, persist=False)
    assert all(rec.k == 5 for rec in result.records)


def test_shot_sweep_crossover_table():
    cfg = ExperimentConfig(
        kind=ExperimentKind.SHOT_SWEEP,
        source=tfim_source(n=4),
        scheme_list=(WeightingScheme.UNIFORM, WeightingScheme.MEAN),
        shot_list=(250, 1000, 4000),
        repetitions=8,
        seed=1,
    )
    result = run_experiment(cfg, persist=False)
    cross = result.summary["crossover"]
    assert cross["baseline_scheme"] == "uniform"
    assert cross["baseline_budget"] == 4000
    assert cross["shots_to_reach_target"]["uniform"] <= 4000
    assert len(result.records) == 2 * 3 * 8


def test_shot_sweep_single_budget_no_crossover():
    cfg = ExperimentConfig(
        kind=ExperimentKind.SHOT_SWEEP,
        source=tfim_source(n=4),
        scheme_list=(WeightingScheme.UNIFORM,),
        shot_list=(500,),
        repetitions=2,
    )
    result = run_experiment(cfg, persist=False)
    assert "crossover" not in result.summary


def test_trotter_evolve_exact_column_and_error():
    cfg = ExperimentConfig(
        kind=ExperimentKind.TROTTER_EVOLVE,
        source=tfim_source(n=4),
        shot_list=(1000,),
        repetitions=2,
        trotter_time=0.1,
        trotter_steps=1,
        seed=0,
    )
    result = run_experiment(cfg, persist=False)
    point = result.summary["points"][0]
    assert point["exact_evolved_expectation"] is not None
    assert point["trotter_only_error"] > 1e-6
    assert all(rec.exact is not None for rec in result.records)


def test_trotter_evolve_t_zero_matches_neel_energy():
    cfg = ExperimentConfig(
        kind=ExperimentKind.TROTTER_EVOLVE,
        source=tfim_source(n=4),
        repetitions=2,
        trotter_time=0.0,
        trotter_steps=1,
        mode=EstimationMode.EXACT_PROBABILITY,
    )
    result = run_experiment(cfg, persist=False)
    point = result.summary["points"][0]
    assert point["trotter_only_error"] == pytest.approx(0.0, abs=1e-9)


def test_trotter_evolve_large_n_omits_exact():
    cfg = ExperimentConfig(
        kind=ExperimentKind.TROTTER_EVOLVE,
        source=HamiltonianSource(model="tfim", n=11, j=1.0, h=1.0, periodic=True),
        shot_list=(100,),
        repetitions=1,
        seed=0,
    )
    result = run_experiment(cfg, persist=False)
    assert "warning" in result.summary
    assert result.records[0].exact is None
    assert result.records[0].diff is None


def test_rerun_is_byte_identical_outside_timing(tmp_path):
    outputs = []
    for run in range(2):
        cfg = ExperimentConfig(
            kind=ExperimentKind.SCHEME_COMPARE,
            source=tfim_source(n=4),
            scheme_list=(WeightingScheme.UNIFORM, WeightingScheme.MEAN_SQ),
            shot_list=(400,),
            repetitions=3,
            seed=33,
            out_dir=str(tmp_path / f"run{run}"),
        )
        result = run_experiment(cfg)
        outputs.append(
            (
                strip_timing_columns(result.csv_path.read_text()),
                result.summary_path.read_bytes(),
            )
        )
    assert outputs[0][0] == outputs[1][0]
    assert outputs[0][1] == outputs[1][1]
