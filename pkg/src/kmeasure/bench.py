"""Benchmark experiments: configuration, runners, and metrics persistence.

Every experiment expands into one CSV row per (sweep point, repetition)
plus a JSON summary of per-point aggregates.  Reruns with the same
config and seed reproduce the CSV byte-for-byte except for the trailing
wall-time columns; the JSON summary carries no timings at all.
"""

from __future__ import annotations

import csv
import enum
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import BudgetTooSmallError, ConfigError
from .estimator import EstimationConfig, EstimationMode, estimate
from .grouping import sorted_insertion_grouping
from .oracle import MAX_EVOLVE_QUBITS, exact_evolve, exact_expectation
from .pauli import (
    Hamiltonian,
    PauliString,
    build_hamiltonian,
    generate_heisenberg,
    generate_tfim,
    parse_hamiltonian,
)
from .shots import WeightingScheme, group_statistic
from .simulator import Circuit, apply, build_neel, build_random_ansatz, build_trotter, zero_state

# Ansatz depth used for random preparation states throughout the harness.
ANSATZ_LAYERS = 2

# Bumped whenever CSV_COLUMNS or the summary layout changes shape.
SCHEMA_VERSION = 1

CSV_COLUMNS = [
    "experiment",
    "model",
    "n",
    "terms",
    "k",
    "scheme",
    "shots_budget",
    "shots_realized",
    "groups",
    "circuits",
    "max_meas_depth",
    "rep",
    "seed",
    "estimate",
    "exact",
    "diff",
    "fallback_used",
    "t_group_ms",
    "t_diag_ms",
    "t_alloc_ms",
    "t_exec_ms",
    "t_total_ms",
]

# Columns excluded from determinism comparisons.
TIMING_COLUMNS = ["t_group_ms", "t_diag_ms", "t_alloc_ms", "t_exec_ms", "t_total_ms"]


class ExperimentKind(enum.Enum):
    K_SWEEP = "k_sweep"
    SCHEME_COMPARE = "scheme_compare"
    SHOT_SWEEP = "shot_sweep"
    TROTTER_EVOLVE = "trotter_evolve"

    @classmethod
    def from_name(cls, name: str) -> "ExperimentKind":
        for kind in cls:
            if kind.value == name:
                return kind
        valid = ", ".join(k.value for k in cls)
        raise ConfigError(f"unknown experiment {name!r}; valid kinds: {valid}")


def generate_imbalanced_tfim(n: int, periodic: bool = True) -> Hamiltonian:
    """TFIM with j=1, h=1e-2 plus a lone Z on qubit 0 with coefficient 10.

    The variant exists to give weighted allocation something to bite on:
    its coefficients span three orders of magnitude and the extreme
    groups' mean statistics differ by well over 10x, which is asserted
    here at generation time.
    """
    base = generate_tfim(n, 1.0, 1e-2, periodic)
    raw = [(t.coeff, t.pauli) for t in base.terms]
    raw.append((10.0, PauliString(n, 0, 1)))
    h_out = build_hamiltonian(n, raw)

    coeffs = [abs(c) for c in h_out.coefficients]
    if max(coeffs) / min(coeffs) < 1e3:
        raise AssertionError("imbalanced variant lost its coefficient spread")
    grouping = sorted_insertion_grouping(h_out, n)
    stats = [
        group_statistic([h_out.terms[i].coeff for i in g.members], WeightingScheme.MEAN)
        for g in grouping.groups
    ]
    if max(stats) / min(stats) < 10.0:
        raise AssertionError("imbalanced variant group statistics are not >= 10x apart")
    return h_out


_MODEL_BUILDERS = {
    "tfim": generate_tfim,
    "heisenberg": generate_heisenberg,
}


@dataclass(frozen=True)
class HamiltonianSource:
    """Either a text file path or a built-in model with parameters."""

    path: Optional[str] = None
    model: Optional[str] = None
    n: Optional[int] = None
    j: float = 1.0
    h: float = 1.0
    periodic: bool = False

    def load(self) -> tuple[str, Hamiltonian]:
        """Returns (model label, Hamiltonian)."""
        if (self.path is None) == (self.model is None):
            raise ConfigError("exactly one of hamiltonian path or model must be given")
        if self.path is not None:
            try:
                text = Path(self.path).read_text(encoding="utf-8")
            except OSError as exc:
                raise ConfigError(f"cannot read hamiltonian file: {exc}")
            return Path(self.path).name, parse_hamiltonian(text)
        if self.n is None:
            raise ConfigError("model source requires n")
        if self.model == "tfim_imbalanced":
            return self.model, generate_imbalanced_tfim(self.n, self.periodic)
        builder = _MODEL_BUILDERS.get(self.model)
        if builder is None:
            valid = ", ".join(sorted(_MODEL_BUILDERS) + ["tfim_imbalanced"])
            raise ConfigError(f"unknown model {self.model!r}; valid models: {valid}")
        return self.model, builder(self.n, self.j, self.h, self.periodic)


@dataclass(frozen=True)
class ExperimentConfig:
    kind: ExperimentKind
    source: HamiltonianSource
    k_list: tuple[int, ...] = ()
    scheme_list: tuple[WeightingScheme, ...] = (WeightingScheme.UNIFORM,)
    shot_list: tuple[int, ...] = (4000,)
    repetitions: int = 100
    trotter_time: float = 0.1
    trotter_steps: int = 1
    seed: int = 0
    mode: EstimationMode = EstimationMode.SAMPLED
    bin_fraction: Optional[float] = None
    out_dir: str = "bench_out"

    def validate(self, n: int) -> None:
        if self.repetitions < 1:
            raise ConfigError(f"repetitions must be >= 1, got {self.repetitions}")
        if self.kind is ExperimentKind.K_SWEEP and not self.k_list:
            raise ConfigError("k_sweep requires a non-empty k list")
        for k in self.k_list:
            if not 1 <= k <= n:
                raise ConfigError(f"k={k} outside [1, {n}]")
        if not self.scheme_list:
            raise ConfigError("scheme list must be non-empty")
        if not self.shot_list:
            raise ConfigError("shot list must be non-empty")
        if any(s < 1 for s in self.shot_list):
            raise ConfigError(f"shot budgets must be positive, got {self.shot_list}")
        if self.kind is ExperimentKind.SHOT_SWEEP and list(self.shot_list) != sorted(
            self.shot_list
        ):
            raise ConfigError("shot_sweep requires an ascending shot list")
        if self.trotter_steps < 1:
            raise ConfigError(f"trotter_steps must be >= 1, got {self.trotter_steps}")
        if self.bin_fraction is not None and not 0 < self.bin_fraction <= 1:
            raise ConfigError(f"bin_fraction must be in (0, 1], got {self.bin_fraction}")


@dataclass
class MetricsRecord:
    """One CSV row; field order matches CSV_COLUMNS."""

    experiment: str
    model: str
    n: int
    terms: int
    k: int
    scheme: str
    shots_budget: int
    shots_realized: int
    groups: int
    circuits: int
    max_meas_depth: int
    rep: int
    seed: int
    estimate: float
    exact: Optional[float]
    diff: Optional[float]
    fallback_used: bool
    t_group_ms: float
    t_diag_ms: float
    t_alloc_ms: float
    t_exec_ms: float
    t_total_ms: float

    def row(self) -> list[str]:
        def fmt(v):
            if v is None:
                return ""
            if isinstance(v, bool):
                return "1" if v else "0"
            if isinstance(v, float):
                return repr(v)
            return str(v)

        return [fmt(getattr(self, col)) for col in CSV_COLUMNS]


@dataclass
class ExperimentResult:
    records: list[MetricsRecord]
    summary: dict
    csv_path: Optional[Path] = None
    summary_path: Optional[Path] = None


def _record_point(
    *,
    experiment: str,
    model: str,
    h: Hamiltonian,
    k: int,
    scheme: WeightingScheme,
    budget: int,
    rep: int,
    cfg: EstimationConfig,
    prep: Circuit,
    exact: Optional[float],
) -> MetricsRecord:
    report = estimate(h, prep, cfg)
    return MetricsRecord(
        experiment=experiment,
        model=model,
        n=h.n,
        terms=len(h.terms),
        k=k,
        scheme=scheme.value,
        shots_budget=budget,
        shots_realized=report.shots_realized,
        groups=report.groups,
        circuits=report.circuits_executed,
        max_meas_depth=report.max_measurement_depth,
        rep=rep,
        seed=cfg.seed,
        estimate=report.value,
        exact=exact,
        diff=None if exact is None else report.value - exact,
        fallback_used=report.fallback_synthesis_used,
        t_group_ms=report.timings.group_ms,
        t_diag_ms=report.timings.diagonalize_ms,
        t_alloc_ms=report.timings.allocate_ms,
        t_exec_ms=report.timings.execute_ms,
        t_total_ms=report.timings.total_ms,
    )


def _ansatz_sweep_records(
    h: Hamiltonian,
    model: str,
    experiment: str,
    points: list[tuple[int, WeightingScheme, int]],
    cfg: ExperimentConfig,
) -> tuple[list[MetricsRecord], dict]:
    """Shared runner: ansatz repetitions for each (k, scheme, budget) point."""
    records = []
    summary_points = []
    coeff_norm = sum(abs(c) for c in h.coefficients)
    for k, scheme, budget in points:
        diffs = []
        point_records = []
        for rep in range(cfg.repetitions):
            seed = cfg.seed + rep
            prep = build_random_ansatz(h.n, ANSATZ_LAYERS, seed)
            exact = exact_expectation(h, apply(zero_state(h.n), prep))
            est_cfg = EstimationConfig(
                k=k,
                scheme=scheme,
                total_shots=budget,
                bin_fraction=cfg.bin_fraction,
                mode=cfg.mode,
                seed=seed,
            )
            try:
                rec = _record_point(
                    experiment=experiment,
                    model=model,
                    h=h,
                    k=k,
                    scheme=scheme,
                    budget=budget,
                    rep=rep,
                    cfg=est_cfg,
                    prep=prep,
                    exact=exact,
                )
            except BudgetTooSmallError as exc:
                raise BudgetTooSmallError(
                    f"point (k={k}, scheme={scheme.value}, shots={budget}): {exc}"
                ) from exc
            diffs.append(rec.diff)
            point_records.append(rec)
        records.extend(point_records)
        spread = float(np.std(diffs))
        summary_points.append(
            {
                "k": k,
                "scheme": scheme.value,
                "shots_budget": budget,
                "groups": point_records[0].groups,
                "error_stddev": spread,
                "error_stddev_relative": spread / coeff_norm,
                "error_bias": float(np.mean(diffs)),
            }
        )
    return records, {"schema_version": SCHEMA_VERSION, "points": summary_points}


def run_k_sweep(cfg: ExperimentConfig) -> ExperimentResult:
    model, h = cfg.source.load()
    cfg.validate(h.n)
    scheme = cfg.scheme_list[0]
    budget = cfg.shot_list[0]
    points = [(k, scheme, budget) for k in cfg.k_list]
    records, summary = _ansatz_sweep_records(h, model, "k_sweep", points, cfg)
    for point in summary["points"]:
        point["group_count"] = point.pop("groups")
        grouping = sorted_insertion_grouping(h, point["k"])
        point["group_sizes"] = list(grouping.sizes())
        point["group_members"] = [list(g.members) for g in grouping.groups]
    return ExperimentResult(records, summary)


def run_scheme_compare(cfg: ExperimentConfig) -> ExperimentResult:
    model, h = cfg.source.load()
    cfg.validate(h.n)
    budget = cfg.shot_list[0]
    points = [(h.n, scheme, budget) for scheme in cfg.scheme_list]
    records, summary = _ansatz_sweep_records(h, model, "scheme_compare", points, cfg)
    best = min(summary["points"], key=lambda p: p["error_stddev"])
    summary["winner"] = best["scheme"]
    return ExperimentResult(records, summary)


def run_shot_sweep(cfg: ExperimentConfig) -> ExperimentResult:
    model, h = cfg.source.load()
    cfg.validate(h.n)
    points = [
        (h.n, scheme, budget) for scheme in cfg.scheme_list for budget in cfg.shot_list
    ]
    records, summary = _ansatz_sweep_records(h, model, "shot_sweep", points, cfg)

    # Crossover: smallest budget at which each scheme reaches the error of
    # the baseline scheme (uniform when present) at the largest budget.
    if len(cfg.shot_list) > 1:
        baseline = (
            WeightingScheme.UNIFORM
            if WeightingScheme.UNIFORM in cfg.scheme_list
            else cfg.scheme_list[0]
        )
        top_budget = max(cfg.shot_list)
        target = next(
            p["error_stddev"]
            for p in summary["points"]
            if p["scheme"] == baseline.value and p["shots_budget"] == top_budget
        )
        crossover = {}
        for scheme in cfg.scheme_list:
            reached = [
                p["shots_budget"]
                for p in summary["points"]
                if p["scheme"] == scheme.value and p["error_stddev"] <= target
            ]
            crossover[scheme.value] = min(reached) if reached else None
        summary["crossover"] = {
            "baseline_scheme": baseline.value,
            "baseline_budget": top_budget,
            "target_error_stddev": target,
            "shots_to_reach_target": crossover,
        }
    return ExperimentResult(records, summary)


def run_trotter_evolve(cfg: ExperimentConfig) -> ExperimentResult:
    model, h = cfg.source.load()
    cfg.validate(h.n)
    scheme = cfg.scheme_list[0]
    budget = cfg.shot_list[0]
    k = cfg.k_list[0] if cfg.k_list else h.n

    prep = build_neel(h.n)
    trotter = build_trotter(h, cfg.trotter_time, cfg.trotter_steps)
    full_prep = Circuit(h.n, prep.gates + trotter.gates, trotter.global_phase)

    exact = None
    warning = None
    if h.n <= MAX_EVOLVE_QUBITS:
        evolved = exact_evolve(h, apply(zero_state(h.n), prep), cfg.trotter_time)
        exact = exact_expectation(h, evolved)
    else:
        warning = (
            f"exact evolution skipped: {h.n} qubits exceed the "
            f"{MAX_EVOLVE_QUBITS}-qubit oracle limit"
        )

    # Trotter-only error: exact-probability estimate of the Trotterized
    # state against the exactly evolved state.
    exact_mode_cfg = EstimationConfig(
        k=k, scheme=scheme, total_shots=budget, mode=EstimationMode.EXACT_PROBABILITY,
        seed=cfg.seed,
    )
    exact_mode_value = estimate(h, full_prep, exact_mode_cfg).value
    trotter_error = None if exact is None else abs(exact_mode_value - exact)

    records = []
    for rep in range(cfg.repetitions):
        est_cfg = EstimationConfig(
            k=k,
            scheme=scheme,
            total_shots=budget,
            bin_fraction=cfg.bin_fraction,
            mode=cfg.mode,
            seed=cfg.seed + rep,
        )
        records.append(
            _record_point(
                experiment="trotter_evolve",
                model=model,
                h=h,
                k=k,
                scheme=scheme,
                budget=budget,
                rep=rep,
                cfg=est_cfg,
                prep=full_prep,
                exact=exact,
            )
        )
    summary = {
        "schema_version": SCHEMA_VERSION,
        "points": [
            {
                "n": h.n,
                "k": k,
                "scheme": scheme.value,
                "shots_budget": budget,
                "trotter_time": cfg.trotter_time,
                "trotter_steps": cfg.trotter_steps,
                "exact_evolved_expectation": exact,
                "exact_probability_estimate": exact_mode_value,
                "trotter_only_error": trotter_error,
            }
        ],
    }
    if warning is not None:
        summary["warning"] = warning
    return ExperimentResult(records, summary)


_RUNNERS = {
    ExperimentKind.K_SWEEP: run_k_sweep,
    ExperimentKind.SCHEME_COMPARE: run_scheme_compare,
    ExperimentKind.SHOT_SWEEP: run_shot_sweep,
    ExperimentKind.TROTTER_EVOLVE: run_trotter_evolve,
}


def run_experiment(cfg: ExperimentConfig, persist: bool = True) -> ExperimentResult:
    result = _RUNNERS[cfg.kind](cfg)
    if persist:
        out = Path(cfg.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        result.csv_path = out / f"{cfg.kind.value}.csv"
        result.summary_path = out / f"{cfg.kind.value}_summary.json"
        write_csv(result.records, result.csv_path)
        result.summary_path.write_text(
            json.dumps(result.summary, indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
    return result


def write_csv(records: list[MetricsRecord], path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for rec in records:
            writer.writerow(rec.row())


def strip_timing_columns(csv_text: str) -> str:
    """Drop the wall-time columns; used by determinism comparisons."""
    rows = list(csv.reader(csv_text.splitlines()))
    keep = [i for i, col in enumerate(CSV_COLUMNS) if col not in TIMING_COLUMNS]
    out = [",".join(row[i] for i in keep) for row in rows]
    return "\n".join(out) + "\n"
