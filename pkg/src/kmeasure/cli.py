"""Command-line interface: ``kmeasure estimate`` and ``kmeasure bench``.

Exit codes: 0 on success, 2 on configuration errors, 3 on runtime errors.
A JSON config file may supply any flag's value; explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path

from .bench import (
    ExperimentConfig,
    ExperimentKind,
    HamiltonianSource,
    run_experiment,
)
from .errors import ConfigError, KmeasureError
from .estimator import EstimationConfig, EstimationMode, estimate
from .oracle import MAX_EVOLVE_QUBITS, exact_evolve, exact_expectation
from .shots import WeightingScheme
from .simulator import Circuit, apply, build_neel, build_trotter, zero_state


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _str_list(text: str) -> list[str]:
    return [part.strip() for part in text.split(",") if part.strip() != ""]


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON file supplying defaults for any flag")
    src = parser.add_argument_group("hamiltonian source")
    src.add_argument("--hamiltonian", help="path to a plain-text Hamiltonian file")
    src.add_argument("--model", help="built-in model: tfim, heisenberg, tfim_imbalanced")
    src.add_argument("--n", type=int, help="qubit count for built-in models")
    src.add_argument("--j", type=float, default=None, help="coupling coefficient (default 1.0)")
    src.add_argument("--h", type=float, default=None, help="field coefficient (default 1.0)")
    src.add_argument("--periodic", action="store_true", default=None,
                     help="use periodic boundary conditions")
    parser.add_argument("--k", type=_int_list, default=None,
                        help="segment size(s), comma separated")
    parser.add_argument("--scheme", type=_str_list, default=None,
                        help="weighting scheme(s): uniform, max, max_sq, mean, mean_sq")
    parser.add_argument("--shots", type=_int_list, default=None,
                        help="shot budget(s), comma separated")
    parser.add_argument("--reps", type=int, default=None, help="repetitions per point")
    parser.add_argument("--seed", type=int, default=None, help="base RNG seed")
    parser.add_argument("--mode", choices=["sampled", "exact"], default=None,
                        help="measurement mode")
    parser.add_argument("--bin-fraction", type=float, default=None,
                        help="bin circuits into at most this fraction of group count")
    parser.add_argument("--trotter-steps", type=int, default=None,
                        help="Trotter step count r")
    parser.add_argument("--time", type=float, default=None, help="evolution time t")
    parser.add_argument("--out", default=None, help="output directory")


def _merge_config_file(args: argparse.Namespace) -> dict:
    """Flag values (when given) override JSON config entries."""
    merged: dict = {}
    if args.config:
        try:
            merged.update(json.loads(Path(args.config).read_text(encoding="utf-8")))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot load config file: {exc}")
    for key, value in vars(args).items():
        if key in ("config", "command", "experiment") or value is None:
            continue
        merged[key] = value
    return merged


def _source_from(merged: dict) -> HamiltonianSource:
    return HamiltonianSource(
        path=merged.get("hamiltonian"),
        model=merged.get("model"),
        n=merged.get("n"),
        j=merged.get("j", 1.0),
        h=merged.get("h", 1.0),
        periodic=bool(merged.get("periodic", False)),
    )


def _single(name: str, values, default):
    if values is None:
        return default
    if isinstance(values, list):
        if len(values) != 1:
            raise ConfigError(f"{name} expects a single value here, got {values}")
        return values[0]
    return values


def _cmd_estimate(args: argparse.Namespace) -> int:
    merged = _merge_config_file(args)
    _, h = _source_from(merged).load()

    k = _single("--k", merged.get("k"), h.n)
    scheme_name = _single("--scheme", merged.get("scheme"), "uniform")
    shots = _single("--shots", merged.get("shots"), 4000)
    try:
        scheme = WeightingScheme.from_name(scheme_name)
    except ValueError as exc:
        raise ConfigError(str(exc))
    mode = EstimationMode.from_name(merged.get("mode", "sampled"))

    prep = build_neel(h.n)
    t = merged.get("time", 0.0)
    if t:
        trotter = build_trotter(h, t, merged.get("trotter_steps", 1))
        prep = Circuit(h.n, prep.gates + trotter.gates, trotter.global_phase)

    cfg = EstimationConfig(
        k=k,
        scheme=scheme,
        total_shots=shots,
        bin_fraction=merged.get("bin_fraction"),
        mode=mode,
        seed=merged.get("seed", 0),
    )
    report = estimate(h, prep, cfg)

    payload = {
        "value": report.value,
        "groups": report.groups,
        "circuits_executed": report.circuits_executed,
        "max_measurement_depth": report.max_measurement_depth,
        "shots_budget": report.shots_budget,
        "shots_realized": report.shots_realized,
        "identity_contribution": report.identity_contribution,
        "fallback_synthesis_used": report.fallback_synthesis_used,
        "per_group": [asdict(g) for g in report.per_group],
        "timings_ms": asdict(report.timings),
    }
    if t and h.n <= MAX_EVOLVE_QUBITS:
        evolved = exact_evolve(h, apply(zero_state(h.n), build_neel(h.n)), t)
        payload["exact_evolved_expectation"] = exact_expectation(h, evolved)
    elif not t:
        payload["exact_expectation"] = exact_expectation(h, apply(zero_state(h.n), prep))

    text = json.dumps(payload, indent=2)
    out_dir = merged.get("out")
    if out_dir:
        out_path = Path(out_dir)
        out_path.mkdir(parents=True, exist_ok=True)
        (out_path / "estimate.json").write_text(text + "\n", encoding="utf-8")
    print(text)
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    merged = _merge_config_file(args)
    kind = ExperimentKind.from_name(args.experiment)

    schemes = merged.get("scheme", ["uniform"])
    if isinstance(schemes, str):
        schemes = [schemes]
    try:
        scheme_list = tuple(WeightingScheme.from_name(s) for s in schemes)
    except ValueError as exc:
        raise ConfigError(str(exc))

    k_list = merged.get("k", [])
    if isinstance(k_list, int):
        k_list = [k_list]
    shot_list = merged.get("shots", [4000])
    if isinstance(shot_list, int):
        shot_list = [shot_list]

    cfg = ExperimentConfig(
        kind=kind,
        source=_source_from(merged),
        k_list=tuple(k_list),
        scheme_list=scheme_list,
        shot_list=tuple(shot_list),
        repetitions=merged.get("reps", 100),
        trotter_time=merged.get("time", 0.1),
        trotter_steps=merged.get("trotter_steps", 1),
        seed=merged.get("seed", 0),
        mode=EstimationMode.from_name(merged.get("mode", "sampled")),
        bin_fraction=merged.get("bin_fraction"),
        out_dir=merged.get("out", "bench_out"),
    )
    result = run_experiment(cfg)
    print(f"wrote {result.csv_path} ({len(result.records)} rows)")
    print(f"wrote {result.summary_path}")
    for point in result.summary.get("points", []):
        print(json.dumps(point))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kmeasure",
        description="Observable estimation with k-commuting Pauli grouping, "
        "Clifford measurement circuits, and weighted shot allocation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_est = sub.add_parser("estimate", help="estimate <H> for one configuration")
    _add_common_flags(p_est)
    p_est.set_defaults(func=_cmd_estimate)

    p_bench = sub.add_parser("bench", help="run a benchmark experiment")
    p_bench.add_argument(
        "experiment",
        choices=[k.value for k in ExperimentKind],
        help="experiment kind",
    )
    _add_common_flags(p_bench)
    p_bench.set_defaults(func=_cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except KmeasureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
