"""End-to-end expectation estimation: group, diagonalize, allocate, execute.

For every group the preparation circuit is extended by the group's
measurement circuit and measured in the computational basis; each
member's expectation is its image sign times the parity-weighted sum of
outcome weights over the image's Z support.  SAMPLED mode draws
multinomial counts with a per-group RNG stream derived from
(seed, group index); EXACT_PROBABILITY mode feeds the exact outcome
distribution through the identical bookkeeping, which must then
reproduce the oracle expectation to float precision.

Identity terms never reach a group: their coefficients are added to the
value directly and consume no shots.  The UNIFORM scheme bypasses the
weighted allocator and splits the budget as evenly as integers allow,
remainder to the lowest group indices.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .diagonalize import DiagonalizedGroup, diagonalize_group, measurement_depth
from .errors import BudgetTooSmallError, DimensionMismatchError, InvalidKError
from .grouping import GroupingResult, sorted_insertion_grouping
from .oracle import bit_parity, exact_expectation, index_mask
from .pauli import Hamiltonian, build_hamiltonian
from .shots import ShotPlan, WeightingScheme, allocate, bin_plan, group_statistic
from .simulator import Circuit, apply, zero_state


class EstimationMode(enum.Enum):
    SAMPLED = "sampled"
    EXACT_PROBABILITY = "exact"

    @classmethod
    def from_name(cls, name: str) -> "EstimationMode":
        for mode in cls:
            if mode.value == name:
                return mode
        raise ValueError(f"unknown mode {name!r}; valid modes: sampled, exact")


@dataclass(frozen=True)
class EstimationConfig:
    k: int
    scheme: WeightingScheme = WeightingScheme.UNIFORM
    total_shots: int = 4000
    bin_fraction: Optional[float] = None
    mode: EstimationMode = EstimationMode.SAMPLED
    seed: int = 0


@dataclass(frozen=True)
class GroupReport:
    group_id: int
    shots: int
    contribution: float


@dataclass(frozen=True)
class PhaseTimes:
    """Wall-clock milliseconds per pipeline phase."""

    group_ms: float
    diagonalize_ms: float
    allocate_ms: float
    execute_ms: float
    aggregate_ms: float

    @property
    def total_ms(self) -> float:
        return (
            self.group_ms
            + self.diagonalize_ms
            + self.allocate_ms
            + self.execute_ms
            + self.aggregate_ms
        )


@dataclass(frozen=True)
class EstimationReport:
    value: float
    per_group: tuple[GroupReport, ...]
    groups: int
    circuits_executed: int
    max_measurement_depth: int
    shots_budget: int
    shots_realized: int
    identity_contribution: float
    fallback_synthesis_used: bool
    timings: PhaseTimes


def _uniform_split(total: int, n_groups: int) -> ShotPlan:
    base, extra = divmod(total, n_groups)
    shots = tuple(base + 1 if i < extra else base for i in range(n_groups))
    return ShotPlan(shots, total)


def _group_weights(h: Hamiltonian, grouping: GroupingResult, scheme: WeightingScheme):
    return [
        group_statistic([h.terms[i].coeff for i in g.members], scheme)
        for g in grouping.groups
    ]


def _member_estimates(
    diag: DiagonalizedGroup, weights: np.ndarray, outcomes: np.ndarray, n: int
) -> list[float]:
    """Parity-weighted estimate of every member from one outcome distribution."""
    estimates = []
    for image in diag.images:
        mask = index_mask(image.pauli.z, n)
        signs = 1.0 - 2.0 * bit_parity(outcomes, mask)
        estimates.append(image.sign * float(np.dot(weights, signs)))
    return estimates


def estimate(h: Hamiltonian, prep: Circuit, cfg: EstimationConfig) -> EstimationReport:
    """Run the full pipeline and return the estimated <H> with bookkeeping."""
    if prep.n != h.n:
        raise DimensionMismatchError(f"{prep.n}-qubit prep for {h.n}-qubit Hamiltonian")
    if not 1 <= cfg.k <= h.n:
        raise InvalidKError(f"k={cfg.k} outside [1, {h.n}]")

    identity_contribution = sum(t.coeff for t in h.terms if t.pauli.is_identity)
    measurable = [(t.coeff, t.pauli) for t in h.terms if not t.pauli.is_identity]

    if not measurable:
        zeros = PhaseTimes(0.0, 0.0, 0.0, 0.0, 0.0)
        return EstimationReport(
            value=identity_contribution,
            per_group=(),
            groups=0,
            circuits_executed=0,
            max_measurement_depth=0,
            shots_budget=cfg.total_shots,
            shots_realized=0,
            identity_contribution=identity_contribution,
            fallback_synthesis_used=False,
            timings=zeros,
        )

    h_meas = build_hamiltonian(h.n, measurable)

    t0 = time.perf_counter()
    grouping = sorted_insertion_grouping(h_meas, cfg.k)
    t1 = time.perf_counter()

    diagonalized = [diagonalize_group(h_meas, g) for g in grouping.groups]
    t2 = time.perf_counter()

    n_groups = len(grouping.groups)
    sampled = cfg.mode is EstimationMode.SAMPLED
    if sampled:
        if cfg.total_shots < n_groups:
            raise BudgetTooSmallError(
                f"budget {cfg.total_shots} below group count {n_groups}"
            )
        if cfg.scheme is WeightingScheme.UNIFORM:
            plan = _uniform_split(cfg.total_shots, n_groups)
        else:
            plan = allocate(cfg.total_shots, _group_weights(h_meas, grouping, cfg.scheme))
        if cfg.bin_fraction is not None:
            plan = bin_plan(plan, cfg.bin_fraction)
        shots_per_group = plan.per_group_shots()
    else:
        shots_per_group = (0,) * n_groups
    t3 = time.perf_counter()

    outcomes_all = np.arange(1 << h.n, dtype=np.int64)
    group_weight_vectors = []
    for gid, diag in enumerate(diagonalized):
        circuit = prep.extended(diag.circuit.gates)
        state = apply(zero_state(h.n), circuit)
        probs = state.probabilities()
        if sampled:
            rng = np.random.default_rng(np.random.SeedSequence((cfg.seed, gid)))
            counts = rng.multinomial(shots_per_group[gid], probs / probs.sum())
            group_weight_vectors.append(counts / shots_per_group[gid])
        else:
            group_weight_vectors.append(probs)
    t4 = time.perf_counter()

    per_group = []
    value = identity_contribution
    for gid, diag in enumerate(diagonalized):
        member_values = _member_estimates(
            diag, group_weight_vectors[gid], outcomes_all, h.n
        )
        contribution = sum(
            h_meas.terms[idx].coeff * est
            for idx, est in zip(diag.group.members, member_values)
        )
        per_group.append(GroupReport(gid, shots_per_group[gid], contribution))
        value += contribution
    t5 = time.perf_counter()

    return EstimationReport(
        value=value,
        per_group=tuple(per_group),
        groups=n_groups,
        circuits_executed=n_groups,
        max_measurement_depth=max(measurement_depth(d) for d in diagonalized),
        shots_budget=cfg.total_shots,
        shots_realized=sum(shots_per_group),
        identity_contribution=identity_contribution,
        fallback_synthesis_used=any(d.fallback_used for d in diagonalized),
        timings=PhaseTimes(
            group_ms=(t1 - t0) * 1e3,
            diagonalize_ms=(t2 - t1) * 1e3,
            allocate_ms=(t3 - t2) * 1e3,
            execute_ms=(t4 - t3) * 1e3,
            aggregate_ms=(t5 - t4) * 1e3,
        ),
    )


@dataclass(frozen=True)
class ErrorStatistic:
    """Spread of estimator error over repeated random preparations."""

    stddev: float
    bias: float
    pairs: tuple[tuple[float, float], ...]

    @property
    def differences(self) -> tuple[float, ...]:
        return tuple(est - exact for est, exact in self.pairs)


def repeated_error(
    h: Hamiltonian,
    prep_family: Callable[[int], Circuit],
    cfg: EstimationConfig,
    repetitions: int,
) -> ErrorStatistic:
    """Std deviation of (estimate - exact) over seeded preparation instances.

    Repetition r uses preparation seed cfg.seed + r and the same seed for
    the measurement streams, so a rerun reproduces the statistic exactly.
    """
    if repetitions < 2:
        raise ValueError(f"need at least 2 repetitions, got {repetitions}")
    pairs = []
    for r in range(repetitions):
        prep = prep_family(cfg.seed + r)
        report = estimate(h, prep, replace(cfg, seed=cfg.seed + r))
        exact = exact_expectation(h, apply(zero_state(h.n), prep))
        pairs.append((report.value, exact))
    diffs = np.array([est - exact for est, exact in pairs])
    return ErrorStatistic(
        stddev=float(np.std(diffs)),
        bias=float(np.mean(diffs)),
        pairs=tuple(pairs),
    )
