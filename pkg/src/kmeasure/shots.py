"""Shot-budget allocation across measurement groups.

The weighted pipeline follows three fixed steps so results are
deterministic: round each proportional share half-away-from-zero, raise
zeros to one, then adjust the largest entry (ties: lowest index) by the
remaining surplus or deficit so the plan sums exactly to the budget.
Binning optionally merges groups with similar shot counts into execution
bins sharing one representative count, the rounded mean of the members.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import (
    BudgetTooSmallError,
    DegenerateWeightsError,
    EmptyGroupError,
    InvalidEpsilonError,
    InvalidFractionError,
)


class WeightingScheme(enum.Enum):
    """Statistic of a group's |coefficients| used as its allocation weight."""

    UNIFORM = "uniform"
    MAX = "max"
    MAX_SQ = "max_sq"
    MEAN = "mean"
    MEAN_SQ = "mean_sq"

    @classmethod
    def from_name(cls, name: str) -> "WeightingScheme":
        for scheme in cls:
            if scheme.value == name:
                return scheme
        valid = ", ".join(s.value for s in cls)
        raise ValueError(f"unknown scheme {name!r}; valid schemes: {valid}")


def group_statistic(coeffs: Sequence[float], scheme: WeightingScheme) -> float:
    """Allocation weight v_i of one group from its member coefficients."""
    if len(coeffs) == 0:
        raise EmptyGroupError("group statistic of an empty coefficient list")
    if scheme is WeightingScheme.UNIFORM:
        return 1.0
    if scheme is WeightingScheme.MAX:
        return max(abs(c) for c in coeffs)
    if scheme is WeightingScheme.MAX_SQ:
        return max(abs(c) for c in coeffs) ** 2
    if scheme is WeightingScheme.MEAN:
        return sum(abs(c) for c in coeffs) / len(coeffs)
    return sum(c * c for c in coeffs) / len(coeffs)


def shots_for_precision(
    group_coeffs: Sequence[Sequence[float]], epsilon: float
) -> list[float]:
    """Per-group real shot counts g_i = N^2 max_j(c_ij^2) / eps^2.

    Planning output only; values are not rounded.  A group whose largest
    coefficient is zero yields 0.0 (cannot occur after ingestion).
    """
    if epsilon <= 0:
        raise InvalidEpsilonError(f"epsilon must be positive, got {epsilon}")
    n_groups = len(group_coeffs)
    return [
        n_groups * n_groups * max(c * c for c in coeffs) / (epsilon * epsilon)
        for coeffs in group_coeffs
    ]


@dataclass(frozen=True)
class Bin:
    """Group indices sharing one representative shot count."""

    indices: tuple[int, ...]
    shots: int


@dataclass(frozen=True)
class ShotPlan:
    shots: tuple[int, ...]
    total: int
    bins: Optional[tuple[Bin, ...]] = None

    def per_group_shots(self) -> tuple[int, ...]:
        """Effective shots per group: bin representatives when binned."""
        if self.bins is None:
            return self.shots
        effective = list(self.shots)
        for b in self.bins:
            for i in b.indices:
                effective[i] = b.shots
        return tuple(effective)

    @property
    def realized_total(self) -> int:
        return sum(self.per_group_shots())


def _round_half_away(x: float) -> int:
    return math.floor(x + 0.5) if x >= 0 else -math.floor(-x + 0.5)


def allocate(total: int, v: Sequence[float]) -> ShotPlan:
    """Distribute ``total`` shots proportionally to weights v, conserving exactly."""
    n = len(v)
    if total < n:
        raise BudgetTooSmallError(f"budget {total} below group count {n}")
    if any(w < 0 for w in v):
        raise DegenerateWeightsError("negative allocation weight")
    weight_sum = sum(v)
    if weight_sum <= 0:
        raise DegenerateWeightsError("allocation weights sum to zero")

    shots = [_round_half_away(total * w / weight_sum) for w in v]
    shots = [s if s > 0 else 1 for s in shots]
    residual = total - sum(shots)
    if residual != 0:
        largest = max(range(n), key=lambda i: (shots[i], -i))
        shots[largest] += residual
        if shots[largest] < 1:
            raise DegenerateWeightsError(
                "budget correction drove the largest allocation below one shot"
            )
    return ShotPlan(tuple(shots), total)


def _bin_cost(run: Sequence[int]) -> float:
    return (run[0] - run[-1]) / run[0]


def bin_plan(plan: ShotPlan, fraction: float = 0.2) -> ShotPlan:
    """Partition groups into at most ``fraction * N`` execution bins.

    Groups are sorted by shot count descending and split into
    ``B = max(1, floor(fraction * N))`` contiguous runs by greedy boundary
    placement: each added boundary is the one that most reduces the total
    of per-bin (max - min)/max spreads.  Each bin's representative is the
    rounded mean of its members' counts, floored at one.
    """
    if not 0 < fraction <= 1:
        raise InvalidFractionError(f"fraction must be in (0, 1], got {fraction}")
    n = len(plan.shots)
    target_bins = max(1, math.floor(fraction * n))

    order = sorted(range(n), key=lambda i: (-plan.shots[i], i))
    values = [plan.shots[i] for i in order]

    # Runs are half-open [lo, hi) index ranges over the sorted sequence.
    runs = [(0, n)]
    while len(runs) < target_bins:
        best = None
        for ri, (lo, hi) in enumerate(runs):
            base = _bin_cost(values[lo:hi])
            for cut in range(lo + 1, hi):
                gain = base - _bin_cost(values[lo:cut]) - _bin_cost(values[cut:hi])
                if best is None or gain > best[0]:
                    best = (gain, ri, cut)
        if best is None:
            break  # fewer distinct positions than requested bins
        _, ri, cut = best
        lo, hi = runs[ri]
        runs[ri : ri + 1] = [(lo, cut), (cut, hi)]

    bins = []
    for lo, hi in runs:
        members = tuple(order[lo:hi])
        mean = sum(values[lo:hi]) / (hi - lo)
        bins.append(Bin(members, max(1, _round_half_away(mean))))
    return ShotPlan(plan.shots, plan.total, tuple(bins))
