"""Sorted-insertion partition of Hamiltonian terms into k-commuting groups.

Terms are visited in descending |coefficient| order (stable, so equal
magnitudes keep their Hamiltonian order) and each is inserted into the
first existing group, in creation order, whose every member k-commutes
with it; otherwise a new group is appended.  The result is deterministic
and greedy - no optimality is claimed, and the group count may
occasionally rise with k.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyHamiltonianError, InvalidKError
from .pauli import Hamiltonian, k_commutes


@dataclass(frozen=True)
class CommutingGroup:
    """Indices of mutually k-commuting terms, in insertion order."""

    k: int
    members: tuple[int, ...]


@dataclass(frozen=True)
class GroupingResult:
    k: int
    groups: tuple[CommutingGroup, ...]
    term_count: int

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(g.members) for g in self.groups)


def sorted_insertion_grouping(h: Hamiltonian, k: int) -> GroupingResult:
    if not h.terms:
        raise EmptyHamiltonianError("cannot group an empty Hamiltonian")
    if not 1 <= k <= h.n:
        raise InvalidKError(f"k={k} outside [1, {h.n}]")

    order = sorted(range(len(h.terms)), key=lambda i: -abs(h.terms[i].coeff))
    groups: list[list[int]] = []
    for idx in order:
        pauli = h.terms[idx].pauli
        for group in groups:
            if all(k_commutes(pauli, h.terms[j].pauli, k) for j in group):
                group.append(idx)
                break
        else:
            groups.append([idx])
    return GroupingResult(
        k=k,
        groups=tuple(CommutingGroup(k, tuple(g)) for g in groups),
        term_count=len(h.terms),
    )
