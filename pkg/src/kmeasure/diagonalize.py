"""Measurement-circuit synthesis for k-commuting groups.

Each group is diagonalized segment by segment: the circuit is a tensor
product of per-segment Clifford circuits, so CNOTs never cross segment
boundaries.  Within a segment the primary routine iterates the
minimum-support reduction until every remaining substring is diagonal:
pick the substring with the smallest minimum support (ties broken by
worklist position), turn its X/Y factors into Z with H and S-dagger
gates, collapse it onto its minimum-support qubit with a CNOT chain
from the highest-index support qubit downward, conjugate the remaining
substrings, and repeat.  While any off-diagonal substring remains,
already-diagonal ones still participate as pivots and are reduced
through the CNOT-ladder step; skipping them outright can re-introduce
off-diagonal factors elsewhere (consider {ZZ, XX}).  A segment whose
substrings are all diagonal therefore contributes no gates at all.

The primary routine is not provably safe for every commuting set - a
later pivot's single-qubit normalization can off-diagonalize a string
reduced earlier - so every synthesis is verified by exact conjugation.
Segments whose verification fails are re-synthesized with a general
symplectic Gaussian elimination that is provably correct, and the
result is flagged via ``fallback_used``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .clifford import CliffordCircuit, Gate, SignedPauli, cnot, conjugate_gate, h, s, sdg
from .errors import NotCommutingGroupError, SynthesisError
from .grouping import CommutingGroup
from .pauli import Hamiltonian, PauliString, k_commutes, min_support


@dataclass(frozen=True)
class DiagonalizedGroup:
    """A group with its measurement circuit and signed diagonal images."""

    group: CommutingGroup
    circuit: CliffordCircuit
    images: tuple[SignedPauli, ...]
    fallback_used: bool


def _conjugate_unsigned(p: PauliString, gates: list[Gate]) -> PauliString:
    sp = SignedPauli(1, p)
    for g in gates:
        sp = conjugate_gate(sp, g)
    return sp.pauli


def _reduction_gates(p: PauliString) -> list[Gate]:
    """Gates collapsing p to a single Z on its minimum-support qubit.

    H/S-dagger normalization first (X -> Z via H, Y -> Z via SDG then H),
    then a CNOT chain from the highest-index support qubit down to the
    pivot.  For an already-diagonal p only the chain is emitted.
    """
    gates: list[Gate] = []
    supp = [q for q in range(p.n) if (p.support >> q) & 1]
    for q in supp:
        factor = p.factor(q)
        if factor == "X":
            gates.append(h(q))
        elif factor == "Y":
            gates.append(sdg(q))
            gates.append(h(q))
    for i in range(len(supp) - 1, 0, -1):
        gates.append(cnot(supp[i], supp[i - 1]))
    return gates


def _minimum_support_synthesis(strings: list[PauliString]) -> list[Gate] | None:
    """Primary per-segment synthesis; returns None when its own invariant breaks."""
    work = [p for p in strings if not p.is_identity]
    gates: list[Gate] = []
    while not all(p.is_diagonal for p in work):
        pivot_at = min(range(len(work)), key=lambda i: (min_support(work[i]), i))
        pivot = work.pop(pivot_at)
        pivot_qubit = min_support(pivot)
        step = _reduction_gates(pivot)
        gates.extend(step)
        work = [_conjugate_unsigned(p, step) for p in work]
        # Everything left commutes with Z on the pivot qubit, hence I or Z there.
        if any((p.x >> pivot_qubit) & 1 for p in work):
            return None
    return gates


def _symplectic_elimination(strings: list[PauliString], n: int) -> list[Gate]:
    """Provably-correct fallback: diagonalize a GF(2) basis of the span.

    Every input string is a product of basis elements, and a product of
    diagonal Paulis is diagonal, so reducing each basis element to a
    single Z suffices.  Processed basis elements become single-qubit Zs
    on distinct pivot qubits; unprocessed elements are kept free of the
    pivot qubits by multiplying the pivot in (a GF(2) row operation),
    which makes every later gate act away from finished pivots.
    """
    # Independent basis of the span, via Gaussian elimination on (x|z) vectors.
    basis: list[tuple[int, int]] = []
    pivots_bits: list[int] = []
    for p in strings:
        vec = p.x | (p.z << n)
        for bit, (bx, bz) in zip(pivots_bits, basis):
            if (vec >> bit) & 1:
                vec ^= bx | (bz << n)
        if vec:
            basis.append((vec & ((1 << n) - 1), vec >> n))
            pivots_bits.append(vec.bit_length() - 1)

    gates: list[Gate] = []

    def emit(seq: list[Gate]) -> None:
        gates.extend(seq)
        for i in range(len(basis)):
            p = _conjugate_unsigned(PauliString(n, basis[i][0], basis[i][1]), seq)
            basis[i] = (p.x, p.z)

    for bi in range(len(basis)):
        bx, bz = basis[bi]
        if bx:
            q = (bx & -bx).bit_length() - 1
            if (bz >> q) & 1:
                emit([s(q)])
                bx, bz = basis[bi]
            # bx has X at q; clear the rest of the support.
            for u in range(n):
                if u == q:
                    continue
                xu, zu = (bx >> u) & 1, (bz >> u) & 1
                if xu and zu:
                    emit([s(u)])
                    xu, zu = 1, 0
                if xu:
                    emit([cnot(q, u)])
                elif zu:
                    emit([h(u), cnot(q, u), h(u)])
                bx, bz = basis[bi]
            emit([h(q)])
        else:
            q = (bz & -bz).bit_length() - 1
            for u in range(n):
                if u != q and (bz >> u) & 1:
                    emit([cnot(u, q)])
                    bx, bz = basis[bi]
        # basis[bi] is now a single Z at q; strip it from later elements.
        assert basis[bi] == (0, 1 << q)
        for bj in range(bi + 1, len(basis)):
            if (basis[bj][1] >> q) & 1:
                basis[bj] = (basis[bj][0], basis[bj][1] ^ (1 << q))
    return gates


def _segments(n: int, k: int) -> list[tuple[int, int]]:
    return [(start, min(start + k, n)) for start in range(0, n, k)]


def diagonalize_group(h_src: Hamiltonian, group: CommutingGroup) -> DiagonalizedGroup:
    """Synthesize the measurement circuit and signed diagonal images of a group."""
    members = [h_src.terms[i].pauli for i in group.members]
    if not members:
        raise NotCommutingGroupError("group has no members")
    k = group.k
    for i in range(len(members)):
        for j in range(i + 1, len(members)):
            if not k_commutes(members[i], members[j], k):
                raise NotCommutingGroupError(
                    f"members {members[i].label} and {members[j].label} do not {k}-commute"
                )

    all_gates: list[Gate] = []
    fallback_used = False
    for start, stop in _segments(h_src.n, k):
        width = stop - start
        locals_seen: list[PauliString] = []
        seen: set[PauliString] = set()
        for m in members:
            sub = m.restrict(start, stop)
            if not sub.is_identity and sub not in seen:
                seen.add(sub)
                locals_seen.append(sub)
        if not locals_seen:
            continue
        seg_gates = _minimum_support_synthesis(locals_seen)
        if seg_gates is not None and not all(
            _conjugate_unsigned(p, seg_gates).is_diagonal for p in locals_seen
        ):
            seg_gates = None
        if seg_gates is None:
            fallback_used = True
            seg_gates = _symplectic_elimination(locals_seen, width)
            if not all(_conjugate_unsigned(p, seg_gates).is_diagonal for p in locals_seen):
                raise SynthesisError(
                    f"fallback failed on segment [{start}, {stop}) - this is a bug"
                )
        all_gates.extend(
            Gate(g.kind, g.qubit + start, None if g.control is None else g.control + start)
            for g in seg_gates
        )

    circuit = CliffordCircuit(h_src.n, tuple(all_gates))
    images = []
    for m in members:
        sp = SignedPauli(1, m)
        for g in circuit.gates:
            sp = conjugate_gate(sp, g)
        if not sp.pauli.is_diagonal:
            raise SynthesisError(f"image of {m.label} is not diagonal - this is a bug")
        images.append(sp)
    return DiagonalizedGroup(group, circuit, tuple(images), fallback_used)


def measurement_depth(d: DiagonalizedGroup) -> int:
    """Circuit depth counting greedily packed layers of disjoint-qubit gates."""
    busy: dict[int, int] = {}
    depth = 0
    for gate in d.circuit.gates:
        layer = 1 + max((busy.get(q, 0) for q in gate.qubits), default=0)
        for q in gate.qubits:
            busy[q] = layer
        depth = max(depth, layer)
    return depth
