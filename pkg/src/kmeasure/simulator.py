"""Dense statevector simulation of Clifford + rotation circuits.

Amplitude indexing follows the package-wide convention: qubit 0 is the
most significant bit of the basis-state index, so the state |0101> on
four qubits sits at index 5.  Circuits carry a global phase so that a
builder like the Trotter constructor can account for identity terms
exactly; the phase is irrelevant to measurement but matters when
comparing unitaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .clifford import CLIFFORD_KINDS, ROTATION_KINDS, Gate, _check_gate, cnot, h, s, sdg, x
from .errors import (
    DimensionMismatchError,
    InvalidShotsError,
    InvalidStepsError,
    TooLargeError,
)
from .pauli import Hamiltonian, PauliString

# Dense amplitudes above this qubit count are refused (2^24 complex ~ 256 MB).
MAX_STATE_QUBITS = 24

_ALL_KINDS = CLIFFORD_KINDS + ROTATION_KINDS


def rx(q: int, theta: float) -> Gate:
    return Gate("RX", q, angle=theta)


def ry(q: int, theta: float) -> Gate:
    return Gate("RY", q, angle=theta)


def rz(q: int, theta: float) -> Gate:
    return Gate("RZ", q, angle=theta)


@dataclass(frozen=True)
class Circuit:
    """Gate list over n qubits plus a recorded global phase (radians)."""

    n: int
    gates: tuple[Gate, ...] = ()
    global_phase: float = 0.0

    def __post_init__(self):
        for gate in self.gates:
            _check_gate(gate, self.n, _ALL_KINDS)
            if gate.kind in ROTATION_KINDS and not math.isfinite(gate.angle):
                raise ValueError(f"non-finite rotation angle in {gate.serialize()}")

    def serialize(self) -> str:
        return "\n".join(g.serialize() for g in self.gates)

    def extended(self, gates: Sequence[Gate]) -> "Circuit":
        return Circuit(self.n, self.gates + tuple(gates), self.global_phase)


@dataclass(frozen=True)
class StateVector:
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.amplitudes.shape != (1 << self.n,):
            raise DimensionMismatchError(
                f"expected {1 << self.n} amplitudes, got {self.amplitudes.shape}"
            )
        self.amplitudes.setflags(write=False)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def zero_state(n: int) -> StateVector:
    if n > MAX_STATE_QUBITS:
        raise TooLargeError(f"{n} qubits exceed the {MAX_STATE_QUBITS}-qubit state guard")
    amps = np.zeros(1 << n, dtype=complex)
    amps[0] = 1.0
    return StateVector(n, amps)


def _rotation_matrix(kind: str, theta: float) -> np.ndarray:
    c, sn = math.cos(theta / 2.0), math.sin(theta / 2.0)
    if kind == "RX":
        return np.array([[c, -1j * sn], [-1j * sn, c]])
    if kind == "RY":
        return np.array([[c, -sn], [sn, c]], dtype=complex)
    return np.array([[c - 1j * sn, 0], [0, c + 1j * sn]])


_FIXED_1Q = {
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0),
    "S": np.diag([1.0, 1.0j]),
    "SDG": np.diag([1.0, -1.0j]),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
}


def _apply_1q(amps: np.ndarray, q: int, mat: np.ndarray) -> np.ndarray:
    view = amps.reshape(1 << q, 2, -1)
    a0 = view[:, 0, :].copy()
    a1 = view[:, 1, :]
    view[:, 0, :] = mat[0, 0] * a0 + mat[0, 1] * a1
    view[:, 1, :] = mat[1, 0] * a0 + mat[1, 1] * a1
    return amps


def _apply_cnot(amps: np.ndarray, n: int, control: int, target: int) -> np.ndarray:
    view = amps.reshape((2,) * n)
    picker: list = [slice(None)] * n
    picker[control] = 1
    block = view[tuple(picker)]
    axis = target - 1 if target > control else target
    view[tuple(picker)] = np.flip(block, axis=axis).copy()
    return amps


def apply(state: StateVector, circuit: Circuit) -> StateVector:
    """Run the circuit gate by gate; exact up to float arithmetic."""
    if state.n != circuit.n:
        raise DimensionMismatchError(f"{state.n}-qubit state, {circuit.n}-qubit circuit")
    if state.n > MAX_STATE_QUBITS:
        raise TooLargeError(f"{state.n} qubits exceed the state guard")
    amps = state.amplitudes.copy()
    for gate in circuit.gates:
        if gate.kind == "CNOT":
            amps = _apply_cnot(amps, state.n, gate.control, gate.qubit)
        elif gate.kind in ROTATION_KINDS:
            amps = _apply_1q(amps, gate.qubit, _rotation_matrix(gate.kind, gate.angle))
        else:
            amps = _apply_1q(amps, gate.qubit, _FIXED_1Q[gate.kind])
    if circuit.global_phase != 0.0:
        amps = amps * np.exp(1j * circuit.global_phase)
    return StateVector(state.n, amps)


@dataclass(frozen=True)
class SampleCounts:
    """Multinomial measurement record; outcome keys are basis-state indices."""

    n: int
    shots: int
    counts: dict[int, int] = field(default_factory=dict)

    def bitstring(self, outcome: int) -> str:
        return format(outcome, f"0{self.n}b")


def sample(state: StateVector, shots: int, rng: np.random.Generator) -> SampleCounts:
    """Draw ``shots`` outcomes from the state's exact distribution."""
    if shots < 1:
        raise InvalidShotsError(f"shots must be >= 1, got {shots}")
    probs = state.probabilities()
    norm = probs.sum()
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"state norm deviates from 1 by {abs(norm - 1.0):.3e}")
    draws = rng.multinomial(shots, probs / norm)
    hit = np.nonzero(draws)[0]
    return SampleCounts(state.n, shots, {int(b): int(draws[b]) for b in hit})


def exact_distribution(state: StateVector) -> dict[int, float]:
    """Outcome probabilities |amplitude|^2 with entries below 1e-15 omitted."""
    probs = state.probabilities()
    hit = np.nonzero(probs >= 1e-15)[0]
    return {int(b): float(probs[b]) for b in hit}


def _pauli_exponential(pauli: PauliString, angle: float) -> list[Gate]:
    """Gates realizing exp(-i * angle * P) for a non-identity Pauli string.

    Basis changes map each X/Y factor to Z, a CNOT chain folds the parity
    onto the highest-index support qubit, RZ(2 * angle) turns there, and
    the chain and basis changes are undone.
    """
    supp = [q for q in range(pauli.n) if (pauli.support >> q) & 1]
    enter: list[Gate] = []
    leave: list[Gate] = []
    for q in supp:
        factor = pauli.factor(q)
        if factor == "X":
            enter.append(h(q))
            leave.append(h(q))
        elif factor == "Y":
            # (SDG then H) inverts to (H then S); leave gates act on
            # distinct qubits, so cross-qubit order is immaterial.
            enter += [sdg(q), h(q)]
            leave += [h(q), s(q)]
    chain = [cnot(supp[i], supp[i + 1]) for i in range(len(supp) - 1)]
    unchain = list(reversed(chain))
    return enter + chain + [rz(supp[-1], 2.0 * angle)] + unchain + leave


def build_trotter(
    h_src: Hamiltonian,
    t: float,
    r: int,
    order: Optional[Sequence[int]] = None,
) -> Circuit:
    """First-order product-formula circuit for exp(-i t H) with r steps.

    Each step applies exp(-i (t/r) c P) for every term, in Hamiltonian
    order unless an explicit permutation is given.  Identity terms add a
    recorded global phase and no gates.
    """
    if r < 1:
        raise InvalidStepsError(f"step count must be >= 1, got {r}")
    if order is None:
        order = range(len(h_src.terms))
    else:
        if sorted(order) != list(range(len(h_src.terms))):
            raise ValueError("order must be a permutation of the term indices")
    gates: list[Gate] = []
    phase = 0.0
    dt = t / r
    for _ in range(r):
        for idx in order:
            term = h_src.terms[idx]
            if term.pauli.is_identity:
                phase -= term.coeff * dt
            else:
                gates.extend(_pauli_exponential(term.pauli, term.coeff * dt))
    return Circuit(h_src.n, tuple(gates), phase)


def build_neel(n: int) -> Circuit:
    """X gates on every odd-index qubit: prepares |0101...>."""
    return Circuit(n, tuple(x(q) for q in range(1, n, 2)))


def build_random_ansatz(n: int, layers: int, seed: int) -> Circuit:
    """Hardware-efficient ansatz with uniformly random angles.

    ``layers`` repetitions of per-qubit RY/RZ rotations followed by a
    linear CNOT chain, plus one final rotation layer; all angles drawn
    from [0, 2pi) by a generator seeded with ``seed``.
    """
    rng = np.random.default_rng(seed)
    gates: list[Gate] = []

    def rotation_layer():
        for q in range(n):
            gates.append(ry(q, float(rng.uniform(0.0, 2.0 * math.pi))))
            gates.append(rz(q, float(rng.uniform(0.0, 2.0 * math.pi))))

    for _ in range(layers):
        rotation_layer()
        gates.extend(cnot(q, q + 1) for q in range(n - 1))
    rotation_layer()
    return Circuit(n, tuple(gates))
