"""Clifford gates, circuits, and exact conjugation of signed Pauli strings.

Conjugation computes U P U† for a gate unitary U via symplectic bit
updates plus a single +/-1 sign (a Hermitian Pauli conjugated by a
Clifford stays Hermitian, so +/-i never appears):

    H(q):       X <-> Z, Y -> -Y
    S(q):       X -> Y, Y -> -X, Z -> Z
    SDG(q):     X -> -Y, Y -> X, Z -> Z
    X(q):       Z -> -Z, Y -> -Y
    CNOT(c,t):  X_c -> X_c X_t, Z_t -> Z_c Z_t; sign flips when
                x_c & z_t & (x_t ^ z_c ^ 1)

Gates in a circuit are applied left-to-right to the state, so the total
unitary is (last gate) ... (first gate).

Basis-state index convention (used by the dense unitary builder and
everywhere else in the package): qubit 0 is the most significant bit,
matching the left-to-right label rendering of Pauli strings.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DimensionMismatchError, IndexOutOfRangeError, TooLargeError
from .pauli import PauliString

CLIFFORD_KINDS = ("H", "S", "SDG", "X", "CNOT")
ROTATION_KINDS = ("RX", "RY", "RZ")

# Dense-unitary memory guard: 2^12 x 2^12 complex is ~256 MB of flops away
# from unusable; anything beyond is refused.
MAX_UNITARY_QUBITS = 12


@dataclass(frozen=True)
class Gate:
    """One gate application; ``control`` is used by CNOT, ``angle`` by rotations."""

    kind: str
    qubit: int
    control: Optional[int] = None
    angle: Optional[float] = None

    def serialize(self) -> str:
        """Debug form: ``H 3``, ``CNOT 0 4`` (control then target), ``RX 0 0.125``."""
        if self.kind == "CNOT":
            return f"CNOT {self.control} {self.qubit}"
        if self.angle is not None:
            return f"{self.kind} {self.qubit} {self.angle!r}"
        return f"{self.kind} {self.qubit}"

    @property
    def qubits(self) -> tuple[int, ...]:
        if self.control is None:
            return (self.qubit,)
        return (self.control, self.qubit)


def h(q: int) -> Gate:
    return Gate("H", q)


def s(q: int) -> Gate:
    return Gate("S", q)


def sdg(q: int) -> Gate:
    return Gate("SDG", q)


def x(q: int) -> Gate:
    return Gate("X", q)


def cnot(control: int, target: int) -> Gate:
    return Gate("CNOT", target, control=control)


def _check_gate(gate: Gate, n: int, allowed: tuple[str, ...]) -> None:
    if gate.kind not in allowed:
        raise ValueError(f"unsupported gate kind {gate.kind!r}")
    for q in gate.qubits:
        if not 0 <= q < n:
            raise IndexOutOfRangeError(f"gate {gate.serialize()} outside [0, {n})")
    if gate.kind == "CNOT" and gate.control == gate.qubit:
        raise IndexOutOfRangeError(f"CNOT control equals target ({gate.qubit})")


@dataclass(frozen=True)
class CliffordCircuit:
    """Ordered H/S/SDG/X/CNOT gates on n qubits, applied left-to-right."""

    n: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        for gate in self.gates:
            _check_gate(gate, self.n, CLIFFORD_KINDS)

    def serialize(self) -> str:
        return "\n".join(g.serialize() for g in self.gates)

    def inverse(self) -> "CliffordCircuit":
        """Reversed gate order with S <-> SDG (H, X, CNOT are involutions)."""
        swap = {"S": "SDG", "SDG": "S"}
        inv = tuple(
            Gate(swap.get(g.kind, g.kind), g.qubit, g.control) for g in reversed(self.gates)
        )
        return CliffordCircuit(self.n, inv)


@dataclass(frozen=True)
class SignedPauli:
    """A Pauli string with an exact +/-1 orientation."""

    sign: int
    pauli: PauliString

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")


def conjugate_gate(p: SignedPauli, gate: Gate) -> SignedPauli:
    """Image of p under conjugation by a single Clifford gate."""
    n = p.pauli.n
    _check_gate(gate, n, CLIFFORD_KINDS)
    xm, zm = p.pauli.x, p.pauli.z
    sign = p.sign
    if gate.kind == "CNOT":
        cb, tb = 1 << gate.control, 1 << gate.qubit
        xc, zc = bool(xm & cb), bool(zm & cb)
        xt, zt = bool(xm & tb), bool(zm & tb)
        if xc and zt and (xt == zc):
            sign = -sign
        if xc:
            xm ^= tb
        if zt:
            zm ^= cb
        return SignedPauli(sign, PauliString(n, xm, zm))
    qb = 1 << gate.qubit
    xq, zq = bool(xm & qb), bool(zm & qb)
    if gate.kind == "H":
        if xq and zq:
            sign = -sign
        if xq != zq:
            xm ^= qb
            zm ^= qb
    elif gate.kind == "S":
        if xq and zq:
            sign = -sign
        if xq:
            zm ^= qb
    elif gate.kind == "SDG":
        if xq and not zq:
            sign = -sign
        if xq:
            zm ^= qb
    elif gate.kind == "X":
        if zq:
            sign = -sign
    return SignedPauli(sign, PauliString(n, xm, zm))


def conjugate_circuit(p: SignedPauli, circuit: CliffordCircuit) -> SignedPauli:
    """Image of p under the full circuit, folding gates in application order."""
    if p.pauli.n != circuit.n:
        raise DimensionMismatchError(
            f"{p.pauli.n}-qubit Pauli through {circuit.n}-qubit circuit"
        )
    for gate in circuit.gates:
        p = conjugate_gate(p, gate)
    return p


_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)
_S = np.diag([1.0, 1.0j])
_SDG = np.diag([1.0, -1.0j])
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_1Q = {"H": _H, "S": _S, "SDG": _SDG, "X": _X}


def gate_unitary(gate: Gate, n: int) -> np.ndarray:
    """Dense 2^n x 2^n matrix of one gate under the MSB-first bit ordering."""
    if gate.kind == "CNOT":
        dim = 1 << n
        rows = np.arange(dim)
        cpos, tpos = n - 1 - gate.control, n - 1 - gate.qubit
        flipped = rows ^ (((rows >> cpos) & 1) << tpos)
        mat = np.zeros((dim, dim), dtype=complex)
        mat[flipped, rows] = 1.0
        return mat
    left = np.eye(1 << gate.qubit, dtype=complex)
    right = np.eye(1 << (n - gate.qubit - 1), dtype=complex)
    return np.kron(np.kron(left, _1Q[gate.kind]), right)


def circuit_unitary(circuit: CliffordCircuit) -> np.ndarray:
    """Exact unitary product of the circuit's gates in application order."""
    if circuit.n > MAX_UNITARY_QUBITS:
        raise TooLargeError(
            f"dense unitary for {circuit.n} qubits exceeds the {MAX_UNITARY_QUBITS}-qubit guard"
        )
    u = np.eye(1 << circuit.n, dtype=complex)
    for gate in circuit.gates:
        u = gate_unitary(gate, circuit.n) @ u
    return u


def pauli_unitary(p: PauliString) -> np.ndarray:
    """Dense matrix of a Pauli string (qubit 0 as the most significant bit)."""
    if p.n > MAX_UNITARY_QUBITS:
        raise TooLargeError(f"dense Pauli for {p.n} qubits exceeds the guard")
    mats = {
        "I": np.eye(2, dtype=complex),
        "X": _X,
        "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
        "Z": np.diag([1.0, -1.0]).astype(complex),
    }
    out = np.array([[1.0 + 0j]])
    for q in range(p.n):
        out = np.kron(out, mats[p.factor(q)])
    return out
