"""Ground-truth expectation values and exact time evolution at desk scale.

Expectation values apply each Pauli string directly to the amplitude
vector (no dense matrix, so up to 20 qubits); time evolution uses a
dense eigendecomposition and is limited to 10 qubits.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError, TooLargeError
from .pauli import Hamiltonian, PauliString
from .simulator import StateVector

MAX_EXPECTATION_QUBITS = 20
MAX_EVOLVE_QUBITS = 10


def index_mask(qubit_mask: int, n: int) -> int:
    """Map a qubit-indexed bitmask to basis-index bit positions (qubit 0 = MSB)."""
    out = 0
    for q in range(n):
        if (qubit_mask >> q) & 1:
            out |= 1 << (n - 1 - q)
    return out


def bit_parity(values: np.ndarray, mask: int) -> np.ndarray:
    """Parity of the set bits of ``values & mask`` as 0/1 ints."""
    return (np.bitwise_count(values & mask) & 1).astype(np.int64)


def apply_pauli(p: PauliString, amplitudes: np.ndarray) -> np.ndarray:
    """P |psi> computed amplitude-wise.

    P maps |b> to i^{#Y} (-1)^{b . z} |b ^ x|, so the output amplitude at
    b' = b ^ x picks up the phase evaluated at the source index b.
    """
    n = p.n
    dim = amplitudes.shape[0]
    xm = index_mask(p.x, n)
    zm = index_mask(p.z, n)
    y_count = (p.x & p.z).bit_count()
    src = np.arange(dim, dtype=np.int64) ^ xm
    phase = (1j) ** (y_count % 4) * (1.0 - 2.0 * bit_parity(src, zm))
    return phase * amplitudes[src]


def exact_expectation(h: Hamiltonian, state: StateVector) -> float:
    """<psi| H |psi> = sum_i c_i <psi| P_i |psi>, Pauli-wise."""
    if h.n != state.n:
        raise DimensionMismatchError(f"{h.n}-qubit Hamiltonian, {state.n}-qubit state")
    if h.n > MAX_EXPECTATION_QUBITS:
        raise TooLargeError(f"{h.n} qubits exceed the {MAX_EXPECTATION_QUBITS}-qubit guard")
    amps = state.amplitudes
    value = 0.0 + 0.0j
    for term in h.terms:
        value += term.coeff * np.vdot(amps, apply_pauli(term.pauli, amps))
    if abs(value.imag) > 1e-9:
        raise ValueError(f"imaginary residual {value.imag:.3e} in a Hermitian expectation")
    return float(value.real)


def dense_matrix(h: Hamiltonian) -> np.ndarray:
    """Dense 2^n x 2^n matrix of the Hamiltonian."""
    if h.n > MAX_EVOLVE_QUBITS:
        raise TooLargeError(f"{h.n} qubits exceed the {MAX_EVOLVE_QUBITS}-qubit guard")
    dim = 1 << h.n
    mat = np.zeros((dim, dim), dtype=complex)
    cols = np.arange(dim, dtype=np.int64)
    for term in h.terms:
        xm = index_mask(term.pauli.x, h.n)
        zm = index_mask(term.pauli.z, h.n)
        y_count = (term.pauli.x & term.pauli.z).bit_count()
        phase = (1j) ** (y_count % 4) * (1.0 - 2.0 * bit_parity(cols, zm))
        mat[cols ^ xm, cols] += term.coeff * phase
    return mat


def exact_evolve(h: Hamiltonian, state: StateVector, t: float) -> StateVector:
    """exp(-i H t) |psi> via spectral decomposition."""
    if h.n != state.n:
        raise DimensionMismatchError(f"{h.n}-qubit Hamiltonian, {state.n}-qubit state")
    if h.n > MAX_EVOLVE_QUBITS:
        raise TooLargeError(f"{h.n} qubits exceed the {MAX_EVOLVE_QUBITS}-qubit guard")
    mat = dense_matrix(h)
    hermiticity = np.max(np.abs(mat - mat.conj().T))
    if hermiticity > 1e-12:
        raise ValueError(f"Hamiltonian matrix deviates from Hermitian by {hermiticity:.3e}")
    eigvals, eigvecs = np.linalg.eigh(mat)
    evolved = eigvecs @ (np.exp(-1j * eigvals * t) * (eigvecs.conj().T @ state.amplitudes))
    norm = np.linalg.norm(evolved)
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"evolution broke the state norm by {abs(norm - 1.0):.3e}")
    return StateVector(h.n, evolved)
