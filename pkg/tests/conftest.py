import sys
from pathlib import Path

import numpy as np
import pytest

# Make the sibling oracles module importable from every test file.
sys.path.insert(0, str(Path(__file__).parent))

from kmeasure.clifford import CliffordCircuit, Gate, SignedPauli, cnot, conjugate_circuit
from kmeasure.pauli import PauliString


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_pauli(n: int, rng: np.random.Generator) -> PauliString:
    return PauliString(n, int(rng.integers(0, 1 << n)), int(rng.integers(0, 1 << n)))


def random_clifford_gates(n: int, count: int, rng: np.random.Generator) -> list[Gate]:
    kinds = ["H", "S", "SDG", "X", "CNOT"]
    gates: list[Gate] = []
    while len(gates) < count:
        kind = kinds[rng.integers(0, len(kinds))]
        if kind == "CNOT":
            if n < 2:
                continue
            c, t = rng.choice(n, size=2, replace=False)
            gates.append(cnot(int(c), int(t)))
        else:
            gates.append(Gate(kind, int(rng.integers(0, n))))
    return gates


def random_commuting_members(
    n: int, k: int, size: int, rng: np.random.Generator
) -> list[PauliString]:
    """Pairwise k-commuting strings built by construction.

    Random diagonal strings are pulled back per segment through the
    inverse of one shared random local Clifford, which preserves local
    commutation exactly.
    """
    segments = [(s, min(s + k, n)) for s in range(0, n, k)]
    inverses = [
        CliffordCircuit(e - s, tuple(random_clifford_gates(e - s, int(rng.integers(0, 14)), rng))).inverse()
        for s, e in segments
    ]
    members = []
    for _ in range(size):
        x = z = 0
        for (s, e), inv in zip(segments, inverses):
            width = e - s
            local = PauliString(width, 0, int(rng.integers(0, 1 << width)))
            moved = conjugate_circuit(SignedPauli(1, local), inv).pauli
            x |= moved.x << s
            z |= moved.z << s
        members.append(PauliString(n, x, z))
    return members
