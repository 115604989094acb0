import math

import numpy as np
import pytest

from kmeasure.clifford import cnot, h
from kmeasure.errors import InvalidShotsError, InvalidStepsError, TooLargeError
from kmeasure.oracle import dense_matrix
from kmeasure.pauli import build_hamiltonian, generate_tfim, parse_pauli
from kmeasure.simulator import (
    Circuit,
    StateVector,
    apply,
    build_neel,
    build_random_ansatz,
    build_trotter,
    exact_distribution,
    rx,
    ry,
    rz,
    sample,
    zero_state,
)

from conftest import random_clifford_gates
from oracles import dense_hamiltonian, dense_unitary, taylor_evolve


def circuit_matrix(circ: Circuit) -> np.ndarray:
    """Unitary by applying the circuit to every basis state."""
    dim = 1 << circ.n
    cols = []
    for b in range(dim):
        amps = np.zeros(dim, dtype=complex)
        amps[b] = 1.0
        cols.append(apply(StateVector(circ.n, amps), circ).amplitudes)
    return np.array(cols).T


def test_hadamard_superposition():
    out = apply(zero_state(1), Circuit(1, (h(0),)))
    assert np.allclose(out.amplitudes, np.array([1, 1]) / math.sqrt(2))


def test_rz_zero_is_identity():
    state = apply(zero_state(2), Circuit(2, (h(0), cnot(0, 1))))
    out = apply(state, Circuit(2, (rz(0, 0.0), rz(1, 0.0))))
    assert np.allclose(out.amplitudes, state.amplitudes)


def test_rx_pi_flips_with_global_phase():
    out = apply(zero_state(1), Circuit(1, (rx(0, math.pi),)))
    assert np.allclose(out.amplitudes, [0.0, -1.0j])
    assert np.allclose(out.probabilities(), [0.0, 1.0])


def test_gates_match_dense_oracle(rng):
    for _ in range(100):
        n = int(rng.integers(1, 5))
        gates = random_clifford_gates(n, int(rng.integers(0, 8)), rng)
        for q in range(n):
            gates.append(rx(q, float(rng.uniform(0, 2 * math.pi))))
            gates.append(ry(q, float(rng.uniform(0, 2 * math.pi))))
            gates.append(rz(q, float(rng.uniform(0, 2 * math.pi))))
        rng.shuffle(gates)
        circ = Circuit(n, tuple(gates))
        assert np.max(np.abs(circuit_matrix(circ) - dense_unitary(gates, n))) < 1e-10


def test_norm_preserved_long_circuit(rng):
    n = 8
    gates = random_clifford_gates(n, 500, rng)
    gates += [ry(int(rng.integers(0, n)), float(rng.uniform(0, 7))) for _ in range(500)]
    rng.shuffle(gates)
    out = apply(zero_state(n), Circuit(n, tuple(gates)))
    assert abs(np.linalg.norm(out.amplitudes) - 1.0) < 1e-9


def test_state_guard():
    with pytest.raises(TooLargeError):
        zero_state(25)


class TestTrotter:
    def test_single_term_exact(self):
        h_src = build_hamiltonian(1, [(1.0, parse_pauli("X"))])
        circ = build_trotter(h_src, 0.3, 1)
        sx = np.array([[0, 1], [1, 0]], dtype=complex)
        expected = (
            math.cos(0.3) * np.eye(2) - 1j * math.sin(0.3) * sx
        )
        assert np.max(np.abs(circuit_matrix(circ) - expected)) < 1e-10

    def test_t_zero_identity(self):
        h_src = generate_tfim(3, 1.0, 1.0, False)
        circ = build_trotter(h_src, 0.0, 2)
        assert np.max(np.abs(circuit_matrix(circ) - np.eye(8))) < 1e-12

    def test_commuting_terms_no_splitting_error(self, rng):
        # All-diagonal Hamiltonians commute term-wise; one step is exact.
        for _ in range(10):
            n = int(rng.integers(2, 6))
            labels = set()
            while len(labels) < min(4, 2**n - 1):
                label = "".join(rng.choice(["I", "Z"]) for _ in range(n))
                if label != "I" * n:
                    labels.add(label)
            h_src = build_hamiltonian(
                n, [(float(rng.uniform(-1, 1)), parse_pauli(l)) for l in sorted(labels)]
            )
            circ = build_trotter(h_src, 0.7, 1)
            psi0 = np.ones(1 << n, dtype=complex) / math.sqrt(1 << n)
            got = apply(StateVector(n, psi0.copy()), circ).amplitudes
            want = taylor_evolve(dense_hamiltonian(h_src), psi0, 0.7)
            assert np.max(np.abs(got - want)) < 1e-9

    def test_identity_term_contributes_global_phase(self):
        h_src = build_hamiltonian(
            2, [(0.5, parse_pauli("II")), (1.0, parse_pauli("ZZ"))]
        )
        circ = build_trotter(h_src, 0.2, 1)
        assert circ.global_phase == pytest.approx(-0.1)
        want = taylor_evolve(dense_hamiltonian(h_src), np.eye(4, dtype=complex)[0], 0.2)
        got = apply(zero_state(2), circ).amplitudes
        assert np.max(np.abs(got - want)) < 1e-10

    def test_first_order_error_halves_when_r_doubles(self, rng):
        # Unitary-level check in the asymptotic regime.
        for _ in range(5):
            n = int(rng.integers(2, 5))
            labels = set()
            while len(labels) < 4:
                label = "".join(rng.choice(list("IXYZ")) for _ in range(n))
                if label != "I" * n:
                    labels.add(label)
            h_src = build_hamiltonian(
                n, [(float(rng.uniform(-1, 1)), parse_pauli(l)) for l in sorted(labels)]
            )
            mat = dense_hamiltonian(h_src)
            psi0 = np.linalg.qr(
                rng.normal(size=(1 << n, 1)) + 1j * rng.normal(size=(1 << n, 1))
            )[0][:, 0]
            want = taylor_evolve(mat, psi0, 0.4)

            def err(r):
                got = apply(StateVector(n, psi0.copy()), build_trotter(h_src, 0.4, r)).amplitudes
                return np.linalg.norm(got - want)

            e8, e16 = err(8), err(16)
            if e16 < 1e-12:
                continue  # commuting instance: no splitting error to scale
            assert 1.7 <= e8 / e16 <= 2.3

    def test_order_permutation(self):
        h_src = generate_tfim(3, 1.0, 0.5, False)
        order = list(reversed(range(len(h_src.terms))))
        circ = build_trotter(h_src, 0.1, 1, order=order)
        reversed_h = build_hamiltonian(
            3, [(t.coeff, t.pauli) for t in reversed(h_src.terms)]
        )
        same = build_trotter(reversed_h, 0.1, 1)
        assert np.max(np.abs(circuit_matrix(circ) - circuit_matrix(same))) < 1e-12

    def test_bad_order_rejected(self):
        h_src = generate_tfim(3, 1.0, 0.5, False)
        with pytest.raises(ValueError):
            build_trotter(h_src, 0.1, 1, order=[0, 0, 1])

    def test_invalid_steps(self):
        with pytest.raises(InvalidStepsError):
            build_trotter(generate_tfim(2, 1, 1, False), 0.1, 0)


class TestBuilders:
    def test_neel_four_qubits(self):
        out = apply(zero_state(4), build_neel(4))
        assert np.argmax(np.abs(out.amplitudes)) == 0b0101

    def test_neel_single_qubit(self):
        circ = build_neel(1)
        assert circ.gates == ()

    def test_neel_two_qubits(self):
        assert len(build_neel(2).gates) == 1

    def test_ansatz_gate_counts(self):
        assert len(build_random_ansatz(3, 0, 1).gates) == 6
        assert len(build_random_ansatz(4, 2, 1).gates) == 30

    def test_ansatz_deterministic(self):
        a = build_random_ansatz(5, 3, 99)
        b = build_random_ansatz(5, 3, 99)
        assert a == b
        c = build_random_ansatz(5, 3, 100)
        assert a != c


class TestSampling:
    def test_basis_state_deterministic(self):
        state = apply(zero_state(2), build_neel(2))
        counts = sample(state, 250, np.random.default_rng(0))
        assert counts.counts == {0b01: 250}
        assert counts.bitstring(0b01) == "01"

    def test_uniform_superposition_frequencies(self):
        state = apply(zero_state(1), Circuit(1, (h(0),)))
        counts = sample(state, 10**6, np.random.default_rng(12345))
        frac = counts.counts[0] / 10**6
        assert 0.497 <= frac <= 0.503  # 5-sigma band around 1/2

    def test_invalid_shots(self):
        with pytest.raises(InvalidShotsError):
            sample(zero_state(1), 0, np.random.default_rng(0))

    def test_frequencies_converge_to_exact(self, rng):
        state = apply(zero_state(3), build_random_ansatz(3, 2, 7))
        exact = exact_distribution(state)
        last_tv = 1.0
        for shots in (100, 10000, 1000000):
            counts = sample(state, shots, np.random.default_rng(99))
            tv = 0.5 * sum(
                abs(counts.counts.get(b, 0) / shots - exact.get(b, 0.0))
                for b in set(exact) | set(counts.counts)
            )
            assert tv < last_tv + 0.02
            last_tv = tv
        assert last_tv < 0.005


class TestExactDistribution:
    def test_zero_state(self):
        assert exact_distribution(zero_state(1)) == {0: 1.0}

    def test_plus_state(self):
        dist = exact_distribution(apply(zero_state(1), Circuit(1, (h(0),))))
        assert dist[0] == pytest.approx(0.5)
        assert dist[1] == pytest.approx(0.5)

    def test_bell_state(self):
        dist = exact_distribution(apply(zero_state(2), Circuit(2, (h(0), cnot(0, 1)))))
        assert set(dist) == {0b00, 0b11}
        assert dist[0] == pytest.approx(0.5)

    def test_sums_to_one(self, rng):
        state = apply(zero_state(4), build_random_ansatz(4, 2, 3))
        assert sum(exact_distribution(state).values()) == pytest.approx(1.0, abs=1e-9)
