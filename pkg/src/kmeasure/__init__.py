"""Observable estimation for Hamiltonian simulation.

Pipeline: parse or generate a Pauli-sum Hamiltonian, partition its terms
into k-commuting groups by sorted insertion, synthesize one Clifford
measurement circuit per group, split a shot budget across the groups,
and aggregate parity-weighted outcome statistics into an estimate of
<H> - benchmarked against an exact statevector oracle.
"""

from .clifford import (
    CliffordCircuit,
    Gate,
    SignedPauli,
    circuit_unitary,
    cnot,
    conjugate_circuit,
    conjugate_gate,
    h,
    s,
    sdg,
    x,
)
from .diagonalize import DiagonalizedGroup, diagonalize_group, measurement_depth
from .estimator import (
    ErrorStatistic,
    EstimationConfig,
    EstimationMode,
    EstimationReport,
    estimate,
    repeated_error,
)
from .grouping import CommutingGroup, GroupingResult, sorted_insertion_grouping
from .oracle import exact_evolve, exact_expectation
from .pauli import (
    Hamiltonian,
    PauliString,
    PauliTerm,
    build_hamiltonian,
    commutes,
    generate_heisenberg,
    generate_tfim,
    k_commutes,
    min_support,
    parse_hamiltonian,
    parse_pauli,
)
from .shots import (
    Bin,
    ShotPlan,
    WeightingScheme,
    allocate,
    bin_plan,
    group_statistic,
    shots_for_precision,
)
from .simulator import (
    Circuit,
    SampleCounts,
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

__version__ = "0.1.0"
