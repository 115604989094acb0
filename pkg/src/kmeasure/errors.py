"""Exception types raised across the package.

Everything derives from :class:`KmeasureError` so callers can catch the
whole family; most are also ``ValueError`` subclasses since they signal
bad inputs rather than internal faults.
"""


class KmeasureError(Exception):
    """Base class for all package errors."""


class InvalidCharacterError(KmeasureError, ValueError):
    """A Pauli label contains a character outside {I, X, Y, Z}."""

    def __init__(self, char: str, position: int):
        self.char = char
        self.position = position
        super().__init__(f"invalid Pauli character {char!r} at position {position}")


class EmptyPauliError(KmeasureError, ValueError):
    """A Pauli label was empty."""


class DimensionMismatchError(KmeasureError, ValueError):
    """Operands act on different qubit counts."""


class InvalidKError(KmeasureError, ValueError):
    """Segment size k outside [1, n]."""


class HamiltonianSyntaxError(KmeasureError, ValueError):
    """A Hamiltonian text document failed to parse."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class InconsistentWidthError(HamiltonianSyntaxError):
    """A term's Pauli string length disagrees with the declared qubit count."""


class EmptyHamiltonianError(KmeasureError, ValueError):
    """No terms survived ingestion."""


class InvalidSizeError(KmeasureError, ValueError):
    """Model generator called with an unsupported qubit count."""


class IdentityStringError(KmeasureError, ValueError):
    """Operation requires a non-identity Pauli string."""


class IndexOutOfRangeError(KmeasureError, ValueError):
    """Gate acts on a qubit index outside the circuit width."""


class TooLargeError(KmeasureError, ValueError):
    """Dense computation requested beyond the configured memory guard."""


class NotCommutingGroupError(KmeasureError, ValueError):
    """Group members are not pairwise k-commuting."""


class SynthesisError(KmeasureError, RuntimeError):
    """Both primary and fallback diagonalization failed; indicates a bug."""


class EmptyGroupError(KmeasureError, ValueError):
    """Group statistic requested for an empty coefficient list."""


class InvalidEpsilonError(KmeasureError, ValueError):
    """Target precision must be positive."""


class BudgetTooSmallError(KmeasureError, ValueError):
    """Shot budget below the number of groups."""


class DegenerateWeightsError(KmeasureError, ValueError):
    """Allocation weights are negative or sum to zero."""


class InvalidFractionError(KmeasureError, ValueError):
    """Bin fraction outside (0, 1]."""


class InvalidStepsError(KmeasureError, ValueError):
    """Trotter step count must be a positive integer."""


class InvalidShotsError(KmeasureError, ValueError):
    """Shot count must be a positive integer."""


class ConfigError(KmeasureError, ValueError):
    """Benchmark/CLI configuration is invalid (exit code 2)."""
