"""Pauli strings, Hamiltonians, parsing, and spin-model generators.

A Pauli string is stored in symplectic form as two integer bitmasks over
qubit indices: bit q of ``x`` is set when the factor at qubit q has an X
component (X or Y), bit q of ``z`` when it has a Z component (Z or Y).
Qubit 0 is the leftmost character of the label form, e.g. ``"XZI"`` puts
X on qubit 0 and Z on qubit 1.

Commutation of two strings reduces to the parity of the symplectic inner
product ``x_a.z_b + z_a.x_b (mod 2)``; the k-commuting variant applies
the same test independently to each consecutive k-qubit segment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .errors import (
    DimensionMismatchError,
    EmptyHamiltonianError,
    EmptyPauliError,
    HamiltonianSyntaxError,
    IdentityStringError,
    InconsistentWidthError,
    InvalidCharacterError,
    InvalidKError,
    InvalidSizeError,
)

# Coefficients with |c| <= DROP_TOLERANCE are discarded at ingestion,
# after duplicate merging.
DROP_TOLERANCE = 1e-12

# char -> (x bit, z bit)
_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}


@dataclass(frozen=True)
class PauliString:
    """n-qubit tensor product of {I, X, Y, Z} in symplectic bit form."""

    n: int
    x: int
    z: int

    def __post_init__(self):
        if self.n <= 0:
            raise EmptyPauliError("PauliString needs at least one qubit")
        if self.x >> self.n or self.z >> self.n:
            raise DimensionMismatchError(
                f"bitmasks exceed {self.n} qubits (x={self.x:b}, z={self.z:b})"
            )

    @property
    def support(self) -> int:
        """Bitmask of qubits with a non-identity factor."""
        return self.x | self.z

    @property
    def is_identity(self) -> bool:
        return self.support == 0

    @property
    def is_diagonal(self) -> bool:
        """True when the string contains only I and Z factors."""
        return self.x == 0

    def factor(self, q: int) -> str:
        """Single-qubit factor at qubit q, as one of 'I', 'X', 'Y', 'Z'."""
        return "IXZY"[((self.x >> q) & 1) | (((self.z >> q) & 1) << 1)]

    @property
    def label(self) -> str:
        """String form; qubit 0 is the leftmost character."""
        return "".join(self.factor(q) for q in range(self.n))

    def __str__(self) -> str:
        return self.label

    def restrict(self, start: int, stop: int) -> "PauliString":
        """Substring on qubits [start, stop), reindexed from 0."""
        width = stop - start
        mask = (1 << width) - 1
        return PauliString(width, (self.x >> start) & mask, (self.z >> start) & mask)


def parse_pauli(text: str) -> PauliString:
    """Parse a label of I/X/Y/Z characters; leftmost character is qubit 0."""
    if not text:
        raise EmptyPauliError("empty Pauli label")
    x = z = 0
    for q, ch in enumerate(text):
        try:
            xb, zb = _BITS[ch]
        except KeyError:
            raise InvalidCharacterError(ch, q) from None
        x |= xb << q
        z |= zb << q
    return PauliString(len(text), x, z)


def _anticommute_mask(a: PauliString, b: PauliString) -> int:
    """Bitmask of qubit positions where the single-qubit factors anticommute."""
    if a.n != b.n:
        raise DimensionMismatchError(f"{a.n}-qubit vs {b.n}-qubit Pauli")
    return (a.x & b.z) ^ (a.z & b.x)


def commutes(a: PauliString, b: PauliString) -> bool:
    """Full commutation: even number of anticommuting positions."""
    return (_anticommute_mask(a, b).bit_count() & 1) == 0


def k_commutes(a: PauliString, b: PauliString, k: int) -> bool:
    """Segment-wise commutation over consecutive k-qubit blocks.

    The final segment has ``n mod k`` qubits when k does not divide n.
    """
    if a.n != b.n:
        raise DimensionMismatchError(f"{a.n}-qubit vs {b.n}-qubit Pauli")
    if not 1 <= k <= a.n:
        raise InvalidKError(f"k={k} outside [1, {a.n}]")
    anti = _anticommute_mask(a, b)
    for start in range(0, a.n, k):
        width = min(k, a.n - start)
        segment = (anti >> start) & ((1 << width) - 1)
        if segment.bit_count() & 1:
            return False
    return True


def min_support(p: PauliString) -> int:
    """Smallest qubit index with a non-identity factor (0-indexed)."""
    if p.is_identity:
        raise IdentityStringError("all-identity string has no support")
    return (p.support & -p.support).bit_length() - 1


@dataclass(frozen=True)
class PauliTerm:
    """One weighted term c * P of a Hamiltonian."""

    coeff: float
    pauli: PauliString

    def __post_init__(self):
        if not math.isfinite(self.coeff):
            raise ValueError(f"non-finite coefficient {self.coeff}")


@dataclass(frozen=True)
class Hamiltonian:
    """Ordered sum of real-weighted Pauli strings on a fixed qubit count."""

    n: int
    terms: tuple[PauliTerm, ...]

    @property
    def coefficients(self) -> tuple[float, ...]:
        return tuple(t.coeff for t in self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def to_text(self) -> str:
        """Render in the plain-text format accepted by :func:`parse_hamiltonian`."""
        lines = [str(self.n)]
        lines += [f"{t.coeff!r} {t.pauli.label}" for t in self.terms]
        return "\n".join(lines) + "\n"


def build_hamiltonian(n: int, raw_terms: Iterable[tuple[float, PauliString]]) -> Hamiltonian:
    """Normalize raw (coeff, pauli) pairs into a Hamiltonian.

    Duplicate strings are merged by coefficient summation (first occurrence
    keeps its position), then terms with |coeff| <= DROP_TOLERANCE are
    dropped.  Raises EmptyHamiltonianError when nothing survives.
    """
    merged: dict[PauliString, float] = {}
    order: list[PauliString] = []
    for coeff, pauli in raw_terms:
        if pauli.n != n:
            raise DimensionMismatchError(
                f"term {pauli.label} has {pauli.n} qubits, expected {n}"
            )
        if not math.isfinite(coeff):
            raise ValueError(f"non-finite coefficient {coeff} for {pauli.label}")
        if pauli in merged:
            merged[pauli] += coeff
        else:
            merged[pauli] = coeff
            order.append(pauli)
    terms = tuple(
        PauliTerm(merged[p], p) for p in order if abs(merged[p]) > DROP_TOLERANCE
    )
    if not terms:
        raise EmptyHamiltonianError("no terms above the drop tolerance")
    return Hamiltonian(n, terms)


def parse_hamiltonian(text: str) -> Hamiltonian:
    """Parse the plain-text Hamiltonian format.

    Line 1 holds the qubit count n; each later non-empty line is
    ``<coeff> <pauli>`` with a decimal or scientific-notation real and a
    label of exactly n characters from {I, X, Y, Z}.  ``#`` starts a
    comment; LF and CRLF are both accepted.
    """
    n = None
    raw: list[tuple[float, PauliString]] = []
    for lineno, line in enumerate(text.split("\n"), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if n is None:
            try:
                n = int(body)
            except ValueError:
                raise HamiltonianSyntaxError(lineno, f"expected qubit count, got {body!r}")
            if n <= 0:
                raise HamiltonianSyntaxError(lineno, f"qubit count must be positive, got {n}")
            continue
        fields = body.split()
        if len(fields) != 2:
            raise HamiltonianSyntaxError(
                lineno, f"expected '<coeff> <pauli>', got {body!r}"
            )
        try:
            coeff = float(fields[0])
        except ValueError:
            raise HamiltonianSyntaxError(lineno, f"bad coefficient {fields[0]!r}")
        if not math.isfinite(coeff):
            raise HamiltonianSyntaxError(lineno, f"non-finite coefficient {fields[0]!r}")
        if len(fields[1]) != n:
            raise InconsistentWidthError(
                lineno, f"Pauli string {fields[1]!r} has {len(fields[1])} characters, expected {n}"
            )
        try:
            pauli = parse_pauli(fields[1])
        except InvalidCharacterError as exc:
            raise HamiltonianSyntaxError(lineno, str(exc))
        raw.append((coeff, pauli))
    if n is None:
        raise EmptyHamiltonianError("document contains no content")
    if not raw:
        raise EmptyHamiltonianError("document declares no terms")
    return build_hamiltonian(n, raw)


def _single(n: int, q: int, kind: str) -> PauliString:
    xb, zb = _BITS[kind]
    return PauliString(n, xb << q, zb << q)


def _pair(n: int, q1: int, q2: int, kind: str) -> PauliString:
    xb, zb = _BITS[kind]
    return PauliString(n, (xb << q1) | (xb << q2), (zb << q1) | (zb << q2))


def _bonds(n: int, periodic: bool) -> list[tuple[int, int]]:
    pairs = [(i, i + 1) for i in range(n - 1)]
    if periodic:
        pairs.append((n - 1, 0))
    return pairs


def generate_tfim(n: int, j: float, h: float, periodic: bool) -> Hamiltonian:
    """Transverse-field Ising chain: j*ZZ on each bond plus h*X per qubit.

    Coefficients are taken verbatim from j and h (no implicit minus sign).
    """
    if n < 2:
        raise InvalidSizeError(f"TFIM needs n >= 2, got {n}")
    raw = [(j, _pair(n, a, b, "Z")) for a, b in _bonds(n, periodic)]
    raw += [(h, _single(n, q, "X")) for q in range(n)]
    return build_hamiltonian(n, raw)


def generate_heisenberg(n: int, j: float, h: float, periodic: bool) -> Hamiltonian:
    """Heisenberg chain: j*(XX + YY + ZZ) on each bond plus h*Z per qubit."""
    if n < 2:
        raise InvalidSizeError(f"Heisenberg model needs n >= 2, got {n}")
    raw = []
    for a, b in _bonds(n, periodic):
        raw += [(j, _pair(n, a, b, kind)) for kind in "XYZ"]
    raw += [(h, _single(n, q, "Z")) for q in range(n)]
    return build_hamiltonian(n, raw)
