"""Exact Pauli-string algebra in the binary symplectic representation.

A string is stored as a pair of bit masks (X part, Z part) together with a
phase that is an exact power of i.  Internally an n-qubit string is

    i**e * prod_j X_j^{x_j} Z_j^{z_j}

with X applied before Z on each site, so the letter Y contributes x=z=1 and
one factor of i (Y = i X Z).  Qubit 0 is the leftmost letter; bit j of a
mask refers to qubit j.  Phases never leave {1, i, -1, -i}.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce

import numpy as np

_MAX_QUBITS = 64

_PHASE_VALUES = (1, 1j, -1, -1j)
_PHASE_PREFIX = {0: "", 1: "i", 2: "-", 3: "-i"}
_PREFIXES = [("-i", 3), ("+i", 1), ("-", 2), ("+", 0), ("i", 1)]

_MATS = {
    "1": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class PauliError(ValueError):
    """Malformed Pauli text or incompatible operands."""


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-qubit Paulis with an exact phase.

    Attributes:
        n: qubit count (letters in the string).
        x: X-part bit mask, bit j set iff qubit j carries X or Y.
        z: Z-part bit mask, bit j set iff qubit j carries Z or Y.
        e: phase exponent, the operator equals i**e * X^x Z^z.
    """

    n: int
    x: int
    z: int
    e: int

    def __post_init__(self):
        if not 1 <= self.n <= _MAX_QUBITS:
            raise PauliError(f"qubit count {self.n} outside 1..{_MAX_QUBITS}")
        mask = (1 << self.n) - 1
        if self.x & ~mask or self.z & ~mask:
            raise PauliError("mask has bits beyond the qubit count")
        if not 0 <= self.e < 4:
            raise PauliError("phase exponent must be reduced mod 4")

    # -- construction ------------------------------------------------------

    @staticmethod
    def identity(n: int) -> "PauliString":
        return PauliString(n, 0, 0, 0)

    @staticmethod
    def from_letters(n: int, letters: dict[int, str], sign: int = 1) -> "PauliString":
        """Build a string from a {qubit: letter} map, identity elsewhere."""
        x = z = 0
        e = 0 if sign == 1 else 2
        for j, letter in letters.items():
            if not 0 <= j < n:
                raise PauliError(f"qubit index {j} out of range for n={n}")
            letter = letter.upper()
            if letter in ("1", "I"):
                continue
            if letter in ("X", "Y"):
                x |= 1 << j
            if letter in ("Z", "Y"):
                z |= 1 << j
            if letter == "Y":
                e = (e + 1) % 4
            if letter not in "XYZ":
                raise PauliError(f"unknown Pauli letter {letter!r}")
        return PauliString(n, x, z, e)

    # -- presentation ------------------------------------------------------

    @property
    def phase(self) -> complex:
        """Scalar in front of the letter string, one of +1, +i, -1, -i."""
        k = (self.e - bin(self.x & self.z).count("1")) % 4
        return _PHASE_VALUES[k]

    def letter(self, j: int) -> str:
        xb = (self.x >> j) & 1
        zb = (self.z >> j) & 1
        return "1XZY"[xb + 2 * zb] if xb + 2 * zb != 3 else "Y"

    @property
    def support(self) -> tuple[int, ...]:
        """Qubits carrying a non-identity letter."""
        return tuple(j for j in range(self.n) if (self.x | self.z) >> j & 1)

    def __str__(self) -> str:
        k = (self.e - bin(self.x & self.z).count("1")) % 4
        return _PHASE_PREFIX[k] + "".join(self.letter(j) for j in range(self.n))

    def __repr__(self) -> str:
        return f"PauliString({str(self)!r})"

    # -- algebra -----------------------------------------------------------

    @property
    def is_hermitian(self) -> bool:
        return self.e % 2 == bin(self.x & self.z).count("1") % 2

    @property
    def is_identity_letters(self) -> bool:
        return self.x == 0 and self.z == 0

    def __mul__(self, other: "PauliString") -> "PauliString":
        return multiply(self, other)

    def __neg__(self) -> "PauliString":
        return PauliString(self.n, self.x, self.z, (self.e + 2) % 4)

    def to_matrix(self) -> np.ndarray:
        """Dense 2^n x 2^n matrix, for oracle checks at small n."""
        if self.n > 12:
            raise PauliError("dense matrix only supported for n <= 12")
        mats = [_MATS[self.letter(j)] for j in range(self.n)]
        return self.phase * reduce(np.kron, mats)


def parse(text: str) -> PauliString:
    """Parse text like "XZ1Z" or "-YXY1" into a PauliString.

    Accepts an optional sign prefix (+, -, i, -i, +i) followed by letters
    from {1, I, X, Y, Z}.  "1" and "I" both denote the identity; the
    canonical output of ``str`` uses "1".
    """
    body, e0 = text, 0
    for prefix, e in _PREFIXES:
        if text.startswith(prefix):
            body, e0 = text[len(prefix):], e
            break
    if not body:
        raise PauliError(f"no Pauli letters in {text!r}")
    x = z = 0
    e = e0
    for pos, ch in enumerate(body):
        c = ch.upper()
        if c in ("1", "I"):
            continue
        elif c == "X":
            x |= 1 << pos
        elif c == "Z":
            z |= 1 << pos
        elif c == "Y":
            x |= 1 << pos
            z |= 1 << pos
            e = (e + 1) % 4
        else:
            raise PauliError(f"bad Pauli symbol {ch!r} at position {pos} in {text!r}")
    return PauliString(len(body), x, z, e)


def format_pauli(p: PauliString) -> str:
    """Canonical text form; inverse of parse on canonical strings."""
    return str(p)


def multiply(p: PauliString, q: PauliString) -> PauliString:
    """Exact product p*q with symplectic phase bookkeeping."""
    if p.n != q.n:
        raise PauliError(f"qubit count mismatch: {p.n} vs {q.n}")
    # Commuting Z^z1 past X^x2 produces (-1)^|z1 & x2|.
    swaps = bin(p.z & q.x).count("1")
    e = (p.e + q.e + 2 * swaps) % 4
    return PauliString(p.n, p.x ^ q.x, p.z ^ q.z, e)


def symplectic_inner(p: PauliString, q: PauliString) -> int:
    """Number of sites with conflicting non-identity letters, mod 2."""
    if p.n != q.n:
        raise PauliError(f"qubit count mismatch: {p.n} vs {q.n}")
    return (bin(p.x & q.z).count("1") + bin(p.z & q.x).count("1")) % 2


def commutes(p: PauliString, q: PauliString) -> bool:
    """True iff p and q commute (even symplectic inner product)."""
    return symplectic_inner(p, q) == 0


def anticommutes(p: PauliString, q: PauliString) -> bool:
    return symplectic_inner(p, q) == 1


def pairwise_anticommuting(paulis: list[PauliString]) -> bool:
    """True iff every pair in the list anticommutes.

    All strings must be hermitian (observables with eigenvalues +-1).
    """
    for p in paulis:
        if not p.is_hermitian:
            raise PauliError(f"{p} is not hermitian")
    return all(
        anticommutes(p, q) for p, q in itertools.combinations(paulis, 2)
    )
