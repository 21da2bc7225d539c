"""Phase-exact Pauli-product algebra in the binary representation.

A Pauli product on n qubits is a length-2n bit vector [a1 b1 a2 b2 ...];
qubit j carries X^a_j Z^b_j, so I=00, X=10, Z=01 and Y=11.  The symbol Y
names the operator XZ (which is -i sigma_y), not sigma_y itself; all
phase bookkeeping below relies on that convention.  Global phases are
tracked exactly as integer exponents of i, mod 4.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gf2
from .gf2 import BitVec

_CHAR_TO_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_BITS_TO_CHAR = {v: k for k, v in _CHAR_TO_BITS.items()}


class PauliParseError(ValueError):
    """Raised for a non-IXYZ symbol; carries the offending position."""

    def __init__(self, text: str, position: int):
        self.position = position
        super().__init__(f"invalid Pauli symbol {text[position]!r} at position {position}")


def parse_pauli(text: str) -> BitVec:
    """Parse an uppercase IXYZ string into the interleaved bit vector."""
    v = np.zeros(2 * len(text), dtype=np.uint8)
    for j, ch in enumerate(text):
        if ch not in _CHAR_TO_BITS:
            raise PauliParseError(text, j)
        v[2 * j], v[2 * j + 1] = _CHAR_TO_BITS[ch]
    return v


def format_pauli(v: BitVec) -> str:
    """Inverse of parse_pauli."""
    v = np.asarray(v)
    if v.ndim != 1 or v.shape[0] % 2:
        raise ValueError(f"not an interleaved Pauli vector: shape {v.shape}")
    return "".join(_BITS_TO_CHAR[(int(v[2 * j]), int(v[2 * j + 1]))] for j in range(v.shape[0] // 2))


def n_qubits(v: BitVec) -> int:
    return np.asarray(v).shape[0] // 2


def weight(v: BitVec) -> int:
    """Number of qubits acted on non-trivially."""
    v = np.asarray(v)
    return int(np.count_nonzero(v[0::2] | v[1::2]))


def support(v: BitVec) -> frozenset[int]:
    """Qubit positions (0-based) where the Pauli is not the identity."""
    v = np.asarray(v)
    return frozenset(int(j) for j in np.nonzero(v[0::2] | v[1::2])[0])


def y_phase_exponent(v: BitVec) -> int:
    """Exponent of i contributed by the Y positions: their count mod 4."""
    v = np.asarray(v)
    return int(np.count_nonzero(v[0::2] & v[1::2])) % 4


def commutes(s: BitVec, t: BitVec) -> bool:
    """True iff the two Pauli products commute."""
    return gf2.symplectic_product(s, t, form="full") == 0


@dataclass(frozen=True, eq=False)
class PhasedPauli:
    """A Pauli product together with a global phase i**phase_exp."""

    vector: BitVec
    phase_exp: int = 0

    def __post_init__(self):
        object.__setattr__(self, "vector", gf2.as_bits(self.vector))
        object.__setattr__(self, "phase_exp", int(self.phase_exp) % 4)

    @classmethod
    def from_string(cls, text: str, phase_exp: int = 0) -> "PhasedPauli":
        return cls(parse_pauli(text), phase_exp)

    @property
    def n(self) -> int:
        return self.vector.shape[0] // 2

    @property
    def phase(self) -> complex:
        return 1j ** self.phase_exp

    def __eq__(self, other) -> bool:
        if not isinstance(other, PhasedPauli):
            return NotImplemented
        return self.phase_exp == other.phase_exp and np.array_equal(self.vector, other.vector)

    def __repr__(self) -> str:
        sign = {0: "+", 1: "+i*", 2: "-", 3: "-i*"}[self.phase_exp]
        return f"PhasedPauli({sign}{format_pauli(self.vector)})"


def multiply(p: PhasedPauli, q: PhasedPauli) -> PhasedPauli:
    """Phase-exact product: vectors add, phases pick up the reordering sign."""
    if p.n != q.n:
        raise ValueError(f"qubit count mismatch: {p.n} vs {q.n}")
    sign = gf2.symplectic_product(p.vector, q.vector, form="lower")
    return PhasedPauli(p.vector ^ q.vector, p.phase_exp + q.phase_exp + 2 * sign)


# Dense 2x2 blocks used by the statevector oracle and by tests.
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_XZ = SIGMA_X @ SIGMA_Z  # the operator encoded by Y

def single_qubit_matrix(a: int, b: int) -> np.ndarray:
    """X^a Z^b as a dense 2x2 complex matrix."""
    out = np.eye(2, dtype=complex)
    if a:
        out = out @ SIGMA_X
    if b:
        out = out @ SIGMA_Z
    return out


def dense_matrix(p: PhasedPauli) -> np.ndarray:
    """Full 2^n x 2^n matrix of a phased Pauli product (qubit 0 = MSB)."""
    out = np.array([[1j ** p.phase_exp]], dtype=complex)
    for j in range(p.n):
        out = np.kron(out, single_qubit_matrix(int(p.vector[2 * j]), int(p.vector[2 * j + 1])))
    return out
