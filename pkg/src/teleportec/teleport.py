"""Pauli-frame-level teleportation error correction.

One step teleports an encoded block through a prepared entangled state;
the per-pair Bell outcomes determine a correction product whose syndrome
shift reveals the code syndrome of the incoming error.  Everything here
is exact classical bookkeeping: corrections are deferred to the Pauli
frame, never applied as gates.

Frame convention for sampled records: the error-free outcome record is
the incoming error itself plus a random stabilizer element.  Restricting
the outcome gauge to the row span lets a step reconstruct the record
corruption, and with it the residual error, from the observed record
alone; the reconstruction is exact modulo a stabilizer element, which is
invisible to syndrome, decoder, and residual classification.  Physical
outcomes also wander over logical directions, but no quantity this
module reports depends on that part.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import gf2
from .codes import (
    StabilizerCode,
    erasure_decode,
    ml_decode_depolarizing,
    residual_class,
    syndrome_shift,
)
from .gf2 import BitVec
from .pauli import PhasedPauli, multiply, parse_pauli

BellOutcome = tuple[int, int]  # (XX bit, ZZ bit); eigenvalues (-1)^bit


@dataclass(frozen=True)
class PauliFrame:
    """Deferred correction bookkeeping on n data qubits."""

    vector: BitVec

    def __post_init__(self):
        object.__setattr__(self, "vector", gf2.as_bits(self.vector))

    @classmethod
    def identity(cls, n: int) -> "PauliFrame":
        return cls(np.zeros(2 * n, dtype=np.uint8))

    def compose(self, update: BitVec) -> "PauliFrame":
        return PauliFrame(self.vector ^ gf2.as_bits(update))


@dataclass(frozen=True)
class BellRecord:
    """Per-pair Bell results for one step; None marks an erased outcome."""

    outcomes: tuple[BellOutcome | None, ...]

    @property
    def n(self) -> int:
        return len(self.outcomes)

    @property
    def erased(self) -> frozenset[int]:
        return frozenset(q for q, f in enumerate(self.outcomes) if f is None)

    def filled(self, fill: BellOutcome = (0, 0)) -> "BellRecord":
        return BellRecord(tuple(f if f is not None else fill for f in self.outcomes))


@dataclass
class StepReport:
    """Outcome of one frame-level teleportation step."""

    inferred_syndrome: BitVec
    correction: BitVec | None
    residual: BitVec | None
    status: str  # "ok" | "detected_logical_erasure" | "logical_error"
    erased: frozenset[int]


def standard_teleport_correction(f: BellOutcome) -> BitVec:
    """Single-qubit correction for one Bell outcome: (f1, f2) -> X^f2 Z^f1."""
    f1, f2 = int(f[0]) & 1, int(f[1]) & 1
    return np.array([f2, f1], dtype=np.uint8)


def record_correction(record: BellRecord, fill: BellOutcome = (0, 0)) -> BitVec:
    """Assemble the n-qubit correction product from a (filled) record."""
    g = np.zeros(2 * record.n, dtype=np.uint8)
    for q, f in enumerate(record.filled(fill).outcomes):
        g[2 * q : 2 * q + 2] = standard_teleport_correction(f)
    return g


def correction_to_record(g: BitVec) -> BellRecord:
    """Inverse of record_correction (the per-qubit map is an involution)."""
    g = gf2.as_bits(g)
    outcomes = tuple((int(g[2 * q + 1]), int(g[2 * q])) for q in range(g.shape[0] // 2))
    return BellRecord(outcomes)


def sample_bell_record(
    code: StabilizerCode,
    incoming_error: BitVec,
    rng: np.random.Generator,
    prep_offset: BitVec | None = None,
) -> BellRecord:
    """Error-free Bell outcomes for a step with the given incoming error.

    The correction implied by the record equals the incoming error plus a
    uniformly random stabilizer element, plus a fixed solution shifting
    the syndrome by the recorded preparation offset when one is used.
    """
    g = gf2.as_bits(incoming_error).copy()
    if g.shape != (2 * code.n,):
        raise ValueError(f"incoming error must have length {2 * code.n}")
    if prep_offset is not None and gf2.as_bits(prep_offset).any():
        u = gf2.solve(code.syndrome_matrix, gf2.as_bits(prep_offset))
        assert u is not None
        g ^= u
    if code.l:
        coeffs = rng.integers(0, 2, size=code.l, dtype=np.uint8)
        g ^= (coeffs @ code.matrix % 2).astype(np.uint8)
    return correction_to_record(g)


def corrupt_bell_record(
    record: BellRecord,
    rng: np.random.Generator,
    erase_prob: float = 0.0,
    flip_prob: float = 0.0,
) -> BellRecord:
    """Model Bell measurement faults: erased outcomes and wrong answers.

    A wrong answer replaces the outcome by one of the three incorrect
    values uniformly.  Erasure wins when both fire.
    """
    out: list[BellOutcome | None] = []
    for f in record.outcomes:
        if rng.random() < erase_prob:
            out.append(None)
            continue
        if f is not None and rng.random() < flip_prob:
            delta = int(rng.integers(1, 4))
            f = (f[0] ^ (delta >> 1), f[1] ^ (delta & 1))
        out.append(f)
    return BellRecord(tuple(out))


def teleport_ec_step(
    code: StabilizerCode,
    incoming_error: BitVec,
    bell: BellRecord,
    prep_offset: BitVec | None = None,
    *,
    extra_erased: Iterable[int] = (),
    decoder: str = "erasure",
    depolarizing_rate: float = 0.0,
) -> StepReport:
    """Run one teleportation error-correction step at the frame level.

    Erased outcomes are filled with (0, 0); the erasure decoder is given
    the erased positions joined with any model-supplied extra erasures
    (e.g. destination storage losses).  The residual error is the
    incoming error, plus the record corruption implied by fills and wrong
    answers, plus the decoder's correction; it is exact up to a
    stabilizer element (the sampled record gauge), which classification
    cannot see.
    """
    incoming_error = gf2.as_bits(incoming_error)
    if bell.n != code.n or incoming_error.shape != (2 * code.n,):
        raise ValueError(f"step needs {code.n} outcomes and a length-{2 * code.n} error")
    erased = bell.erased | frozenset(int(q) for q in extra_erased)
    observed = record_correction(bell)
    t = np.zeros(code.l, dtype=np.uint8) if prep_offset is None else gf2.as_bits(prep_offset)
    inferred = (syndrome_shift(observed, code) + t) % 2

    # Reconstruct the record corruption under the canonical-gauge
    # convention (see module docstring): corruption = observed - true.
    true_g = incoming_error.copy()
    if t.any():
        u = gf2.solve(code.syndrome_matrix, t)
        assert u is not None
        true_g ^= u
    bell_induced = observed ^ true_g

    if decoder == "erasure":
        correction = erasure_decode(code, inferred, erased)
        if correction is None:
            return StepReport(inferred, None, None, "detected_logical_erasure", erased)
    elif decoder == "ml":
        correction = ml_decode_depolarizing(code, inferred, depolarizing_rate)
    else:
        raise ValueError(f"unknown decoder {decoder!r}")

    residual = (incoming_error ^ bell_induced ^ correction).astype(np.uint8)
    status = "ok" if residual_class(code, residual) == "stabilizer" else "logical_error"
    return StepReport(inferred, correction, residual, status, erased)


_GATE_ACTIONS = {
    # generator conjugations: (gate, input single-qubit Pauli) -> phased output
    ("H", "X"): ("Z", 0),
    ("H", "Z"): ("X", 0),
    ("S", "X"): ("Y", 1),  # S X S^dag = i XZ
    ("S", "Z"): ("Z", 0),
}

_CNOT_ACTIONS = {
    # (control factor, target factor) images under CNOT, all phase-free
    "XI": "XX",
    "IX": "IX",
    "ZI": "ZI",
    "IZ": "ZZ",
}


def _conjugate_one(gate: tuple, p: PhasedPauli) -> PhasedPauli:
    """Conjugate a phased Pauli by a single Clifford generator."""
    name = gate[0].upper()
    n = p.n
    out = PhasedPauli(np.zeros(2 * n, dtype=np.uint8), p.phase_exp)
    for j in range(n):
        a, b = int(p.vector[2 * j]), int(p.vector[2 * j + 1])
        for sym, present in (("X", a), ("Z", b)):
            if not present:
                continue
            factor = np.zeros(2 * n, dtype=np.uint8)
            phase = 0
            if name in ("H", "S") and j == gate[1]:
                image, phase = _GATE_ACTIONS[(name, sym)]
                bits = {"X": (1, 0), "Z": (0, 1), "Y": (1, 1)}[image]
                factor[2 * j], factor[2 * j + 1] = bits
            elif name == "CNOT" and j in gate[1:]:
                ctrl, tgt = gate[1], gate[2]
                word = (sym + "I") if j == ctrl else ("I" + sym)
                image = _CNOT_ACTIONS[word]
                for qubit, ch in zip((ctrl, tgt), image):
                    bits = {"I": (0, 0), "X": (1, 0), "Z": (0, 1)}[ch]
                    factor[2 * qubit] ^= bits[0]
                    factor[2 * qubit + 1] ^= bits[1]
            else:
                factor[2 * j] = 1 if sym == "X" else 0
                factor[2 * j + 1] = 1 if sym == "Z" else 0
            out = multiply(out, PhasedPauli(factor, phase))
    return out


def conjugate_frame(gates: Sequence[tuple], p: PhasedPauli) -> PhasedPauli:
    """Conjugate a deferred Pauli through a word of Clifford generators.

    Gates are ("H", i), ("S", i) or ("CNOT", control, target), applied in
    sequence: the result is U_w ... U_1 P U_1^dag ... U_w^dag, exact in
    phase.
    """
    for gate in gates:
        name = gate[0].upper()
        if name not in ("H", "S", "CNOT"):
            raise ValueError(f"unsupported gate {gate!r}")
        idxs = gate[1:]
        if any(q < 0 or q >= p.n for q in idxs):
            raise IndexError(f"gate {gate!r} out of range for n={p.n}")
        if name == "CNOT" and gate[1] == gate[2]:
            raise ValueError("CNOT needs distinct qubits")
        p = _conjugate_one(gate, p)
    return p


def logical_measure_step(
    code: StabilizerCode,
    incoming_error: BitVec,
    bell: BellRecord,
    *,
    extra_erased: Iterable[int] = (),
    decoder: str = "erasure",
    depolarizing_rate: float = 0.0,
) -> int | None:
    """Measure the encoded qubit by teleporting into a logical-zero state.

    The Bell outcomes of a measurement step reveal, beyond the syndrome,
    the eigenvalue bit of the logical Z operator; the decoder's inferred
    error then corrects that bit classically.  Returns the corrected
    outcome, or None when erasures defeat correction (detected failure).
    """
    if code.k != 1 or code.logical_z is None:
        raise ValueError("logical measurement needs a k=1 code with logical operators")
    report = teleport_ec_step(
        code,
        incoming_error,
        bell,
        extra_erased=extra_erased,
        decoder=decoder,
        depolarizing_rate=depolarizing_rate,
    )
    if report.status == "detected_logical_erasure":
        return None
    observed = record_correction(bell)
    raw = gf2.symplectic_product(observed, code.logical_z, form="full")
    fix = gf2.symplectic_product(report.correction, code.logical_z, form="full")
    return (raw + fix) % 2
