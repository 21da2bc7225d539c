"""Dense complex-amplitude simulator used as an independent oracle.

Intended for <= ~12 qubits.  Qubit 0 is the most significant bit of the
amplitude index, matching left-to-right Pauli strings.  States are
numpy complex128 vectors of length 2^m kept at unit norm; comparisons
are global-phase insensitive via |<a|b>|^2.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import gf2, pauli
from .codes import StabilizerCode, syndrome_shift, validate_code
from .gf2 import BitVec
from .pauli import PhasedPauli

MAX_QUBITS = 12

_DENSE_ATOL = 1e-9


class DegenerateProjectionError(ValueError):
    """The state has no component in the requested eigenspace."""


def n_state_qubits(state: np.ndarray) -> int:
    m = int(np.log2(state.shape[0]))
    if 2**m != state.shape[0]:
        raise ValueError(f"state length {state.shape[0]} is not a power of two")
    return m


def basis_state(m: int, index: int = 0) -> np.ndarray:
    state = np.zeros(2**m, dtype=complex)
    state[index] = 1.0
    return state


def random_state(m: int, rng: np.random.Generator) -> np.ndarray:
    amps = rng.normal(size=2**m) + 1j * rng.normal(size=2**m)
    return amps / np.linalg.norm(amps)


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """|<a|b>|^2 on unit vectors; 1 means equal up to global phase."""
    return float(abs(np.vdot(a, b)) ** 2)


def _apply_single(state: np.ndarray, op: np.ndarray, qubit: int, m: int) -> np.ndarray:
    shaped = state.reshape([2] * m)
    moved = np.moveaxis(shaped, qubit, -1)
    out = moved @ op.T
    return np.moveaxis(out, -1, qubit).reshape(-1)


def apply_pauli(
    state: np.ndarray, p: PhasedPauli | BitVec, qubits: Sequence[int] | None = None
) -> np.ndarray:
    """Apply an exact phased Pauli product; `qubits` maps its positions
    onto the state's qubits (identity mapping when omitted)."""
    if not isinstance(p, PhasedPauli):
        p = PhasedPauli(p)
    m = n_state_qubits(state)
    targets = list(range(p.n)) if qubits is None else [int(q) for q in qubits]
    if len(targets) != p.n:
        raise ValueError(f"{p.n} Pauli positions mapped to {len(targets)} qubits")
    if len(set(targets)) != len(targets) or any(q < 0 or q >= m for q in targets):
        raise IndexError(f"bad qubit indices {targets} for an {m}-qubit state")
    out = state * (1j ** p.phase_exp)
    for j, q in enumerate(targets):
        a, b = int(p.vector[2 * j]), int(p.vector[2 * j + 1])
        if a or b:
            out = _apply_single(out, pauli.single_qubit_matrix(a, b), q, m)
    return out


def _project_row(
    state: np.ndarray, row: BitVec, bit: int, qubits: Sequence[int] | None
) -> np.ndarray:
    """(1 + (-1)^bit conj(nu) P(row))/2 applied to the state."""
    nu_bar = 1j ** (-pauli.y_phase_exponent(row) % 4)
    term = apply_pauli(state, PhasedPauli(row), qubits) * nu_bar
    return (state + (-1) ** bit * term) / 2.0


def project_syndrome(
    state: np.ndarray,
    code: StabilizerCode,
    e: BitVec,
    qubits: Sequence[int] | None = None,
) -> tuple[np.ndarray, float]:
    """Project onto the syndrome-e eigenspace.

    Returns the normalized state and the Born probability; raises
    DegenerateProjectionError when the component vanishes.
    """
    e = gf2.as_bits(e)
    out = state
    for i in range(code.l):
        out = _project_row(out, code.matrix[i], int(e[i]), qubits)
    prob = float(np.vdot(out, out).real)
    if prob < 1e-12:
        raise DegenerateProjectionError(f"no amplitude in eigenspace {e.tolist()}")
    return out / np.sqrt(prob), prob


def measure_syndrome(
    state: np.ndarray,
    code: StabilizerCode,
    qubits: Sequence[int] | None = None,
    rng: np.random.Generator | None = None,
) -> tuple[BitVec, np.ndarray]:
    """Sample a syndrome per the Born rule, one generator at a time."""
    rng = np.random.default_rng() if rng is None else rng
    out = state
    e = np.zeros(code.l, dtype=np.uint8)
    for i in range(code.l):
        plus = _project_row(out, code.matrix[i], 0, qubits)
        p0 = float(np.vdot(plus, plus).real)
        if rng.random() < p0:
            e[i] = 0
            out = plus / np.sqrt(p0)
        else:
            e[i] = 1
            minus = _project_row(out, code.matrix[i], 1, qubits)
            out = minus / np.sqrt(max(1.0 - p0, 1e-300))
    return e, out


_BELL_CODE = validate_code(np.array([pauli.parse_pauli("XX"), pauli.parse_pauli("ZZ")]))


def bell_measure(
    state: np.ndarray, i: int, j: int, rng: np.random.Generator
) -> tuple[tuple[int, int], np.ndarray]:
    """Measure the commuting pair observables XX and ZZ on qubits (i, j)."""
    if i == j:
        raise ValueError("bell measurement needs two distinct qubits")
    e, out = measure_syndrome(state, _BELL_CODE, qubits=[i, j], rng=rng)
    return (int(e[0]), int(e[1])), out


def states_close(a: np.ndarray, b: np.ndarray, atol: float = _DENSE_ATOL) -> bool:
    return fidelity(a, b) >= 1.0 - atol


@dataclass
class TeleportEcResult:
    """Everything the equivalence harness needs from one dense run."""

    correction: BitVec              # g, assembled from the Bell outcomes
    bell_outcomes: list[tuple[int, int]]
    prep_offset: BitVec             # recorded destination syndrome t (zeros when reset)
    inferred_syndrome: BitVec       # shift of g plus the recorded offset
    output_state: np.ndarray        # destination block after applying P(g)
    direct_syndrome: BitVec         # syndrome measured directly on the input
    direct_state: np.ndarray        # input block after that direct measurement


def dense_teleport_ec(
    code: StabilizerCode,
    input_state: np.ndarray,
    injected: BitVec,
    rng: np.random.Generator,
    reset_syndrome: bool = True,
) -> TeleportEcResult:
    """Run the full teleportation error-correction protocol densely.

    Adjoins 2n ancilla qubits in Bell pairs, projects the destination
    block into the code (resetting its syndrome to zero, or recording the
    offset), injects the given Pauli on the input block, Bell-measures
    each (input, ancilla) pair, and applies the standard teleportation
    correction P(g) to the destination.  The direct path measures the
    code syndrome of the corrupted input on a separate copy so callers
    can assert the two are equivalent.
    """
    n = code.n
    if 3 * n > MAX_QUBITS:
        raise ValueError(f"dense protocol needs 3n <= {MAX_QUBITS} qubits, got n={n}")
    if input_state.shape != (2**n,):
        raise ValueError("input state must live on the code's n qubits")
    m = 3 * n

    # Input block tensor n Bell pairs on (n+k, 2n+k): amplitude index has
    # qubit 0 as MSB, so pair bits sit at positions n+k and 2n+k.
    state = np.zeros(2**m, dtype=complex)
    for idx in range(2**n):
        amp = input_state[idx]
        if amp == 0:
            continue
        for anc in range(2**n):
            # ancilla bits equal on both halves: |x>|x> / 2^(n/2)
            full = (idx << (2 * n)) | (anc << n) | anc
            state[full] = amp
    state /= 2 ** (n / 2)

    dest = list(range(2 * n, 3 * n))
    t0, state = measure_syndrome(state, code, qubits=dest, rng=rng)
    if reset_syndrome and t0.any():
        fix = gf2.solve(code.syndrome_matrix, t0)
        assert fix is not None, "syndrome map is onto for independent generators"
        state = apply_pauli(state, PhasedPauli(fix), qubits=dest)
        state = apply_pauli(state, PhasedPauli(fix), qubits=list(range(n, 2 * n)))
        prep_offset = np.zeros(code.l, dtype=np.uint8)
    else:
        prep_offset = t0

    injected = gf2.as_bits(injected)
    corrupted_input = apply_pauli(input_state, PhasedPauli(injected))
    state = apply_pauli(state, PhasedPauli(injected), qubits=list(range(n)))

    outcomes: list[tuple[int, int]] = []
    g = np.zeros(2 * n, dtype=np.uint8)
    for q in range(n):
        f, state = bell_measure(state, q, n + q, rng)
        outcomes.append(f)
        g[2 * q], g[2 * q + 1] = f[1], f[0]  # single-qubit correction f.S
    state = apply_pauli(state, PhasedPauli(g), qubits=dest)

    # The first 2n qubits are in a product state with the destination
    # block after the Bell measurements, so the destination factor is the
    # dominant row of the reshaped amplitude matrix.
    mat = state.reshape(2 ** (2 * n), 2**n)
    weights = np.sum(np.abs(mat) ** 2, axis=1)
    row = int(np.argmax(weights))
    output = mat[row] / np.linalg.norm(mat[row])

    direct_syndrome, direct_state = measure_syndrome(corrupted_input, code, rng=rng)

    return TeleportEcResult(
        correction=g,
        bell_outcomes=outcomes,
        prep_offset=prep_offset,
        inferred_syndrome=(syndrome_shift(g, code) + prep_offset) % 2,
        output_state=output,
        direct_syndrome=direct_syndrome,
        direct_state=direct_state,
    )
