"""Stabilizer-code calculus: validation, syndromes, duals, logicals,
distance, erasure correctability/decoding, ML decoding, and code sources.

A code is an l x 2n generator matrix of mutually commuting, independent
Pauli vectors.  Its row span C and symplectic dual C-perp (vectors
commuting with every generator) drive everything: a Pauli error s shifts
the syndrome by the mod-2 products of s with the generators, logical
operators live in C-perp minus C, and an erasure pattern S is correctable
exactly when C-perp has no element supported inside S beyond those of C.

Qubits are numbered from 0 throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import gf2, pauli
from .gf2 import BitMatrix, BitVec


class CodeValidationError(ValueError):
    """Base class for generator-matrix validation failures."""


class DependentRowsError(CodeValidationError):
    def __init__(self, row: int):
        self.row = row
        super().__init__(f"generator row {row} is dependent on earlier rows")


class NonCommutingPairError(CodeValidationError):
    def __init__(self, i: int, j: int):
        self.pair = (i, j)
        super().__init__(f"generator rows {i} and {j} anticommute")


class BadLogicalError(CodeValidationError):
    def __init__(self, message: str):
        super().__init__(message)


class WrongLogicalCountError(ValueError):
    """Operation needs exactly one encoded qubit."""


class TooLargeError(ValueError):
    """Exhaustive-search guard exceeded."""


class InconsistentSyndromeError(ValueError):
    """No supported solution although the erasure set is correctable."""


@dataclass(eq=False)
class StabilizerCode:
    """A validated stabilizer code; construct via validate_code().

    Immutable after construction (derived data is cached lazily).
    """

    matrix: BitMatrix
    n: int
    logical_x: BitVec | None = None
    logical_z: BitVec | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def l(self) -> int:
        return self.matrix.shape[0]

    @property
    def k(self) -> int:
        return self.n - self.l

    @property
    def syndrome_matrix(self) -> BitMatrix:
        """Rows are the symplectic partners of the generators: s . row_i = i-th syndrome bit."""
        if "syndrome_matrix" not in self._cache:
            self._cache["syndrome_matrix"] = np.array(
                [gf2.symplectic_partner(row) for row in self.matrix], dtype=np.uint8
            ).reshape(self.l, 2 * self.n)
        return self._cache["syndrome_matrix"]

    @property
    def dual(self) -> BitMatrix:
        if "dual" not in self._cache:
            self._cache["dual"] = gf2.kernel(self.syndrome_matrix)
        return self._cache["dual"]

    @property
    def packed_rows(self) -> list[int]:
        if "packed_rows" not in self._cache:
            self._cache["packed_rows"] = gf2.pack_rows(self.matrix)
        return self._cache["packed_rows"]

    @property
    def packed_dual(self) -> list[int]:
        if "packed_dual" not in self._cache:
            self._cache["packed_dual"] = gf2.pack_rows(self.dual)
        return self._cache["packed_dual"]

    def rows_as_strings(self) -> list[str]:
        return [pauli.format_pauli(row) for row in self.matrix]

    def __repr__(self) -> str:
        return f"StabilizerCode(n={self.n}, l={self.l}, k={self.k})"


def validate_code(
    Q: BitMatrix | Iterable[Iterable[int]],
    *,
    n: int | None = None,
    logical_x: BitVec | None = None,
    logical_z: BitVec | None = None,
) -> StabilizerCode:
    """Check independence and pairwise commutation; return the code.

    Raises DependentRowsError / NonCommutingPairError / BadLogicalError.
    `n` is only needed to disambiguate an empty generator matrix.
    """
    Q = gf2.as_bit_matrix(Q, n_cols=2 * n if n is not None else None)
    if Q.shape[1] % 2:
        raise CodeValidationError(f"generator matrix must have an even column count, got {Q.shape[1]}")
    n_q = Q.shape[1] // 2
    if n is not None and n != n_q:
        raise CodeValidationError(f"qubit count {n} does not match matrix width {Q.shape[1]}")
    l = Q.shape[0]
    for i in range(l):
        if gf2.rank(Q[: i + 1]) != i + 1:
            raise DependentRowsError(i)
    for i in range(l):
        for j in range(i + 1, l):
            if gf2.symplectic_product(Q[i], Q[j], form="full"):
                raise NonCommutingPairError(i, j)
    if l > n_q:  # unreachable for independent commuting rows; kept as a safety net
        raise CodeValidationError(f"{l} generators exceed {n_q} qubits")
    code = StabilizerCode(Q, n_q)
    if (logical_x is None) != (logical_z is None):
        raise BadLogicalError("logical operators must be supplied as a pair")
    if logical_x is not None:
        lx, lz = gf2.as_bits(logical_x), gf2.as_bits(logical_z)
        if syndrome_shift(lx, code).any() or syndrome_shift(lz, code).any():
            raise BadLogicalError("logical operators must commute with every generator")
        if gf2.symplectic_product(lx, lz, form="full") != 1:
            raise BadLogicalError("logical pair must anticommute with each other")
        code.logical_x, code.logical_z = lx, lz
    return code


def syndrome_shift(s: BitVec, code: StabilizerCode) -> BitVec:
    """Syndrome displacement caused by applying the Pauli product s."""
    s = np.asarray(s, dtype=np.uint8)
    if s.shape != (2 * code.n,):
        raise ValueError(f"Pauli vector length {s.shape} does not match n={code.n}")
    return (code.syndrome_matrix @ s) % 2


class EigenvalueExponent(tuple):
    """(-1)^sign_bit * i^i_exponent eigenvalue of a stabilizer element."""

    def __new__(cls, sign_bit: int, i_exponent: int):
        return super().__new__(cls, (int(sign_bit) % 2, int(i_exponent) % 4))

    @property
    def sign_bit(self) -> int:
        return self[0]

    @property
    def i_exponent(self) -> int:
        return self[1]

    @property
    def total_exponent(self) -> int:
        return (2 * self[0] + self[1]) % 4

    @property
    def value(self) -> complex:
        return 1j ** self.total_exponent


def eigenvalue_exponent(code: StabilizerCode, e: BitVec, x: BitVec) -> EigenvalueExponent:
    """Exact eigenvalue of the stabilizer element selected by x on the
    syndrome-e eigenspace.

    The cross terms are accumulated over signed integers (the entries of
    the full symplectic form are +-1) and reduced mod 4 only at the end,
    together with the i-per-Y contribution of the mod-2 reduced product
    vector.
    """
    e = gf2.as_bits(e)
    x = gf2.as_bits(x)
    if x.shape != (code.l,) or e.shape != (code.l,):
        raise ValueError("selector and syndrome must have one entry per generator")
    sign_bit = int(x @ e) % 2
    Qs = code.matrix.astype(np.int64)
    S = gf2.symplectic_matrix(code.n, signed=True)
    G = Qs @ S @ Qs.T
    xi = x.astype(np.int64)
    cross = int(xi @ np.triu(G, k=1) @ xi)
    # The Y-counting quadratic form is evaluated on the unreduced integer
    # combination (exponents of i are not reduced mod 2): on the mod-2
    # vector it would drop cross contributions that matter mod 4.
    sigma = xi @ Qs
    nu_exp = int(sigma[1::2] @ sigma[0::2])
    return EigenvalueExponent(sign_bit, cross + nu_exp)


def dual_basis(code: StabilizerCode) -> BitMatrix:
    """Basis of the symplectic dual; dimension 2n - l."""
    return code.dual.copy()


def logical_pair(code: StabilizerCode) -> tuple[BitVec, BitVec]:
    """A deterministic anticommuting pair of logical operators (k=1 only).

    Scans the dual basis in order; the first vector outside the row span
    is paired with the first dual vector it anticommutes with.
    """
    if code.k != 1:
        raise WrongLogicalCountError(f"need exactly one encoded qubit, code has k={code.k}")
    if code.logical_x is not None and code.logical_z is not None:
        return code.logical_x.copy(), code.logical_z.copy()
    D = code.dual
    tx = None
    for row in D:
        if not gf2.in_rowspan(code.matrix, row):
            tx = row
            break
    assert tx is not None, "dual strictly contains the row span when k >= 1"
    for row in D:
        if gf2.symplectic_product(tx, row, form="full") == 1:
            return tx.copy(), row.copy()
    raise AssertionError("dual basis must contain a partner for any non-stabilizer element")


def _span_packed(packed_basis: list[int]) -> set[int]:
    span = {0}
    for b in packed_basis:
        span |= {v ^ b for v in span}
    return span


def min_distance(code: StabilizerCode) -> int | float:
    """Minimum weight over the dual minus the row span, by brute force.

    Returns math.inf when the dual equals the row span (k = 0).
    Guarded: raises TooLargeError when the enumeration is impractical.
    """
    if 2 * code.n > 26 or (2 * code.n - code.l) > 20:
        raise TooLargeError(f"brute-force distance guard exceeded for n={code.n}, l={code.l}")
    if code.k == 0:
        return math.inf
    stabilizer = _span_packed(code.packed_rows)
    best: int | float = math.inf
    support_mask = int("01" * code.n, 2)  # even (a) bit of each qubit pair
    for v in _span_packed(code.packed_dual):
        if v == 0 or v in stabilizer:
            continue
        w = ((v | (v >> 1)) & support_mask).bit_count()
        if w < best:
            best = w
    return best


def _erased_column_mask(n: int, erased: Iterable[int]) -> int:
    mask = 0
    for q in erased:
        if q < 0 or q >= n:
            raise ValueError(f"qubit index {q} out of range for n={n}")
        mask |= 0b11 << (2 * q)
    return mask


def is_erasure_correctable(code: StabilizerCode, erased: Iterable[int]) -> bool:
    """True iff every dual vector supported inside the erased set is a stabilizer.

    Uses the rank formulation: the dimension of {v in span : supp(v) in S}
    equals dim(span) minus the rank of the generator columns outside S,
    so the counts for the dual and the row span are compared directly.
    """
    keep = ~_erased_column_mask(code.n, erased)
    dual_dim = 2 * code.n - code.l
    dual_inside = dual_dim - gf2.rank_packed(r & keep for r in code.packed_dual)
    span_inside = code.l - gf2.rank_packed(r & keep for r in code.packed_rows)
    return dual_inside == span_inside


def erasure_decode(code: StabilizerCode, e: BitVec, erased: Iterable[int]) -> BitVec | None:
    """Solve for a correction supported on the erased qubits.

    Returns a Pauli vector s with the requested syndrome and support, or
    None (a detected failure) when the erasure pattern is not correctable.
    Raises InconsistentSyndromeError when the pattern is correctable but
    no supported solution reproduces the syndrome (corrupted inputs).
    """
    erased = frozenset(int(q) for q in erased)
    e = gf2.as_bits(e)
    if not is_erasure_correctable(code, erased):
        return None
    cols = [c for q in sorted(erased) for c in (2 * q, 2 * q + 1)]
    s = gf2.solve_supported(code.syndrome_matrix, e, cols)
    if s is None:
        raise InconsistentSyndromeError(
            f"no solution supported on {sorted(erased)} for syndrome {e.tolist()}"
        )
    return s


def residual_class(code: StabilizerCode, v: BitVec) -> str:
    """Classify a residual error: 'stabilizer', 'logical', or 'outside'."""
    if syndrome_shift(v, code).any():
        return "outside"
    return "stabilizer" if gf2.in_rowspan(code.matrix, v) else "logical"


_ML_GUARD_N = 10


def ml_decode_depolarizing(code: StabilizerCode, e: BitVec, per_qubit_rate: float) -> BitVec:
    """Most-likely-coset decoder for iid depolarizing noise.

    Enumerates every Pauli vector consistent with the syndrome, groups
    them into cosets of the row span, and returns the lexicographically
    smallest member of the coset with the largest total probability
    (ties broken toward the lexicographically smallest representative).
    """
    if code.n > _ML_GUARD_N:
        raise TooLargeError(f"exhaustive coset enumeration guard exceeded for n={code.n}")
    e = gf2.as_bits(e)
    p = float(per_qubit_rate)
    s0 = gf2.solve(code.syndrome_matrix, e)
    if s0 is None:
        raise InconsistentSyndromeError(f"syndrome {e.tolist()} is not reachable")
    s0p = gf2.pack_vec(s0)
    stab_members = sorted(_span_packed(code.packed_rows))
    # Quotient basis: dual vectors extending the stabilizer span.
    quotient: list[int] = []
    span_rows = [r for r in code.packed_rows]
    for dp in code.packed_dual:
        if gf2.rank_packed(span_rows + quotient + [dp]) > len(span_rows) + len(quotient):
            quotient.append(dp)
    support_mask = int("01" * code.n, 2)
    wprob = [
        (p / 3.0) ** w * (1.0 - p) ** (code.n - w) for w in range(code.n + 1)
    ]

    def lex_key(v: int) -> tuple[int, ...]:
        return tuple((v >> i) & 1 for i in range(2 * code.n))

    best = None  # (prob, lex key of smallest member, smallest member)
    for bits in range(1 << len(quotient)):
        rep = s0p
        for i in range(len(quotient)):
            if (bits >> i) & 1:
                rep ^= quotient[i]
        total = 0.0
        smallest = None
        for c in stab_members:
            m = rep ^ c
            w = ((m | (m >> 1)) & support_mask).bit_count()
            total += wprob[w]
            if smallest is None or lex_key(m) < lex_key(smallest):
                smallest = m
        key = (-total, lex_key(smallest))
        if best is None or key < best[0]:
            best = (key, smallest)
    return gf2.unpack_vec(best[1], 2 * code.n)


def random_code(n: int, k: int, rng: np.random.Generator | int) -> StabilizerCode:
    """Sample a uniformly-grown random code with n - k generators.

    Each new generator is drawn uniformly from the dual of the rows chosen
    so far, rejecting draws inside their span.  Deterministic given the
    seed; termination is guaranteed because the dual strictly contains
    the span while fewer than n rows are chosen.
    """
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    rng = np.random.default_rng(rng) if isinstance(rng, int) else rng
    rows = np.zeros((0, 2 * n), dtype=np.uint8)
    while rows.shape[0] < n - k:
        partner = np.array([gf2.symplectic_partner(r) for r in rows], dtype=np.uint8).reshape(
            rows.shape[0], 2 * n
        )
        dual = gf2.kernel(partner)
        while True:
            coeffs = rng.integers(0, 2, size=dual.shape[0], dtype=np.uint8)
            cand = (coeffs @ dual) % 2
            if cand.any() and not gf2.in_rowspan(rows, cand):
                break
        rows = np.vstack([rows, cand.astype(np.uint8)])
    return validate_code(rows, n=n)


_LIBRARY = {
    "bell_pair": (["XX", "ZZ"], None, None),
    "four_one_two": (["XXXX", "ZZZZ", "IIXX"], "XIXI", "ZZII"),
    "five_qubit": (["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"], "XXXXX", "ZZZZZ"),
}


def library_code(name: str) -> StabilizerCode:
    """Named small codes used throughout the tests and the CLI."""
    if name not in _LIBRARY:
        raise KeyError(f"unknown code {name!r}; choose from {sorted(_LIBRARY)}")
    rows, lx, lz = _LIBRARY[name]
    return validate_code(
        np.array([pauli.parse_pauli(r) for r in rows], dtype=np.uint8),
        logical_x=None if lx is None else pauli.parse_pauli(lx),
        logical_z=None if lz is None else pauli.parse_pauli(lz),
    )


class CodeTextError(ValueError):
    """Malformed code file; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


def parse_code_text(text: str) -> StabilizerCode:
    """Parse the text format: one Pauli string per line for the generators,
    optional trailing 'LX <string>' / 'LZ <string>' logical lines, and
    '#' comments."""
    rows: list[BitVec] = []
    lx = lz = None
    n = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tag = None
        if line.upper().startswith(("LX ", "LZ ")):
            tag, line = line[:2].upper(), line[3:].strip()
        try:
            v = pauli.parse_pauli(line)
        except pauli.PauliParseError as exc:
            raise CodeTextError(line_no, str(exc)) from exc
        if n is None:
            n = v.shape[0] // 2
        elif v.shape[0] // 2 != n:
            raise CodeTextError(line_no, f"expected {n} qubits, got {v.shape[0] // 2}")
        if tag == "LX":
            lx = v
        elif tag == "LZ":
            lz = v
        else:
            rows.append(v)
    if n is None:
        raise CodeTextError(1, "no generator rows found")
    return validate_code(
        np.array(rows, dtype=np.uint8).reshape(len(rows), 2 * n), logical_x=lx, logical_z=lz
    )


def format_code_text(code: StabilizerCode) -> str:
    lines = code.rows_as_strings()
    if code.logical_x is not None:
        lines.append(f"LX {pauli.format_pauli(code.logical_x)}")
    if code.logical_z is not None:
        lines.append(f"LZ {pauli.format_pauli(code.logical_z)}")
    return "\n".join(lines) + "\n"
