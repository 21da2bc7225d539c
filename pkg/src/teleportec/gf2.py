"""Exact linear algebra over GF(2) plus the binary symplectic forms.

Vectors and matrices are dense numpy uint8 arrays with entries in {0, 1}.
A length-2n vector names a Pauli product in the interleaved layout
[a1 b1 a2 b2 ...], where the (a, b) pair of qubit j selects I/X/Z/Y.
For hot loops, rows can be packed into Python ints (bit i of the int is
element i of the vector) via the ``pack_*`` helpers.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

BitVec = np.ndarray
BitMatrix = np.ndarray


def as_bits(values: Sequence[int] | np.ndarray) -> BitVec:
    """Coerce a 0/1 sequence to a uint8 vector reduced mod 2."""
    return (np.asarray(values, dtype=np.uint8) & 1).astype(np.uint8)


def as_bit_matrix(rows: Sequence[Sequence[int]] | np.ndarray, n_cols: int | None = None) -> BitMatrix:
    """Coerce to a 2-D uint8 matrix; `n_cols` disambiguates the empty matrix."""
    M = np.asarray(rows, dtype=np.uint8) & 1
    if M.size == 0:
        M = M.reshape(0, n_cols if n_cols is not None else 0)
    if M.ndim != 2:
        raise ValueError(f"expected a 2-D bit matrix, got shape {M.shape}")
    return M.astype(np.uint8)


def rref(M: BitMatrix) -> tuple[BitMatrix, int, tuple[int, ...]]:
    """Reduced row-echelon form over GF(2).

    Uses deterministic leftmost-pivot elimination and clears entries both
    above and below each pivot, so the result is unique for a given row
    space.

    Returns:
        (R, rank, pivots) where pivots are the pivot column indices.
    """
    R = M.copy().astype(np.uint8)
    n_rows, n_cols = R.shape
    pivots: list[int] = []
    row = 0
    for col in range(n_cols):
        if row >= n_rows:
            break
        hits = np.nonzero(R[row:, col])[0]
        if hits.size == 0:
            continue
        pivot = row + int(hits[0])
        if pivot != row:
            R[[row, pivot]] = R[[pivot, row]]
        for r in range(n_rows):
            if r != row and R[r, col]:
                R[r, :] ^= R[row, :]
        pivots.append(col)
        row += 1
    return R, len(pivots), tuple(pivots)


def rank(M: BitMatrix) -> int:
    """GF(2) rank."""
    return rref(M)[1]


def kernel(M: BitMatrix) -> BitMatrix:
    """Basis of {x : x M^T = 0}, one vector per row.

    The basis is the standard free-variable construction from the reduced
    echelon form, ordered by ascending free column, so it is deterministic.
    """
    n_cols = M.shape[1]
    R, r, pivots = rref(M)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = np.zeros((len(free), n_cols), dtype=np.uint8)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row_idx, p in enumerate(pivots):
            basis[i, p] = R[row_idx, f]
    return basis


def in_rowspan(M: BitMatrix, v: BitVec) -> bool:
    """True iff `v` lies in the GF(2) row span of `M`."""
    if not v.any():
        return True
    if M.shape[0] == 0:
        return False
    return rank(np.vstack([M, v & 1])) == rank(M)


def solve_supported(A: BitMatrix, y: BitVec, allowed: Iterable[int]) -> BitVec | None:
    """Solve x A^T = y over GF(2) with x zero outside `allowed` columns.

    Returns one solution (free coordinates set to 0) or None when the
    restricted system is inconsistent. `allowed` indexes entries of x,
    i.e. columns of A.
    """
    n_rows, n_cols = A.shape
    y = as_bits(y)
    if y.shape != (n_rows,):
        raise ValueError(f"rhs length {y.shape} does not match {n_rows} rows")
    cols = sorted(set(int(c) for c in allowed))
    if any(c < 0 or c >= n_cols for c in cols):
        raise ValueError("allowed column index out of range")
    # Eliminate on A[:, cols]^T x_cols^T = y^T via an augmented system.
    aug = np.concatenate([A[:, cols].astype(np.uint8), y.reshape(-1, 1)], axis=1)
    R, r, pivots = rref(aug)
    x = np.zeros(n_cols, dtype=np.uint8)
    for row_idx, p in enumerate(pivots):
        if p == len(cols):  # pivot in the rhs column: inconsistent
            return None
        x[cols[p]] = R[row_idx, len(cols)]
    return x


def solve(A: BitMatrix, y: BitVec) -> BitVec | None:
    """Solve x A^T = y over GF(2) with no support restriction."""
    return solve_supported(A, y, range(A.shape[1]))


# --- symplectic forms -------------------------------------------------------

def lower_symplectic_matrix(n: int, signed: bool = False) -> np.ndarray:
    """The 2n x 2n block matrix with a single 1 per qubit block, at (b, a)."""
    dtype = np.int64 if signed else np.uint8
    S = np.zeros((2 * n, 2 * n), dtype=dtype)
    for j in range(n):
        S[2 * j + 1, 2 * j] = 1
    return S

def symplectic_matrix(n: int, signed: bool = False) -> np.ndarray:
    """Full form: lower minus its transpose (entries -1/0/1 when signed)."""
    L = lower_symplectic_matrix(n, signed=True)
    S = L - L.T
    return S if signed else (S % 2).astype(np.uint8)


def symplectic_product(s: BitVec, t: BitVec, form: str = "full", signed: bool = False) -> int:
    """s . form . t^T for the full or lower symplectic form.

    In signed mode the +-1 entries of the full form are honored and the
    result is reduced mod 4 (it feeds exponents of i); otherwise the
    result is reduced mod 2.
    """
    s = np.asarray(s)
    t = np.asarray(t)
    if s.shape != t.shape or s.ndim != 1 or s.shape[0] % 2:
        raise ValueError(f"mismatched symplectic operands: {s.shape} vs {t.shape}")
    sa, sb = s[0::2].astype(np.int64), s[1::2].astype(np.int64)
    ta, tb = t[0::2].astype(np.int64), t[1::2].astype(np.int64)
    if form == "lower":
        val = int(sb @ ta)
    elif form == "full":
        val = int(sb @ ta) - int(sa @ tb)
    else:
        raise ValueError(f"unknown form {form!r}")
    return val % 4 if signed else val % 2


def symplectic_partner(v: BitVec) -> BitVec:
    """The vector m with x . m = x S v^T for all x (mod 2): swaps each (a, b) pair."""
    out = np.empty_like(v)
    out[0::2] = v[1::2]
    out[1::2] = v[0::2]
    return out


# --- int-packed fast paths --------------------------------------------------

def pack_vec(v: BitVec) -> int:
    """Pack a bit vector into an int (element i -> bit i)."""
    out = 0
    for i in np.nonzero(np.asarray(v))[0]:
        out |= 1 << int(i)
    return out


def pack_rows(M: BitMatrix) -> list[int]:
    return [pack_vec(row) for row in M]


def unpack_vec(bits: int, length: int) -> BitVec:
    return np.array([(bits >> i) & 1 for i in range(length)], dtype=np.uint8)


def rank_packed(rows: Iterable[int]) -> int:
    """GF(2) rank of int-packed rows (used in Monte Carlo hot loops)."""
    basis: dict[int, int] = {}  # leading bit -> reduced row
    r = 0
    for row in rows:
        while row:
            lead = row.bit_length() - 1
            if lead in basis:
                row ^= basis[lead]
            else:
                basis[lead] = row
                r += 1
                break
    return r
