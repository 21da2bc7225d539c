"""Noise channels, effective per-step error rates, Monte Carlo logical-rate
estimation, threshold-region sweeps, and concatenation/overhead bounds.

Rates: the erasure model charges a detected-loss probability per qubit
per step of em + (1-em)*eb (storage on the destination qubit, then the
Bell measurement on survivors).  The depolarizing model composes four
independent single-qubit sources per step (old preparation, memory, new
preparation, wrong Bell answer), each hitting X/Y/Z uniformly.

Reproducibility contract: the outcome of trial i depends only on
(seed, i), never on batch sizes or scheduling; trials are drawn in
fixed-size chunks seeded as (seed, chunk_index).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import gf2
from .codes import StabilizerCode, logical_pair, ml_decode_depolarizing

_CHUNK = 16384  # trials per RNG chunk; fixed so trial i is chunk i // _CHUNK


@dataclass(frozen=True)
class NoiseParams:
    """Channel rates; erasure uses (em, eb), depolarizing (dm, db, dp)."""

    model: str = "erasure"
    em: float = 0.0
    eb: float = 0.0
    dm: float = 0.0
    db: float = 0.0
    dp: float = 0.0

    def __post_init__(self):
        if self.model not in ("erasure", "depolarizing"):
            raise ValueError(f"unknown model {self.model!r}")
        for name in ("em", "eb", "dm", "db", "dp"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"rate {name}={v} outside [0, 1]")
        if self.model == "erasure" and (self.em >= 1.0 or self.eb >= 1.0):
            raise ValueError("detected-error rates must be strictly below 1")


@dataclass(frozen=True)
class TrialOutcome:
    status: str
    erased_count: int
    residual_class: str  # "stabilizer" | "logical" | "detected"


def classify_step(code: StabilizerCode, report) -> TrialOutcome:
    """Fold one step report into a trial outcome for aggregation."""
    from .codes import residual_class

    cls = "detected" if report.residual is None else residual_class(code, report.residual)
    return TrialOutcome(
        status=report.status, erased_count=len(report.erased), residual_class=cls
    )


@dataclass(frozen=True)
class SweepRow:
    """One aggregated Monte Carlo estimate at one noise point."""

    seed: int
    model: str
    code: str
    n: int
    param1: float
    param2: float
    param3: float
    trials: int
    failures: int
    rate: float
    ci95: float

    def as_dict(self) -> dict:
        return {
            "seed": self.seed,
            "model": self.model,
            "code": self.code,
            "n": self.n,
            "param1": self.param1,
            "param2": self.param2,
            "param3": self.param3,
            "trials": self.trials,
            "failures": self.failures,
            "rate": self.rate,
            "ci95": self.ci95,
        }


def ci95_halfwidth(failures: int, trials: int) -> float:
    """Normal-approximation 95% CI halfwidth, floored at 1/trials."""
    rate = failures / trials
    return max(1.96 * math.sqrt(rate * (1.0 - rate) / trials), 1.0 / trials)


# --- effective per-step rates -----------------------------------------------

def erasure_effective_rate(em: float, eb: float) -> float:
    """Per-qubit detected-error probability for one step."""
    return em + (1.0 - em) * eb


def threshold_curve_point(em: float) -> float:
    """Bell-measurement rate on the erasure threshold boundary at a given
    memory rate: solves the effective rate against the capacity 1/2."""
    if em >= 0.5:
        return 0.0
    return (0.5 - em) / (1.0 - em)


def depolarizing_effective_rate(dm: float, db: float, dp: float) -> float:
    """Per-qubit undetected error rate for one step, with the four
    cancellation terms implemented exactly as printed."""
    no_error = (
        (1 - dp) * (1 - dm) * (1 - dp) * (1 - db)
        + dp * (dm / 3) * (1 - dp) * (1 - db)
        + (1 - dp) * (1 - dm) * dp * (db / 3)
        + (dp * (1 - dm / 3) + (1 - dp) * dm) * (1 - dp) * (db / 3)
    )
    return 1.0 - no_error


def depolarizing_rate_bound(dm: float, db: float, dp: float) -> float:
    """Simple union upper bound on the same rate."""
    return 2 * dp + dm + db


_PAULI_VALUES = ((0, 0), (1, 0), (1, 1), (0, 1))  # I, X, Y, Z


def depolarizing_oracle_rate(dm: float, db: float, dp: float) -> float:
    """Exact enumeration over the four single-qubit error sources.

    Composes old-preparation, memory, new-preparation and Bell-answer
    offsets (each identity, or uniform over X/Y/Z at rate/3) and returns
    the probability the product is not the identity.  Independent check
    of the closed form; the two are equal when dp = 0 and differ above
    that because the closed form only counts four cancellation families.
    """
    rates = (dp, dm, dp, db)
    identity_prob = 0.0
    for combo in np.ndindex(4, 4, 4, 4):
        a = b = 0
        prob = 1.0
        for src, choice in enumerate(combo):
            prob *= (1.0 - rates[src]) if choice == 0 else rates[src] / 3.0
            a ^= _PAULI_VALUES[choice][0]
            b ^= _PAULI_VALUES[choice][1]
        if a == 0 and b == 0:
            identity_prob += prob
    return 1.0 - identity_prob


# --- erasure channel ---------------------------------------------------------

def sample_erasures(n: int, p: float, rng: np.random.Generator) -> frozenset[int]:
    """Each qubit independently erased with probability p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"rate {p} outside [0, 1]")
    return frozenset(int(q) for q in np.nonzero(rng.random(n) < p)[0])


def _correctable_checker(code: StabilizerCode):
    """Memoized uncorrectability test on int-coded erasure patterns."""
    packed_dual = code.packed_dual
    packed_rows = code.packed_rows
    dual_dim = 2 * code.n - code.l
    l = code.l
    cache: dict[int, bool] = {}

    def uncorrectable(pattern: int) -> bool:
        hit = cache.get(pattern)
        if hit is not None:
            return hit
        keep = ~_pattern_mask(pattern)
        inside_dual = dual_dim - gf2.rank_packed(r & keep for r in packed_dual)
        inside_span = l - gf2.rank_packed(r & keep for r in packed_rows)
        bad = inside_dual != inside_span
        cache[pattern] = bad
        return bad

    return uncorrectable


def _pattern_mask(pattern: int) -> int:
    """Spread qubit bits onto their (a, b) column pairs."""
    mask = 0
    q = 0
    while pattern:
        if pattern & 1:
            mask |= 0b11 << (2 * q)
        pattern >>= 1
        q += 1
    return mask


def exact_logical_erasure_rate(code: StabilizerCode, p: float) -> float:
    """Sum over all 2^n erasure patterns (n <= 12)."""
    if code.n > 12:
        raise ValueError(f"exact mode enumerates 2^n subsets; n={code.n} is too large")
    uncorrectable = _correctable_checker(code)
    total = 0.0
    for pattern in range(1 << code.n):
        if uncorrectable(pattern):
            size = pattern.bit_count()
            total += p**size * (1.0 - p) ** (code.n - size)
    return total


def logical_erasure_rate(
    code: StabilizerCode,
    p: float,
    trials: int,
    seed: int,
    code_id: str | None = None,
) -> SweepRow:
    """Monte Carlo logical (detected) erasure rate at per-qubit rate p.

    A trial fails when the sampled erasure pattern is not correctable.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    uncorrectable = _correctable_checker(code)
    failures = 0
    done = 0
    while done < trials:
        chunk = min(_CHUNK, trials - done)
        rng = np.random.default_rng([seed, done // _CHUNK])
        draws = rng.random((_CHUNK, code.n))[:chunk] < p
        patterns = draws @ (1 << np.arange(code.n, dtype=np.int64))
        for pat in patterns:
            if uncorrectable(int(pat)):
                failures += 1
        done += chunk
    return SweepRow(
        seed=seed,
        model="erasure",
        code=code_id or f"n{code.n}k{code.k}",
        n=code.n,
        param1=p,
        param2=p,
        param3=p,
        trials=trials,
        failures=failures,
        rate=failures / trials,
        ci95=ci95_halfwidth(failures, trials),
    )


# --- depolarizing channel ----------------------------------------------------

def _four_source_errors(
    n: int, dm: float, db: float, dp: float, rng: np.random.Generator, trials: int
) -> np.ndarray:
    """Per-trial composed Pauli errors, shape (trials, 2n) uint8."""
    draws = rng.random((trials, 4, n, 2))
    rates = np.array([dp, dm, dp, db]).reshape(1, 4, 1)
    occurs = draws[..., 0] < rates
    which = np.minimum((draws[..., 1] * 3).astype(np.int64), 2)  # 0=X 1=Y 2=Z
    a_bits = occurs & (which <= 1)
    b_bits = occurs & (which >= 1)
    a = np.bitwise_xor.reduce(a_bits, axis=1)
    b = np.bitwise_xor.reduce(b_bits, axis=1)
    out = np.zeros((trials, 2 * n), dtype=np.uint8)
    out[:, 0::2] = a
    out[:, 1::2] = b
    return out


def logical_depolarizing_rate(
    code: StabilizerCode,
    params: NoiseParams,
    trials: int,
    seed: int,
    code_id: str | None = None,
) -> SweepRow:
    """Monte Carlo logical error rate of one step under the four-source
    depolarizing model with most-likely-coset decoding.

    The decoder's prior is the exact per-qubit marginal of the composed
    channel.  A trial fails when the residual after correction acts as a
    logical operator.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    tx, tz = logical_pair(code)
    marginal = depolarizing_oracle_rate(params.dm, params.db, params.dp)
    # Precompute the ML correction for each of the 2^l syndromes.
    powers = 1 << np.arange(code.l, dtype=np.int64)
    table = np.zeros((1 << code.l, 2 * code.n), dtype=np.uint8)
    for idx in range(1 << code.l):
        e = np.array([(idx >> i) & 1 for i in range(code.l)], dtype=np.uint8)
        table[idx] = ml_decode_depolarizing(code, e, marginal)
    mx = gf2.symplectic_partner(tx).astype(np.int64)
    mz = gf2.symplectic_partner(tz).astype(np.int64)
    synd_T = code.syndrome_matrix.T.astype(np.int64)

    failures = 0
    done = 0
    while done < trials:
        chunk = min(_CHUNK, trials - done)
        rng = np.random.default_rng([seed, done // _CHUNK])
        errors = _four_source_errors(code.n, params.dm, params.db, params.dp, rng, _CHUNK)[:chunk]
        syndromes = (errors.astype(np.int64) @ synd_T) % 2
        idxs = syndromes @ powers
        residual = errors ^ table[idxs]
        bad_x = (residual.astype(np.int64) @ mx) % 2
        bad_z = (residual.astype(np.int64) @ mz) % 2
        failures += int(np.count_nonzero(bad_x | bad_z))
        done += chunk
    return SweepRow(
        seed=seed,
        model="depolarizing",
        code=code_id or f"n{code.n}k{code.k}",
        n=code.n,
        param1=params.dm,
        param2=params.db,
        param3=params.dp,
        trials=trials,
        failures=failures,
        rate=failures / trials,
        ci95=ci95_halfwidth(failures, trials),
    )


# --- threshold-region sweeps --------------------------------------------------

@dataclass(frozen=True)
class GridVerdict:
    point: tuple[float, ...]
    verdict: str  # "below" | "not_below" | "indeterminate"


def classify_pair(small: SweepRow, large: SweepRow) -> str:
    """Below threshold iff the logical rate strictly drops with code size,
    with non-overlapping 95% intervals; the mirror image is 'not_below'."""
    if small.rate - small.ci95 > large.rate + large.ci95:
        return "below"
    if large.rate - large.ci95 > small.rate + small.ci95:
        return "not_below"
    return "indeterminate"


def threshold_region_sweep(
    codes_by_size: Sequence[tuple[str, StabilizerCode]],
    grid: Sequence[tuple[float, float]],
    trials: int,
    seed: int,
) -> tuple[list[SweepRow], list[GridVerdict], dict[float, float]]:
    """Erasure-model region scan over (em, eb) points.

    Classifies each point by comparing consecutive code sizes and emits
    the empirical boundary: for each em, the largest eb still classified
    below threshold.
    """
    if len(codes_by_size) < 2:
        raise ValueError("need at least two code sizes")
    rows: list[SweepRow] = []
    verdicts: list[GridVerdict] = []
    boundary: dict[float, float] = {}
    for p_idx, (em, eb) in enumerate(grid):
        p_eff = erasure_effective_rate(em, eb)
        point_rows = []
        for c_idx, (code_id, code) in enumerate(codes_by_size):
            row_seed = int(np.random.SeedSequence([seed, p_idx, c_idx]).generate_state(1)[0])
            row = logical_erasure_rate(code, p_eff, trials, row_seed, code_id=code_id)
            row = SweepRow(**{**row.as_dict(), "param1": em, "param2": eb, "param3": p_eff})
            point_rows.append(row)
        rows.extend(point_rows)
        pair_verdicts = {
            classify_pair(a, b) for a, b in zip(point_rows, point_rows[1:])
        }
        if pair_verdicts == {"below"}:
            verdict = "below"
        elif pair_verdicts == {"not_below"}:
            verdict = "not_below"
        else:
            verdict = "indeterminate"
        verdicts.append(GridVerdict((em, eb), verdict))
        if verdict == "below" and eb >= boundary.get(em, -1.0):
            boundary[em] = eb
    return rows, verdicts, boundary


# --- concatenation and overhead -----------------------------------------------

def concatenated_rate(f1: float, l2: int, t: int) -> float:
    """Exact probability of more than t failures among l2 independent
    inner blocks each failing with probability f1 (binomial tail)."""
    if not 0.0 <= f1 <= 1.0:
        raise ValueError(f"rate {f1} outside [0, 1]")
    if not 0 <= t <= l2:
        raise ValueError(f"need 0 <= t <= l2, got t={t}, l2={l2}")
    return sum(
        math.comb(l2, j) * f1**j * (1.0 - f1) ** (l2 - j) for j in range(t + 1, l2 + 1)
    )


def concatenated_rate_bound(l1: int, l2: int, c: float) -> float:
    """Union-style bound on the two-level failure rate when the inner
    code reaches rate exp(-c*l1) and the outer corrects l2/6 losses."""
    t = l2 // 6
    return math.comb(l2, t) * math.exp(-c * l1 * t)


@dataclass(frozen=True)
class OverheadParams:
    """Inputs to the state-preparation overhead calculator."""

    N: float                 # computation length (elementary operations)
    epsilon: float           # target overall failure probability
    l1: int                  # inner code length
    l2: int                  # outer code length
    c: float = 1.0           # inner-rate exponent: f1 = exp(-c*l1)
    c_rate: float = 1.0      # concatenated-rate exponent c' in exp(-c' n)
    c_gates: float = 1.0     # preparation-network exponent c'' in exp(c'' n^2)
    c_step: float = 1.0      # per-step success exponent c''' in 1 - exp(-c''' l1)
    d: float = 1.0           # first-level overhead exponent in exp(d n)

    def __post_init__(self):
        for name in ("N", "epsilon", "l1", "l2", "c", "c_rate", "c_gates", "c_step", "d"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    @property
    def n(self) -> int:
        return self.l1 * self.l2


@dataclass(frozen=True)
class OverheadReport:
    """Each closed-form requirement and bound, labeled."""

    required_n: float            # code length needed: ln(N/eps) / c_rate
    doubling_increment: float    # extra n per doubling of N: ln(2) / c_rate
    naive_log_overhead: float    # single-level resources: c_gates * n^2 (log scale)
    first_level_log_overhead: float  # c_gates * l1^2, to be dominated by d*n
    step_success_lower: float    # 1 - exp(-c_step * l1)
    prep_success_lower: float    # 1 - c_rate * l2^2 * exp(-c_step * l1)
    total_log_overhead: float    # ln(2 c_rate l2^2) + d*n
    poly_slope: float            # slope of log overhead in log(N/eps): d / c_rate


def overhead_report(params: OverheadParams) -> OverheadReport:
    """Evaluate the two-level preparation overhead bounds transparently."""
    log_ratio = math.log(params.N / params.epsilon)
    n = params.n
    return OverheadReport(
        required_n=log_ratio / params.c_rate,
        doubling_increment=math.log(2.0) / params.c_rate,
        naive_log_overhead=params.c_gates * n**2,
        first_level_log_overhead=params.c_gates * params.l1**2,
        step_success_lower=1.0 - math.exp(-params.c_step * params.l1),
        prep_success_lower=1.0 - params.c_rate * params.l2**2 * math.exp(-params.c_step * params.l1),
        total_log_overhead=math.log(2.0 * params.c_rate * params.l2**2) + params.d * n,
        poly_slope=params.d / params.c_rate,
    )
