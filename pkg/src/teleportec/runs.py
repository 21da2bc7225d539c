"""Server-side orchestration: code resolution, sweeps, demo traces, curves.

These functions back the service endpoints; they work purely on plain
data (dicts, lists, floats) so responses serialize deterministically.
"""
from __future__ import annotations

import itertools
import math
from typing import Sequence

import numpy as np

from . import codes, dense, noise, pauli, teleport

DENSE_DEMO_MAX_N = dense.MAX_QUBITS // 3


class GuardError(ValueError):
    """A numeric guard was exceeded (maps to CLI exit code 4)."""


class ConfigError(ValueError):
    """Bad run configuration (maps to CLI exit code 2)."""


def resolve_code(spec: dict, seed: int = 0, index: int = 0) -> tuple[str, codes.StabilizerCode]:
    """Build a stabilizer code from a source spec.

    Kinds: {"kind": "library", "name": ...}, {"kind": "random", "n": ..,
    "k": ..}, {"kind": "text", "text": ..., "label": ...}.  Random codes
    are seeded from (seed, index) so sweeps are reproducible.
    """
    kind = spec.get("kind")
    if kind == "library":
        name = spec.get("name", "")
        try:
            return name, codes.library_code(name)
        except KeyError as exc:
            raise ConfigError(str(exc)) from exc
    if kind == "random":
        n, k = int(spec["n"]), int(spec["k"])
        if not 0 <= k <= n:
            raise ConfigError(f"random code needs 0 <= k <= n, got n={n}, k={k}")
        if n > 64:
            raise GuardError(f"random code size n={n} beyond the supported range")
        rng = np.random.default_rng([seed, 0xC0DE, index])
        return f"random{n}_{k}", codes.random_code(n, k, rng)
    if kind == "text":
        label = spec.get("label") or "text"
        code = codes.parse_code_text(spec.get("text", ""))
        return label, code
    raise ConfigError(f"unknown code source kind {spec.get('kind')!r}")


def check_code_report(code_id: str, code: codes.StabilizerCode) -> dict:
    """Inspection report: parameters, distance, logicals, erasure summary."""
    report: dict = {
        "code": code_id,
        "n": code.n,
        "l": code.l,
        "k": code.k,
        "rows": code.rows_as_strings(),
    }
    try:
        d = codes.min_distance(code)
        report["distance"] = None if math.isinf(d) else int(d)
        report["distance_note"] = "infinite (dual equals span)" if math.isinf(d) else None
    except codes.TooLargeError:
        report["distance"] = None
        report["distance_note"] = "skipped (beyond brute-force guard)"
    if code.k == 1:
        tx, tz = codes.logical_pair(code)
        report["logical_x"] = pauli.format_pauli(tx)
        report["logical_z"] = pauli.format_pauli(tz)
    else:
        report["logical_x"] = report["logical_z"] = None
    summary = []
    if code.n <= 12:
        for size in range(code.n + 1):
            total = math.comb(code.n, size)
            good = sum(
                1
                for S in itertools.combinations(range(code.n), size)
                if codes.is_erasure_correctable(code, S)
            )
            summary.append({"size": size, "correctable": good, "total": total})
    report["erasure_summary"] = summary
    return report


def _grid_values(axis) -> list[float]:
    """An axis is a scalar or a (start, stop, step) range, inclusive."""
    if axis is None:
        return [0.0]
    if isinstance(axis, (int, float)):
        return [float(axis)]
    start, stop, step = (float(x) for x in axis)
    if step <= 0:
        raise ConfigError(f"grid step must be positive, got {step}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(max(count, 1))]


def run_sweep(
    model: str,
    code_specs: Sequence[dict],
    trials: int,
    seed: int,
    em=None,
    eb=None,
    dm=None,
    db=None,
    dp=None,
) -> list[dict]:
    """One SweepRow per grid point per code, sorted by params then size."""
    if trials < 1:
        raise ConfigError(f"trials must be >= 1, got {trials}")
    if not code_specs:
        raise ConfigError("at least one code source is required")
    if model not in ("erasure", "depolarizing"):
        raise ConfigError(f"unknown model {model!r}")
    resolved = [resolve_code(spec, seed=seed, index=i) for i, spec in enumerate(code_specs)]

    if model == "erasure":
        em_vals = _grid_values(em)
        eb_vals = _grid_values(eb) if eb is not None else None
        if eb_vals is None:
            grid = [(v, v) for v in em_vals]  # eb omitted: scan the diagonal
        else:
            grid = [(a, b) for a in em_vals for b in eb_vals]
    else:
        grid = [
            (a, b, c)
            for a in _grid_values(dm)
            for b in _grid_values(db)
            for c in _grid_values(dp)
        ]

    rows: list[noise.SweepRow] = []
    for p_idx, point in enumerate(grid):
        for c_idx, (code_id, code) in enumerate(resolved):
            row_seed = int(np.random.SeedSequence([seed, p_idx, c_idx]).generate_state(1)[0])
            if model == "erasure":
                em_v, eb_v = point
                for rate_name, v in (("em", em_v), ("eb", eb_v)):
                    if not 0.0 <= v < 1.0:
                        raise ConfigError(f"{rate_name}={v} outside [0, 1)")
                p_eff = noise.erasure_effective_rate(em_v, eb_v)
                row = noise.logical_erasure_rate(code, p_eff, trials, row_seed, code_id=code_id)
                row = noise.SweepRow(
                    **{**row.as_dict(), "param1": em_v, "param2": eb_v, "param3": p_eff}
                )
            else:
                dm_v, db_v, dp_v = point
                params = noise.NoiseParams(model="depolarizing", dm=dm_v, db=db_v, dp=dp_v)
                if code.n > 10:
                    raise GuardError(
                        f"depolarizing decoding is exhaustive; n={code.n} exceeds the n<=10 guard"
                    )
                if code.k != 1:
                    raise ConfigError(f"depolarizing sweeps need k=1 codes, got k={code.k}")
                row = noise.logical_depolarizing_rate(code, params, trials, row_seed, code_id=code_id)
            rows.append(row)
    rows.sort(key=lambda r: (r.param1, r.param2, r.param3, r.n))
    return [r.as_dict() for r in rows]


def _outcome_str(f) -> str:
    return "erased" if f is None else f"{f[0]}{f[1]}"


def teleport_demo(
    code_spec: dict,
    seed: int,
    model: str = "erasure",
    em: float = 0.0,
    eb: float = 0.0,
    dm: float = 0.0,
    db: float = 0.0,
    dp: float = 0.0,
    inject: str | None = None,
    run_dense: bool = False,
) -> dict:
    """One fully-traced frame-level step, optionally cross-checked densely."""
    code_id, code = resolve_code(code_spec, seed=seed)
    rng = np.random.default_rng(seed)
    n = code.n

    if model == "erasure":
        draws = rng.random((n, 2))
        storage_erased = frozenset(int(q) for q in range(n) if draws[q, 0] < em)
        bell_erased = frozenset(
            int(q) for q in range(n) if q not in storage_erased and draws[q, 1] < eb
        )
        erased = storage_erased | bell_erased
        if inject is not None:
            incoming = pauli.parse_pauli(inject)
            if incoming.shape[0] != 2 * n:
                raise ConfigError(f"injected Pauli must act on {n} qubits")
            extra = storage_erased | pauli.support(incoming)
        else:
            incoming = np.zeros(2 * n, dtype=np.uint8)
            for q in erased:  # located errors live on the erased qubits
                incoming[2 * q] = rng.integers(0, 2)
                incoming[2 * q + 1] = rng.integers(0, 2)
            extra = storage_erased
        record = teleport.sample_bell_record(code, incoming, rng)
        record = teleport.BellRecord(
            tuple(None if q in bell_erased else f for q, f in enumerate(record.outcomes))
        )
        report = teleport.teleport_ec_step(code, incoming, record, extra_erased=extra)
    elif model == "depolarizing":
        if code.n > 10 or code.k != 1:
            raise GuardError("depolarizing demo needs a k=1 code with n <= 10")
        if inject is not None:
            incoming = pauli.parse_pauli(inject)
        else:
            incoming = noise._four_source_errors(n, dm, db, dp, rng, 1)[0]
        record = teleport.sample_bell_record(code, incoming, rng)
        rate = noise.depolarizing_oracle_rate(dm, db, dp)
        report = teleport.teleport_ec_step(
            code, incoming, record, decoder="ml", depolarizing_rate=max(rate, 1e-6)
        )
    else:
        raise ConfigError(f"unknown model {model!r}")

    outcome = noise.classify_step(code, report)
    out = {
        "code": code_id,
        "n": n,
        "model": model,
        "incoming": pauli.format_pauli(incoming),
        "erased": sorted(report.erased),
        "outcomes": [_outcome_str(f) for f in record.outcomes],
        "correction_product": pauli.format_pauli(teleport.record_correction(record)),
        "inferred_syndrome": [int(b) for b in report.inferred_syndrome],
        "decoder_correction": None
        if report.correction is None
        else pauli.format_pauli(report.correction),
        "status": outcome.status,
        "residual_class": outcome.residual_class,
    }
    if run_dense:
        if 3 * n > dense.MAX_QUBITS:
            raise GuardError(
                f"dense cross-check needs n <= {DENSE_DEMO_MAX_N}, code has n={n}"
            )
        drng = np.random.default_rng([seed, 0xD])
        state = dense.random_state(n, drng)
        state, _ = dense.project_syndrome(state, code, np.zeros(code.l, dtype=np.uint8))
        result = dense.dense_teleport_ec(code, state, incoming, drng)
        syndromes_match = bool(
            np.array_equal(result.inferred_syndrome, result.direct_syndrome)
        )
        fid = dense.fidelity(result.output_state, result.direct_state)
        out["dense"] = {
            "verdict": "equivalent" if syndromes_match and fid >= 1 - 1e-9 else "MISMATCH",
            "syndrome": [int(b) for b in result.direct_syndrome],
            "fidelity": fid,
        }
    return out


def curve_points(model: str, resolution: int) -> dict:
    """Analytic threshold boundary data for plotting."""
    if resolution < 2:
        raise ConfigError(f"resolution must be >= 2, got {resolution}")
    if model == "erasure":
        xs = [0.5 * i / (resolution - 1) for i in range(resolution)]
        return {
            "columns": ["em", "eb"],
            "points": [[x, noise.threshold_curve_point(x)] for x in xs],
        }
    if model == "depolarizing":
        target = 0.19  # best known tolerable-rate bound for this family

        def solve_dp(d: float) -> float:
            lo, hi = 0.0, 1.0
            if noise.depolarizing_effective_rate(d, d, lo) >= target:
                return 0.0
            while hi - lo > 1e-9:
                mid = (lo + hi) / 2
                if noise.depolarizing_effective_rate(d, d, mid) < target:
                    lo = mid
                else:
                    hi = mid
            return (lo + hi) / 2

        # Largest balanced d with any tolerable dp, then scan below it.
        lo, hi = 0.0, 0.5
        while hi - lo > 1e-9:
            mid = (lo + hi) / 2
            if noise.depolarizing_effective_rate(mid, mid, 0.0) < target:
                lo = mid
            else:
                hi = mid
        d_max = (lo + hi) / 2
        xs = [d_max * i / (resolution - 1) for i in range(resolution)]
        return {"columns": ["d", "dp"], "points": [[x, solve_dp(x)] for x in xs]}
    raise ConfigError(f"unknown model {model!r}")
