"""Noise model, rate formula, and Monte Carlo estimator tests."""
import itertools
import math

import numpy as np
import pytest

from teleportec import codes, noise, pauli


class TestErasureRates:
    def test_zero_memory(self):
        assert noise.erasure_effective_rate(0.0, 0.37) == 0.37

    def test_arithmetic(self):
        assert noise.erasure_effective_rate(0.1, 0.2) == pytest.approx(0.28, abs=1e-15)

    def test_balanced_boundary(self):
        c = 1 - 1 / math.sqrt(2)
        assert noise.erasure_effective_rate(c, c) == pytest.approx(0.5, abs=1e-12)

    def test_monotone(self):
        grid = [i / 20 for i in range(10)]
        for a, b in itertools.product(grid, repeat=2):
            assert noise.erasure_effective_rate(a + 0.05, b) >= noise.erasure_effective_rate(a, b)
            assert noise.erasure_effective_rate(a, b + 0.05) >= noise.erasure_effective_rate(a, b)


class TestThresholdCurve:
    def test_endpoints(self):
        assert noise.threshold_curve_point(0.0) == 0.5
        assert noise.threshold_curve_point(0.5) == 0.0

    def test_balanced_point(self):
        c = 1 - 1 / math.sqrt(2)
        assert noise.threshold_curve_point(c) == pytest.approx(c, abs=1e-12)

    def test_solves_capacity(self):
        for i in range(50):
            em = 0.5 * i / 50
            eb = noise.threshold_curve_point(em)
            assert noise.erasure_effective_rate(em, eb) == pytest.approx(0.5, abs=1e-12)


class TestDepolarizingRates:
    def test_zero(self):
        assert noise.depolarizing_effective_rate(0, 0, 0) == 0.0
        assert noise.depolarizing_oracle_rate(0, 0, 0) == 0.0

    def test_closed_form_at_dp_zero(self):
        for dm in np.linspace(0, 0.5, 20):
            for db in np.linspace(0, 0.5, 20):
                expected = dm + db - (4.0 / 3.0) * dm * db
                assert noise.depolarizing_effective_rate(dm, db, 0.0) == pytest.approx(
                    expected, abs=1e-12
                )
                assert noise.depolarizing_oracle_rate(dm, db, 0.0) == pytest.approx(
                    expected, abs=1e-12
                )

    def test_printed_value(self):
        assert noise.depolarizing_effective_rate(0.1, 0.1, 0.0) == pytest.approx(
            0.1 + 0.1 - (4.0 / 3.0) * 0.01, abs=1e-9
        )

    def test_oracle_never_exceeds_closed_form(self):
        # the enumeration counts every cancelling combination, the closed
        # form only four families, so its survival probability is smaller
        for dm, db, dp in itertools.product((0.0, 0.05, 0.2), repeat=3):
            eq = noise.depolarizing_effective_rate(dm, db, dp)
            oracle = noise.depolarizing_oracle_rate(dm, db, dp)
            assert oracle <= eq + 1e-12

    def test_divergence_logged_above_dp_zero(self, capsys):
        eq = noise.depolarizing_effective_rate(0.01, 0.01, 0.05)
        oracle = noise.depolarizing_oracle_rate(0.01, 0.01, 0.05)
        print(f"closed-form={eq:.9f} enumeration={oracle:.9f} difference={eq - oracle:.3e}")
        assert abs(eq - oracle) > 1e-6  # genuinely different above dp=0

    def test_union_bound_dominates(self):
        for dm, db, dp in itertools.product((0.0, 0.05, 0.15), repeat=3):
            assert noise.depolarizing_rate_bound(dm, db, dp) >= noise.depolarizing_effective_rate(
                dm, db, dp
            ) - 1e-12


class TestSampleErasures:
    def test_extremes(self):
        rng = np.random.default_rng(1)
        assert noise.sample_erasures(6, 0.0, rng) == frozenset()
        assert noise.sample_erasures(6, 1.0, rng) == frozenset(range(6))

    def test_binomial_mean(self):
        rng = np.random.default_rng(2)
        n, p, samples = 9, 0.23, 100_000
        total = sum(len(noise.sample_erasures(n, p, rng)) for _ in range(samples))
        mean = total / samples
        sigma = math.sqrt(n * p * (1 - p) / samples)
        assert abs(mean - n * p) <= 3 * sigma


class TestLogicalErasureRate:
    def test_zero_rate(self):
        code = codes.library_code("five_qubit")
        row = noise.logical_erasure_rate(code, 0.0, 1000, seed=3)
        assert row.failures == 0 and row.rate == 0.0

    def test_exact_five_qubit(self):
        # independent oracle: enumerate subsets with the public
        # correctability test and weight them by the binomial factors
        code = codes.library_code("five_qubit")
        p = 0.3
        expected = 0.0
        for size in range(6):
            for S in itertools.combinations(range(5), size):
                if not codes.is_erasure_correctable(code, S):
                    expected += p**size * (1 - p) ** (5 - size)
        assert noise.exact_logical_erasure_rate(code, p) == pytest.approx(expected, abs=1e-12)

    def test_mc_matches_exact(self):
        code = codes.library_code("five_qubit")
        p = 0.3
        exact = noise.exact_logical_erasure_rate(code, p)
        row = noise.logical_erasure_rate(code, p, 100_000, seed=4)
        sigma = math.sqrt(exact * (1 - exact) / row.trials)
        assert abs(row.rate - exact) <= 3 * sigma

    def test_deterministic(self):
        code = codes.library_code("four_one_two")
        a = noise.logical_erasure_rate(code, 0.25, 5000, seed=9)
        b = noise.logical_erasure_rate(code, 0.25, 5000, seed=9)
        assert a == b
        c = noise.logical_erasure_rate(code, 0.25, 5000, seed=10)
        assert c.failures != a.failures or c.seed != a.seed

    def test_ci_formula(self):
        code = codes.library_code("five_qubit")
        row = noise.logical_erasure_rate(code, 0.3, 2000, seed=5)
        assert row.failures <= row.trials
        expected = max(1.96 * math.sqrt(row.rate * (1 - row.rate) / row.trials), 1 / row.trials)
        assert row.ci95 == expected


class TestLogicalDepolarizingRate:
    def test_zero_rates(self):
        code = codes.library_code("five_qubit")
        params = noise.NoiseParams(model="depolarizing")
        row = noise.logical_depolarizing_rate(code, params, 2000, seed=6)
        assert row.rate == 0.0

    def test_monotone_spot(self):
        code = codes.library_code("five_qubit")
        low = noise.logical_depolarizing_rate(
            code, noise.NoiseParams(model="depolarizing", dm=0.05), 20_000, seed=7
        )
        high = noise.logical_depolarizing_rate(
            code, noise.NoiseParams(model="depolarizing", dm=0.5), 20_000, seed=7
        )
        assert high.rate >= low.rate

    def test_matches_stepwise_decoding(self):
        # vectorized path against the per-trial decoder on a small batch
        code = codes.library_code("five_qubit")
        params = noise.NoiseParams(model="depolarizing", dm=0.15, db=0.1, dp=0.05)
        row = noise.logical_depolarizing_rate(code, params, 400, seed=8)
        marginal = noise.depolarizing_oracle_rate(params.dm, params.db, params.dp)
        rng = np.random.default_rng([8, 0])
        errors = noise._four_source_errors(code.n, params.dm, params.db, params.dp, rng, noise._CHUNK)[:400]
        failures = 0
        for err in errors:
            e = codes.syndrome_shift(err, code)
            corr = codes.ml_decode_depolarizing(code, e, marginal)
            if codes.residual_class(code, err ^ corr) == "logical":
                failures += 1
        assert failures == row.failures


class TestFourSourceSampling:
    def test_marginal_matches_oracle(self):
        dm, db, dp = 0.1, 0.07, 0.04
        rng = np.random.default_rng(11)
        errors = noise._four_source_errors(6, dm, db, dp, rng, 60_000)
        nontrivial = (errors[:, 0::2] | errors[:, 1::2]).astype(bool)
        observed = nontrivial.mean()
        expected = noise.depolarizing_oracle_rate(dm, db, dp)
        sigma = math.sqrt(expected * (1 - expected) / errors.size * 2)
        assert abs(observed - expected) <= 4 * sigma

    def test_uniform_over_xyz(self):
        rng = np.random.default_rng(12)
        errors = noise._four_source_errors(1, 0.3, 0.2, 0.1, rng, 90_000)
        counts = {"X": 0, "Y": 0, "Z": 0}
        for a, b in errors:
            if a or b:
                counts[{(1, 0): "X", (1, 1): "Y", (0, 1): "Z"}[(a, b)]] += 1
        total = sum(counts.values())
        for v in counts.values():
            assert abs(v / total - 1 / 3) < 0.02


class TestThresholdRegionSweep:
    def test_classifications(self):
        c8 = codes.random_code(8, 1, np.random.default_rng(600))
        c16 = codes.random_code(16, 1, np.random.default_rng(601))
        rows, verdicts, boundary = noise.threshold_region_sweep(
            [("n8", c8), ("n16", c16)], [(0.05, 0.05), (0.4, 0.4)], trials=4000, seed=55
        )
        assert verdicts[0].verdict == "below"
        assert verdicts[1].verdict == "not_below"
        assert boundary == {0.05: 0.05}
        assert len(rows) == 4
        assert all(r.param3 == noise.erasure_effective_rate(r.param1, r.param2) for r in rows)

    def test_needs_two_codes(self):
        c8 = codes.random_code(8, 1, np.random.default_rng(600))
        with pytest.raises(ValueError):
            noise.threshold_region_sweep([("n8", c8)], [(0.1, 0.1)], 100, 1)


class TestConcatenation:
    def test_trivial_rates(self):
        assert noise.concatenated_rate(0.0, 12, 2) == 0.0
        assert noise.concatenated_rate(1.0, 12, 2) == pytest.approx(1.0, abs=1e-12)

    def test_tail_below_bound(self):
        for l1 in range(2, 11):
            for l2 in (6, 12, 18):
                for c in (0.1, 0.5, 1.0):
                    f1 = math.exp(-c * l1)
                    tail = noise.concatenated_rate(f1, l2, l2 // 6)
                    bound = noise.concatenated_rate_bound(l1, l2, c)
                    assert tail <= bound + 1e-15

    def test_binomial_tail_vs_direct_sum(self):
        # cross-check against an explicit complement sum
        f1, l2, t = 0.3, 10, 3
        head = sum(math.comb(l2, j) * f1**j * (1 - f1) ** (l2 - j) for j in range(t + 1))
        assert noise.concatenated_rate(f1, l2, t) == pytest.approx(1 - head, abs=1e-12)


class TestOverhead:
    def test_required_n_inversion(self):
        params = noise.OverheadParams(N=math.e**2, epsilon=1.0, l1=3, l2=6, c_rate=2.0)
        assert noise.overhead_report(params).required_n == pytest.approx(1.0, abs=1e-12)

    def test_doubling_law(self):
        p1 = noise.OverheadParams(N=1e6, epsilon=1e-3, l1=3, l2=6, c_rate=0.7)
        p2 = noise.OverheadParams(N=2e6, epsilon=1e-3, l1=3, l2=6, c_rate=0.7)
        r1, r2 = noise.overhead_report(p1), noise.overhead_report(p2)
        assert r2.required_n - r1.required_n == pytest.approx(math.log(2) / 0.7, abs=1e-12)
        assert r1.doubling_increment == pytest.approx(math.log(2) / 0.7, abs=1e-15)

    def test_poly_slope(self):
        # log(bound) with n at the required value is linear in log(N/eps)
        # with slope d / c_rate, to 1e-6 across a grid
        d, c_rate, l2 = 1.3, 0.8, 6
        slopes = []
        logs = []
        ratios = [10.0**k for k in range(3, 9)]
        for ratio in ratios:
            params = noise.OverheadParams(N=ratio, epsilon=1.0, l1=3, l2=l2, c_rate=c_rate, d=d)
            rep = noise.overhead_report(params)
            logs.append(math.log(2 * c_rate * l2**2) + d * rep.required_n)
        for (r1, v1), (r2, v2) in zip(zip(ratios, logs), zip(ratios[1:], logs[1:])):
            slopes.append((v2 - v1) / (math.log(r2) - math.log(r1)))
        report = noise.overhead_report(
            noise.OverheadParams(N=1e6, epsilon=1.0, l1=3, l2=l2, c_rate=c_rate, d=d)
        )
        for s in slopes:
            assert s == pytest.approx(report.poly_slope, abs=1e-6)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            noise.OverheadParams(N=0, epsilon=1e-3, l1=3, l2=6)


class TestNoiseParams:
    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            noise.NoiseParams(model="erasure", em=1.2)
        with pytest.raises(ValueError):
            noise.NoiseParams(model="erasure", em=1.0)  # strictly below 1
        with pytest.raises(ValueError):
            noise.NoiseParams(model="wrong")
