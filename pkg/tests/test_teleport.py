"""Frame-level teleportation step tests, including dense cross-checks of
the Clifford frame conjugation."""
import itertools

import numpy as np
import pytest

from teleportec import codes, gf2, pauli, teleport
from teleportec.pauli import PhasedPauli
from teleportec.teleport import BellRecord, PauliFrame


class TestStandardCorrection:
    def test_table(self):
        assert np.array_equal(teleport.standard_teleport_correction((0, 0)), [0, 0])
        assert np.array_equal(teleport.standard_teleport_correction((1, 0)), [0, 1])  # Z
        assert np.array_equal(teleport.standard_teleport_correction((0, 1)), [1, 0])  # X
        assert np.array_equal(teleport.standard_teleport_correction((1, 1)), [1, 1])

    def test_record_involution(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            g = rng.integers(0, 2, size=10, dtype=np.uint8)
            rec = teleport.correction_to_record(g)
            assert np.array_equal(teleport.record_correction(rec), g)


class TestSampledRecords:
    def test_syndrome_identity(self):
        rng = np.random.default_rng(3)
        for _ in range(30):
            n = int(rng.integers(2, 7))
            code = codes.random_code(n, int(rng.integers(0, n + 1)), rng)
            err = rng.integers(0, 2, size=2 * n, dtype=np.uint8)
            rec = teleport.sample_bell_record(code, err, rng)
            report = teleport.teleport_ec_step(code, err, rec, extra_erased=pauli.support(err))
            assert np.array_equal(report.inferred_syndrome, codes.syndrome_shift(err, code))

    def test_syndrome_identity_with_offset(self):
        rng = np.random.default_rng(4)
        code = codes.library_code("five_qubit")
        for _ in range(20):
            err = rng.integers(0, 2, size=10, dtype=np.uint8)
            t = rng.integers(0, 2, size=4, dtype=np.uint8)
            rec = teleport.sample_bell_record(code, err, rng, prep_offset=t)
            report = teleport.teleport_ec_step(
                code, err, rec, prep_offset=t, extra_erased=pauli.support(err)
            )
            assert np.array_equal(report.inferred_syndrome, codes.syndrome_shift(err, code))

    def test_zero_noise_step_ok(self):
        code = codes.library_code("five_qubit")
        rng = np.random.default_rng(5)
        err = np.zeros(10, dtype=np.uint8)
        rec = teleport.sample_bell_record(code, err, rng)
        report = teleport.teleport_ec_step(code, err, rec)
        assert report.status == "ok"
        assert not report.inferred_syndrome.any()
        assert codes.residual_class(code, report.residual) == "stabilizer"


class TestBellNoise:
    def test_noise_shifts_syndrome_and_residual(self):
        rng = np.random.default_rng(7)
        code = codes.library_code("five_qubit")
        for _ in range(30):
            err = np.zeros(10, dtype=np.uint8)
            clean = teleport.sample_bell_record(code, err, rng)
            noisy = teleport.corrupt_bell_record(clean, rng, flip_prob=0.4)
            d = teleport.record_correction(noisy) ^ teleport.record_correction(clean)
            support = pauli.support(d)
            clean_report = teleport.teleport_ec_step(code, err, clean, extra_erased=support)
            report = teleport.teleport_ec_step(code, err, noisy, extra_erased=support)
            expected = codes.syndrome_shift(d, code)
            assert np.array_equal(report.inferred_syndrome, expected)
            if not codes.is_erasure_correctable(code, support):
                assert report.status == "detected_logical_erasure"
                continue
            # relative to the same record, the corruption shifts the
            # pre-correction residual by exactly d
            pre = report.residual ^ report.correction
            pre_clean = clean_report.residual ^ clean_report.correction
            assert np.array_equal(pre ^ pre_clean, d)

    def test_erasure_fill_in_independence(self):
        code = codes.library_code("five_qubit")
        rng = np.random.default_rng(8)
        S = (1, 3)
        err = np.zeros(10, dtype=np.uint8)
        err[2 * 1] = 1  # X on an erased qubit
        base = teleport.sample_bell_record(code, err, rng)
        residuals = []
        for fills in itertools.product(itertools.product((0, 1), repeat=2), repeat=len(S)):
            outcomes = list(base.outcomes)
            for q, f in zip(S, fills):
                outcomes[q] = f
            report = teleport.teleport_ec_step(
                code, err, BellRecord(tuple(outcomes)), extra_erased=S
            )
            assert report.status == "ok"
            residuals.append(report.residual)
        for r in residuals[1:]:
            assert codes.residual_class(code, r ^ residuals[0]) == "stabilizer"

    def test_noncorrectable_detected(self):
        code = codes.library_code("five_qubit")
        rng = np.random.default_rng(9)
        bad = next(
            S
            for S in itertools.combinations(range(5), 3)
            if not codes.is_erasure_correctable(code, S)
        )
        err = np.zeros(10, dtype=np.uint8)
        rec = teleport.sample_bell_record(code, err, rng)
        report = teleport.teleport_ec_step(code, err, rec, extra_erased=bad)
        assert report.status == "detected_logical_erasure"
        assert report.correction is None and report.residual is None

    def test_erased_outcomes_fill_to_zero(self):
        code = codes.library_code("four_one_two")
        rng = np.random.default_rng(10)
        err = np.zeros(8, dtype=np.uint8)
        rec = teleport.sample_bell_record(code, err, rng)
        outcomes = list(rec.outcomes)
        outcomes[2] = None
        report = teleport.teleport_ec_step(code, err, BellRecord(tuple(outcomes)))
        assert report.status == "ok"
        assert 2 in report.erased
        assert codes.residual_class(code, report.residual) == "stabilizer"


GATE_MATRICES = {
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
}
CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)


def gate_unitary(gate, n):
    """Dense unitary of one gate on n qubits (qubit 0 = MSB)."""
    if gate[0] == "CNOT":
        U = np.eye(2**n, dtype=complex)
        c, t = gate[1], gate[2]
        for idx in range(2**n):
            if (idx >> (n - 1 - c)) & 1:
                flipped = idx ^ (1 << (n - 1 - t))
                U[:, idx] = 0
                U[flipped, idx] = 1
        return U
    mats = [GATE_MATRICES[gate[0]] if q == gate[1] else np.eye(2) for q in range(n)]
    U = np.array([[1.0]], dtype=complex)
    for m in mats:
        U = np.kron(U, m)
    return U


class TestConjugateFrame:
    def test_textbook_cases(self):
        H0 = [("H", 0)]
        assert teleport.conjugate_frame(H0, PhasedPauli.from_string("X")) == PhasedPauli.from_string("Z")
        assert teleport.conjugate_frame(H0, PhasedPauli.from_string("Z")) == PhasedPauli.from_string("X")
        cnot = [("CNOT", 0, 1)]
        assert teleport.conjugate_frame(cnot, PhasedPauli.from_string("XI")) == PhasedPauli.from_string("XX")
        assert teleport.conjugate_frame(cnot, PhasedPauli.from_string("IZ")) == PhasedPauli.from_string("ZZ")
        # S X S^dag = i XZ
        assert teleport.conjugate_frame([("S", 0)], PhasedPauli.from_string("X")) == PhasedPauli.from_string("Y", 1)

    def test_against_dense(self):
        rng = np.random.default_rng(13)
        n = 3
        for _ in range(60):
            word = []
            for _ in range(int(rng.integers(1, 5))):
                kind = ("H", "S", "CNOT")[int(rng.integers(0, 3))]
                if kind == "CNOT":
                    c, t = rng.choice(n, size=2, replace=False)
                    word.append(("CNOT", int(c), int(t)))
                else:
                    word.append((kind, int(rng.integers(0, n))))
            p = PhasedPauli(rng.integers(0, 2, size=2 * n, dtype=np.uint8), int(rng.integers(0, 4)))
            out = teleport.conjugate_frame(word, p)
            U = np.eye(2**n, dtype=complex)
            for gate in word:
                U = gate_unitary(gate, n) @ U
            expected = U @ pauli.dense_matrix(p) @ U.conj().T
            assert np.allclose(pauli.dense_matrix(out), expected, atol=1e-9)

    def test_homomorphism(self):
        rng = np.random.default_rng(14)
        n = 3
        for _ in range(40):
            word = [("H", 0), ("CNOT", 0, 2), ("S", 1), ("CNOT", 2, 1)]
            p = PhasedPauli(rng.integers(0, 2, size=2 * n, dtype=np.uint8), int(rng.integers(0, 4)))
            q = PhasedPauli(rng.integers(0, 2, size=2 * n, dtype=np.uint8), int(rng.integers(0, 4)))
            lhs = teleport.conjugate_frame(word, pauli.multiply(p, q))
            rhs = pauli.multiply(
                teleport.conjugate_frame(word, p), teleport.conjugate_frame(word, q)
            )
            assert lhs == rhs

    def test_bad_gate(self):
        with pytest.raises(ValueError):
            teleport.conjugate_frame([("T", 0)], PhasedPauli.from_string("X"))
        with pytest.raises(IndexError):
            teleport.conjugate_frame([("H", 5)], PhasedPauli.from_string("X"))
        with pytest.raises(ValueError):
            teleport.conjugate_frame([("CNOT", 1, 1)], PhasedPauli.from_string("XX"))


class TestPauliFrame:
    def test_compose(self):
        frame = PauliFrame.identity(3).compose(pauli.parse_pauli("XIZ"))
        frame = frame.compose(pauli.parse_pauli("XZI"))
        assert np.array_equal(frame.vector, pauli.parse_pauli("IZZ"))


class TestLogicalMeasure:
    def test_zero_noise_measures_zero(self):
        code = codes.library_code("five_qubit")
        rng = np.random.default_rng(15)
        for _ in range(10):
            err = np.zeros(10, dtype=np.uint8)
            rec = teleport.sample_bell_record(code, err, rng)
            assert teleport.logical_measure_step(code, err, rec) == 0

    def test_correctable_erasure_corrected(self):
        code = codes.library_code("five_qubit")
        rng = np.random.default_rng(16)
        for q in range(5):
            err = np.zeros(10, dtype=np.uint8)
            err[2 * q] = 1
            err[2 * q + 1] = 1
            rec = teleport.sample_bell_record(code, err, rng)
            out = teleport.logical_measure_step(code, err, rec, extra_erased={q})
            assert out == 0

    def test_noncorrectable_detected(self):
        code = codes.library_code("five_qubit")
        rng = np.random.default_rng(17)
        bad = next(
            S
            for S in itertools.combinations(range(5), 3)
            if not codes.is_erasure_correctable(code, S)
        )
        err = np.zeros(10, dtype=np.uint8)
        rec = teleport.sample_bell_record(code, err, rng)
        assert teleport.logical_measure_step(code, err, rec, extra_erased=bad) is None

    def test_undetected_logical_flip_corrupts_outcome(self):
        code = codes.library_code("five_qubit")
        rng = np.random.default_rng(18)
        err = code.logical_x.copy()  # undetectable: zero syndrome
        rec = teleport.sample_bell_record(code, err, rng)
        assert teleport.logical_measure_step(code, err, rec) == 1

    def test_requires_logicals(self):
        code = codes.library_code("bell_pair")
        with pytest.raises(ValueError):
            teleport.logical_measure_step(
                code, np.zeros(4, dtype=np.uint8), BellRecord(((0, 0), (0, 0)))
            )
