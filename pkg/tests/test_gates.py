import numpy as np
import pytest

from spindomino import (StateVector, ValidationError, apply_cnot, basis_state,
                        domino_circuit, fidelity, polarization, prepare_initial)


def random_ab(rng):
    pair = rng.normal(size=4)
    a, b = complex(pair[0], pair[1]), complex(pair[2], pair[3])
    scale = np.sqrt(abs(a) ** 2 + abs(b) ** 2)
    return a / scale, b / scale


class TestBasisState:
    def test_all_up_two_spins(self):
        np.testing.assert_array_equal(basis_state("00").amplitudes, [1, 0, 0, 0])

    def test_spin_one_is_most_significant(self):
        np.testing.assert_array_equal(basis_state("10").amplitudes, [0, 0, 1, 0])

    def test_last_spin_down(self):
        amps = basis_state("0001").amplitudes
        assert amps.shape == (16,)
        assert amps[1] == 1.0 and np.count_nonzero(amps) == 1

    def test_bad_label(self):
        with pytest.raises(ValidationError):
            basis_state("01x0")


class TestPrepareInitial:
    def test_pure_up(self):
        out = prepare_initial(1.0, 0.0, 4)
        assert fidelity(out, basis_state("0000")) == pytest.approx(1.0)

    def test_pure_down_first_spin(self):
        out = prepare_initial(0.0, 1.0, 4)
        assert fidelity(out, basis_state("1000")) == pytest.approx(1.0)

    def test_balanced_superposition(self):
        out = prepare_initial(1 / np.sqrt(2), 1 / np.sqrt(2), 2)
        np.testing.assert_allclose(
            out.amplitudes, [1 / np.sqrt(2), 0, 1 / np.sqrt(2), 0])

    def test_unnormalized_rejected(self):
        with pytest.raises(ValidationError):
            prepare_initial(1.0, 1.0, 2)


class TestApplyCnot:
    def test_control_down_flips_target(self):
        out = apply_cnot(basis_state("10"), 1, 2)
        assert fidelity(out, basis_state("11")) == 1.0

    def test_control_up_does_nothing(self):
        out = apply_cnot(basis_state("00"), 1, 2)
        assert fidelity(out, basis_state("00")) == 1.0

    def test_linearity_makes_bell_pair(self):
        plus = StateVector(np.array([1, 0, 1, 0]) / np.sqrt(2), 2)
        out = apply_cnot(plus, 1, 2)
        np.testing.assert_allclose(
            out.amplitudes, np.array([1, 0, 0, 1]) / np.sqrt(2))

    def test_same_control_target_rejected(self):
        with pytest.raises(ValidationError):
            apply_cnot(basis_state("00"), 1, 1)

    def test_index_out_of_range(self):
        with pytest.raises(ValidationError):
            apply_cnot(basis_state("00"), 1, 3)

    def test_permutation_preserves_amplitude_multiset(self):
        rng = np.random.default_rng(5)
        amps = rng.normal(size=8) + 1j * rng.normal(size=8)
        amps /= np.linalg.norm(amps)
        state = StateVector(amps, 3)
        out = apply_cnot(state, 2, 3)
        # a permutation leaves the sorted magnitudes bit-for-bit identical
        np.testing.assert_array_equal(
            np.sort(np.abs(out.amplitudes)), np.sort(np.abs(amps)))


class TestDominoCircuit:
    def test_seed_flip_spreads_to_all_spins(self):
        out = domino_circuit(basis_state("1000"))
        assert fidelity(out, basis_state("1111")) == 1.0

    def test_all_up_is_fixed_point(self):
        out = domino_circuit(basis_state("0000"))
        assert fidelity(out, basis_state("0000")) == 1.0

    def test_expands_superposition_to_ghz_form(self):
        out = domino_circuit(prepare_initial(0.6, 0.8, 4))
        expected = np.zeros(16, dtype=complex)
        expected[0], expected[15] = 0.6, 0.8
        np.testing.assert_allclose(out.amplitudes, expected)

    def test_single_spin_rejected(self):
        with pytest.raises(ValidationError):
            domino_circuit(basis_state("0"))

    def test_reversed_gates_invert_the_circuit(self):
        rng = np.random.default_rng(9)
        amps = rng.normal(size=32) + 1j * rng.normal(size=32)
        amps /= np.linalg.norm(amps)
        state = StateVector(amps, 5)
        out = domino_circuit(state)
        for i in range(4, 0, -1):   # each CNOT is self-inverse
            out = apply_cnot(out, i, i + 1)
        np.testing.assert_array_equal(out.amplitudes, amps)

    @pytest.mark.parametrize("n", [2, 3, 6, 10])
    def test_random_superpositions_expand_exactly(self, n):
        rng = np.random.default_rng(100 + n)
        for _ in range(100):
            a, b = random_ab(rng)
            out = domino_circuit(prepare_initial(a, b, n))
            expected = a * basis_state("0" * n).amplitudes \
                + b * basis_state("1" * n).amplitudes
            target = StateVector(expected, n, check=False)
            assert fidelity(out, target) >= 1.0 - 1e-12

    def test_amplification_identity(self):
        # the output total polarization is the single-spin value scaled by n
        rng = np.random.default_rng(17)
        for n in (2, 4, 7):
            a, b = random_ab(rng)
            out = domino_circuit(prepare_initial(a, b, n))
            total = sum(polarization(out, i) for i in range(1, n + 1))
            assert total == pytest.approx((abs(a) ** 2 - abs(b) ** 2) * n, abs=1e-12)


class TestFidelity:
    def test_self_fidelity(self):
        s = basis_state("01")
        assert fidelity(s, s) == 1.0

    def test_orthogonal_states(self):
        assert fidelity(basis_state("01"), basis_state("10")) == 0.0

    def test_half_overlap(self):
        plus = StateVector(np.array([1, 1]) / np.sqrt(2), 1)
        assert fidelity(plus, basis_state("0")) == pytest.approx(0.5)

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError):
            fidelity(basis_state("0"), basis_state("00"))


class TestStateVectorValidation:
    def test_norm_enforced(self):
        with pytest.raises(ValidationError):
            StateVector(np.array([1.0, 1.0]), 1)

    def test_length_enforced(self):
        with pytest.raises(ValidationError):
            StateVector(np.array([1.0, 0.0, 0.0]), 2)
