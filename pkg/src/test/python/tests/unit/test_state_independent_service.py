import itertools

import numpy as np
import pytest

from isobasis.core.exceptions import InvalidInputException, UnsupportedParameterException
from isobasis.models.domain.quantum import LocalUnitary, LocalUnitaryString
from isobasis.services import construction_service
from isobasis.services import state_independent_service as si
from isobasis.services.state_independent_service import PauliLabel, PauliString
from isobasis.services.unitary_service import haar_random_unitary


def _real_orthogonal(d, seed):
    q, _ = np.linalg.qr(np.random.default_rng(seed).standard_normal((d, d)))
    return q


class TestPauliAlgebra:

    def test_label_round_trip(self):
        for label in si.ALL_LABELS:
            assert PauliLabel.parse(label.name) == label

    def test_only_xz_is_skew(self):
        assert [label.name for label in si.ALL_LABELS if label.is_skew] == ["XZ"]
        for label in si.ALL_LABELS:
            assert si.is_skew_symmetric(label.matrix()) is label.is_skew

    def test_closure_table_stays_in_set(self):
        table = si.pauli_closure_table()
        assert len(table) == 16
        for (a, b), (phase, name, _) in table.items():
            product = PauliLabel.parse(a).matrix() @ PauliLabel.parse(b).matrix()
            assert np.allclose(product, phase * PauliLabel.parse(name).matrix())
            assert abs(abs(phase) - 1) < 1e-12

    def test_parse_separators(self):
        expected = PauliString.from_labels([PauliLabel(1, 1), PauliLabel(0, 1), PauliLabel(0, 0)])
        assert PauliString.parse("XZ.Z.I") == expected
        assert PauliString.parse("XZ Z I") == expected
        assert PauliString.parse("XZ⊗Z⊗I") == expected
        assert expected.text() == "XZ.Z.I"

    def test_mask_layout(self):
        s = PauliString.parse("X.I.Z")
        assert (s.x_mask, s.z_mask) == (0b100, 0b001)

    def test_parse_rejects_unknown(self):
        with pytest.raises(InvalidInputException):
            PauliString.parse("X.Y")

    def test_from_local_string_ignores_phase(self):
        string = LocalUnitaryString.from_matrices(1j * PauliLabel(1, 0).matrix(), -PauliLabel(1, 1).matrix())
        assert PauliString.from_local_string(string).text() == "X.XZ"

    def test_to_local_string_matches_dense_matrix(self):
        s = PauliString.parse("X.XZ.Z")
        assert np.allclose(s.to_local_string().global_matrix(), s.matrix())

    def test_from_local_string_rejects_general_unitary(self):
        string = LocalUnitaryString((haar_random_unitary(2, seed=1),))
        with pytest.raises(InvalidInputException):
            PauliString.from_local_string(string)

    def test_parity_rule_matches_matrices_exhaustively(self):
        strings = [PauliString(2, x, z) for x in range(4) for z in range(4)]
        for s, t in itertools.product(strings, repeat=2):
            product = s.matrix().T @ t.matrix()
            assert si.product_is_skew(s, t) == si.is_skew_symmetric(product)

    def test_parity_rule_on_random_pairs_up_to_five_qubits(self, rng):
        for _ in range(10_000):
            n = int(rng.integers(1, 6))
            s, t = (PauliString(n, int(rng.integers(1 << n)), int(rng.integers(1 << n))) for _ in range(2))
            assert si.product_is_skew(s, t) == si.is_skew_symmetric(s.matrix().T @ t.matrix())

    def test_single_string_skew(self):
        assert PauliString.parse("XZ.I").is_skew()
        assert not PauliString.parse("XZ.XZ").is_skew()


class TestRealExpectation:

    @pytest.mark.parametrize("matrix", [
        np.eye(2),
        np.diag([1.0, -1.0]),
        np.array([[0.0, 1.0], [1.0, 0.0]]),
        _real_orthogonal(4, 3),
    ])
    def test_non_skew_unitaries_fail(self, matrix):
        unitary = LocalUnitary(matrix.shape[0], matrix)
        assert not si.vanishing_expectation_check(unitary, samples=1000, seed=0)
        witness = si.find_real_counterexample(unitary)
        assert witness is not None
        assert abs(witness.amps.conj() @ unitary.matrix @ witness.amps) > 1e-10

    @pytest.mark.parametrize("matrix", [
        np.array([[0.0, -1.0], [1.0, 0.0]]),
        np.kron(np.eye(2), np.array([[0.0, -1.0], [1.0, 0.0]])),
        1j * np.array([[0.0, -1.0], [1.0, 0.0]]),
    ])
    def test_skew_unitaries_pass(self, matrix):
        unitary = LocalUnitary(matrix.shape[0], matrix)
        assert si.is_skew_symmetric(matrix)
        assert si.vanishing_expectation_check(unitary, samples=1000, seed=0)
        assert si.find_real_counterexample(unitary) is None

    def test_off_diagonal_counterexample(self):
        # zero diagonal, but symmetric off-diagonal part
        unitary = LocalUnitary(2, np.array([[0.0, 1.0], [1.0, 0.0]]))
        witness = si.find_real_counterexample(unitary)
        assert np.allclose(np.abs(witness.amps), [1 / np.sqrt(2), 1 / np.sqrt(2)])


class TestVerifyConstruction:

    def test_accepts_known_tables(self):
        for n in (2, 3):
            assert si.verify_si_construction(construction_service.state_independent_strings(n))

    def test_rejects_ghz_strings(self):
        assert not si.verify_si_construction(construction_service.ghz_basis_strings(2, 2))

    def test_non_pauli_strings_use_matrix_check(self):
        strings = [LocalUnitaryString.identity(2, 2),
                   LocalUnitaryString((haar_random_unitary(2, seed=1), haar_random_unitary(2, seed=2)))]
        assert not si.verify_si_construction(strings)

    def test_pairwise_check_agrees_with_random_real_states(self, rng):
        for _ in range(30):
            picks = rng.choice(16, size=4, replace=False)
            strings = [PauliString(2, int(k) >> 2, int(k) & 3).to_local_string() for k in picks]
            worst = si.si_verify_on_random_real_states(strings, samples=20, seed=int(picks.sum()))
            assert si.verify_si_construction(strings) == (worst <= 1e-10)

    def test_needs_two_strings(self):
        with pytest.raises(InvalidInputException):
            si.verify_si_construction([LocalUnitaryString.identity(2, 2)])


class TestEnumeration:

    def test_two_qubits(self):
        result = si.enumerate_si_pauli(2)
        assert result.exhausted
        assert result.solutions
        known = si.canonical_order([PauliString.from_local_string(s)
                                    for s in construction_service.state_independent_strings(2)])
        assert known in result.solutions

    def test_three_qubits_contains_known_table(self):
        result = si.enumerate_si_pauli(3)
        known = si.canonical_order([PauliString.from_local_string(s)
                                    for s in construction_service.state_independent_strings(3)])
        assert known in result.solutions

    def test_every_solution_is_pairwise_skew(self):
        for solution in si.enumerate_si_pauli(3).solutions[:20]:
            for s, t in itertools.combinations(solution, 2):
                assert si.product_is_skew(s, t)
            assert [s.x_mask for s in solution] == list(range(8))

    def test_four_qubits_have_none(self):
        result = si.enumerate_si_pauli(4)
        assert result.exhausted
        assert result.solutions == []
        assert result.nodes_explored > 0

    def test_five_qubits_refused(self):
        with pytest.raises(UnsupportedParameterException, match="four-qubit"):
            si.enumerate_si_pauli(5)

    def test_restriction_of_three_qubit_table(self):
        table = [PauliString.from_local_string(s) for s in construction_service.state_independent_strings(3)]
        restricted = si.si_lift_restriction(table)
        assert len(restricted) == 4
        assert all(s.n == 2 for s in restricted)
        for s, t in itertools.combinations(restricted, 2):
            assert si.product_is_skew(s, t)


class TestParityCertificate:

    def test_full_system_inconsistent(self):
        certificate = si.four_qubit_parity_certificate()
        assert len(certificate.rows) == 15
        assert len(certificate.variables) == 20
        assert certificate.inconsistent
        assert certificate.augmented_rank == certificate.rank + 1
        assert si.check_certificate(certificate)

    def test_combination_sums_to_contradiction(self):
        certificate = si.four_qubit_parity_certificate()
        assert certificate.combination
        assert all(0 <= r < len(certificate.rows) for r in certificate.combination)

    def test_dropping_all_flip_string_is_consistent(self):
        certificate = si.four_qubit_parity_certificate(drop_last_row=True)
        assert len(certificate.rows) == 10
        assert not certificate.inconsistent
        assert certificate.dropped == ["V6"]
        assert not si.check_certificate(certificate)

    def test_reduced_solution_satisfies_rows(self):
        certificate = si.four_qubit_parity_certificate(drop_last_row=True)
        for variables, rhs, _ in certificate.rows:
            assert sum(certificate.solution[v] for v in variables) % 2 == rhs


class TestComplexObstructions:

    @pytest.mark.parametrize("n,d", [(2, 2), (3, 2), (2, 3), (2, 4)])
    def test_eigenvector_witness(self, n, d):
        for seed in range(100):
            string = LocalUnitaryString(tuple(haar_random_unitary(d, seed=1000 * seed + 10 * n + k) for k in range(n)))
            _, overlap = si.eigenvector_witness(string)
            assert overlap == pytest.approx(1.0, abs=1e-10)

    @pytest.mark.parametrize("d", [3, 5, 7])
    def test_odd_dimension_determinant_vanishes(self, d):
        report = si.odd_dim_obstruction(d, trials=1000, seed=d)
        assert report.all_vanish
        assert report.determinant_forced_zero
        assert report.sign_factor == -1

    def test_one_dimension_is_trivially_zero(self):
        report = si.odd_dim_obstruction(1, trials=10, seed=0)
        assert report.max_abs_det == 0.0
        assert report.all_vanish

    def test_odd_dimension_rejects_even(self):
        with pytest.raises(UnsupportedParameterException):
            si.odd_dim_obstruction(4)

    @pytest.mark.parametrize("theta", [0.0, 0.3, 1.0, np.pi / 2, 2.5])
    def test_gate_reduction(self, theta):
        check = si.pauli_reduction_check(theta)
        assert check.passed
        assert check.images == {"I": "I", "U1": "Z", "U2": "X", "XZ": "XZ"}

    def test_reflection_gates_are_real_orthogonal(self):
        for gate in si.reflection_gates(0.7).values():
            assert np.allclose(gate.T @ gate, np.eye(2))
