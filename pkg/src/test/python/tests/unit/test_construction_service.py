import numpy as np
import pytest

from isobasis.core.exceptions import InvalidInputException, UnsupportedParameterException
from isobasis.services import construction_service as cs
from isobasis.services import state_independent_service, tensor_service
from isobasis.services.construction_service import ConstructionFamily, FamilyParameters

TOL = 1e-10


class TestGHZ:

    @pytest.mark.parametrize("n,d", [(2, 2), (3, 2), (4, 2), (2, 3), (2, 4), (3, 3), (2, 5)])
    def test_basis_is_orthonormal(self, n, d):
        basis = tensor_service.build_candidate(cs.ghz_state(n, d), cs.ghz_basis_strings(n, d))
        assert basis.m == d ** n
        assert basis.f_value <= TOL

    @pytest.mark.parametrize("n,d", [(2, 2), (2, 3), (3, 2), (2, 4)])
    def test_small_shapes_exact(self, n, d):
        assert tensor_service.build_candidate(cs.ghz_state(n, d), cs.ghz_basis_strings(n, d)).f_value <= 1e-12

    def test_ghz_amplitudes(self):
        psi = cs.ghz_state(3, 3)
        support = np.nonzero(np.abs(psi.amps) > 1e-12)[0]
        assert support.tolist() == [0, 13, 26]

    def test_rejects_single_subsystem(self):
        with pytest.raises(UnsupportedParameterException):
            cs.ghz_basis_strings(1, 2)


class TestBipartite:

    def test_two_qubit_strings_any_schmidt_coefficients(self, rng):
        for _ in range(100):
            lam = np.abs(rng.standard_normal(2))
            psi = tensor_service.schmidt_state(lam / np.linalg.norm(lam))
            assert tensor_service.build_candidate(psi, cs.two_qubit_schmidt_strings()).f_value <= TOL

    @pytest.mark.parametrize("d", [4, 8])
    def test_pow2_strings_any_schmidt_coefficients(self, d, rng):
        strings = cs.bipartite_pow2_strings(d)
        assert len(strings) == d * d
        for _ in range(100):
            lam = np.abs(rng.standard_normal(d))
            psi = tensor_service.schmidt_state(lam / np.linalg.norm(lam))
            assert tensor_service.build_candidate(psi, strings).f_value <= TOL

    def test_d4_unshifted_rows_match_amplitude_table(self):
        # lambda_{l1 l2} at distinct values; amplitudes live on |l, l>, index 5 * l
        lam = np.array([0.1, 0.2, 0.3, 0.4]) / np.linalg.norm([0.1, 0.2, 0.3, 0.4])
        l00, l01, l10, l11 = lam
        expected = [
            [l00, l01, l10, l11],
            [-l01, l00, -l11, l10],
            [-l10, l11, l00, -l01],
            [-l11, -l10, l01, l00],
        ]
        psi = tensor_service.schmidt_state(lam)
        diagonal = [0, 5, 10, 15]
        for string, row in zip(cs.bipartite_pow2_strings(4)[:4], expected):
            amps = tensor_service.apply_local_string(string, psi).amps
            assert np.allclose(amps[diagonal], row, rtol=0, atol=1e-15)
            assert np.allclose(np.delete(amps, diagonal), 0, atol=1e-15)

    def test_pow2_rejects_other_dimensions(self):
        with pytest.raises(UnsupportedParameterException):
            cs.bipartite_pow2_strings(3)

    @pytest.mark.parametrize("d", [2, 4, 8])
    def test_schmidt_basis_for_arbitrary_state(self, d):
        for seed in range(100):
            basis = cs.schmidt_basis_for(tensor_service.random_state(2, d, seed=seed))
            assert basis.m == d * d
            assert basis.f_value <= TOL

    def test_schmidt_basis_rejects_qutrits(self):
        with pytest.raises(UnsupportedParameterException):
            cs.schmidt_basis_for(tensor_service.random_state(2, 3, seed=0))


class TestW:

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
    def test_recursion_gives_basis(self, n):
        strings = cs.w_basis_strings(n)
        assert len(strings) == 2 ** n
        assert tensor_service.build_candidate(cs.w_state(n), strings).f_value <= TOL

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
    def test_overlap_matrix_is_identity(self, n):
        basis = tensor_service.build_candidate(cs.w_state(n), cs.w_basis_strings(n))
        assert np.allclose(basis.gram, np.eye(2 ** n), rtol=0, atol=1e-12)

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_state_recursion(self, n):
        zero, one = np.array([1.0, 0.0]), np.array([0.0, 1.0])
        all_zero = tensor_service.basis_state(n, 2, 0).amps
        rebuilt = np.sqrt(n / (n + 1)) * np.kron(cs.w_state(n).amps, zero) + np.kron(all_zero, one) / np.sqrt(n + 1)
        assert np.max(np.abs(cs.w_state(n + 1).amps - rebuilt)) <= 1e-12

    def test_w_support(self):
        psi = cs.w_state(3)
        assert np.nonzero(np.abs(psi.amps) > 1e-12)[0].tolist() == [1, 2, 4]


class TestStateIndependent:

    @pytest.mark.parametrize("n", [2, 3])
    def test_works_on_random_real_states(self, n):
        strings = cs.state_independent_strings(n)
        worst = state_independent_service.si_verify_on_random_real_states(strings, samples=100, seed=n)
        assert worst <= TOL

    @pytest.mark.parametrize("n", [2, 3])
    def test_pairwise_products_skew(self, n):
        assert state_independent_service.verify_si_construction(cs.state_independent_strings(n))

    def test_fails_on_complex_states(self):
        strings = cs.state_independent_strings(3)
        worst = state_independent_service.si_verify_on_random_real_states(strings, samples=5, seed=1, real_only=False)
        assert worst > 1e-3

    def test_no_table_beyond_three_qubits(self):
        with pytest.raises(UnsupportedParameterException):
            cs.state_independent_strings(4)


class TestFamilyParameters:

    def test_bell_shape_fixed(self):
        with pytest.raises(UnsupportedParameterException):
            FamilyParameters(ConstructionFamily.BELL, 3, 2)

    def test_schmidt_length_checked(self):
        with pytest.raises(InvalidInputException):
            FamilyParameters(ConstructionFamily.BIPARTITE_POW2, 2, 4, schmidt=(1.0, 0.0))

    @pytest.mark.parametrize("schmidt", [(0.0, 0.0, 0.0, 0.0), (np.nan, 0.5, 0.5, 0.5), (-0.5, 0.5, 0.5, 0.5)])
    def test_schmidt_values_checked(self, schmidt):
        with pytest.raises(InvalidInputException):
            FamilyParameters(ConstructionFamily.BIPARTITE_POW2, 2, 4, schmidt=schmidt)

    def test_pow2_dimension_checked(self):
        with pytest.raises(UnsupportedParameterException):
            FamilyParameters(ConstructionFamily.BIPARTITE_POW2, 2, 6)

    @pytest.mark.parametrize("family,n,d", [
        (ConstructionFamily.BELL, 2, 2),
        (ConstructionFamily.GHZ, 3, 3),
        (ConstructionFamily.TWO_QUBIT_SCHMIDT, 2, 2),
        (ConstructionFamily.BIPARTITE_POW2, 2, 8),
        (ConstructionFamily.W_STATE, 4, 2),
        (ConstructionFamily.TWO_QUBIT_SI, 2, 2),
        (ConstructionFamily.THREE_QUBIT_SI, 3, 2),
    ])
    def test_construct_every_family(self, family, n, d):
        basis = cs.construct(FamilyParameters(family, n, d), seed=3)
        assert basis.m == d ** n
        assert basis.f_value <= TOL

    def test_explicit_schmidt_coefficients(self):
        params = FamilyParameters(ConstructionFamily.BIPARTITE_POW2, 2, 4, schmidt=(0.4, 0.3, 0.2, 0.1))
        basis = cs.construct(params)
        lam = np.array([0.4, 0.3, 0.2, 0.1]) / np.linalg.norm([0.4, 0.3, 0.2, 0.1])
        assert np.allclose(np.abs(basis.state.amps[[0, 5, 10, 15]]), lam)
        assert basis.f_value <= TOL


class TestGeneralizedPauli:

    def test_clock_shift_commutation(self):
        shift, clock = cs.generalized_pauli(3)
        omega = np.exp(2j * np.pi / 3)
        assert np.allclose(clock @ shift, omega * shift @ clock)
