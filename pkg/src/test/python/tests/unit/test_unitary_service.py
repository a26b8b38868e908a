import numpy as np
import pytest

from isobasis.core.exceptions import DimensionMismatchException, InvalidInputException
from isobasis.models.domain.quantum import LocalUnitary, UnitaryParams, unitarity_residual
from isobasis.services import unitary_service


class TestChart:

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_zero_parameters_give_identity(self, d):
        assert np.allclose(unitary_service.chart(np.zeros(d * d), d), np.eye(d))

    @pytest.mark.parametrize("d", [2, 3, 4, 8])
    def test_output_is_unitary(self, d, rng):
        theta = unitary_service.random_params(d, rng)
        assert unitarity_residual(unitary_service.chart(theta, d)) < 1e-12

    def test_batched_matches_single(self, rng):
        theta = rng.uniform(0, 2 * np.pi, size=(3, 2, 9))
        batch = unitary_service.chart(theta, 3)
        assert batch.shape == (3, 2, 3, 3)
        assert np.allclose(batch[1, 0], unitary_service.chart(theta[1, 0], 3))

    @pytest.mark.parametrize("d", [2, 3])
    def test_jacobian_matches_finite_differences(self, d, rng):
        theta = unitary_service.random_params(d, rng)
        _, jac = unitary_service.chart(theta, d, with_jacobian=True)
        step = 1e-6
        for p in range(d * d):
            plus, minus = theta.copy(), theta.copy()
            plus[p] += step
            minus[p] -= step
            numeric = (unitary_service.chart(plus, d) - unitary_service.chart(minus, d)) / (2 * step)
            assert np.allclose(jac[p], numeric, atol=1e-7)

    def test_wrong_length(self):
        with pytest.raises(DimensionMismatchException):
            unitary_service.chart(np.zeros(5), 2)


class TestInverse:

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_round_trip_through_haar_unitary(self, d):
        unitary = unitary_service.haar_random_unitary(d, seed=d)
        params = unitary_service.unitary_to_params(unitary)
        rebuilt = unitary_service.params_to_unitary(params)
        assert np.allclose(rebuilt.matrix, unitary.matrix, atol=1e-10)

    def test_permutation_matrix(self):
        shift = np.roll(np.eye(3), 1, axis=0)
        params = unitary_service.unitary_to_params(LocalUnitary(3, shift))
        assert np.allclose(unitary_service.params_to_unitary(params).matrix, shift, atol=1e-10)

    def test_params_length_checked(self):
        with pytest.raises(DimensionMismatchException):
            UnitaryParams(2, np.zeros(3))


class TestSampling:

    def test_haar_seeded(self):
        a = unitary_service.haar_random_unitary(3, seed=5)
        b = unitary_service.haar_random_unitary(3, seed=5)
        assert np.array_equal(a.matrix, b.matrix)

    def test_haar_first_moment(self):
        weights = [abs(unitary_service.haar_random_unitary(2, seed=s).matrix[0, 0]) ** 2 for s in range(10_000)]
        assert abs(np.mean(weights) - 0.5) < 0.02

    def test_haar_rejects_bad_dimension(self):
        with pytest.raises(InvalidInputException):
            unitary_service.haar_random_unitary(0)

    def test_perturb_zero_scale(self):
        params = UnitaryParams.zeros(2)
        assert unitary_service.perturb(params, 0.0) is params

    def test_perturb_moves_parameters(self):
        params = UnitaryParams.zeros(2)
        moved = unitary_service.perturb(params, 0.1, seed=1)
        assert not np.allclose(moved.theta, params.theta)
        assert unitarity_residual(unitary_service.params_to_unitary(moved).matrix) < 1e-12

    def test_perturb_negative_scale(self):
        with pytest.raises(InvalidInputException):
            unitary_service.perturb(UnitaryParams.zeros(2), -1.0)
