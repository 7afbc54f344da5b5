import math

import numpy as np
import pytest

from hyperqkd.channel import (
    ChannelParams,
    apply_misalignment,
    rotation_unitary,
    sample_loss,
    survival_probability,
)
from hyperqkd.errors import ConfigurationError
from hyperqkd.states import computational_basis_state, hadamard_dof

THETA_15 = math.asin(math.sqrt(0.015))
SIN_15 = 0.12247448713915890
COS_15 = 0.99247166205302577


class TestRotationUnitary:
    def test_identity_at_zero(self):
        np.testing.assert_allclose(rotation_unitary(0.0), np.eye(2), atol=0)

    def test_quarter_turn(self):
        np.testing.assert_allclose(rotation_unitary(math.pi / 2),
                                   [[0, -1], [1, 0]], atol=1e-15)

    def test_small_angle_values(self):
        u = rotation_unitary(THETA_15)
        assert u[1, 0] == pytest.approx(SIN_15, abs=1e-10)
        assert u[0, 0] == pytest.approx(COS_15, abs=1e-10)

    def test_orthogonal_det_one(self):
        for theta in (-2.1, -0.3, 0.8, 3.0):
            u = rotation_unitary(theta)
            np.testing.assert_allclose(u @ u.T, np.eye(2), atol=1e-15)
            assert np.linalg.det(u) == pytest.approx(1.0, abs=1e-14)

    def test_inverse_product(self):
        for theta in (-1.7, 0.4, 2.9):
            product = rotation_unitary(theta) @ rotation_unitary(-theta)
            np.testing.assert_allclose(product, np.eye(2), atol=1e-14)


class TestApplyMisalignment:
    def test_zero_angles_identity(self):
        state = computational_basis_state((0, 1, 0))
        params = ChannelParams((0.0, 0.0, 0.0))
        np.testing.assert_array_equal(
            apply_misalignment(state, params).amplitudes, state.amplitudes)

    def test_action_on_h(self):
        state = apply_misalignment(computational_basis_state((0,)),
                                   ChannelParams((THETA_15,)))
        np.testing.assert_allclose(state.amplitudes, [COS_15, SIN_15],
                                   atol=1e-10)
        np.testing.assert_allclose(np.abs(state.amplitudes),
                                   [0.992472, 0.122474], atol=1e-6)

    def test_action_on_plus(self):
        # |+> -> cos|+> - sin|-> under this convention
        plus = hadamard_dof(computational_basis_state((0,)), 0)
        rotated = apply_misalignment(plus, ChannelParams((THETA_15,)))
        d_plus = (rotated.amplitudes[0] + rotated.amplitudes[1]) / math.sqrt(2)
        d_minus = (rotated.amplitudes[0] - rotated.amplitudes[1]) / math.sqrt(2)
        assert d_plus == pytest.approx(COS_15, abs=1e-10)
        assert d_minus == pytest.approx(-SIN_15, abs=1e-10)

    def test_invertible_by_negated_angles(self):
        rng = np.random.default_rng(31)
        amps = rng.normal(size=8) + 1j * rng.normal(size=8)
        amps /= np.linalg.norm(amps)
        from hyperqkd.states import SinglePhotonState
        state = SinglePhotonState(3, amps)
        params = ChannelParams((0.3, -1.1, 2.0))
        back = apply_misalignment(apply_misalignment(state, params),
                                  params.negated())
        np.testing.assert_allclose(back.amplitudes, state.amplitudes,
                                   atol=1e-12)


class TestSurvival:
    def test_zero_distance(self):
        assert survival_probability(ChannelParams((0.0,), 0.0)) == 1.0

    def test_hundred_km(self):
        p = survival_probability(ChannelParams((0.0,), 100.0, 0.2))
        assert p == pytest.approx(1e-2, abs=1e-15)

    def test_three_hundred_km(self):
        p = survival_probability(ChannelParams((0.0,), 300.0, 0.2))
        assert p == pytest.approx(1e-6, rel=1e-12)

    def test_monotone_and_multiplicative(self):
        distances = np.linspace(0.0, 400.0, 21)
        probs = [survival_probability(ChannelParams((0.0,), d))
                 for d in distances]
        assert all(a > b for a, b in zip(probs, probs[1:]))
        p_sum = survival_probability(ChannelParams((0.0,), 130.0))
        p_split = (survival_probability(ChannelParams((0.0,), 50.0))
                   * survival_probability(ChannelParams((0.0,), 80.0)))
        assert p_sum == pytest.approx(p_split, rel=1e-12)


class TestSampleLoss:
    def test_certain(self):
        rng = np.random.default_rng(32)
        assert all(sample_loss(rng, 1.0) for _ in range(100))

    def test_impossible(self):
        rng = np.random.default_rng(33)
        assert not any(sample_loss(rng, 0.0) for _ in range(100))

    def test_statistics(self):
        rng = np.random.default_rng(34)
        n, p = 1_000_000, 0.01
        survivors = sum(sample_loss(rng, p) for _ in range(n))
        sigma = math.sqrt(p * (1 - p) / n)
        assert abs(survivors / n - p) < 3 * sigma

    def test_rejects_bad_probability(self):
        rng = np.random.default_rng(35)
        with pytest.raises(ConfigurationError):
            sample_loss(rng, 1.5)
        with pytest.raises(ConfigurationError):
            sample_loss(rng, -0.1)


class TestParamsValidation:
    def test_theta_range(self):
        with pytest.raises(ConfigurationError):
            ChannelParams((3.5,))

    def test_distance_and_attenuation(self):
        with pytest.raises(ConfigurationError):
            ChannelParams((0.0,), distance_km=-1.0)
        with pytest.raises(ConfigurationError):
            ChannelParams((0.0,), attenuation_db_per_km=0.0)
