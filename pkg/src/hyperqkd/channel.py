"""Transmission model: per-DOF unitary misalignment and distance attenuation."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .states import SinglePhotonState, rotate_dof


@dataclass(frozen=True)
class ChannelParams:
    """Per-DOF misalignment angles plus the fiber-loss parameters.

    ``distance_km`` is the full Alice-Bob distance; the measurement node sits
    midway, so each photon travels half of it.
    """

    theta: tuple[float, ...]
    distance_km: float = 0.0
    attenuation_db_per_km: float = 0.2

    def __post_init__(self):
        theta = tuple(float(t) for t in self.theta)
        if not theta:
            raise ConfigurationError("need at least one DOF")
        for t in theta:
            if not -math.pi <= t <= math.pi:
                raise ConfigurationError(
                    f"theta must lie in [-pi, pi], got {t}")
        object.__setattr__(self, "theta", theta)
        if self.distance_km < 0:
            raise ConfigurationError(
                f"distance must be >= 0, got {self.distance_km}")
        if self.attenuation_db_per_km <= 0:
            raise ConfigurationError(
                f"attenuation must be > 0, got {self.attenuation_db_per_km}")

    @property
    def n_dofs(self) -> int:
        return len(self.theta)

    def negated(self) -> "ChannelParams":
        """Same parameters with every rotation angle negated."""
        return ChannelParams(tuple(-t for t in self.theta),
                             self.distance_km, self.attenuation_db_per_km)


def rotation_unitary(theta: float) -> np.ndarray:
    """2x2 rotation [[cos, -sin], [sin, cos]]; orthogonal, determinant 1."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def apply_misalignment(state: SinglePhotonState,
                       params: ChannelParams) -> SinglePhotonState:
    """Rotate DOF k by theta_k: |0> -> cos|0> + sin|1>, |1> -> -sin|0> + cos|1>."""
    if params.n_dofs != state.n_dofs:
        raise ConfigurationError(
            f"DOF count mismatch: state has {state.n_dofs}, "
            f"params have {params.n_dofs}")
    for k, theta in enumerate(params.theta):
        if theta != 0.0:
            state = rotate_dof(state, k, theta)
    return state


def survival_probability(params: ChannelParams) -> float:
    """Probability that BOTH photons of a pair reach the measurement node.

    Each arm covers distance d/2 with loss 10^(-a0*d/20), so the pair
    survives with 10^(-a0*d/10).
    """
    return 10.0 ** (-params.attenuation_db_per_km * params.distance_km / 10.0)


def sample_loss(rng: np.random.Generator, p: float) -> bool:
    """One Bernoulli draw: True (survived) with probability p."""
    if not 0.0 <= p <= 1.0:
        raise ConfigurationError(f"probability must lie in [0, 1], got {p}")
    return bool(rng.random() < p)
