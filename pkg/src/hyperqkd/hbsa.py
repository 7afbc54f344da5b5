"""Ideal complete hyperentangled-Bell-state analysis.

The analyzer distinguishes all 4^N hyper-Bell states with unit efficiency;
its outcome statistics follow the Born rule on the joint input state.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, InvalidStateError
from .states import DofLabel, HyperBellOutcome, JointState, hyper_bell_amplitudes

_SUM_TOL = 1e-10


@dataclass(frozen=True)
class OutcomeDistribution:
    """Probabilities over all 4^N hyper-Bell outcomes (lexicographic order)."""

    n_dofs: int
    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        if probs.shape != (4 ** self.n_dofs,):
            raise ConfigurationError(
                f"distribution must have 4^{self.n_dofs} entries, "
                f"got shape {probs.shape}")
        if np.any(probs < -_SUM_TOL):
            raise InvalidStateError("negative probability in distribution")
        total = float(probs.sum())
        if abs(total - 1.0) > _SUM_TOL:
            raise InvalidStateError(
                f"probabilities sum to {total!r}, not 1 within {_SUM_TOL}")
        probs = probs.copy()
        probs.flags.writeable = False
        object.__setattr__(self, "probs", probs)


def outcome_distribution(joint: JointState) -> OutcomeDistribution:
    """Born-rule probabilities of every hyper-Bell outcome for a joint state."""
    amps = hyper_bell_amplitudes(joint)
    return OutcomeDistribution(joint.n_dofs, np.abs(amps) ** 2)


def sample_outcome(rng: np.random.Generator,
                   dist: OutcomeDistribution) -> HyperBellOutcome:
    """Draw one outcome by inverse CDF; deterministic given the generator state."""
    cdf = np.cumsum(dist.probs)
    if cdf[-1] <= 0.0:
        raise InvalidStateError("cannot sample from an all-zero distribution")
    # Searching from the right skips zero-width (zero-probability) intervals
    # even when the uniform lands exactly on a boundary.
    index = int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"))
    index = min(index, dist.probs.size - 1)
    return HyperBellOutcome.from_index(index, dist.n_dofs)


def per_dof_distribution(joint: JointState, dof: DofLabel | int) -> np.ndarray:
    """Marginal Bell-outcome probabilities (Phi+, Phi-, Psi+, Psi-) of one DOF."""
    k = dof.index if isinstance(dof, DofLabel) else int(dof)
    n = joint.n_dofs
    if not 0 <= k < n:
        raise ConfigurationError(f"DOF index {k} out of range for {n} DOFs")
    full = outcome_distribution(joint).probs.reshape([4] * n)
    axes = tuple(axis for axis in range(n) if axis != k)
    return full.sum(axis=axes) if axes else full.copy()
