"""Analytic QBER and secret-key-rate formulas.

The per-DOF secure rate is R_i = R0 * (1 - H(e_x) - f * H(e_z)) with
R0 = 10^(-a0*d/10) the pair transmission probability, H the binary entropy
and f >= 1 the error-correction inefficiency.  The total rate is the sum
over DOFs.  The misalignment QBER is e = 2*A2^2 with A2 the cross
coefficient of the two-photon state produced when source infidelity beta
and channel rotation theta act on both photons of a pair.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .errors import ConfigurationError


@dataclass(frozen=True)
class MisalignmentCoeffs:
    """Coefficients (A0, A1, A2) of the noisy two-photon state for one DOF.

    They obey A0 + A1 = 1 and A2^2 = A0*A1: the noisy pair is the square of
    a single rotated photon with coordinates (c, s), so A0 = c^2, A1 = s^2,
    A2 = c*s.
    """

    a0c: float
    a1c: float
    a2c: float


@dataclass(frozen=True)
class RateParams:
    """Inputs of the analytic rate pipeline."""

    beta: tuple[float, ...]
    theta: tuple[float, ...]
    distance_km: float = 0.0
    attenuation_db_per_km: float = 0.2
    f_ec: float = 1.0

    def __post_init__(self):
        beta = tuple(float(b) for b in self.beta)
        theta = tuple(float(t) for t in self.theta)
        if not beta or len(beta) != len(theta):
            raise ConfigurationError(
                f"beta and theta must cover the same DOFs, "
                f"got {len(beta)} and {len(theta)}")
        for b in beta:
            if not 0.0 < b <= 1.0:
                raise ConfigurationError(f"beta must lie in (0, 1], got {b}")
        for t in theta:
            if not -math.pi <= t <= math.pi:
                raise ConfigurationError(f"theta must lie in [-pi, pi], got {t}")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "theta", theta)
        if self.distance_km < 0:
            raise ConfigurationError(
                f"distance must be >= 0, got {self.distance_km}")
        if self.attenuation_db_per_km <= 0:
            raise ConfigurationError(
                f"attenuation must be > 0, got {self.attenuation_db_per_km}")
        if self.f_ec < 1.0:
            raise ConfigurationError(
                f"error-correction inefficiency must be >= 1, got {self.f_ec}")

    @property
    def n_dofs(self) -> int:
        return len(self.beta)

    @classmethod
    def ideal(cls, n_dofs: int = 3, **kwargs) -> "RateParams":
        return cls(beta=(1.0,) * n_dofs, theta=(0.0,) * n_dofs, **kwargs)


@dataclass(frozen=True)
class DofRate:
    """Per-DOF rate entry of a report."""

    e_x: float
    e_z: float
    raw: float
    clamped: float


@dataclass(frozen=True)
class RateReport:
    """Per-DOF and total key rates at one distance, raw and clamped."""

    distance_km: float
    r0: float
    per_dof: tuple[DofRate, ...]
    total_raw: float
    total_clamped: float
    log10_total_clamped: float | None


def binary_entropy(x: float) -> float:
    """H(x) = -x*log2(x) - (1-x)*log2(1-x), with H(0) = H(1) = 0."""
    if not 0.0 <= x <= 1.0:
        raise ConfigurationError(f"entropy argument must lie in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def misalignment_coeffs(beta: float, theta: float) -> MisalignmentCoeffs:
    """Two-photon coefficients for source fidelity beta and rotation theta."""
    if not 0.0 < beta <= 1.0:
        raise ConfigurationError(f"beta must lie in (0, 1], got {beta}")
    c, s = math.cos(theta), math.sin(theta)
    sb = math.sqrt(1.0 - beta * beta)
    a0c = beta * beta * c * c + (1.0 - beta * beta) * s * s + 2.0 * beta * sb * c * s
    a1c = beta * beta * s * s + (1.0 - beta * beta) * c * c - 2.0 * beta * sb * c * s
    a2c = (-beta * beta * c * s + (1.0 - beta * beta) * c * s
           + beta * sb * (c * c - s * s))
    return MisalignmentCoeffs(a0c, a1c, a2c)


def analytic_qber(beta: float, theta: float) -> float:
    """Misalignment QBER e = 2*A2^2; equal in both encoding bases."""
    a2c = misalignment_coeffs(beta, theta).a2c
    return 2.0 * a2c * a2c


def survival_prefactor(params: RateParams) -> float:
    """Pair transmission probability 10^(-a0*d/10)."""
    return 10.0 ** (-params.attenuation_db_per_km * params.distance_km / 10.0)


def dof_key_rate(e_x: float, e_z: float,
                 params: RateParams) -> tuple[float, float]:
    """Secure rate of one DOF: (raw, clamped-to-zero)."""
    for e in (e_x, e_z):
        if not 0.0 <= e <= 0.5:
            raise ConfigurationError(f"QBER must lie in [0, 0.5], got {e}")
    raw = survival_prefactor(params) * (
        1.0 - binary_entropy(e_x) - params.f_ec * binary_entropy(e_z))
    return raw, max(raw, 0.0)


def total_key_rate(per_dof_rates: Iterable[float]) -> float:
    """Total rate: encodings are independent, so per-DOF rates add."""
    return sum(per_dof_rates)


def rate_report(params: RateParams) -> RateReport:
    """Full analytic report at the distance carried by ``params``."""
    per_dof = []
    for beta, theta in zip(params.beta, params.theta):
        e = analytic_qber(beta, theta)
        raw, clamped = dof_key_rate(e, e, params)
        per_dof.append(DofRate(e_x=e, e_z=e, raw=raw, clamped=clamped))
    total_raw = total_key_rate(r.raw for r in per_dof)
    total_clamped = total_key_rate(r.clamped for r in per_dof)
    log10_total = math.log10(total_clamped) if total_clamped > 0.0 else None
    return RateReport(
        distance_km=params.distance_km,
        r0=survival_prefactor(params),
        per_dof=tuple(per_dof),
        total_raw=total_raw,
        total_clamped=total_clamped,
        log10_total_clamped=log10_total,
    )


def rate_sweep(params: RateParams,
               d_values: Sequence[float]) -> list[RateReport]:
    """One report per distance; distance enters only through the prefactor."""
    for d in d_values:
        if d < 0:
            raise ConfigurationError(f"distance must be >= 0, got {d}")
    return [rate_report(replace(params, distance_km=float(d))) for d in d_values]
