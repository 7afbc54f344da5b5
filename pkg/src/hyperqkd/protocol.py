"""Monte Carlo runs of the full protocol: preparation, transmission,
Bell-state analysis, sifting and QBER bookkeeping.

Round model
-----------
Per round each party draws an independent uniform basis and bit for every
DOF and prepares the (possibly misaligned) photon; both photons cross the
transmission channel; the pair is lost with probability 1 - 10^(-a0*d/10);
surviving pairs are measured in the hyper-Bell basis and sifted.

The source imperfection is the rotation by arccos(beta_k) in computational
coordinates and the transmission applies the channel rotation with the
opposite sense, so each photon carries the net rotation arccos(beta_k) -
theta_k.  Only the relative sense of the two rotations is observable in
outcome probabilities; this orientation makes the same-basis error
probability equal rates.analytic_qber(beta_k, theta_k) for every intent and
both bases, which the test suite asserts.

Determinism
-----------
Rounds are processed in fixed chunks of 2^16; chunk i draws from a
generator seeded with the i-th child of SeedSequence(config.seed).  Within
a chunk the draw order is: Alice bases, Alice bits, Bob bases, Bob bits,
loss uniforms, Bell uniforms.  Results therefore depend only on
(config, seed), never on how chunks are scheduled, and chunks may be
evaluated concurrently and combined with merge_stats.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .channel import ChannelParams, apply_misalignment, survival_probability
from .encoding import EncodingChoice, SourceFidelity, misaligned_state
from .errors import ConfigurationError
from .hbsa import outcome_distribution, sample_outcome
from .rates import RateParams, binary_entropy
from .sifting import (
    RoundRecord,
    SiftAction,
    bob_correction,
    sift_round,
)
from .states import BasisKind, BellIndex, SinglePhotonState, tensor_joint

CHUNK_ROUNDS = 1 << 16

_RECT = BasisKind.RECTILINEAR.value


@dataclass(frozen=True)
class RunConfig:
    """Everything a protocol run depends on, including the seed."""

    n_rounds: int
    seed: int
    n_dofs: int
    source: SourceFidelity
    channel: ChannelParams
    rate: RateParams
    qber_abort_threshold: float = 0.11

    def __post_init__(self):
        if self.n_rounds < 1:
            raise ConfigurationError(f"need n_rounds >= 1, got {self.n_rounds}")
        if self.n_dofs < 1:
            raise ConfigurationError(f"need n_dofs >= 1, got {self.n_dofs}")
        for holder, n in (("source", self.source.n_dofs),
                          ("channel", self.channel.n_dofs),
                          ("rate", self.rate.n_dofs)):
            if n != self.n_dofs:
                raise ConfigurationError(
                    f"{holder} covers {n} DOFs, expected {self.n_dofs}")
        if not 0.0 <= self.qber_abort_threshold <= 0.5:
            raise ConfigurationError(
                f"abort threshold must lie in [0, 0.5], "
                f"got {self.qber_abort_threshold}")

    @classmethod
    def from_values(cls, n_rounds: int, seed: int = 0, n_dofs: int = 3,
                    beta: tuple[float, ...] | None = None,
                    theta: tuple[float, ...] | None = None,
                    distance_km: float = 0.0,
                    attenuation_db_per_km: float = 0.2,
                    f_ec: float = 1.0,
                    qber_abort_threshold: float = 0.11) -> "RunConfig":
        beta = tuple(beta) if beta is not None else (1.0,) * n_dofs
        theta = tuple(theta) if theta is not None else (0.0,) * n_dofs
        return cls(
            n_rounds=n_rounds,
            seed=seed,
            n_dofs=n_dofs,
            source=SourceFidelity(beta),
            channel=ChannelParams(theta, distance_km, attenuation_db_per_km),
            rate=RateParams(beta=beta, theta=theta, distance_km=distance_km,
                            attenuation_db_per_km=attenuation_db_per_km,
                            f_ec=f_ec),
            qber_abort_threshold=qber_abort_threshold,
        )


@dataclass(frozen=True)
class ProtocolStats:
    """Accumulated counts of a run plus the derived estimates.

    ``pairs`` and ``errors`` are indexed [dof][basis] with basis 0
    rectilinear and 1 diagonal.  Counts from independent runs of the same
    shape combine by addition (merge_stats); every derived quantity is
    recomputed from the merged counts.
    """

    n_dofs: int
    rounds_total: int
    rounds_survived: int
    pairs: tuple[tuple[int, int], ...]
    errors: tuple[tuple[int, int], ...]
    f_ec: float
    qber_abort_threshold: float

    def __post_init__(self):
        if not 0 <= self.rounds_survived <= self.rounds_total:
            raise ConfigurationError("survived count exceeds round count")
        if len(self.pairs) != self.n_dofs or len(self.errors) != self.n_dofs:
            raise ConfigurationError("counts do not cover every DOF")
        for k in range(self.n_dofs):
            for basis in (0, 1):
                if not 0 <= self.errors[k][basis] <= self.pairs[k][basis]:
                    raise ConfigurationError("errors exceed pairs")
                if self.pairs[k][basis] > self.rounds_survived:
                    raise ConfigurationError("pairs exceed surviving rounds")

    @classmethod
    def empty(cls, n_dofs: int, f_ec: float = 1.0,
              qber_abort_threshold: float = 0.11) -> "ProtocolStats":
        zeros = tuple((0, 0) for _ in range(n_dofs))
        return cls(n_dofs, 0, 0, zeros, zeros, f_ec, qber_abort_threshold)

    def qber(self, dof: int, basis: BasisKind) -> float | None:
        """Empirical error rate of one (DOF, basis) cell; None without pairs."""
        total = self.pairs[dof][basis.value]
        if total == 0:
            return None
        return self.errors[dof][basis.value] / total

    def key_bits(self, dof: int) -> int:
        """Key material: rectilinear pairs (diagonal pairs are disclosed)."""
        return self.pairs[dof][_RECT]

    @property
    def abort(self) -> bool:
        """True when any DOF's diagonal-basis QBER exceeds the threshold.

        The security check consumes the disclosed diagonal pairs; DOFs
        without diagonal pairs cannot trigger an abort.
        """
        for dof in range(self.n_dofs):
            rate = self.qber(dof, BasisKind.DIAGONAL)
            if rate is not None and rate > self.qber_abort_threshold:
                return True
        return False

    def empirical_dof_rate(self, dof: int) -> float | None:
        """Key rate estimate: rectilinear yield per round times the
        one-way-distillation factor 1 - H(e_x) - f*H(e_z), from the
        empirical QBERs.  None while either estimate is undefined."""
        e_x = self.qber(dof, BasisKind.DIAGONAL)
        e_z = self.qber(dof, BasisKind.RECTILINEAR)
        if e_x is None or e_z is None or self.rounds_total == 0:
            return None
        yield_per_round = self.pairs[dof][_RECT] / self.rounds_total
        return yield_per_round * (
            1.0 - binary_entropy(e_x) - self.f_ec * binary_entropy(e_z))

    @property
    def empirical_total_rate(self) -> float | None:
        rates = [self.empirical_dof_rate(dof) for dof in range(self.n_dofs)]
        if any(r is None for r in rates):
            return None
        return sum(rates)


def merge_stats(a: ProtocolStats, b: ProtocolStats) -> ProtocolStats:
    """Combine two partial runs of the same shape by adding their counts."""
    if (a.n_dofs, a.f_ec, a.qber_abort_threshold) != (
            b.n_dofs, b.f_ec, b.qber_abort_threshold):
        raise ConfigurationError("cannot merge stats of different shapes")
    pairs = tuple(
        (a.pairs[k][0] + b.pairs[k][0], a.pairs[k][1] + b.pairs[k][1])
        for k in range(a.n_dofs))
    errors = tuple(
        (a.errors[k][0] + b.errors[k][0], a.errors[k][1] + b.errors[k][1])
        for k in range(a.n_dofs))
    return ProtocolStats(
        n_dofs=a.n_dofs,
        rounds_total=a.rounds_total + b.rounds_total,
        rounds_survived=a.rounds_survived + b.rounds_survived,
        pairs=pairs,
        errors=errors,
        f_ec=a.f_ec,
        qber_abort_threshold=a.qber_abort_threshold,
    )


def transmitted_state(choice: EncodingChoice, source: SourceFidelity,
                      channel: ChannelParams) -> SinglePhotonState:
    """State of one photon as it arrives at the measurement node.

    Source misalignment first, then the transmission rotation with the
    sense opposite to the source rotation (see the module docstring).
    """
    return apply_misalignment(misaligned_state(choice, source),
                              channel.negated())


def _single_dof_choice(basis: int, bit: int) -> EncodingChoice:
    return EncodingChoice(((BasisKind(basis), bit),))


def bell_probability_table(source: SourceFidelity,
                           channel: ChannelParams) -> np.ndarray:
    """Per-DOF Bell-outcome probabilities for every choice combination.

    Shape (n_dofs, 2, 2, 2, 2, 4) indexed by (dof, alice_basis, alice_bit,
    bob_basis, bob_bit, bell).  Because preparation, misalignment and
    transmission all act DOF by DOF, the joint outcome distribution of a
    full round is the product over DOFs of these rows; the test suite
    checks that factorization against the full-dimensional pipeline.
    """
    n = source.n_dofs
    table = np.empty((n, 2, 2, 2, 2, 4))
    for k in range(n):
        src = SourceFidelity((source.beta[k],))
        chan = ChannelParams((channel.theta[k],))
        vecs = {}
        for basis in (0, 1):
            for bit in (0, 1):
                vecs[basis, bit] = transmitted_state(
                    _single_dof_choice(basis, bit), src, chan)
        for ab in (0, 1):
            for ai in (0, 1):
                for bb in (0, 1):
                    for bi in (0, 1):
                        joint = tensor_joint(vecs[ab, ai], vecs[bb, bi])
                        table[k, ab, ai, bb, bi] = outcome_distribution(joint).probs
    return table


def _flip_table() -> np.ndarray:
    flip = np.zeros((2, 4), dtype=np.uint8)
    for basis in BasisKind:
        for bell in BellIndex:
            if bob_correction(basis, bell) is SiftAction.FLIP:
                flip[basis.value, int(bell)] = 1
    return flip


def _cdf_table(table: np.ndarray) -> np.ndarray:
    cdf = np.cumsum(table.reshape(table.shape[0], 16, 4), axis=2)
    # Guard the top entry so a uniform just below 1 cannot run off the end.
    cdf[:, :, -1] = np.maximum(cdf[:, :, -1], 1.0)
    return np.ascontiguousarray(cdf)


def _chunk_sizes(n_rounds: int) -> list[int]:
    sizes = [CHUNK_ROUNDS] * (n_rounds // CHUNK_ROUNDS)
    if n_rounds % CHUNK_ROUNDS:
        sizes.append(n_rounds % CHUNK_ROUNDS)
    return sizes


def _run_chunk(mc_kernel, child_seed, size: int, n_dofs: int,
               p_survive: float, cdf: np.ndarray,
               flip: np.ndarray) -> tuple[int, np.ndarray, np.ndarray]:
    rng = np.random.Generator(np.random.PCG64(child_seed))
    a_basis = rng.integers(0, 2, size=(size, n_dofs), dtype=np.uint8)
    a_bit = rng.integers(0, 2, size=(size, n_dofs), dtype=np.uint8)
    b_basis = rng.integers(0, 2, size=(size, n_dofs), dtype=np.uint8)
    b_bit = rng.integers(0, 2, size=(size, n_dofs), dtype=np.uint8)
    u_loss = rng.random(size)
    u_bell = rng.random((size, n_dofs))
    survived = (u_loss < p_survive).astype(np.uint8)
    pairs, errors = mc_kernel(a_basis, a_bit, b_basis, b_bit,
                              survived, u_bell, cdf, flip)
    return int(survived.sum()), pairs, errors


def run_protocol(config: RunConfig, kernel: str | None = None) -> ProtocolStats:
    """Run the full protocol for config.n_rounds rounds.

    Deterministic for a fixed config (seed included); the optional ``kernel``
    name selects a Monte Carlo backend, which changes speed only.
    """
    mc_kernel = kernels.get_kernel(kernel)
    cdf = _cdf_table(bell_probability_table(config.source, config.channel))
    flip = _flip_table()
    p_survive = survival_probability(config.channel)
    stats = ProtocolStats.empty(config.n_dofs, config.rate.f_ec,
                                config.qber_abort_threshold)
    sizes = _chunk_sizes(config.n_rounds)
    children = np.random.SeedSequence(config.seed).spawn(len(sizes))
    for child, size in zip(children, sizes):
        survived, pairs, errors = _run_chunk(
            mc_kernel, child, size, config.n_dofs, p_survive, cdf, flip)
        stats = merge_stats(stats, ProtocolStats(
            n_dofs=config.n_dofs,
            rounds_total=size,
            rounds_survived=survived,
            pairs=tuple(map(tuple, pairs.tolist())),
            errors=tuple(map(tuple, errors.tolist())),
            f_ec=config.rate.f_ec,
            qber_abort_threshold=config.qber_abort_threshold,
        ))
    return stats


def run_protocol_reference(config: RunConfig) -> ProtocolStats:
    """Literal per-round implementation, for cross-checks.

    Builds every photon state and the full 4^N joint state explicitly and
    samples the complete outcome distribution.  Statistically equivalent to
    run_protocol but far slower and on an unrelated random stream; use small
    round counts.
    """
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(config.seed)))
    p_survive = survival_probability(config.channel)
    pairs = np.zeros((config.n_dofs, 2), dtype=np.int64)
    errors = np.zeros((config.n_dofs, 2), dtype=np.int64)
    survived_total = 0
    for _ in range(config.n_rounds):
        raw = rng.integers(0, 2, size=4 * config.n_dofs)
        alice = EncodingChoice(tuple(
            (BasisKind(int(raw[2 * k])), int(raw[2 * k + 1]))
            for k in range(config.n_dofs)))
        offset = 2 * config.n_dofs
        bob = EncodingChoice(tuple(
            (BasisKind(int(raw[offset + 2 * k])), int(raw[offset + 2 * k + 1]))
            for k in range(config.n_dofs)))
        survived = bool(rng.random() < p_survive)
        outcome = None
        if survived:
            survived_total += 1
            joint = tensor_joint(
                transmitted_state(alice, config.source, config.channel),
                transmitted_state(bob, config.source, config.channel))
            outcome = sample_outcome(rng, outcome_distribution(joint))
        record = RoundRecord(alice=alice, bob=bob,
                             survived=survived, outcome=outcome)
        for pair in sift_round(record):
            pairs[pair.dof.index, pair.basis.value] += 1
            if pair.alice_bit != pair.bob_bit_corrected:
                errors[pair.dof.index, pair.basis.value] += 1
    return ProtocolStats(
        n_dofs=config.n_dofs,
        rounds_total=config.n_rounds,
        rounds_survived=survived_total,
        pairs=tuple(map(tuple, pairs.tolist())),
        errors=tuple(map(tuple, errors.tolist())),
        f_ec=config.rate.f_ec,
        qber_abort_threshold=config.qber_abort_threshold,
    )
