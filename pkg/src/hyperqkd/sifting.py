"""Basis reconciliation, Bob's post-selection flips, and QBER estimation.

Post-selection rule (fixed for every DOF): with both parties in the
rectilinear basis Bob flips his bit on Psi+ or Psi-; in the diagonal basis
he flips on Phi- or Psi-.  Applied to noiseless rounds this makes Bob's
corrected bit equal Alice's bit for every outcome of nonzero probability.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .encoding import EncodingChoice
from .errors import ConfigurationError
from .states import BasisKind, BellIndex, DofLabel, HyperBellOutcome, default_dof_labels


class SiftAction(Enum):
    KEEP = 0
    FLIP = 1


@dataclass(frozen=True)
class RoundRecord:
    """Both parties' choices plus the measurement outcome of one round."""

    alice: EncodingChoice
    bob: EncodingChoice
    survived: bool
    outcome: HyperBellOutcome | None = None

    def __post_init__(self):
        if self.alice.n_dofs != self.bob.n_dofs:
            raise ConfigurationError("choices disagree on the DOF count")
        if self.survived:
            if self.outcome is None:
                raise ConfigurationError("surviving round needs an outcome")
            if self.outcome.n_dofs != self.alice.n_dofs:
                raise ConfigurationError("outcome disagrees on the DOF count")
        elif self.outcome is not None:
            raise ConfigurationError("lost round cannot carry an outcome")


@dataclass(frozen=True)
class SiftedBitPair:
    """One kept bit: Alice's bit and Bob's bit after the post-selection flip."""

    dof: DofLabel
    alice_bit: int
    bob_bit_corrected: int
    basis: BasisKind


@dataclass(frozen=True)
class QberEstimate:
    """Error count over sifted pairs of one (DOF, basis) cell."""

    dof: DofLabel
    basis: BasisKind
    errors: int
    total: int

    def __post_init__(self):
        if not 0 <= self.errors <= self.total:
            raise ConfigurationError(
                f"invalid counts: errors={self.errors} total={self.total}")

    @property
    def rate(self) -> float | None:
        """Error fraction, or None when no pairs were observed."""
        if self.total == 0:
            return None
        return self.errors / self.total


def bob_correction(basis: BasisKind, bell: BellIndex) -> SiftAction:
    """Whether Bob flips his bit for a given basis and Bell outcome."""
    if basis is BasisKind.RECTILINEAR:
        flip = bell in (BellIndex.PSI_PLUS, BellIndex.PSI_MINUS)
    else:
        flip = bell in (BellIndex.PHI_MINUS, BellIndex.PSI_MINUS)
    return SiftAction.FLIP if flip else SiftAction.KEEP


def sift_round(record: RoundRecord) -> list[SiftedBitPair]:
    """Kept bit pairs of one round: same-basis DOFs of a surviving round only."""
    if not record.survived:
        return []
    labels = default_dof_labels(record.alice.n_dofs)
    pairs = []
    for k, (alice_choice, bob_choice) in enumerate(
            zip(record.alice.per_dof, record.bob.per_dof)):
        a_basis, a_bit = alice_choice
        b_basis, b_bit = bob_choice
        if a_basis is not b_basis:
            continue
        action = bob_correction(a_basis, record.outcome.per_dof[k])
        corrected = b_bit ^ (1 if action is SiftAction.FLIP else 0)
        pairs.append(SiftedBitPair(labels[k], a_bit, corrected, a_basis))
    return pairs


def estimate_qber(pairs: Iterable[SiftedBitPair], dof: DofLabel | int,
                  basis: BasisKind) -> QberEstimate:
    """Disagreement rate over the sifted pairs of one DOF and basis."""
    index = dof.index if isinstance(dof, DofLabel) else int(dof)
    label = dof if isinstance(dof, DofLabel) else None
    errors = 0
    total = 0
    for pair in pairs:
        if pair.dof.index != index or pair.basis is not basis:
            continue
        if label is None:
            label = pair.dof
        total += 1
        if pair.alice_bit != pair.bob_bit_corrected:
            errors += 1
    if label is None:
        label = DofLabel(index, f"dof{index}")
    return QberEstimate(label, basis, errors, total)
