"""Map per-DOF (basis, bit) choices to prepared single-photon states.

Encoding rule per DOF: rectilinear bit b is the computational vector |b>;
diagonal bit 0 is |+> = (|0>+|1>)/sqrt2 and bit 1 is |-> = (|0>-|1>)/sqrt2.
Bit value 0 is carried by |0> and |+>, bit value 1 by |1> and |->.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ConfigurationError
from .states import (
    BasisKind,
    SinglePhotonState,
    computational_basis_state,
    hadamard_dof,
    rotate_dof,
)


@dataclass(frozen=True)
class EncodingChoice:
    """One party's (basis, bit) selection for every DOF."""

    per_dof: tuple[tuple[BasisKind, int], ...]

    def __post_init__(self):
        if not self.per_dof:
            raise ConfigurationError("choice needs at least one DOF")
        normalized = []
        for entry in self.per_dof:
            basis, bit = entry
            if not isinstance(basis, BasisKind):
                basis = BasisKind(basis)
            bit = int(bit)
            if bit not in (0, 1):
                raise ConfigurationError(f"bit must be 0 or 1, got {bit}")
            normalized.append((basis, bit))
        object.__setattr__(self, "per_dof", tuple(normalized))

    @property
    def n_dofs(self) -> int:
        return len(self.per_dof)

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple(bit for _, bit in self.per_dof)

    @property
    def bases(self) -> tuple[BasisKind, ...]:
        return tuple(basis for basis, _ in self.per_dof)

    @classmethod
    def rectilinear(cls, bits: Sequence[int]) -> "EncodingChoice":
        return cls(tuple((BasisKind.RECTILINEAR, int(b)) for b in bits))

    @classmethod
    def diagonal(cls, bits: Sequence[int]) -> "EncodingChoice":
        return cls(tuple((BasisKind.DIAGONAL, int(b)) for b in bits))


@dataclass(frozen=True)
class SourceFidelity:
    """Per-DOF amplitude fidelity beta of the prepared state to the intent."""

    beta: tuple[float, ...]

    def __post_init__(self):
        beta = tuple(float(b) for b in self.beta)
        if not beta:
            raise ConfigurationError("need at least one DOF")
        for b in beta:
            if not 0.0 < b <= 1.0:
                raise ConfigurationError(f"beta must lie in (0, 1], got {b}")
        object.__setattr__(self, "beta", beta)

    @property
    def n_dofs(self) -> int:
        return len(self.beta)

    @classmethod
    def perfect(cls, n_dofs: int) -> "SourceFidelity":
        return cls((1.0,) * n_dofs)

    @classmethod
    def from_beta_squared(cls, beta2: Iterable[float]) -> "SourceFidelity":
        values = []
        for b2 in beta2:
            if not 0.0 < b2 <= 1.0:
                raise ConfigurationError(f"beta^2 must lie in (0, 1], got {b2}")
            values.append(math.sqrt(b2))
        return cls(tuple(values))


def ideal_state(choice: EncodingChoice) -> SinglePhotonState:
    """Noiseless encoded state: tensor over DOFs of the chosen basis vectors."""
    state = computational_basis_state(choice.bits)
    for k, (basis, _) in enumerate(choice.per_dof):
        if basis is BasisKind.DIAGONAL:
            state = hadamard_dof(state, k)
    return state


def misaligned_state(choice: EncodingChoice,
                     fidelity: SourceFidelity) -> SinglePhotonState:
    """Encoded state of an imperfect source.

    The imperfection in DOF k is the coherent rotation by arccos(beta_k) in
    computational coordinates, applied to the ideal vector.  The prepared
    state keeps squared overlap beta_k^2 with the intent and leaks
    sqrt(1 - beta_k^2) into the orthogonal vector of the same basis; the
    leak sign alternates with the intended vector (+ for |0> and |->
    intents, - for |1> and |+> intents) so that the imperfection is a single
    unitary and error rates are intent-independent.
    """
    if fidelity.n_dofs != choice.n_dofs:
        raise ConfigurationError(
            f"DOF count mismatch: choice has {choice.n_dofs}, "
            f"fidelity has {fidelity.n_dofs}")
    state = ideal_state(choice)
    for k, beta in enumerate(fidelity.beta):
        if beta < 1.0:
            state = rotate_dof(state, k, math.acos(beta))
    return state
