"""Exact state-vector algebra for photons carrying N two-level degrees of freedom.

A single photon with N DOFs lives in a 2^N-dimensional Hilbert space.  Basis
indexing convention: bit k of the index is the rectilinear bit of DOF k, so
DOF 0 is the least-significant bit.  For the standard three-DOF configuration
(polarization, first and second longitudinal momentum) the rectilinear basis
letters are H/V, L/R, I/E for bits 0/1 of DOFs 0, 1, 2.

A two-photon joint state lives in the 4^N-dimensional product space with
Alice-major indexing: joint index = alice_index * 2^N + bob_index.

The hyper-Bell basis is the tensor product of one two-qubit Bell state per
DOF, with per-DOF Bell order (Phi+, Phi-, Psi+, Psi-).  Hyper-Bell outcomes
are enumerated lexicographically by DOF index, i.e. DOF 0 is the most
significant base-4 digit of the outcome index.

All state values are immutable after construction and all operations are
pure functions, so they are safe to share between concurrent workers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigurationError, InvalidStateError

NORM_TOL = 1e-12

_SQRT_HALF = 1.0 / math.sqrt(2.0)

_HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) * _SQRT_HALF

#: Bell basis over the single-DOF pair index 2*alice_bit + bob_bit.
#: Rows are (Phi+, Phi-, Psi+, Psi-):
#:   Phi+- = (|00> +- |11>)/sqrt2,  Psi+- = (|01> +- |10>)/sqrt2
BELL_MATRIX = np.array(
    [
        [1.0, 0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0, -1.0],
        [0.0, 1.0, 1.0, 0.0],
        [0.0, 1.0, -1.0, 0.0],
    ]
) * _SQRT_HALF

_BELL_PAIR = BELL_MATRIX.reshape(4, 2, 2)  # [bell, alice_bit, bob_bit]

_DEFAULT_NAMES_3 = ("polarization", "momentum1", "momentum2")

#: Rectilinear display letters (bit 0, bit 1) for the standard three DOFs.
RECT_LETTERS_3 = (("H", "V"), ("L", "R"), ("I", "E"))


class BasisKind(Enum):
    """The two conjugate encoding bases available in every DOF."""

    RECTILINEAR = 0
    DIAGONAL = 1


class BellIndex(IntEnum):
    """One Bell state of a single DOF, in the canonical order."""

    PHI_PLUS = 0
    PHI_MINUS = 1
    PSI_PLUS = 2
    PSI_MINUS = 3

    @property
    def label(self) -> str:
        return ("Phi+", "Phi-", "Psi+", "Psi-")[int(self)]


@dataclass(frozen=True)
class DofLabel:
    """One degree of freedom: contiguous index plus a display name."""

    index: int
    name: str

    def __post_init__(self):
        if self.index < 0:
            raise ConfigurationError(f"DOF index must be >= 0, got {self.index}")


def default_dof_labels(n_dofs: int) -> tuple[DofLabel, ...]:
    """Standard labels: polarization/momentum1/momentum2 for N=3, dofK otherwise."""
    if n_dofs < 1:
        raise ConfigurationError(f"need at least one DOF, got {n_dofs}")
    if n_dofs == 3:
        return tuple(DofLabel(i, name) for i, name in enumerate(_DEFAULT_NAMES_3))
    return tuple(DofLabel(i, f"dof{i}") for i in range(n_dofs))


def _dof_index(dof: DofLabel | int, n_dofs: int) -> int:
    k = dof.index if isinstance(dof, DofLabel) else int(dof)
    if not 0 <= k < n_dofs:
        raise ConfigurationError(f"DOF index {k} out of range for {n_dofs} DOFs")
    return k


def _as_amplitudes(values, dim: int) -> np.ndarray:
    amps = np.asarray(values, dtype=np.complex128)
    if amps.shape != (dim,):
        raise ConfigurationError(
            f"amplitude vector must have shape ({dim},), got {amps.shape}")
    norm_sq = float(np.sum(np.abs(amps) ** 2))
    if abs(norm_sq - 1.0) > NORM_TOL:
        raise InvalidStateError(
            f"state is not normalized: squared norm {norm_sq!r} differs from 1 "
            f"by more than {NORM_TOL}")
    amps = amps.copy()
    amps.flags.writeable = False
    return amps


@dataclass(frozen=True)
class SinglePhotonState:
    """Unit-norm amplitude vector over the 2^N computational basis of one photon."""

    n_dofs: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.n_dofs < 1:
            raise ConfigurationError(f"need at least one DOF, got {self.n_dofs}")
        object.__setattr__(self, "amplitudes",
                           _as_amplitudes(self.amplitudes, 1 << self.n_dofs))

    @property
    def dim(self) -> int:
        return 1 << self.n_dofs


@dataclass(frozen=True)
class JointState:
    """Unit-norm amplitude vector over the 4^N two-photon basis (Alice-major)."""

    n_dofs: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.n_dofs < 1:
            raise ConfigurationError(f"need at least one DOF, got {self.n_dofs}")
        object.__setattr__(self, "amplitudes",
                           _as_amplitudes(self.amplitudes, 1 << (2 * self.n_dofs)))

    @property
    def dim(self) -> int:
        return 1 << (2 * self.n_dofs)


@dataclass(frozen=True)
class HyperBellOutcome:
    """One Bell-state label per DOF; the result of a complete analysis."""

    per_dof: tuple[BellIndex, ...]

    def __post_init__(self):
        if not self.per_dof:
            raise ConfigurationError("outcome needs at least one DOF")
        object.__setattr__(self, "per_dof",
                           tuple(BellIndex(b) for b in self.per_dof))

    @property
    def n_dofs(self) -> int:
        return len(self.per_dof)

    @property
    def index(self) -> int:
        """Lexicographic enumeration index; DOF 0 is the most significant digit."""
        value = 0
        for bell in self.per_dof:
            value = value * 4 + int(bell)
        return value

    @classmethod
    def from_index(cls, index: int, n_dofs: int) -> "HyperBellOutcome":
        if not 0 <= index < 4 ** n_dofs:
            raise ConfigurationError(
                f"outcome index {index} out of range for {n_dofs} DOFs")
        digits = []
        for _ in range(n_dofs):
            digits.append(BellIndex(index % 4))
            index //= 4
        return cls(tuple(reversed(digits)))

    @property
    def label(self) -> str:
        return ",".join(b.label for b in self.per_dof)

    def __iter__(self):
        return iter(self.per_dof)

    def __len__(self):
        return len(self.per_dof)


def computational_basis_state(bits: Sequence[int]) -> SinglePhotonState:
    """Photon state with rectilinear bit ``bits[k]`` in DOF k, amplitude 1."""
    bits = tuple(int(b) for b in bits)
    if not bits:
        raise ConfigurationError("bits must cover at least one DOF")
    if any(b not in (0, 1) for b in bits):
        raise ConfigurationError(f"bits must be 0 or 1, got {bits}")
    n = len(bits)
    index = sum(b << k for k, b in enumerate(bits))
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[index] = 1.0
    return SinglePhotonState(n, amps)


def _apply_single_dof(amps: np.ndarray, n_dofs: int, k: int,
                      matrix: np.ndarray) -> np.ndarray:
    """Apply a 2x2 matrix on DOF k of a 2^N amplitude vector."""
    t = amps.reshape([2] * n_dofs)
    axis = n_dofs - 1 - k  # C-order: axis 0 is the most significant bit
    t = np.moveaxis(np.tensordot(matrix, t, axes=([1], [axis])), 0, axis)
    return t.reshape(-1)


def hadamard_dof(state: SinglePhotonState, dof: DofLabel | int) -> SinglePhotonState:
    """Apply |0> -> (|0>+|1>)/sqrt2, |1> -> (|0>-|1>)/sqrt2 on one DOF."""
    k = _dof_index(dof, state.n_dofs)
    return SinglePhotonState(
        state.n_dofs, _apply_single_dof(state.amplitudes, state.n_dofs, k, _HADAMARD))


def rotate_dof(state: SinglePhotonState, dof: DofLabel | int,
               theta: float) -> SinglePhotonState:
    """Rotate one DOF by theta in computational coordinates.

    The action is |0> -> cos(theta)|0> + sin(theta)|1> and
    |1> -> -sin(theta)|0> + cos(theta)|1>; the inverse is rotate_dof(-theta).
    """
    k = _dof_index(dof, state.n_dofs)
    c, s = math.cos(theta), math.sin(theta)
    matrix = np.array([[c, -s], [s, c]])
    return SinglePhotonState(
        state.n_dofs, _apply_single_dof(state.amplitudes, state.n_dofs, k, matrix))


def tensor_joint(alice: SinglePhotonState, bob: SinglePhotonState) -> JointState:
    """Product state of Alice's and Bob's photons (Alice-major indexing)."""
    if alice.n_dofs != bob.n_dofs:
        raise ConfigurationError(
            f"DOF count mismatch: {alice.n_dofs} vs {bob.n_dofs}")
    return JointState(alice.n_dofs, np.kron(alice.amplitudes, bob.amplitudes))


def hyper_bell_state(outcome: HyperBellOutcome | Iterable[BellIndex]) -> JointState:
    """Joint state that is the tensor product of one Bell state per DOF."""
    if not isinstance(outcome, HyperBellOutcome):
        outcome = HyperBellOutcome(tuple(outcome))
    n = outcome.n_dofs
    dim_single = 1 << n
    idx = np.arange(dim_single * dim_single)
    a = idx >> n
    b = idx & (dim_single - 1)
    amps = np.ones(idx.size, dtype=np.complex128)
    for k, bell in enumerate(outcome.per_dof):
        amps = amps * _BELL_PAIR[int(bell), (a >> k) & 1, (b >> k) & 1]
    return JointState(n, amps)


def hyper_bell_amplitudes(joint: JointState) -> np.ndarray:
    """Overlap of the joint state with every hyper-Bell basis state.

    Returns a 4^N complex vector indexed by HyperBellOutcome.index.  The
    change of basis is unitary, so squared magnitudes sum to 1.
    """
    n = joint.n_dofs
    t = joint.amplitudes.reshape([2] * (2 * n))
    # Original axes: (a_{n-1}..a_0, b_{n-1}..b_0).  Regroup into per-DOF pair
    # axes (a_0,b_0),(a_1,b_1),... so DOF 0 becomes the most significant
    # base-4 digit, then rotate each pair axis into the Bell basis.
    order: list[int] = []
    for k in range(n):
        order += [n - 1 - k, 2 * n - 1 - k]
    t = np.transpose(t, order).reshape([4] * n)
    bell = BELL_MATRIX.astype(np.complex128)
    for axis in range(n):
        t = np.moveaxis(np.tensordot(bell.conj(), t, axes=([1], [axis])), 0, axis)
    return t.reshape(-1)
