"""MDI-QKD over multiple degrees of freedom of single photons.

State-vector algebra for multi-DOF photons, hyper-Bell decompositions,
the sifting/post-selection rules, analytic QBER and key-rate formulas,
and a deterministic Monte Carlo simulation of the full protocol.
"""
from .channel import (
    ChannelParams,
    apply_misalignment,
    rotation_unitary,
    sample_loss,
    survival_probability,
)
from .encoding import EncodingChoice, SourceFidelity, ideal_state, misaligned_state
from .errors import ConfigurationError, HyperQkdError, InvalidStateError
from .hbsa import (
    OutcomeDistribution,
    outcome_distribution,
    per_dof_distribution,
    sample_outcome,
)
from .kernels import BACKEND as KERNEL_BACKEND
from .protocol import (
    ProtocolStats,
    RunConfig,
    merge_stats,
    run_protocol,
    run_protocol_reference,
    transmitted_state,
)
from .rates import (
    MisalignmentCoeffs,
    RateParams,
    RateReport,
    analytic_qber,
    binary_entropy,
    dof_key_rate,
    misalignment_coeffs,
    rate_report,
    rate_sweep,
    total_key_rate,
)
from .sifting import (
    QberEstimate,
    RoundRecord,
    SiftAction,
    SiftedBitPair,
    bob_correction,
    estimate_qber,
    sift_round,
)
from .states import (
    BasisKind,
    BellIndex,
    DofLabel,
    HyperBellOutcome,
    JointState,
    SinglePhotonState,
    computational_basis_state,
    default_dof_labels,
    hadamard_dof,
    hyper_bell_amplitudes,
    hyper_bell_state,
    rotate_dof,
    tensor_joint,
)

__version__ = "0.1.0"

__all__ = [
    "BasisKind", "BellIndex", "ChannelParams", "ConfigurationError",
    "DofLabel", "EncodingChoice", "HyperBellOutcome", "HyperQkdError",
    "InvalidStateError", "JointState", "KERNEL_BACKEND",
    "MisalignmentCoeffs", "OutcomeDistribution", "ProtocolStats",
    "QberEstimate", "RateParams", "RateReport", "RoundRecord", "RunConfig",
    "SiftAction", "SiftedBitPair", "SinglePhotonState", "SourceFidelity",
    "analytic_qber", "apply_misalignment", "binary_entropy",
    "bob_correction", "computational_basis_state", "default_dof_labels",
    "dof_key_rate", "estimate_qber", "hadamard_dof",
    "hyper_bell_amplitudes", "hyper_bell_state", "ideal_state",
    "merge_stats", "misaligned_state", "misalignment_coeffs",
    "outcome_distribution", "per_dof_distribution", "rate_report",
    "rate_sweep", "rotate_dof", "rotation_unitary", "run_protocol",
    "run_protocol_reference", "sample_loss", "sample_outcome",
    "sift_round", "survival_probability", "tensor_joint",
    "total_key_rate", "transmitted_state",
]
