"""Photon-counting statistics and phase sensitivity of a lossy Mach-Zehnder
interferometer fed by superpositions of phase-rotated coherent states."""

from .analysis import (
    PeakMetrics,
    SweepResult,
    default_phi_grid,
    fold_count,
    fwhm,
    loss_robustness_high,
    loss_robustness_low,
    observable_curve,
    peak_metrics,
    sensitivity_curve,
    working_points,
)
from .detection import (
    DetectionScheme,
    PhotonDistribution,
    expect_z,
    expect_z4n,
    expect_z4n_aggregate,
    phase_sensitivity,
    photon_distribution,
    photon_probability,
    snl_ratio,
    z4n_derivative,
)
from .errors import (
    AmplitudeSolveError,
    FwhmUndefinedError,
    InsufficientCutoffError,
    InvalidStateError,
    OracleRangeError,
    ResidueError,
    SimulatorError,
)
from .interferometer import BranchSet, InterferometerConfig, branch_amplitudes, pq
from .oracle import (
    FockVector,
    MultiModeState,
    beamsplitter_apply,
    coherent_fock,
    oracle_distribution,
    phase_apply,
    state_fock_vector,
)
from .states import (
    NormConstants,
    PRESET_SHAPES,
    StateSpec,
    make_state,
    mean_photon_number,
    normalization,
    preset_state,
    solve_amplitude,
    state_for_nbar,
)

__version__ = "0.1.0"

__all__ = [
    "AmplitudeSolveError",
    "BranchSet",
    "DetectionScheme",
    "FockVector",
    "FwhmUndefinedError",
    "InsufficientCutoffError",
    "InterferometerConfig",
    "InvalidStateError",
    "MultiModeState",
    "NormConstants",
    "OracleRangeError",
    "PeakMetrics",
    "PhotonDistribution",
    "PRESET_SHAPES",
    "ResidueError",
    "SimulatorError",
    "StateSpec",
    "SweepResult",
    "beamsplitter_apply",
    "branch_amplitudes",
    "coherent_fock",
    "default_phi_grid",
    "expect_z",
    "expect_z4n",
    "expect_z4n_aggregate",
    "fold_count",
    "fwhm",
    "loss_robustness_high",
    "loss_robustness_low",
    "make_state",
    "mean_photon_number",
    "normalization",
    "observable_curve",
    "oracle_distribution",
    "peak_metrics",
    "phase_apply",
    "phase_sensitivity",
    "photon_distribution",
    "photon_probability",
    "pq",
    "preset_state",
    "sensitivity_curve",
    "snl_ratio",
    "solve_amplitude",
    "state_fock_vector",
    "state_for_nbar",
    "working_points",
    "z4n_derivative",
]
