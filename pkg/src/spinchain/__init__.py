"""Single-excitation state transfer in disordered XX spin chains.

The package simulates how well one quantum excitation (or a stored
qubit) travels from the first to the last site of a finite chain under
three protocols: sequential SWAP pulses, a static spin-coupling
profile, and an adiabatic dark-state passage.  Static Gaussian disorder
on the site energies and couplings is Monte Carlo averaged with fully
reproducible seeding.
"""

from .chain import (
    ChainConfig,
    SingleExcitationHamiltonian,
    TransferResult,
    build_hamiltonian,
    eigensystem,
    mean_fidelity,
    mean_fidelity_array,
    phase_distance,
    protocol_phase,
    spectrum,
    state_fidelity,
    transfer_result,
    wrap_phase,
)
from .disorder import DisorderRealization, DisorderSpec, sample_block, sample_realization
from .ensemble import (
    CHUNK,
    EnsembleStats,
    ExperimentConfig,
    SweepGrid,
    SweepRow,
    derive_point_seed,
    point_samples,
    resolve_workers,
    run_point,
    run_sweep,
)
from .io import TOOL_VERSION
from .propagate import (
    PropagationSettings,
    Trajectory,
    propagate_block,
    propagate_schedule,
    propagate_static,
)
from .protocols import (
    ADIABATIC,
    PROTOCOL_KINDS,
    SPIN_COUPLING,
    SWAP,
    AdiabaticRamp,
    CouplingSchedule,
    ProtocolSpec,
    Segment,
    adiabatic_schedule,
    analytic_spin_coupling_amplitudes,
    dark_state,
    schedule_for,
    spin_coupling_profile,
    spin_coupling_schedule,
    swap_schedule,
)

__version__ = TOOL_VERSION

__all__ = [
    "ChainConfig",
    "SingleExcitationHamiltonian",
    "TransferResult",
    "build_hamiltonian",
    "eigensystem",
    "spectrum",
    "state_fidelity",
    "mean_fidelity",
    "mean_fidelity_array",
    "transfer_result",
    "protocol_phase",
    "wrap_phase",
    "phase_distance",
    "DisorderSpec",
    "DisorderRealization",
    "sample_realization",
    "sample_block",
    "ExperimentConfig",
    "EnsembleStats",
    "SweepGrid",
    "SweepRow",
    "CHUNK",
    "run_point",
    "run_sweep",
    "point_samples",
    "derive_point_seed",
    "resolve_workers",
    "PropagationSettings",
    "Trajectory",
    "propagate_static",
    "propagate_schedule",
    "propagate_block",
    "ProtocolSpec",
    "CouplingSchedule",
    "Segment",
    "AdiabaticRamp",
    "SWAP",
    "SPIN_COUPLING",
    "ADIABATIC",
    "PROTOCOL_KINDS",
    "swap_schedule",
    "spin_coupling_profile",
    "spin_coupling_schedule",
    "adiabatic_schedule",
    "schedule_for",
    "analytic_spin_coupling_amplitudes",
    "dark_state",
    "TOOL_VERSION",
]
