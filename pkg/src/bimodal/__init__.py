"""Two-mode cavity QED toolkit.

Truncated two-mode plus atomic-register Hilbert spaces, the ladder of
exact and effective generators for a dispersively driven register, gate
schedules that produce multi-component entangled coherent states, phase
space and entanglement diagnostics, and operating-regime checks.
"""

from ._kernels import BACKEND, HAVE_COMPILED
from .ecs import (
    ECSDecomposition,
    ECSSchedule,
    beam_splitter_unitary,
    decomposition_overlap,
    consistency_report,
    ecs_decomposition,
    ecs_state,
    gauss_coefficients,
    kerr_phases,
    make_schedule,
    packet_count,
    published_closed_form,
    reduced_density,
    revival_decomposition,
    state_from_decomposition,
)
from .errors import (
    AtomCountMismatchError,
    BimodalError,
    DimensionCapError,
    EmptyGridError,
    GridTooCoarseWarning,
    IndexOutOfRangeError,
    LargeStepWarning,
    NegativeArgError,
    NoAtomsError,
    NormDriftError,
    NotCoprimeError,
    NotHermitianError,
    NotPrimeWarning,
    SpaceMismatchError,
    StepTooLargeError,
    TruncationError,
    TruncationWarning,
    ZeroDetuningError,
    ZeroDriveError,
)
from .evolve import (
    SpectralPropagator,
    Trajectory,
    compare_to_effective,
    max_step,
    propagate_frame,
    propagate_rk4,
    propagate_static,
)
from .hamiltonian import (
    PhysicalParams,
    StaticFrame,
    amplified_quadratic_bs,
    beam_splitter,
    collective_frame,
    conditional_quadratic_collective,
    conditional_quadratic_one_atom,
    dispersive_collective,
    dispersive_one_atom,
    dressed_exchange_collective,
    dressed_exchange_one_atom,
    exact_collective,
    exact_one_atom,
    one_atom_frame,
    quadratic_bs,
    quadratic_form,
    rabi_drive,
)
from .hilbert import (
    DIM_CAP,
    DensityMatrix,
    HilbertSpace,
    ModeSpace,
    Operator,
    RegisterSpace,
    StateVector,
    annihilator,
    atomic_product,
    atomic_sigma,
    coherent_amplitudes,
    coherent_state,
    collective_op,
    fock_state,
    identity,
    make_space,
    number_operator,
    poisson_tail,
    total_number,
)
from .observables import (
    PacketReport,
    WignerGrid,
    detect_packets,
    fidelity,
    first_minimum,
    linear_entropy,
    local_minima,
    mode_entanglement,
    partial_trace,
    wigner,
)
from .regimes import (
    DEFAULT_MARGIN,
    DEFAULT_SCHEDULES,
    MICROWAVE,
    OPTICAL,
    EffectiveParams,
    FeasibilityRow,
    FeasibilitySetup,
    InequalityCheck,
    RegimeReport,
    check_regime,
    effective_params,
    feasibility_table,
    schedule,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "BACKEND",
    "HAVE_COMPILED",
    "DIM_CAP",
    "DEFAULT_MARGIN",
    "DEFAULT_SCHEDULES",
    "AtomCountMismatchError",
    "BimodalError",
    "DensityMatrix",
    "DimensionCapError",
    "ECSDecomposition",
    "ECSSchedule",
    "EffectiveParams",
    "EmptyGridError",
    "FeasibilityRow",
    "FeasibilitySetup",
    "GridTooCoarseWarning",
    "HilbertSpace",
    "IndexOutOfRangeError",
    "InequalityCheck",
    "LargeStepWarning",
    "MICROWAVE",
    "ModeSpace",
    "NegativeArgError",
    "NoAtomsError",
    "NormDriftError",
    "NotCoprimeError",
    "NotHermitianError",
    "NotPrimeWarning",
    "OPTICAL",
    "Operator",
    "PacketReport",
    "PhysicalParams",
    "RegimeReport",
    "RegisterSpace",
    "SpaceMismatchError",
    "SpectralPropagator",
    "StateVector",
    "StaticFrame",
    "StepTooLargeError",
    "Trajectory",
    "TruncationError",
    "TruncationWarning",
    "WignerGrid",
    "ZeroDetuningError",
    "ZeroDriveError",
    "amplified_quadratic_bs",
    "annihilator",
    "atomic_product",
    "atomic_sigma",
    "beam_splitter",
    "beam_splitter_unitary",
    "check_regime",
    "coherent_amplitudes",
    "coherent_state",
    "collective_frame",
    "collective_op",
    "compare_to_effective",
    "conditional_quadratic_collective",
    "conditional_quadratic_one_atom",
    "decomposition_overlap",
    "detect_packets",
    "dispersive_collective",
    "dispersive_one_atom",
    "dressed_exchange_collective",
    "dressed_exchange_one_atom",
    "consistency_report",
    "ecs_decomposition",
    "ecs_state",
    "effective_params",
    "exact_collective",
    "exact_one_atom",
    "feasibility_table",
    "fidelity",
    "first_minimum",
    "fock_state",
    "gauss_coefficients",
    "identity",
    "kerr_phases",
    "linear_entropy",
    "local_minima",
    "make_schedule",
    "make_space",
    "max_step",
    "mode_entanglement",
    "number_operator",
    "one_atom_frame",
    "packet_count",
    "partial_trace",
    "poisson_tail",
    "propagate_frame",
    "propagate_rk4",
    "propagate_static",
    "published_closed_form",
    "quadratic_bs",
    "quadratic_form",
    "rabi_drive",
    "reduced_density",
    "schedule",
    "state_from_decomposition",
    "total_number",
    "wigner",
]
