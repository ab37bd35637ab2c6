"""Distance-based measures of quantum synchronization for Lindblad systems.

The package builds Liouvillians for a catalog of driven and coupled
limit-cycle models, solves for their steady states, and quantifies
synchronization as the minimal relative-entropy or trace-norm distance to a
declared family of unsynchronized limit-cycle states.  A CLI sweeps model
parameters over 2-D grids and emits deterministic CSV/JSON maps of the
resulting Arnold tongues.
"""
from .errors import (
    ConfigError,
    ContractViolationError,
    DegenerateSteadyStateError,
    DimensionError,
    IntegrationError,
    PSDViolationError,
    QsyncError,
)
from .linalg import (
    BorderedSolution,
    HermitianEigen,
    MatrixLogSupport,
    hermitian_eig,
    kron,
    matrix_log_support,
    partial_trace,
    solve_bordered,
    trace_norm_hermitian,
    unvec,
    vec,
)
from .lindblad import (
    DissipatorTerm,
    SteadyStateResult,
    Superoperator,
    dissipator_super,
    evolve_rk4,
    liouvillian,
    solve_steady_state,
    spectral_gap,
    steady_state,
    suggested_timestep,
)
from .measures import (
    c1_measure,
    classical_mutual_information,
    kl_populations,
    l1_coherence,
    mutual_information,
    relative_entropy,
    s_coh,
    trace_distance,
    vn_entropy,
)
from .models import (
    BuiltModel,
    CoupledDrivenSpin1,
    CoupledSpin1,
    CoupledVdpCoherent,
    CoupledVdpDissipative,
    DrivenSpin1,
    DrivenVdp,
    HybridVdpSpin1,
    ModelSpec,
    build_model,
    default_catalog,
    model_liouvillian,
)
from .operators import SPIN1_DRIVEN_PAIR, boson_ops, embed, spin1_ops
from .phasespace import s_phase_spin1, wigner, wigner_grid
from .states import (
    DensityMatrix,
    basis_state,
    dephase,
    expectation,
    maximally_mixed,
    pure_state,
)
from .sync import (
    DIAGONAL_CORRELATED,
    DIAGONAL_PRODUCT,
    MARGINAL_PRODUCT,
    DiagonalCorrelated,
    DiagonalProduct,
    MarginalProduct,
    OmegaResult,
    PartialCoherentParams,
    PartiallyCoherentProduct,
    brute_force_omega_alpha,
    omega_alpha,
    omega_d,
    omega_r,
    oracle_min,
    spin1_partially_coherent,
)

__version__ = "0.1.0"
