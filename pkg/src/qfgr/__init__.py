"""qfgr: a numerical laboratory for Markovian collision superoperators.

Builds the conventional and the time-symmetrized collision generators of a
discrete-spectrum system with a Hermitian coupling, propagates density
matrices and semiclassical distributions under them, and quantifies where the
two constructions preserve or violate the structure of a physical state
(trace, hermiticity, positivity, population-coherence coupling).
"""
from ._kernels import BACKEND
from .core import (
    DeltaKernel,
    DensityMatrix,
    DimensionError,
    Distribution,
    ParameterError,
    SystemSpec,
    ValidationReport,
    instance_seeds,
    random_density,
    random_system,
    validate_density,
)
from .diagnostics import (
    CpReport,
    PurityEntropy,
    ScanResult,
    T3Norms,
    ViolationReport,
    choi_matrix,
    conditional_cp_check,
    positivity_scan,
    purity_entropy,
    search_positivity_violation,
    t3_block_norm,
)
from .evolution import (
    NoSteadyStateError,
    PropagationError,
    SteadyStateResult,
    StepSizeError,
    TimeGrid,
    Trajectory,
    propagate,
    propagate_boltzmann,
    relaxation_grid,
    steady_state,
)
from .generators import (
    FgrMatrix,
    LindbladFamily,
    RateTensor,
    Superoperator,
    boltzmann_rhs,
    coherent_liouvillian,
    conventional_rates,
    delta_kernel,
    fgr_rates,
    hermiticity_defect,
    lindblad_family,
    lindblad_superoperator,
    rates_to_superoperator,
    symmetrized_rates,
    trace_defect,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "__version__",
    # core
    "DeltaKernel", "DensityMatrix", "DimensionError", "Distribution",
    "ParameterError", "SystemSpec", "ValidationReport", "instance_seeds",
    "random_density", "random_system", "validate_density",
    # generators
    "FgrMatrix", "LindbladFamily", "RateTensor", "Superoperator",
    "boltzmann_rhs", "coherent_liouvillian", "conventional_rates",
    "delta_kernel", "fgr_rates", "hermiticity_defect", "lindblad_family",
    "lindblad_superoperator", "rates_to_superoperator", "symmetrized_rates",
    "trace_defect",
    # evolution
    "NoSteadyStateError", "PropagationError", "SteadyStateResult",
    "StepSizeError", "TimeGrid", "Trajectory", "propagate",
    "propagate_boltzmann", "relaxation_grid", "steady_state",
    # diagnostics
    "CpReport", "PurityEntropy", "ScanResult", "T3Norms", "ViolationReport",
    "choi_matrix", "conditional_cp_check", "positivity_scan", "purity_entropy",
    "search_positivity_violation", "t3_block_norm",
]
