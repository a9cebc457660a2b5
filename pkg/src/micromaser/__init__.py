"""Micromaser steady states: five master-equation treatments of a cavity
pumped by a stream of excited two-level atoms, on a truncated Fock space.

The exact coarse-grained theory, its fourth-order expansion (not of
Lindblad form), two Lindblad-by-construction series treatments, and a
saturated-gain heuristic all expose the same interface: build a model,
assemble or apply its generator, solve for the steady state, and read off
photon statistics and the phase-diffusion linewidth.
"""

from .fock import (
    DensityReport,
    TruncatedSpace,
    annihilation,
    creation,
    number,
    phi_fn,
    phi_squared,
    validate_density,
)
from .measures import (
    DegenerateMeasureError,
    OrthoBasis,
    TimeMeasure,
    build_basis,
    cross_moment_identity,
    expansion_coeffs,
)
from .models import (
    EXACT,
    HEURISTIC,
    MODEL_NAMES,
    POST4,
    UNIFORM,
    WEAK,
    GeneratorModel,
    assemble,
    exact_model,
    fourth_order_generator,
    fourth_order_model,
    general_weak_model,
    heuristic_model,
    merge_proportional,
    sixth_order_superoperator,
    uniform_model,
    weak_coupling_model,
)
from .observables import (
    LinewidthResult,
    PhotonMoments,
    distribution_distance,
    linewidth,
    linewidth_fd,
    moments,
    operator_norm_estimate,
    semiclassical_intensity,
)
from .pump import (
    KrausSet,
    PumpParameters,
    TruncationLeakWarning,
    averaged_pump_superoperator,
    jcp_map,
    kraus_operators,
    lindblad_C_S,
    pump_average_tables,
    regularized_trace,
    riemann_kraus_operators,
)
from .steady import (
    CutoffWarning,
    DegenerateSteadyStateError,
    PhotonStatistics,
    SteadyStateError,
    choose_truncation,
    default_cutoff,
    nullspace_steady,
    recurrence_steady,
)
from .superop import Superoperator, dissipator_matrix, loss_dissipator, unvec, vec

__version__ = "0.1.0"

__all__ = [
    "DensityReport",
    "TruncatedSpace",
    "annihilation",
    "creation",
    "number",
    "phi_fn",
    "phi_squared",
    "validate_density",
    "DegenerateMeasureError",
    "OrthoBasis",
    "TimeMeasure",
    "build_basis",
    "cross_moment_identity",
    "expansion_coeffs",
    "EXACT",
    "HEURISTIC",
    "MODEL_NAMES",
    "POST4",
    "UNIFORM",
    "WEAK",
    "GeneratorModel",
    "assemble",
    "exact_model",
    "fourth_order_generator",
    "fourth_order_model",
    "general_weak_model",
    "heuristic_model",
    "merge_proportional",
    "sixth_order_superoperator",
    "uniform_model",
    "weak_coupling_model",
    "LinewidthResult",
    "PhotonMoments",
    "distribution_distance",
    "linewidth",
    "linewidth_fd",
    "moments",
    "operator_norm_estimate",
    "semiclassical_intensity",
    "KrausSet",
    "PumpParameters",
    "TruncationLeakWarning",
    "averaged_pump_superoperator",
    "jcp_map",
    "kraus_operators",
    "lindblad_C_S",
    "pump_average_tables",
    "regularized_trace",
    "riemann_kraus_operators",
    "CutoffWarning",
    "DegenerateSteadyStateError",
    "PhotonStatistics",
    "SteadyStateError",
    "choose_truncation",
    "default_cutoff",
    "nullspace_steady",
    "recurrence_steady",
    "Superoperator",
    "dissipator_matrix",
    "loss_dissipator",
    "unvec",
    "vec",
    "__version__",
]
