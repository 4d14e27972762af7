"""Numerical toolkit for analytic generators of one-parameter isometry groups.

Finite-dimensional model groups with exact complex-time evaluation serve as
oracles for quadrature-based constructions: the complex averaging kernel,
the smoothing operator it generates, the block resolvent of the doubled
generator on its graph, spectrum location scans, Gaussian mollification,
and reconstruction of the group from the generator.
"""

from .errors import (
    AngenError,
    BranchViolation,
    ConfigError,
    FitUnstable,
    GraphMembershipViolation,
    HypothesisViolation,
    NonFiniteSample,
    OverflowRisk,
    PoleProximity,
    QuadratureNonConvergence,
    TruncationDominates,
    ZeroArgument,
)
from .group_models import (
    GraphVector,
    GroupModel,
    StateVector,
    analytic_generator,
    apply_Uz,
    apply_Uz_batch,
    generator_spectrum,
    graph_defect,
    group_matrix,
    make_graph_vector,
    require_graph_vector,
    strip_continuation_check,
)
from .kernel import (
    KernelParam,
    KernelPointValue,
    check_functional_eq1,
    check_functional_eq2,
    contour_residue_check,
    decay_envelope_constant,
    eval_kernel,
    eval_kernel_array,
    eval_kernel_by_integral,
    pole_distance,
)
from .reconstruction import (
    DecayFitReport,
    OrientationReport,
    OrientationStep,
    ReconstructionReport,
    ReconstructionStep,
    ampliation_matrix,
    decay_bound_fit,
    projection_reduction_residual,
    reconstruct_Ut_cz,
    reconstruct_Ut_delta,
)
from .resolvent import (
    BlockOperator,
    ResolventReport,
    ScanPoint,
    ampliation,
    build_Rmu,
    check_central_identity,
    compute_Qmu,
    graph_action_matrices,
    graph_restricted_norm,
    qmu_spectral_oracle,
    spectrum_scan,
    verify_resolvent_identities,
)
from .smoothing import (
    commutation_check,
    fit_inverse_rate,
    mollifier_convergence_report,
    mollify,
    mollify_operator,
    mollify_oracle,
)
from .vecint import QuadratureSpec, integrate_vector, pairing_consistency_check

__version__ = "0.1.0"

__all__ = [
    "AngenError",
    "BranchViolation",
    "ConfigError",
    "FitUnstable",
    "GraphMembershipViolation",
    "HypothesisViolation",
    "NonFiniteSample",
    "OverflowRisk",
    "PoleProximity",
    "QuadratureNonConvergence",
    "TruncationDominates",
    "ZeroArgument",
    "GraphVector",
    "GroupModel",
    "StateVector",
    "analytic_generator",
    "apply_Uz",
    "apply_Uz_batch",
    "generator_spectrum",
    "graph_defect",
    "group_matrix",
    "make_graph_vector",
    "require_graph_vector",
    "strip_continuation_check",
    "KernelParam",
    "KernelPointValue",
    "check_functional_eq1",
    "check_functional_eq2",
    "contour_residue_check",
    "decay_envelope_constant",
    "eval_kernel",
    "eval_kernel_array",
    "eval_kernel_by_integral",
    "pole_distance",
    "DecayFitReport",
    "OrientationReport",
    "OrientationStep",
    "ReconstructionReport",
    "ReconstructionStep",
    "ampliation_matrix",
    "decay_bound_fit",
    "projection_reduction_residual",
    "reconstruct_Ut_cz",
    "reconstruct_Ut_delta",
    "BlockOperator",
    "ResolventReport",
    "ScanPoint",
    "ampliation",
    "build_Rmu",
    "check_central_identity",
    "compute_Qmu",
    "graph_action_matrices",
    "graph_restricted_norm",
    "qmu_spectral_oracle",
    "spectrum_scan",
    "verify_resolvent_identities",
    "commutation_check",
    "fit_inverse_rate",
    "mollifier_convergence_report",
    "mollify",
    "mollify_operator",
    "mollify_oracle",
    "QuadratureSpec",
    "integrate_vector",
    "pairing_consistency_check",
]
