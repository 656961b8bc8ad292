"""Sturm-Liouville spectra and Ambarzumyan-type uniqueness checks."""

from .ambarzumyan import (
    CONDITION_TOLERANCE,
    ConditionChecker,
    ConditionReport,
    ConditionResidual,
    FourierAudit,
    FourierRow,
    PerturbationRow,
    PerturbationStudy,
    SpectrumCheck,
    Theorem,
    Tolerances,
    Verdict,
    check_classic,
    check_classic_spectrum,
    check_dirichlet_corollary,
    check_dirichlet_zero_mean,
    check_extremal_condition,
    check_first_condition,
    check_lowest_extremal,
    check_lowest_inner,
    check_main,
    check_main_normalized,
    fourier_audit,
    fourier_identity_residual,
    perturbation_study,
)
from .config import load_potential, parse_config, parse_potential
from .errors import (
    BracketSearchError,
    ConfigSyntaxError,
    ConfigValueError,
    DiagnosticError,
    DomainError,
    InvalidEigenpairError,
    NumericalError,
    PotentialDefinitionError,
    ReportFormatError,
    SourceLocation,
    UnsupportedCombinationError,
    UsageError,
)
from .numerics import (
    DEFAULT_TOLERANCES,
    SymTridiag,
    ToleranceBundle,
    bisect_monotone,
    integrate_ode,
    simpson,
    sturm_count,
    tridiag_eigen,
)
from .potential import (
    CATALOG,
    Analytic,
    EvenOddParts,
    PiecewiseConstant,
    Potential,
    Sampled,
    add,
    catalog_entry,
    ess_inf,
    ess_sup,
    evaluate,
    even_odd_split,
    fourier_cos_coeff,
    fourier_sin_coeff,
    integral,
    l1_distance,
    linear_combination,
    linf_distance,
    scale,
    shift,
    sine_moment,
    subtract,
)
from .solver import (
    DEFAULT_SETTINGS,
    Backend,
    BoundaryCondition,
    BoundaryKind,
    EigenPair,
    PruferShot,
    SolverSettings,
    SpectralData,
    eigenfunction,
    eigenvalue,
    extrapolated_eigenvalues,
    matrix_eigen,
    node_count,
    prufer_mismatch,
    spectrum,
    weighted_inner_product,
)

__all__ = [
    "Analytic",
    "Backend",
    "BoundaryCondition",
    "BoundaryKind",
    "BracketSearchError",
    "CATALOG",
    "CONDITION_TOLERANCE",
    "ConditionChecker",
    "ConditionReport",
    "ConditionResidual",
    "ConfigSyntaxError",
    "ConfigValueError",
    "DEFAULT_SETTINGS",
    "DEFAULT_TOLERANCES",
    "DiagnosticError",
    "DomainError",
    "EigenPair",
    "EvenOddParts",
    "FourierAudit",
    "FourierRow",
    "InvalidEigenpairError",
    "NumericalError",
    "PerturbationRow",
    "PerturbationStudy",
    "PiecewiseConstant",
    "Potential",
    "PotentialDefinitionError",
    "PruferShot",
    "ReportFormatError",
    "Sampled",
    "SolverSettings",
    "SourceLocation",
    "SpectralData",
    "SpectrumCheck",
    "SymTridiag",
    "Theorem",
    "ToleranceBundle",
    "Tolerances",
    "UnsupportedCombinationError",
    "UsageError",
    "Verdict",
    "add",
    "bisect_monotone",
    "catalog_entry",
    "check_classic",
    "check_classic_spectrum",
    "check_dirichlet_corollary",
    "check_dirichlet_zero_mean",
    "check_extremal_condition",
    "check_first_condition",
    "check_lowest_extremal",
    "check_lowest_inner",
    "check_main",
    "check_main_normalized",
    "eigenfunction",
    "eigenvalue",
    "ess_inf",
    "ess_sup",
    "evaluate",
    "even_odd_split",
    "extrapolated_eigenvalues",
    "fourier_audit",
    "fourier_cos_coeff",
    "fourier_identity_residual",
    "fourier_sin_coeff",
    "integral",
    "integrate_ode",
    "l1_distance",
    "linear_combination",
    "linf_distance",
    "load_potential",
    "matrix_eigen",
    "node_count",
    "parse_config",
    "parse_potential",
    "perturbation_study",
    "prufer_mismatch",
    "scale",
    "shift",
    "simpson",
    "sine_moment",
    "spectrum",
    "sturm_count",
    "subtract",
    "tridiag_eigen",
    "weighted_inner_product",
]
