"""Bound- and free-entanglement archipelagos of parametrized state families.

The package reconstructs parametrized bipartite density-matrix families,
decides physicality and the positive-partial-transpose property in
closed form, derives the separability thresholds of two determinant-based
detection statistics, and measures the probabilities of the resulting
entanglement regions by Monte Carlo and grid integration.  The
``archipelago`` console script exposes verification, derivation,
estimation, and export workflows.
"""

from .generator_algebra import (
    ALGEBRA_TOL,
    HADAMARD_4,
    HADAMARD_8,
    PSD_TOL,
    QUTRIT_MIXER,
    GeneratorBasis,
    UnsupportedDimensionError,
    kron,
    su_generators,
    validate_mixer,
)
from .measure import (
    CLOSED_FORMS,
    REGION_NAMES,
    DegenerateRegionError,
    EmptyRegionError,
    ProbabilityEstimate,
    RegionPredicate,
    closed_form,
    dilog,
    grid_probability,
    grid_suite_probabilities,
    mc_probability,
    region_suite,
    suite_probabilities,
)
from .separability import (
    CATALOG_THRESHOLDS,
    ExactThresholds,
    ThresholdResult,
    UnsupportedModelError,
    additive_statistic,
    catalog_thresholds,
    component_specs,
    component_state,
    derive_thresholds,
    match_exact_form,
    multiplicative_statistic,
)
from .state_models import (
    MODELS,
    ModelSpec,
    ParameterArityError,
    UnknownModelError,
    all_principal_minors_nonneg,
    build_state,
    is_physical,
    is_ppt,
    is_psd,
    leading_principal_minors,
    model,
    partial_transpose,
    physical_mask,
    ppt_region_mask,
    pt_signs,
    true_physical_mask,
    true_ppt_mask,
)

__version__ = "1.0.0"

__all__ = [
    "ALGEBRA_TOL",
    "CATALOG_THRESHOLDS",
    "CLOSED_FORMS",
    "HADAMARD_4",
    "HADAMARD_8",
    "MODELS",
    "PSD_TOL",
    "QUTRIT_MIXER",
    "REGION_NAMES",
    "DegenerateRegionError",
    "EmptyRegionError",
    "ExactThresholds",
    "GeneratorBasis",
    "ModelSpec",
    "ParameterArityError",
    "ProbabilityEstimate",
    "RegionPredicate",
    "ThresholdResult",
    "UnknownModelError",
    "UnsupportedDimensionError",
    "UnsupportedModelError",
    "additive_statistic",
    "all_principal_minors_nonneg",
    "build_state",
    "catalog_thresholds",
    "closed_form",
    "component_specs",
    "component_state",
    "derive_thresholds",
    "dilog",
    "grid_probability",
    "grid_suite_probabilities",
    "is_physical",
    "is_ppt",
    "is_psd",
    "kron",
    "leading_principal_minors",
    "match_exact_form",
    "mc_probability",
    "model",
    "multiplicative_statistic",
    "partial_transpose",
    "physical_mask",
    "ppt_region_mask",
    "pt_signs",
    "region_suite",
    "su_generators",
    "suite_probabilities",
    "true_physical_mask",
    "true_ppt_mask",
    "validate_mixer",
    "__version__",
]
