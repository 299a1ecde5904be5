"""Finite quotient towers of the rank-2 free group.

Permutation quotients (homology cover towers, congruence quotients, files),
quasi-regular operator norms with certified residuals, spectral gaps,
uplift/compression norms across tower links, truncated free-group norms,
support-constrained sparse norms and invariance deficiencies, and Folner
families with exact boundary counts.  All computation happens in the C++
extension; this package re-exports it.
"""

from towernorm._core import (
    AlmostInvariantResult,
    AlphaResult,
    CapExceeded,
    CoverStructure,
    DeficiencyResult,
    Element,
    ExperimentConfig,
    FolnerFamily,
    FolnerLevel,
    FolnerReportRow,
    GapResult,
    GrowthComparison,
    GrowthFunction,
    LiftingReport,
    Operator,
    ParseError,
    Quotient,
    RunResult,
    SpectralResult,
    SupportValue,
    Table,
    Tower,
    TowerLink,
    ValidationError,
    ValidationItem,
    ValidationReport,
    Word,
    almost_invariant,
    alpha,
    assemble,
    averaging_element,
    ball,
    best_sparse_approx_error,
    build_A,
    build_ag_tower,
    build_sl2_tower,
    check_isometric_lifting,
    choose_k,
    cluster_support,
    compare_growth,
    distances,
    folner_report,
    growth_iota,
    growth_nu,
    invariance_deficiency_on_support,
    load_growth,
    load_quotient,
    min_invariance_deficiency,
    op_norm,
    parse_config_file,
    project_old,
    regular_norm,
    rho_norm,
    run_experiment,
    save_quotient,
    sl2_quotient,
    sparse_norm_exhaustive,
    sparse_norm_on_support,
    sparse_norm_truncated,
    spectral_gap,
    support_invariance_check,
    tau_lower_bound,
    tower_validate,
    trivial_vector,
    uplift,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
