"""shiftlab: certified finite-section laboratory for weighted forward shifts
on tridiagonal analytic sequence spaces.

The package realizes the operator as explicit banded truncations, evaluates
boundedness / transitivity / mixing / chaos criteria with certified tail
bounds, decomposes the operator against its diagonal part, and simulates
adjoint orbits in dual coordinates.
"""

from .dynamics import (
    GrowthClass,
    all_criteria,
    backward_shift_chaos_check,
    chaos_extra_condition,
    chaos_series,
    generic_kn_criteria,
    hypercyclic_iff,
    hypercyclic_necessary,
    hypercyclic_sufficient,
    normalized_tail_class,
    supercyclic_fact,
    wuc_check,
    zero_one_decay_check,
)
from .errors import (
    CertMismatch,
    DegenerateSpace,
    ErrorBudgetExceeded,
    IndexCapExceeded,
    IndexNegative,
    NotCertifiable,
    NotInDual,
    NotRootOfUnity,
    PolynomialNotInSpace,
    PreconditionNotMet,
    ShiftLabError,
    TailNotCertifiable,
    ZeroDenominator,
    ZeroWeight,
)
from .operator import (
    A_coeff,
    BetaBounds,
    NormEstimate,
    PerturbationDecomposition,
    TruncatedMatrix,
    alpha_expr,
    apply_adjoint,
    apply_forward,
    beta_bounds,
    build_matrix,
    c_coeff,
    c_expr,
    check_sup_limsup,
    decompose_compact,
    matrix_power_consistency,
    matrix_to_csv,
    matrix_to_json,
    opnorm_bound,
    p_norm_estimate,
    rank_one_perturb_orbit,
    ratio_ba_expr,
)
from .orbit import (
    OrbitRecord,
    OrbitStep,
    ResidualReport,
    adjoint_step,
    eigen_residual,
    iterate_adjoint,
    limit_point_demo,
    periodic_residual,
    supercyclic_vanishing_check,
)
from .presets import PRESET_NAMES, get_preset
from .report import (
    FAILS_NUMERIC,
    HOLDS_CERTIFIED,
    HOLDS_NUMERIC,
    INCONCLUSIVE,
    CriterionReport,
    Quantity,
)
from .sequences import (
    INDEX_CAP,
    SequenceExpr,
    SequenceTriple,
    TailCert,
    constant_seq,
    eval_seq,
    eval_seq_many,
    expr_from_json,
    expr_to_json,
    log_abs_seq_many,
    make_seq,
    product_weights,
    product_weights_value,
    radius_of_disc,
    ratio_limsup,
    seq_add_same_rate,
    seq_div,
    seq_eventual_bounds,
    seq_mul,
    seq_scale,
    seq_shift,
    seq_sub_same_rate,
    triple_from_json,
    triple_to_json,
    validate_triple,
)
from .series import SeriesResult, certified_ratio_sum, geometric_tail, sum_abs_power
from .space import (
    C0,
    DualVec,
    FunctionVec,
    SpaceConfig,
    coeff_functional_kn,
    coeffs_to_taylor,
    dual_pairing,
    dual_vec_from_json,
    ev_functional,
    eval_basis_fn,
    fstar_in_k_basis,
    function_vec_from_json,
    kn_norm_bound,
    monomial_expansion,
    monomial_norm,
    norm,
    taylor_to_coeffs,
    vec_to_json,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "ShiftLabError", "IndexNegative", "IndexCapExceeded", "ZeroDenominator",
    "ZeroWeight", "DegenerateSpace", "NotCertifiable", "NotInDual",
    "NotRootOfUnity", "PolynomialNotInSpace", "PreconditionNotMet",
    "ErrorBudgetExceeded", "CertMismatch", "TailNotCertifiable",
    # sequences
    "INDEX_CAP", "SequenceExpr", "SequenceTriple", "TailCert", "make_seq",
    "constant_seq", "eval_seq", "eval_seq_many", "log_abs_seq_many",
    "seq_shift", "seq_mul", "seq_div", "seq_scale", "seq_sub_same_rate",
    "seq_add_same_rate", "seq_eventual_bounds", "ratio_limsup",
    "radius_of_disc", "product_weights", "product_weights_value",
    "validate_triple", "expr_to_json", "expr_from_json", "triple_to_json",
    "triple_from_json",
    # series
    "SeriesResult", "sum_abs_power", "certified_ratio_sum", "geometric_tail",
    # space
    "C0", "SpaceConfig", "FunctionVec", "DualVec", "eval_basis_fn",
    "coeffs_to_taylor", "taylor_to_coeffs", "monomial_expansion",
    "monomial_norm", "coeff_functional_kn", "kn_norm_bound",
    "fstar_in_k_basis", "ev_functional", "dual_pairing", "norm",
    "vec_to_json", "function_vec_from_json", "dual_vec_from_json",
    # operator
    "TruncatedMatrix", "PerturbationDecomposition", "BetaBounds",
    "NormEstimate", "A_coeff", "c_coeff", "alpha_expr", "c_expr",
    "ratio_ba_expr", "build_matrix", "matrix_power_consistency",
    "apply_forward", "apply_adjoint", "beta_bounds", "opnorm_bound",
    "check_sup_limsup", "p_norm_estimate", "decompose_compact",
    "rank_one_perturb_orbit", "matrix_to_json", "matrix_to_csv",
    # dynamics
    "GrowthClass", "normalized_tail_class", "hypercyclic_sufficient",
    "hypercyclic_necessary", "hypercyclic_iff", "chaos_series",
    "chaos_extra_condition", "generic_kn_criteria", "wuc_check",
    "backward_shift_chaos_check", "zero_one_decay_check",
    "supercyclic_fact", "all_criteria",
    # orbit
    "OrbitStep", "OrbitRecord", "ResidualReport", "adjoint_step",
    "iterate_adjoint", "eigen_residual", "periodic_residual",
    "limit_point_demo", "supercyclic_vanishing_check",
    # report
    "Quantity", "CriterionReport", "HOLDS_CERTIFIED", "HOLDS_NUMERIC",
    "FAILS_NUMERIC", "INCONCLUSIVE",
    # presets
    "PRESET_NAMES", "get_preset",
]
