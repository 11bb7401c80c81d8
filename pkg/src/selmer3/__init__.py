"""Exact local arithmetic of binary cubic forms and the Selmer-ratio
calculus for 3-isogenies in sextic twist families."""

from .cubicforms import (
    BinaryCubicForm,
    CubicRing,
    TwoByTwoMatrix,
    act,
    conductor_subring,
    factorization_type,
    form_to_ring,
    index_p_subrings,
    orbit_split,
    ring_to_form,
)
from .errors import (
    BudgetError,
    DomainError,
    IncompleteConfigError,
    NonIntegralClassError,
    PrecisionError,
    Selmer3Error,
)
from .localclass import (
    LocalTwistDatum,
    OrbitClassDescriptor,
    build_twist_datum,
    classify_integral,
    h1_dims,
    integral_representative,
    soluble_classes,
    summand_flag_reduction,
)
from .localfield import (
    Place,
    SquareClassification,
    ValuedRational,
    classify_squares,
    is_square,
    sextic_class_3adic,
    unit_part,
    valuation,
    zeta3_present,
)
from .selmerratio import (
    IsogenyDescriptor,
    KappaEntry,
    LocalPlaceProfile,
    RatioConfig,
    SelmerRatioReport,
    average_selmer_prediction,
    chain_rank_bound,
    cm_ratio_check,
    duality_exponent,
    euler_product_average,
    explicit_rank_bound,
    global_report,
    greenberg_wiles_check,
    local_exponent,
    parity_prediction,
    rank_density_bounds,
    tk_partition,
)
from .twistfamilies import (
    TwistClass,
    TwistFamily,
    enumerate_classes,
    family_preset,
    height,
    is_squarefree_class,
    reduce_class,
)

__version__ = "0.1.0"

__all__ = [
    "BinaryCubicForm",
    "BudgetError",
    "CubicRing",
    "DomainError",
    "IncompleteConfigError",
    "IsogenyDescriptor",
    "KappaEntry",
    "LocalPlaceProfile",
    "LocalTwistDatum",
    "NonIntegralClassError",
    "OrbitClassDescriptor",
    "Place",
    "PrecisionError",
    "RatioConfig",
    "Selmer3Error",
    "SelmerRatioReport",
    "SquareClassification",
    "TwistClass",
    "TwistFamily",
    "TwoByTwoMatrix",
    "ValuedRational",
    "act",
    "average_selmer_prediction",
    "build_twist_datum",
    "chain_rank_bound",
    "classify_integral",
    "classify_squares",
    "cm_ratio_check",
    "conductor_subring",
    "duality_exponent",
    "enumerate_classes",
    "euler_product_average",
    "explicit_rank_bound",
    "factorization_type",
    "family_preset",
    "form_to_ring",
    "global_report",
    "greenberg_wiles_check",
    "h1_dims",
    "height",
    "index_p_subrings",
    "integral_representative",
    "is_square",
    "is_squarefree_class",
    "local_exponent",
    "orbit_split",
    "parity_prediction",
    "rank_density_bounds",
    "reduce_class",
    "ring_to_form",
    "sextic_class_3adic",
    "soluble_classes",
    "summand_flag_reduction",
    "tk_partition",
    "unit_part",
    "valuation",
    "zeta3_present",
]
