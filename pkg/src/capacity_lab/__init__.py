"""capacity-lab: capacity measures of finite tabulated function classes and
the closed-form risk bounds they certify, with brute-force verification."""

from .capacity import (
    Caps,
    CapacityQuery,
    CapacityResult,
    DimOracle,
    Enumerate,
    FatShatteringResult,
    Sample,
    ShatterCertificate,
    covering_number,
    default_witness_values,
    dim_oracle_eval,
    extraction_constant,
    extraction_search,
    fat_shattering_dim,
    graph_edges_text,
    packing_number,
    uniform_capacity,
)
from .bounds import (
    BoundReport,
    ChainSchedule,
    chained_rademacher_bound,
    decomposition_rhs,
    dudley_bound,
    dudley_integral,
    erf,
    l2_risk_bound,
    linf_risk_bound_covering,
    linf_risk_bound_fatdim,
    packing_bound_l2,
    parametric_rademacher_bound,
    rademacher_union_rhs,
    sauer_shelah_grid,
    sauer_shelah_linf,
    sauer_shelah_lp,
)
from .errors import (
    CapacityLabError,
    InputValidationError,
    PreconditionError,
    ResourceLimitError,
)
from .fclass import (
    STAR,
    CodomainGrid,
    GroundSet,
    LabeledSample,
    TabulatedClass,
    VectorClass,
    all_functions_class,
    dedupe_rows,
    discretize,
    eta_grid,
    generate_class,
    joint_vector_class,
    load_tabulated_class,
    load_vector_class,
    margin_transform,
    margin_transform_full,
    product_vector_class,
    random_grid_class,
    random_uniform_class,
    restrict,
    save_class,
    squash,
    squash_value,
    union_rows,
)
from .metric import P1, P2, PINF, DistanceMatrix, PNorm, diameter, dist, distance_matrix
from .rademacher import RademacherEstimate, massart_bound, rademacher_exact, rademacher_mc
from .risk import (
    INDICATOR,
    TRUNCATED_HINGE,
    ZERO_ONE,
    DiscreteDistribution,
    MarginLoss,
    decision_rule,
    empirical_risk,
    expected_risk,
    load_distribution,
    loss_eval,
    margin_value,
    save_distribution,
    validate_margin_loss,
)

__version__ = "0.1.0"
