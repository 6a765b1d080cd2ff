"""Rényi-order uncertainty and information-leakage measures on finite alphabets.

Values are in nats.  Orders are :class:`Order` tags (0, 1, infinity) or
finite positive reals; plain numbers are accepted wherever an order is.
"""

from .core import (
    Channel,
    JointView,
    ProbVec,
    SubDist,
    binomial,
    bsc,
    identity_channel,
    induce,
    joint_to_prior_channel,
    markov_chain,
    point_mass,
    restrict,
    support,
    tilt,
    uniform,
    validate_pmf,
)
from .exceptions import (
    AlphaLeakError,
    BudgetExceeded,
    DimensionMismatch,
    EmptySubset,
    EmptyVector,
    InputFormatError,
    InvalidIndex,
    InvalidOrder,
    NegativeMass,
    NonConvergence,
    NonFiniteMass,
    NumericalError,
    RouteMismatch,
    BoundExceeded,
    SumOutOfTolerance,
    UnsupportedOrder,
    ZeroOutputMass,
    ZeroTotal,
)
from .leakage import (
    CapacityResult,
    LeakageReport,
    alpha_leakage,
    alpha_lift,
    arimoto_mi,
    elementary_leakage,
    liao_leakage,
    maximal_leakage,
    optimal_estimator,
    pml,
    renyi_capacity,
    sibson_mi,
)
from .measures import (
    KNVariant,
    alpha_loss,
    alternate_cross_entropy_vv,
    arimoto_conditional_entropy,
    conditional_renyi_probability,
    cross_entropy,
    kn_mean,
    liao_loss,
    min_cross_entropy,
    renyi_divergence,
    renyi_entropy,
    renyi_probability,
    subset_uncertainty,
)
from .oracle import (
    GridSpec,
    limit_probe,
    projected_gradient_min,
    simplex_grid_min,
    sup_leakage_search,
)
from .orders import Order, as_order

__version__ = "0.1.0"

__all__ = [
    "Channel",
    "JointView",
    "ProbVec",
    "SubDist",
    "binomial",
    "bsc",
    "identity_channel",
    "induce",
    "joint_to_prior_channel",
    "markov_chain",
    "point_mass",
    "restrict",
    "support",
    "tilt",
    "uniform",
    "validate_pmf",
    "AlphaLeakError",
    "BudgetExceeded",
    "DimensionMismatch",
    "EmptySubset",
    "EmptyVector",
    "InputFormatError",
    "InvalidIndex",
    "InvalidOrder",
    "NegativeMass",
    "NonConvergence",
    "NonFiniteMass",
    "NumericalError",
    "RouteMismatch",
    "BoundExceeded",
    "SumOutOfTolerance",
    "UnsupportedOrder",
    "ZeroOutputMass",
    "ZeroTotal",
    "CapacityResult",
    "LeakageReport",
    "alpha_leakage",
    "alpha_lift",
    "arimoto_mi",
    "elementary_leakage",
    "liao_leakage",
    "maximal_leakage",
    "optimal_estimator",
    "pml",
    "renyi_capacity",
    "sibson_mi",
    "KNVariant",
    "alpha_loss",
    "alternate_cross_entropy_vv",
    "arimoto_conditional_entropy",
    "conditional_renyi_probability",
    "cross_entropy",
    "kn_mean",
    "liao_loss",
    "min_cross_entropy",
    "renyi_divergence",
    "renyi_entropy",
    "renyi_probability",
    "subset_uncertainty",
    "GridSpec",
    "limit_probe",
    "projected_gradient_min",
    "simplex_grid_min",
    "sup_leakage_search",
    "Order",
    "as_order",
]
