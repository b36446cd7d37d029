"""Gini mean differences and Gini indices for dependent lifetimes.

Marginal distributions and copulas combine into bivariate or multivariate
models; the gini module computes mean differences, indices, and bounds by
adaptive quadrature; the systems module covers efficiency indices of
semi-coherent systems through minimal signatures; the sampling module provides
seeded Monte Carlo and an independent discretization oracle.
"""

from .copulas import (
    Clayton,
    Copula,
    Fgm,
    Fgm4Diagonal,
    Frank,
    IidDiagonal,
    Independence,
    LowerFrechet,
    SchurReport,
    UpperFrechet,
    schur_predicates,
)
from .gini import (
    BivariateModel,
    BoundsReport,
    ExponentialConditionalsModel,
    GiniReport,
    MultivariateIdModel,
    SandwichReport,
    bounds_report,
    covariance_representation,
    gamma_functions,
    gini_association,
    gini_univariate,
    gmd_bivariate,
    gmd_multivariate,
    gmd_univariate,
    ordered_sandwich,
)
from .marginals import (
    Exponential,
    MarginalDistribution,
    TabulatedQuantile,
    Uniform,
    UnsupportedOperationError,
)
from .quadrature import (
    IntegrandEvaluationError,
    NonConvergenceError,
    QuadratureConfig,
    QuadratureResult,
    integrate_halfline,
    integrate_unit,
)
from .sampling import (
    PairSample,
    SeededStream,
    empirical_efficiency,
    empirical_indices,
    grid_oracle_gmd,
    sample_pairs,
)
from .systems import (
    CatalogIntegrityError,
    Signature,
    SystemSpec,
    cigf,
    eff_gini,
    eff_gmd_exchangeable,
    eff_gmd_iid,
    eff_gmd_signature,
    k_measure,
    k_out_of_n_system,
    load_catalog,
    markov_efficiency_bound,
    minimal_signature_from_structure,
    order_statistic_signature,
    parallel_system,
    parse_structure,
    series_system,
    structure_evaluate,
    table1,
    table2,
)

__version__ = "0.1.0"

__all__ = [
    "BivariateModel",
    "BoundsReport",
    "CatalogIntegrityError",
    "Clayton",
    "Copula",
    "Exponential",
    "ExponentialConditionalsModel",
    "Fgm",
    "Fgm4Diagonal",
    "Frank",
    "GiniReport",
    "IidDiagonal",
    "Independence",
    "IntegrandEvaluationError",
    "LowerFrechet",
    "MarginalDistribution",
    "MultivariateIdModel",
    "NonConvergenceError",
    "PairSample",
    "QuadratureConfig",
    "QuadratureResult",
    "SandwichReport",
    "SchurReport",
    "SeededStream",
    "Signature",
    "SystemSpec",
    "TabulatedQuantile",
    "Uniform",
    "UnsupportedOperationError",
    "UpperFrechet",
    "bounds_report",
    "cigf",
    "covariance_representation",
    "eff_gini",
    "eff_gmd_exchangeable",
    "eff_gmd_iid",
    "eff_gmd_signature",
    "empirical_efficiency",
    "empirical_indices",
    "gamma_functions",
    "gini_association",
    "gini_univariate",
    "gmd_bivariate",
    "gmd_multivariate",
    "gmd_univariate",
    "grid_oracle_gmd",
    "integrate_halfline",
    "integrate_unit",
    "k_measure",
    "k_out_of_n_system",
    "load_catalog",
    "markov_efficiency_bound",
    "minimal_signature_from_structure",
    "order_statistic_signature",
    "ordered_sandwich",
    "parallel_system",
    "parse_structure",
    "sample_pairs",
    "schur_predicates",
    "series_system",
    "structure_evaluate",
    "table1",
    "table2",
]
