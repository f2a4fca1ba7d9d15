"""Inequality and dispersion indices under the gamma distribution.

Computes the sample Gini, Theil T, Atkinson, and variance-to-mean ratio
indices, their closed-form population values and exact finite-sample
expectations when the data are gamma distributed, the bias corrections
those expectations imply, and a seeded Monte Carlo / quadrature harness
that verifies all of it.
"""

from .errors import DataError, DomainError, GammadexError, NumericError, SizeError
from .gamma_forms import (
    ExpectationResult,
    GammaParams,
    alpha_plug_in,
    debias,
    expect_atkinson,
    expect_gini,
    expect_theil,
    expect_vmr,
    expectation,
    pop_atkinson,
    pop_gini,
    pop_theil,
    pop_vmr,
    population_value,
)
from .indices import (
    IndexKind,
    Sample,
    atkinson,
    compute_index,
    gini,
    gini_pairwise,
    gini_sorted,
    sample_mean,
    theil_t,
    vmr,
)
from .rng import RngStream
from .sampling import (
    beta_variate,
    beta_variates,
    dirichlet_variate,
    dirichlet_variates,
    gamma_variate,
    gamma_variates,
)
from .verify import (
    McReport,
    VerifyConfig,
    abs_2r_minus_1_check,
    beta_ulogu_check,
    dirichlet_product_moment_check,
    lukacs_independence_check,
    mc_expectation,
    run_verification,
    two_point_remark_check,
)

__version__ = "0.1.0"

__all__ = [
    "GammadexError", "DomainError", "SizeError", "DataError", "NumericError",
    "Sample", "IndexKind", "sample_mean", "gini", "gini_pairwise", "gini_sorted",
    "theil_t", "atkinson", "vmr", "compute_index",
    "GammaParams", "ExpectationResult", "pop_gini", "pop_theil", "pop_atkinson",
    "pop_vmr", "population_value", "expect_gini", "expect_theil", "expect_atkinson",
    "expect_vmr", "expectation", "debias", "alpha_plug_in",
    "RngStream", "gamma_variate", "gamma_variates", "beta_variate", "beta_variates",
    "dirichlet_variate", "dirichlet_variates",
    "McReport", "VerifyConfig", "mc_expectation", "lukacs_independence_check",
    "dirichlet_product_moment_check", "beta_ulogu_check", "abs_2r_minus_1_check",
    "two_point_remark_check", "run_verification",
    "__version__",
]
