"""Noise stability bounds under resilience hypotheses on finite product spaces.

Core objects: tabulated functions on [q]^n with product measures, their
Fourier/Efron-Stein analysis, correlated multi-step distributions and their
Gaussian counterparts, decision-tree regularity constructions, resilience
certificates, half-space stability values, and desk-scale verification of
the resulting inequalities.
"""

__version__ = "0.1.0"

from .errors import (
    BoundViolation,
    BudgetExceededError,
    DegenerateDistributionError,
    DomainError,
    InvalidKernelError,
    PartitionError,
)
from .tables import (
    TableFunction,
    conditional_expectation,
    influence,
    influences,
    load_function,
    negate_inputs,
    noise_operator,
    restrict,
    save_function,
    to_pm_one,
    to_unit_interval,
    total_influence,
    uniform_measure,
)
from .fourier import (
    EfronSteinDecomposition,
    FourierExpansion,
    coords_of,
    efron_stein,
    fourier_transform,
    inverse_fourier,
    mask_of,
)
from .families import (
    dictator,
    dictator_times_majority,
    majority,
    parity,
    threshold,
    tribes,
)
from .distributions import (
    CorrelationReport,
    GaussianCounterpart,
    StepDistribution,
    arrow3,
    correlated_bits,
    f3_chain,
    from_kernel,
    gaussian_counterpart,
    load_distribution,
    marginals,
    min_atom,
    pair_marginal,
    rho,
    rho_max,
    sample,
    sample_gaussian,
    save_distribution,
)
from .stability import (
    SmoothingReport,
    multi_correlation,
    multi_correlation_mc,
    noisy_inner_product,
    pair_correlation,
    smoothing_check,
)
from .gaussian import (
    BorellReport,
    ContinuityReport,
    GammaEstimate,
    HalfspaceQuery,
    PiecewiseConstant,
    arcsine_quadrant,
    borell_bound,
    borell_check,
    chi_mu,
    continuity_bound_check,
    gamma_estimate,
    halfspace_stability,
    indicator_interval,
    normal_cdf,
    normal_quantile,
)
from .trees import (
    DecisionTree,
    LeafInfo,
    LeafStatistics,
    TreeLeaf,
    TreeNode,
    correlated_tree,
    fourier_tree,
    influence_tree,
    leaf_statistics,
    tree_to_json_dict,
)
from .resilience import (
    CrossResilienceReport,
    ResilienceCertificate,
    SufficientConditionReport,
    VarianceImplicationReport,
    cross_resilient,
    fourier_support,
    resilience_defect,
    resilience_implies_variance,
    sufficient_condition_check,
    support_cost,
)
from .parameters import (
    ConstantsProfile,
    DEFAULT_PROFILE,
    depth_bounds,
    m_beta_three,
    r_alpha_two,
    r_multi,
    tau_general,
    tau_mist,
    tau_two_general,
)
from .verify import (
    StabilityReport,
    check_arrow,
    check_pair_lower,
    check_theorem_multi,
    check_theorem_three,
    check_theorem_two,
    guilbaud_constant,
    pair_lower_bound_value,
    paradox_probability,
)
