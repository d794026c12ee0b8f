"""Certified computations for Bernoulli convolutions with algebraic
parameter: Mahler measure, exact random-walk support and entropy, the
smoothed-entropy gap functional with its certified constant, dimension
brackets and singularity certificates."""

from .analysis import (
    AffineGrowth,
    DimensionBracket,
    MercatCheck,
    SingularityCertificate,
    affine_growth_alias,
    dimension_bracket,
    fourier_certificate,
    full_dimension_test,
    mercat_check,
    strictness_applicable,
)
from .errors import (
    BceError,
    ComputeError,
    ValidationError,
)
from .numberfield import (
    AlgebraicContext,
    ComplexInterval,
    FieldElement,
    IntPolynomial,
    RootClass,
    algebraic_context,
    classify_roots,
    context_from_coeffs,
    count_real_roots,
    isolate_roots,
    mahler_measure,
    parse_polynomial,
    power_sums,
    reduce_mod,
    structural_flags,
)
from .smoothedentropy import (
    CConstantCertificate,
    PhiCertificate,
    PhiSearch,
    SmoothedQuery,
    c_constant,
    entropy_lower_bound,
    gaussian_discretization,
    gaussian_entropy,
    mixture_entropy,
    phi,
    smoothed_entropy_gap,
)
from .walk import (
    FreenessReport,
    GrowthReport,
    GrowthRow,
    OracleResult,
    StepDistribution,
    WalkLevel,
    advance_level,
    brute_force_oracle,
    fair_coin,
    growth_sequences,
    is_free_up_to,
    make_step_distribution,
    min_separation,
    shannon_entropy,
    walk_level_zero,
)

__version__ = "0.1.0"
