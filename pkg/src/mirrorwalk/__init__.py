"""Exact and asymptotic distributions of coin-toss walks confined to a half-line or a box."""

from .bijection import (
    crossing_sequence,
    first_crossing,
    phi_box,
    phi_half_line,
    psi_box,
    psi_half_line,
    union_intersection_failures,
    verify_bijection,
)
from .bounds import alpha_beta_terms, bernoulli_check, envelope_check, stirling_bounds, stirling_sweep
from .counting import (
    PathCount,
    brute_force_count,
    dp_count,
    exact_probability,
    image_sum_count,
    nominal_image_sum,
    unconstrained_count,
)
from .errors import (
    CostGuardError,
    DegenerateDomainError,
    DegenerateLimitError,
    DomainError,
    InvalidInputError,
    MirrorWalkError,
    NoSurvivorError,
    PreconditionError,
)
from .kernels import (
    KernelKind,
    KernelSpec,
    box_kernel_images,
    box_kernel_series,
    gauss,
    halfline_kernel,
    kernel_cdf,
    limit_probability,
    poisson_check,
)
from .montecarlo import empirical_probability, run_trials, sample_forced, sample_rejection
from .walk import (
    Boundary,
    Classification,
    Direction,
    IntervalSet,
    Side,
    WalkConfig,
    classify,
    in_target,
    partial_sums,
    reflect,
    reflect_chain,
)

__version__ = "0.1.0"
