"""Stanley depth tools for intersections of monomial primary ideals."""

from .homology import Field, betti_table
from .instances import InstanceSpec, RandomParams, format_instance, parse_instance, random_instance
from .invariants import (
    DepthResult,
    SizeResult,
    assoc_primes,
    depth_formula,
    depth_oracle,
    depth_primary_quotient,
    dim_quotient_of_sum,
    lyubeznik_bound_check,
    size,
)
from .monomial import (
    Monomial,
    MonomialIdeal,
    PrimaryComponent,
    PrimaryDecomposition,
    RingContext,
    as_primary,
    colon,
    contract,
    divides,
    ideal_sum,
    intersect,
    is_irredundant,
    minimalize,
    radical,
)
from .pipeline import ConjectureReport, verify
from .splitting import decompose, decompose_two_primary, split_theorem3
from .stanley import (
    StanleyDecomposition,
    StanleyInterval,
    characteristic_poset,
    sdepth_exact,
    validate_decomposition,
)

__version__ = "0.1.0"
