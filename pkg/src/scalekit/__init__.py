"""scalekit: desk-scale numerical verification for scales on countable
index sets, summability certificates, Schwartz-type sequence and
matrix-block norms, renormalized seminorm families, and executable
counterexample reports.

Everything computes on finite prefixes and issues
certificates-at-truncation; no claim extends past the evaluated data unless
a symbolic tail bound backs it.
"""

from .logvalue import LOG_CMP_TOL, LogValue
from .indexsets import Enumeration, IndexSet
from .grammar import parse as parse_scale_expr
from .scales import (
    DominationReport,
    EquivalenceReport,
    InvalidScaleError,
    Scale,
    ScaleFamily,
    dominates,
    equivalent,
    family_dominates,
    power_dominates,
    scale_power,
    scale_product,
    standard_family,
)
from .summability import (
    condensation_enumeration,
    p_summability_check,
    prop_power_check,
    single_scale_summable,
    sqrt_standard_chain,
    summability_check,
)
from .schwartz import (
    FinSuppVector,
    convolve,
    fourier_seminorm_demo,
    ideal_inequality_check,
    norm_l1,
    norm_sup,
    pointwise_mul,
)
from .blocks import (
    BlockElement,
    BlockIndex,
    DimensionSequence,
    block_mul,
    cstar_norm,
    diagonal_embed,
    ell_min_max,
    gamma_block_enumeration,
    growth_condition_check,
    nondecreasing_reorder,
    reorder_with_padding,
    sandwich_check,
    socle_norm_op,
    socle_norms_l1_sup,
    standard_schwartz_classify,
    two_sided_ideal_check,
)
from .renorm import (
    BlockSocleInstance,
    PairAlgebraInstance,
    PointwiseInstance,
    TrivialMulInstance,
    star_norm,
    star_plus_norm,
    two_plus_norm,
    verify_renorm_contract,
)
from . import counterexamples

__version__ = "0.1.0"
