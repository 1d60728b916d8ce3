"""Numerical lab for fixed points of composite operator sequences and oblique projectors."""

from .errors import (
    ConfigError,
    DegenerateSplit,
    DimensionError,
    InvalidVector,
    NoContractiveStrip,
    NonContractive,
    NotClustered,
    NotLinear,
    NumericalError,
    OperiterError,
    RangeError,
)
from .iteration import (
    IterationTrace,
    StripSchedule,
    Termination,
    cauchy_residual,
    find_contractive_strips,
    iterate,
    trace_from_csv,
    trace_to_csv,
)
from .operators import (
    AffineOperator,
    CompositeStrip,
    Constant,
    Convergent,
    Explicit,
    OperatorSequence,
    Periodic,
    Product,
    RandomContractive,
    apply,
    compose,
    fold,
    operator_distance,
    operator_norm,
    power_iteration_norm,
    sequence_limit_substitute,
    strip,
)
from .projectors import (
    ConvergentProjectors,
    ObliqueProjector,
    complementary_projector,
    identity_projector,
    is_projector,
    oblique_projector,
    orthogonal_projector,
)
from .space import NormKind, as_vector, distance, norm_of
from .verify import CheckResult, Status, VerificationReport, fixed_point_direct

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DegenerateSplit",
    "DimensionError",
    "InvalidVector",
    "NoContractiveStrip",
    "NonContractive",
    "NotClustered",
    "NotLinear",
    "NumericalError",
    "OperiterError",
    "RangeError",
    "IterationTrace",
    "StripSchedule",
    "Termination",
    "cauchy_residual",
    "find_contractive_strips",
    "iterate",
    "trace_from_csv",
    "trace_to_csv",
    "AffineOperator",
    "CompositeStrip",
    "Constant",
    "Convergent",
    "Explicit",
    "OperatorSequence",
    "Periodic",
    "Product",
    "RandomContractive",
    "apply",
    "compose",
    "fold",
    "operator_distance",
    "operator_norm",
    "power_iteration_norm",
    "sequence_limit_substitute",
    "strip",
    "ConvergentProjectors",
    "ObliqueProjector",
    "complementary_projector",
    "identity_projector",
    "is_projector",
    "oblique_projector",
    "orthogonal_projector",
    "NormKind",
    "as_vector",
    "distance",
    "norm_of",
    "CheckResult",
    "Status",
    "VerificationReport",
    "fixed_point_direct",
]
