"""Entropy of sequence sets: prefix counting, scale-resolved counting
on metric clouds, and digit/IFS codings of fractal subsets.

The building blocks live in focused modules; this package namespace
re-exports the pieces most callers need.
"""

from .alphabet import Alphabet, PrefixSet, Word
from .bowen import (
    BowenEstimate,
    BowenGridConfig,
    CallableSemimetric,
    DiscreteMetric,
    DnpMetric,
    EuclideanMetric,
    PointCloud,
    SeparatedCount,
    SpanningCount,
    bowen_entropy,
    check_semimetric,
    count_separated,
    count_spanning,
    dnp,
    map_bowen_entropy,
    orbit_cloud,
    seqset_cloud,
)
from .checks import CheckReport, CheckViolation, run_suite, suite_names
from .dsl import (
    Diagnostic,
    DslArityError,
    DslError,
    DslSyntaxError,
    DslValidationError,
    parse,
    parse_expr,
    print_expr,
)
from .dynamics import (
    FiniteMap,
    InvarianceError,
    ModifiedMap,
    TransitionRelation,
    check_invariance,
    count_walks,
    modify_map,
    orbit_seqset,
    sft_seqset,
)
from .entropy import (
    CountSeries,
    DivergenceWitness,
    EntropyEstimate,
    EstimatorConfig,
    bounded_counts,
    count_series,
    divergence_witness,
    entropy_estimate,
    entropy_exact,
)
from .fractal import (
    IFS,
    AffineMap,
    CylinderCell,
    FractalSubset,
    cantor_ifs,
    cantor_set,
    digit_counts,
    digit_expansion,
    digit_prefixes,
    digit_seqset,
    ifs_ball_words,
    ifs_cells,
    ifs_pi,
    ifs_preimage_prefixes,
    interval_subset,
    named_subset,
    point_subset,
    scalar_map,
)
from .schedules import (
    BlockSchedule,
    FrozenFreeBlocks,
    PeriodicSubsets,
    build_schedule,
    schedule_to_rule,
    schedule_to_seqset,
)
from .seqset import (
    BlockK,
    BudgetExceededError,
    Closure,
    CylSched,
    DilateK,
    DisjointUnion,
    EvConst,
    EventuallySeq,
    FiniteSet,
    FullShift,
    Image,
    Orbit,
    OrbitSV,
    RestrictK,
    SRSet,
    SetProduct,
    SetUnion,
    ShiftK,
    SymbolMap,
    alphabet_of,
    count_prefixes,
    count_upper_bound,
    ev_const,
    finite_set,
    full_shift,
    materialization_bound,
    prefixes,
    sr_set,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "Word",
    "PrefixSet",
    "FullShift",
    "EvConst",
    "SRSet",
    "CylSched",
    "FiniteSet",
    "Orbit",
    "OrbitSV",
    "ShiftK",
    "DilateK",
    "RestrictK",
    "BlockK",
    "SetUnion",
    "DisjointUnion",
    "SetProduct",
    "Image",
    "Closure",
    "EventuallySeq",
    "SymbolMap",
    "BudgetExceededError",
    "alphabet_of",
    "validate",
    "prefixes",
    "count_prefixes",
    "count_upper_bound",
    "materialization_bound",
    "full_shift",
    "ev_const",
    "sr_set",
    "finite_set",
    "CountSeries",
    "count_series",
    "EstimatorConfig",
    "EntropyEstimate",
    "entropy_estimate",
    "entropy_exact",
    "bounded_counts",
    "DivergenceWitness",
    "divergence_witness",
    "BlockSchedule",
    "build_schedule",
    "PeriodicSubsets",
    "FrozenFreeBlocks",
    "schedule_to_rule",
    "schedule_to_seqset",
    "FiniteMap",
    "TransitionRelation",
    "count_walks",
    "orbit_seqset",
    "sft_seqset",
    "ModifiedMap",
    "InvarianceError",
    "check_invariance",
    "modify_map",
    "PointCloud",
    "DiscreteMetric",
    "EuclideanMetric",
    "DnpMetric",
    "CallableSemimetric",
    "dnp",
    "check_semimetric",
    "SeparatedCount",
    "SpanningCount",
    "count_separated",
    "count_spanning",
    "BowenGridConfig",
    "BowenEstimate",
    "bowen_entropy",
    "map_bowen_entropy",
    "orbit_cloud",
    "seqset_cloud",
    "FractalSubset",
    "interval_subset",
    "point_subset",
    "cantor_set",
    "named_subset",
    "digit_prefixes",
    "digit_expansion",
    "digit_seqset",
    "digit_counts",
    "AffineMap",
    "scalar_map",
    "IFS",
    "cantor_ifs",
    "CylinderCell",
    "ifs_cells",
    "ifs_pi",
    "ifs_ball_words",
    "ifs_preimage_prefixes",
    "Diagnostic",
    "DslError",
    "DslSyntaxError",
    "DslArityError",
    "DslValidationError",
    "parse",
    "parse_expr",
    "print_expr",
    "CheckReport",
    "CheckViolation",
    "run_suite",
    "suite_names",
]
