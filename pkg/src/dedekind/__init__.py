"""Exact counting of monotone 0/1 maps on subposets of the n-cube."""

from .errors import BudgetExceededError, FalsificationError, PosetParseError
from .monotone import (
    DEFAULT_ENUMERATION_CAP,
    DEFAULT_NODE_BUDGET,
    MonotoneMap,
    count_monotone_oracle,
    enumerate_monotone,
    is_monotone,
)
from .partition import (
    CANONICAL_DIM_CAP,
    COMPLETE_BUT_NOT_MINIMAL,
    DEFAULT_COVER_MODE,
    MINIMAL,
    NOT_COMPLETE,
    MemoCache,
    PartitionTerm,
    PINNED_DEDEKIND,
    TwoAdicPolynomial,
    canonical_key,
    construct_layer_subset,
    construct_recursive_partition,
    corollary_split,
    count_via_partition,
    decompose_power_of_two,
    definitional_completeness_oracle,
    e2_condition_check,
    is_complete_partition,
    minimality_check,
    numeric_completeness_oracle,
    partition_terms,
)
from .poset import (
    COVER_MODES,
    MAX_DIM,
    CoverPair,
    Point,
    Subposet,
    V3Witness,
    cover_preserving_isomorphic,
    covers,
    find_v3,
    generated_subset,
    leq,
    lower_set,
    upper_set,
    weight,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "CANONICAL_DIM_CAP",
    "COMPLETE_BUT_NOT_MINIMAL",
    "COVER_MODES",
    "CoverPair",
    "DEFAULT_COVER_MODE",
    "DEFAULT_ENUMERATION_CAP",
    "DEFAULT_NODE_BUDGET",
    "FalsificationError",
    "MAX_DIM",
    "MINIMAL",
    "MemoCache",
    "MonotoneMap",
    "NOT_COMPLETE",
    "PINNED_DEDEKIND",
    "PartitionTerm",
    "Point",
    "PosetParseError",
    "Subposet",
    "TwoAdicPolynomial",
    "V3Witness",
    "canonical_key",
    "construct_layer_subset",
    "construct_recursive_partition",
    "corollary_split",
    "count_monotone_oracle",
    "count_via_partition",
    "cover_preserving_isomorphic",
    "covers",
    "decompose_power_of_two",
    "definitional_completeness_oracle",
    "e2_condition_check",
    "enumerate_monotone",
    "find_v3",
    "generated_subset",
    "is_complete_partition",
    "is_monotone",
    "leq",
    "lower_set",
    "minimality_check",
    "numeric_completeness_oracle",
    "partition_terms",
    "upper_set",
    "weight",
    "__version__",
]
