"""Characteristic and companion functions, coefficient bounds, and the classifier."""

from .canonical import (
    CanonicalProduct,
    canonical_product,
    coeff_bound_check,
    combinatorial_identity_check,
    moment_formula,
)
from .charfn import (
    CharFnTruncation,
    CompanionData,
    Psi0Zero,
    RankTooLow,
    TruncationTooDeep,
    char_fn,
    f2_zero_scan,
    second_companion,
    tail_bound,
    zero_independence_probe,
)
from .structure import (
    Classification,
    Inconclusive,
    NotPreserving,
    PreconditionViolated,
    ProductComposition,
    Psi0VanishesOnGrid,
    Rank1,
    bb_certificate,
    classify,
    classify_via_reduce,
    falsify,
    moment_bound_check,
    reduce_general,
)

__all__ = [
    "CanonicalProduct", "canonical_product", "coeff_bound_check", "combinatorial_identity_check",
    "moment_formula", "CharFnTruncation", "CompanionData", "Psi0Zero", "RankTooLow",
    "TruncationTooDeep", "char_fn", "f2_zero_scan", "second_companion", "tail_bound",
    "zero_independence_probe", "Classification", "Inconclusive", "NotPreserving",
    "PreconditionViolated", "ProductComposition", "Psi0VanishesOnGrid", "Rank1", "bb_certificate",
    "classify", "classify_via_reduce", "falsify", "moment_bound_check", "reduce_general",
]
