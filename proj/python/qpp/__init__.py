"""Quantum permutation pad cipher and collision cryptanalysis."""

from fractions import Fraction
from typing import Optional

from ._qpp import (  # noqa: F401
    CorruptDataError,
    ImpressionMetrics,
    KeyMismatchError,
    PadKey,
    Probability,
    RasterImage,
    RateEstimate,
    ShuffleMode,
    UniformityReport,
    UnsupportedFormatError,
    apply_permutation,
    approx_bound_incomplete,
    benchmark_image,
    collision_positions,
    collision_prob_complete,
    count_fixing_permutations,
    decrypt,
    decrypt_image,
    encrypt,
    encrypt_image,
    figure1_metrics,
    impression_metrics,
    index_for_chunk,
    invert_permutation,
    keygen,
    make_key,
    monte_carlo_collision_rate,
    pad_all_fix_prob,
    pad_all_fix_prob_enumerated,
    parse_pnm,
    permutation_from_keystream,
    shuffle_uniformity_exhaustive,
    shuffle_uniformity_sampled,
    worst_case_pad_rate,
    write_pnm,
)


def exact_fraction(probability: Probability) -> Optional[Fraction]:
    """The probability's exact rational as a Fraction, when it carries one."""
    if probability.exact is None:
        return None
    return Fraction(probability.exact)
