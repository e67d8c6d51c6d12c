"""Tomographic QKD over Bell-diagonal states: security analysis and simulation."""

from .states import (
    AngleParameterization,
    Basis,
    BasisMarginals,
    BellDiagonalState,
    OverlapSet,
    basis_marginals,
    correlation_probability,
    distillable_margin,
    from_angles,
    from_probabilities,
    is_distillable,
    overlaps,
    to_angles,
    werner,
)
from .security import (
    BlockCase,
    BlockErrorInputs,
    GuessProbabilities,
    SecurityReport,
    ad_coherent_margin,
    ad_coherent_secure,
    ad_incoherent_margin,
    ad_incoherent_secure,
    alice_bob_block_error,
    alice_bob_block_error_asymptotic,
    binary_entropy,
    ck_margin,
    ck_secure,
    classify_state,
    eve_coherent_block_error,
    eve_incoherent_block_error_exact,
    eve_incoherent_block_error_mixture,
    eve_incoherent_error_asymptotic,
    guess_probabilities,
    mutual_info_ab,
    mutual_info_be,
)

__version__ = "0.1.0"
