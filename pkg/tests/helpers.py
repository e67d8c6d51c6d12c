"""Shared samplers and independent reference implementations for the tests."""

from itertools import product

import numpy as np

from tomoqkd.states import BellDiagonalState, from_probabilities


def random_weights(rng: np.random.Generator, n: int, exclude_band: float = 0.0) -> np.ndarray:
    """(n, 4) uniform simplex samples; optionally resample anything whose
    largest weight falls within ``exclude_band`` of the 1/2 boundary."""
    probs = rng.dirichlet((1.0, 1.0, 1.0, 1.0), size=n)
    if exclude_band > 0.0:
        while True:
            bad = np.abs(probs.max(axis=1) - 0.5) <= exclude_band
            if not bad.any():
                break
            probs[bad] = rng.dirichlet((1.0, 1.0, 1.0, 1.0), size=int(bad.sum()))
    return probs


def random_states(rng: np.random.Generator, n: int, exclude_band: float = 0.0):
    return [from_probabilities(*row) for row in random_weights(rng, n, exclude_band)]


def brute_force_vote_error(success_probs) -> float:
    """Reference majority-vote error by explicit enumeration.

    Walks all 2^L wrong/right patterns for per-position success
    probabilities; a pattern loses the vote when more than half the
    positions are wrong, and half the time on an exact tie.  Independent
    of any binomial-coefficient algebra, so it can vouch for the closed
    sum (practical up to L about 16).
    """
    length = len(success_probs)
    total = 0.0
    for wrong in product((0, 1), repeat=length):
        weight = 1.0
        for w, eta in zip(wrong, success_probs):
            weight *= (1.0 - eta) if w else eta
        k = sum(wrong)
        if 2 * k > length:
            total += weight
        elif 2 * k == length:
            total += 0.5 * weight
    return total
