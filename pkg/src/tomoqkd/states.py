"""Bell-diagonal two-qubit states and their correlation structure.

A Bell-diagonal state is a mixture of the four Bell states with weights
``p_ab``.  The first index (the amplitude bit ``a``) decides whether
matched measurements come out correlated or anti-correlated; the second
(the phase bit ``b``) fixes the relative phase.  All matched-basis
statistics reduce to three pairs of subspace weights,

    z basis:  p_a = p_a0 + p_a1
    x basis:  q_a = p_0a + p_1a
    y basis:  r_a = p_{0,a+1} + p_{1,a}      (second index mod 2)

so the correlated-outcome mass is q0, r0, p0 in the x, y, z bases.  For
protocol-grade states (p00 > 1/2) matched x/z results are mostly
correlated and matched y results mostly anti-correlated, which is why a
raw key is read from agreement in x/z and from disagreement in y.

An eavesdropper holding a purification keeps one ancilla per pair.  Once
the correlation subspace ``a`` of a matched pair is known, her two
candidate ancilla states are non-orthogonal, with inner products

    lambda^z_a = (p_a0 - p_a1) / (p_a0 + p_a1)
    lambda^x_a = (p_0a - p_1a) / (p_0a + p_1a)
    lambda^y_a = (p_{0,a+1} - p_{1,a}) / (p_{0,a+1} + p_{1,a})

Zero-weight subspaces use the convention lambda = 1: they occur with
probability zero, so everything downstream carries weight zero and the
convention is observationally irrelevant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "Basis",
    "BellDiagonalState",
    "AngleParameterization",
    "BasisMarginals",
    "OverlapSet",
    "from_probabilities",
    "from_angles",
    "to_angles",
    "werner",
    "basis_marginals",
    "correlation_probability",
    "overlaps",
    "distillable_margin",
    "is_distillable",
    "SUM_TOLERANCE",
    "CLAMP_TOLERANCE",
    "BOUNDARY_BAND",
]

# Input probability vectors must sum to 1 within this tolerance.
SUM_TOLERANCE = 1e-9
# Entries this far below zero are treated as roundoff and clamped.
CLAMP_TOLERANCE = 1e-12
# Indifference band for strict-inequality verdicts (distillability etc.).
BOUNDARY_BAND = 1e-12


class Basis(Enum):
    """Measurement basis; the integer values index lookup tables."""

    X = 0
    Y = 1
    Z = 2


@dataclass(frozen=True)
class BellDiagonalState:
    """Bell-state mixture weights, normalized and individually in [0, 1].

    ``protocol_mode`` marks states with p00 > 1/2, the only ones the key
    distribution protocol itself accepts.  Analysis-mode states (any
    point of the probability simplex) are valid inputs to every analytic
    operation.
    """

    p00: float
    p01: float
    p10: float
    p11: float

    @property
    def probs(self) -> np.ndarray:
        """Weights as an array ordered (p00, p01, p10, p11)."""
        return np.array([self.p00, self.p01, self.p10, self.p11])

    @property
    def protocol_mode(self) -> bool:
        return self.p00 > 0.5


@dataclass(frozen=True)
class AngleParameterization:
    """(p00, theta, phi) coordinates for the three remaining weights.

    p01 = (1-p00) cos^2(theta) cos^2(phi)
    p10 = (1-p00) sin^2(theta) cos^2(phi)
    p11 = (1-p00) sin^2(phi)
    """

    p00: float
    theta: float
    phi: float

    def __post_init__(self) -> None:
        if not 0.0 < self.p00 <= 1.0:
            raise ValueError(f"p00 must lie in (0, 1], got {self.p00}")
        half_pi = math.pi / 2
        if not 0.0 <= self.theta <= half_pi:
            raise ValueError(f"theta must lie in [0, pi/2], got {self.theta}")
        if not 0.0 <= self.phi <= half_pi:
            raise ValueError(f"phi must lie in [0, pi/2], got {self.phi}")


@dataclass(frozen=True)
class BasisMarginals:
    """Correlated/anti-correlated subspace weights per matched basis.

    Index 0 is the correlated subspace (same outcomes), index 1 the
    anti-correlated one.  p refers to the z basis, q to x, r to y.
    """

    p0: float
    p1: float
    q0: float
    q1: float
    r0: float
    r1: float

    def weights(self, basis: Basis) -> tuple[float, float]:
        """(correlated, anti-correlated) mass for a matched basis."""
        if basis is Basis.X:
            return self.q0, self.q1
        if basis is Basis.Y:
            return self.r0, self.r1
        return self.p0, self.p1


@dataclass(frozen=True)
class OverlapSet:
    """Ancilla inner products lambda^m_a, indexed by basis m and subspace a.

    These six numbers are the only way the eavesdropper's ancilla states
    enter any attack formula.
    """

    lambda_x: tuple[float, float]
    lambda_y: tuple[float, float]
    lambda_z: tuple[float, float]

    def table(self) -> np.ndarray:
        """(3, 2) array indexed [Basis.value, a]."""
        return np.array([self.lambda_x, self.lambda_y, self.lambda_z])


def from_probabilities(p00: float, p01: float, p10: float, p11: float) -> BellDiagonalState:
    """Build a state from four Bell weights.

    Entries slightly below zero (within CLAMP_TOLERANCE) are clamped;
    the sum must be within SUM_TOLERANCE of 1 and is renormalized
    exactly.  Raises ValueError otherwise.
    """
    raw = [p00, p01, p10, p11]
    clamped = []
    for name, value in zip(("p00", "p01", "p10", "p11"), raw):
        value = float(value)
        if not math.isfinite(value):
            raise ValueError(f"{name} is not finite: {value}")
        if value < -CLAMP_TOLERANCE:
            raise ValueError(f"{name} is negative beyond tolerance: {value}")
        clamped.append(max(value, 0.0))
    total = math.fsum(clamped)
    if abs(total - 1.0) > SUM_TOLERANCE:
        raise ValueError(f"weights must sum to 1 within {SUM_TOLERANCE}, got {total!r}")
    return BellDiagonalState(*(value / total for value in clamped))


def from_angles(param: AngleParameterization) -> BellDiagonalState:
    """State at the given (p00, theta, phi) coordinates."""
    rest = 1.0 - param.p00
    cos_phi_sq = math.cos(param.phi) ** 2
    p01 = rest * math.cos(param.theta) ** 2 * cos_phi_sq
    p10 = rest * math.sin(param.theta) ** 2 * cos_phi_sq
    p11 = rest * math.sin(param.phi) ** 2
    return from_probabilities(param.p00, p01, p10, p11)


def to_angles(state: BellDiagonalState) -> AngleParameterization:
    """Recover (p00, theta, phi); inverse of from_angles for interior points.

    When the residual weight 1 - p00 vanishes (or cos phi = 0), theta is
    not determined by the state and is reported as 0.
    """
    rest = state.p01 + state.p10 + state.p11
    if rest <= 0.0:
        return AngleParameterization(state.p00, 0.0, 0.0)
    phi = math.asin(min(1.0, math.sqrt(state.p11 / rest)))
    if state.p01 + state.p10 <= 0.0:
        theta = 0.0
    else:
        theta = math.atan2(math.sqrt(state.p10), math.sqrt(state.p01))
    return AngleParameterization(state.p00, theta, phi)


def werner(p00: float) -> BellDiagonalState:
    """Werner state: dominant weight p00, the rest split evenly."""
    rest = (1.0 - p00) / 3.0
    return from_probabilities(p00, rest, rest, rest)


def basis_marginals(state: BellDiagonalState) -> BasisMarginals:
    """Subspace weights (p_a, q_a, r_a) of the three matched bases."""
    return BasisMarginals(
        p0=state.p00 + state.p01,
        p1=state.p10 + state.p11,
        q0=state.p00 + state.p10,
        q1=state.p01 + state.p11,
        r0=state.p01 + state.p10,
        r1=state.p00 + state.p11,
    )


def correlation_probability(state: BellDiagonalState, basis: Basis) -> tuple[float, float]:
    """(correlated, anti-correlated) outcome probabilities for a matched basis."""
    return basis_marginals(state).weights(basis)


def _overlap(diff: float, weight: float) -> float:
    # zero-weight subspace: lambda = 1 by convention
    if weight <= 0.0:
        return 1.0
    return diff / weight


def overlaps(state: BellDiagonalState) -> OverlapSet:
    """The six ancilla inner products lambda^m_a."""
    m = basis_marginals(state)
    return OverlapSet(
        lambda_x=(
            _overlap(state.p00 - state.p10, m.q0),
            _overlap(state.p01 - state.p11, m.q1),
        ),
        lambda_y=(
            _overlap(state.p01 - state.p10, m.r0),
            _overlap(state.p00 - state.p11, m.r1),
        ),
        lambda_z=(
            _overlap(state.p00 - state.p01, m.p0),
            _overlap(state.p10 - state.p11, m.p1),
        ),
    )


def distillable_margin(state: BellDiagonalState) -> float:
    """max_ab p_ab - 1/2; positive exactly for distillable states."""
    return float(max(state.probs) - 0.5)


def is_distillable(state: BellDiagonalState) -> bool:
    """Entanglement distillability (negative partial transpose criterion).

    For Bell-diagonal states this reduces to max_ab p_ab > 1/2.  The
    inequality is strict; states on the boundary (within BOUNDARY_BAND)
    count as not distillable.
    """
    return distillable_margin(state) > BOUNDARY_BAND
