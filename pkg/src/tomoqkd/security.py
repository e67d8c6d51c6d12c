"""Closed-form security conditions for the tomographic protocol.

The quantities computed here:

* square-root-measurement guess probabilities
      eta^m_a = (1 + sqrt(1 - (lambda^m_a)^2)) / 2,
  the chance the eavesdropper identifies the right ancilla inside a
  correlation subspace;

* mutual informations
      I_AB = 1 - (H(p0) + H(q0) + H(r0)) / 3
      I_BE = mean over bases of  w0 (1 - H(eta_0)) + w1 (1 - H(eta_1)),
  and the one-way (CK) security condition I_AB > I_BE;

* block error rates of the two-way advantage-distillation protocol, for
  the legitimate parties and for an eavesdropper attacking per-pair
  (incoherent, exact binomial vote plus its large-block form) or with a
  joint measurement on all ancillas of a block (coherent);

* the two AD security conditions, evaluated in cross-multiplied form so
  zero denominators never divide:

      incoherent:  p1 q1 r0 < p0 q0 r1 * 8 sqrt(prod eta (1 - eta))
      coherent:    p1 q1 r0 < p0 q0 r1 * (lambda^x_0 lambda^y_1 lambda^z_0)^2

All inequality verdicts are strict, with a 1e-12 indifference band
reported as a boundary flag instead of a verdict.

The AD conditions are written for states whose dominant Bell weight sits
in the p00 slot (every protocol-mode state).  For analysis-mode states
with a different dominant component, the conditions are evaluated after
relabeling the weights so the dominant one plays the p00 role: the four
relabelings are local Pauli rotations that map the protocol onto itself,
permuting basis roles and correlation conventions accordingly.  Mutual
informations and distillability are invariant under these relabelings,
so only the AD margins need the canonical frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import entr

from .states import (
    BOUNDARY_BAND,
    BellDiagonalState,
    basis_marginals,
    distillable_margin,
    is_distillable,
    overlaps,
)

__all__ = [
    "BlockCase",
    "BlockErrorInputs",
    "GuessProbabilities",
    "SecurityReport",
    "binary_entropy",
    "guess_probabilities",
    "mutual_info_ab",
    "mutual_info_be",
    "ck_margin",
    "ck_secure",
    "ad_incoherent_margin",
    "ad_incoherent_secure",
    "ad_coherent_margin",
    "ad_coherent_secure",
    "alice_bob_block_error",
    "alice_bob_block_error_asymptotic",
    "block_case_weights",
    "eve_incoherent_block_error_exact",
    "eve_incoherent_block_error_mixture",
    "eve_incoherent_error_asymptotic",
    "eve_coherent_block_error",
    "classify_state",
    "margin_arrays",
    "MAX_EXACT_BLOCK_LENGTH",
]

_LN2 = math.log(2.0)

# The exact vote sum enumerates (L/3)^3-ish error patterns; beyond this the
# asymptotic form is the supported route.
MAX_EXACT_BLOCK_LENGTH = 60


class BlockCase(Enum):
    """Accepted-block case: distilled bits equal (I) or complementary (II)."""

    I = 0
    II = 1


def binary_entropy(eta: float) -> float:
    """Binary entropy in bits, with H(0) = H(1) = 0 by continuity."""
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"binary_entropy argument must lie in [0, 1], got {eta}")
    return float((entr(eta) + entr(1.0 - eta)) / _LN2)


def _entropy(x: np.ndarray) -> np.ndarray:
    # elementwise binary entropy, no domain checks
    return (entr(x) + entr(1.0 - x)) / _LN2


def _eta(lam: np.ndarray) -> np.ndarray:
    # clamp: roundoff can push 1 - lambda^2 slightly below zero
    return 0.5 * (1.0 + np.sqrt(np.clip(1.0 - lam * lam, 0.0, None)))


def _lambda(diff: np.ndarray, weight: np.ndarray) -> np.ndarray:
    # zero-weight subspace: lambda = 1 by convention
    out = np.ones_like(diff)
    np.divide(diff, weight, out=out, where=weight > 0)
    return out


@dataclass(frozen=True)
class GuessProbabilities:
    """Square-root-measurement success probabilities eta^m_a in [1/2, 1]."""

    eta_x: tuple[float, float]
    eta_y: tuple[float, float]
    eta_z: tuple[float, float]

    def table(self) -> np.ndarray:
        """(3, 2) array indexed [Basis.value, a]."""
        return np.array([self.eta_x, self.eta_y, self.eta_z])


def guess_probabilities(state: BellDiagonalState) -> GuessProbabilities:
    """Eve's per-pair guessing probabilities from the ancilla overlaps."""
    lam = overlaps(state)
    ex = _eta(np.array(lam.lambda_x))
    ey = _eta(np.array(lam.lambda_y))
    ez = _eta(np.array(lam.lambda_z))
    return GuessProbabilities(
        eta_x=(float(ex[0]), float(ex[1])),
        eta_y=(float(ey[0]), float(ey[1])),
        eta_z=(float(ez[0]), float(ez[1])),
    )


def mutual_info_ab(state: BellDiagonalState) -> float:
    """Mutual information (bits) between the legitimate parties' raw bits."""
    m = basis_marginals(state)
    return float(1.0 - (_entropy(np.array([m.p0, m.q0, m.r0]))).sum() / 3.0)


def mutual_info_be(state: BellDiagonalState) -> tuple[float, tuple[float, float, float]]:
    """Eve's mutual information with Bob: (average, per basis (x, y, z))."""
    m = basis_marginals(state)
    gp = guess_probabilities(state)
    per_basis = []
    for (w0, w1), (e0, e1) in (
        ((m.q0, m.q1), gp.eta_x),
        ((m.r0, m.r1), gp.eta_y),
        ((m.p0, m.p1), gp.eta_z),
    ):
        per_basis.append(w0 * (1.0 - binary_entropy(e0)) + w1 * (1.0 - binary_entropy(e1)))
    i_x, i_y, i_z = per_basis
    return float((i_x + i_y + i_z) / 3.0), (float(i_x), float(i_y), float(i_z))


def ck_margin(state: BellDiagonalState) -> float:
    """I_AB - I_BE; positive when one-way key distillation is possible."""
    return mutual_info_ab(state) - mutual_info_be(state)[0]


def ck_secure(state: BellDiagonalState) -> bool:
    return ck_margin(state) > BOUNDARY_BAND


def _canonical_probs(state: BellDiagonalState) -> tuple[float, float, float, float]:
    """Weights relabeled so the dominant Bell component sits in slot 00.

    The relabeling XORs the (a, b) index by the argmax index, a local
    Pauli symmetry of the protocol.  It is the identity for every
    protocol-mode state.
    """
    p = (state.p00, state.p01, state.p10, state.p11)
    k = max(range(4), key=p.__getitem__)
    return p[k], p[k ^ 1], p[k ^ 2], p[k ^ 3]


def _ad_margins(p00, p01, p10, p11):
    """(incoherent, coherent) cross-multiplied AD margins, elementwise."""
    p0 = p00 + p01
    p1 = p10 + p11
    q0 = p00 + p10
    q1 = p01 + p11
    r0 = p01 + p10
    r1 = p00 + p11
    lx0 = _lambda(p00 - p10, q0)
    ly1 = _lambda(p00 - p11, r1)
    lz0 = _lambda(p00 - p01, p0)
    ex0, ey1, ez0 = _eta(lx0), _eta(ly1), _eta(lz0)
    lhs = p1 * q1 * r0
    base = p0 * q0 * r1
    rhs_incoherent = base * 8.0 * np.sqrt(
        ex0 * ey1 * ez0 * (1.0 - ex0) * (1.0 - ey1) * (1.0 - ez0)
    )
    rhs_coherent = base * (lx0 * ly1 * lz0) ** 2
    return rhs_incoherent - lhs, rhs_coherent - lhs


def ad_incoherent_margin(state: BellDiagonalState) -> float:
    """RHS - LHS of the incoherent AD condition in the canonical frame."""
    inc, _ = _ad_margins(*_canonical_probs(state))
    return float(inc)


def ad_incoherent_secure(state: BellDiagonalState) -> bool:
    """Does two-way advantage distillation beat per-pair eavesdropping?"""
    return ad_incoherent_margin(state) > BOUNDARY_BAND


def ad_coherent_margin(state: BellDiagonalState) -> float:
    """RHS - LHS of the coherent AD condition in the canonical frame."""
    _, coh = _ad_margins(*_canonical_probs(state))
    return float(coh)


def ad_coherent_secure(state: BellDiagonalState) -> bool:
    """Does advantage distillation survive joint-block eavesdropping?"""
    return ad_coherent_margin(state) > BOUNDARY_BAND


@dataclass(frozen=True)
class BlockErrorInputs:
    """Per-basis position counts of one block, plus its accepted-block case."""

    n_x: int
    n_y: int
    n_z: int
    block_case: BlockCase = BlockCase.I

    def __post_init__(self) -> None:
        for name in ("n_x", "n_y", "n_z"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.length < 1:
            raise ValueError("block length must be at least 1")

    @property
    def length(self) -> int:
        return self.n_x + self.n_y + self.n_z

    @classmethod
    def balanced(cls, length: int, block_case: BlockCase = BlockCase.I) -> "BlockErrorInputs":
        if length % 3 != 0:
            raise ValueError(f"balanced counts need a block length divisible by 3, got {length}")
        n = length // 3
        return cls(n, n, n, block_case)


def _acceptance_terms(inputs: BlockErrorInputs, state: BellDiagonalState) -> tuple[float, float]:
    """(case I, case II) unnormalized acceptance weights of a block."""
    m = basis_marginals(state)
    w_same = m.p0**inputs.n_z * m.q0**inputs.n_x * m.r1**inputs.n_y
    w_diff = m.p1**inputs.n_z * m.q1**inputs.n_x * m.r0**inputs.n_y
    return w_same, w_diff


def alice_bob_block_error(inputs: BlockErrorInputs, state: BellDiagonalState) -> float:
    """Exact probability that an accepted block distills opposite bits."""
    w_same, w_diff = _acceptance_terms(inputs, state)
    total = w_same + w_diff
    if total <= 0.0:
        raise ValueError("degenerate state: block acceptance probability vanishes")
    return w_diff / total


def alice_bob_block_error_asymptotic(state: BellDiagonalState, length: int) -> float:
    """Large-block form ((p1 q1 r0) / (p0 q0 r1))^(L/3) with balanced counts."""
    m = basis_marginals(state)
    denom = m.p0 * m.q0 * m.r1
    if denom <= 0.0:
        raise ValueError("asymptotic form needs p0, q0, r1 all positive")
    return (m.p1 * m.q1 * m.r0 / denom) ** (length / 3.0)


def block_case_weights(inputs: BlockErrorInputs, state: BellDiagonalState) -> tuple[float, float]:
    """(P(case I), P(case II)) conditioned on the block being accepted."""
    w_same, w_diff = _acceptance_terms(inputs, state)
    total = w_same + w_diff
    if total <= 0.0:
        raise ValueError("degenerate state: block acceptance probability vanishes")
    return w_same / total, w_diff / total


def _case_etas(state: BellDiagonalState, block_case: BlockCase) -> tuple[float, float, float]:
    """Eve's per-position success probabilities (x, y, z) for a block case.

    In a case-I block the raw keys agree, so x/z pairs sit in the
    correlated subspace and y pairs in the anti-correlated one; case II
    swaps every subspace index.
    """
    gp = guess_probabilities(state)
    if block_case is BlockCase.I:
        return gp.eta_x[0], gp.eta_y[1], gp.eta_z[0]
    return gp.eta_x[1], gp.eta_y[0], gp.eta_z[1]


def eve_incoherent_block_error_exact(inputs: BlockErrorInputs, state: BellDiagonalState) -> float:
    """Exact majority-vote error rate of a per-pair attack on one block.

    Sums binomial weights over error counts (e_x, e_y, e_z); patterns
    with more than half the positions wrong always flip the vote, exact
    ties (possible only for even L) are lost half the time.  Summation
    is lexicographic with compensated accumulation, so results are
    bit-stable regardless of any internal parallel schedule.
    """
    length = inputs.length
    if length > MAX_EXACT_BLOCK_LENGTH:
        raise ValueError(
            f"exact vote sum supports L <= {MAX_EXACT_BLOCK_LENGTH}, got {length}"
        )
    eta_x, eta_y, eta_z = _case_etas(state, inputs.block_case)
    pmfs = []
    for n, eta in ((inputs.n_x, eta_x), (inputs.n_y, eta_y), (inputs.n_z, eta_z)):
        err = 1.0 - eta
        pmfs.append([math.comb(n, e) * err**e * eta ** (n - e) for e in range(n + 1)])
    terms = []
    for e_x, w_x in enumerate(pmfs[0]):
        for e_y, w_y in enumerate(pmfs[1]):
            for e_z, w_z in enumerate(pmfs[2]):
                doubled = 2 * (e_x + e_y + e_z)
                if doubled > length:
                    terms.append(w_x * w_y * w_z)
                elif doubled == length:
                    terms.append(0.5 * w_x * w_y * w_z)
    return min(1.0, math.fsum(terms))


def eve_incoherent_block_error_mixture(
    inputs: BlockErrorInputs, state: BellDiagonalState
) -> float:
    """Eve's incoherent error averaged over the two accepted-block cases."""
    w_same, w_diff = block_case_weights(inputs, state)
    err_same = eve_incoherent_block_error_exact(
        BlockErrorInputs(inputs.n_x, inputs.n_y, inputs.n_z, BlockCase.I), state
    )
    err_diff = eve_incoherent_block_error_exact(
        BlockErrorInputs(inputs.n_x, inputs.n_y, inputs.n_z, BlockCase.II), state
    )
    return w_same * err_same + w_diff * err_diff


def eve_incoherent_error_asymptotic(
    state: BellDiagonalState, length: int
) -> tuple[float, bool]:
    """Stirling form 2^L (prod eta (1-eta))^(L/6) of the case-I vote error.

    Returns (value, capped).  The raw form can exceed 1/2 at small L; a
    vote error above fair-coin is non-physical, so the value is capped
    at 1/2 and flagged.  The exact sum is the authoritative route.
    """
    if length % 3 != 0:
        raise ValueError(f"block length must be a multiple of 3, got {length}")
    eta_x, eta_y, eta_z = _case_etas(state, BlockCase.I)
    product = (
        eta_x * (1.0 - eta_x) * eta_y * (1.0 - eta_y) * eta_z * (1.0 - eta_z)
    )
    if product <= 0.0:
        return 0.0, False
    value = 2.0 ** (length + (length / 6.0) * math.log2(product))
    if value > 0.5:
        return 0.5, True
    return value, False


def eve_coherent_block_error(inputs: BlockErrorInputs, state: BellDiagonalState) -> float:
    """Error rate of a joint square-root measurement on all block ancillas.

    The two candidate L-ancilla states have inner product
    Lambda = lambda_x^(n_x) lambda_y^(n_y) lambda_z^(n_z) with subspace
    indices (0, 1, 0) for case I and (1, 0, 1) for case II.
    """
    lam = overlaps(state)
    if inputs.block_case is BlockCase.I:
        lx, ly, lz = lam.lambda_x[0], lam.lambda_y[1], lam.lambda_z[0]
    else:
        lx, ly, lz = lam.lambda_x[1], lam.lambda_y[0], lam.lambda_z[1]
    big_lambda = lx**inputs.n_x * ly**inputs.n_y * lz**inputs.n_z
    return 0.5 * (1.0 - math.sqrt(max(0.0, 1.0 - big_lambda**2)))


@dataclass(frozen=True)
class SecurityReport:
    """Every per-state verdict, with the margin behind each inequality.

    Margins are positive on the secure (or distillable) side; verdicts
    are strict, and a margin inside the indifference band appears in
    ``boundary_flags`` instead of deciding anything.
    """

    i_ab: float
    i_be: float
    i_be_per_basis: tuple[float, float, float]
    ck_secure: bool
    ad_incoherent_secure: bool
    ad_coherent_secure: bool
    distillable: bool
    protocol_mode: bool
    margins: dict[str, float]
    boundary_flags: frozenset[str]

    def to_dict(self) -> dict:
        """Flat JSON-ready mapping with stable field names."""
        return {
            "i_ab": self.i_ab,
            "i_be": self.i_be,
            "i_be_x": self.i_be_per_basis[0],
            "i_be_y": self.i_be_per_basis[1],
            "i_be_z": self.i_be_per_basis[2],
            "ck_secure": self.ck_secure,
            "ck_margin": self.margins["ck"],
            "ad_incoherent_secure": self.ad_incoherent_secure,
            "ad_incoherent_margin": self.margins["ad_incoherent"],
            "ad_coherent_secure": self.ad_coherent_secure,
            "ad_coherent_margin": self.margins["ad_coherent"],
            "distillable": self.distillable,
            "distillable_margin": self.margins["distillable"],
            "protocol_mode": self.protocol_mode,
            "boundary_flags": sorted(self.boundary_flags),
        }


def classify_state(state: BellDiagonalState, band: float = BOUNDARY_BAND) -> SecurityReport:
    """Evaluate every security condition for one state."""
    i_ab = mutual_info_ab(state)
    i_be, per_basis = mutual_info_be(state)
    margins = {
        "ck": i_ab - i_be,
        "ad_incoherent": ad_incoherent_margin(state),
        "ad_coherent": ad_coherent_margin(state),
        "distillable": distillable_margin(state),
    }
    flags = frozenset(name for name, value in margins.items() if abs(value) <= band)
    return SecurityReport(
        i_ab=i_ab,
        i_be=i_be,
        i_be_per_basis=per_basis,
        ck_secure=margins["ck"] > band,
        ad_incoherent_secure=margins["ad_incoherent"] > band,
        ad_coherent_secure=margins["ad_coherent"] > band,
        distillable=margins["distillable"] > band,
        protocol_mode=state.protocol_mode,
        margins=margins,
        boundary_flags=flags,
    )


def margin_arrays(p00, p01, p10, p11) -> dict[str, np.ndarray]:
    """All security margins, elementwise over broadcastable weight arrays.

    Used by the region scanner; agrees with classify_state cell for
    cell.  AD margins are computed in the canonical (dominant-weight)
    frame, which is the identity wherever p00 is the largest weight.
    """
    p00, p01, p10, p11 = np.broadcast_arrays(
        *(np.asarray(x, dtype=float) for x in (p00, p01, p10, p11))
    )
    stacked = np.stack([p00, p01, p10, p11])
    p0 = p00 + p01
    p1 = p10 + p11
    q0 = p00 + p10
    q1 = p01 + p11
    r0 = p01 + p10
    r1 = p00 + p11

    i_ab = 1.0 - (_entropy(p0) + _entropy(q0) + _entropy(r0)) / 3.0
    i_be = np.zeros_like(p0)
    for w0, w1, l0, l1 in (
        (q0, q1, _lambda(p00 - p10, q0), _lambda(p01 - p11, q1)),
        (r0, r1, _lambda(p01 - p10, r0), _lambda(p00 - p11, r1)),
        (p0, p1, _lambda(p00 - p01, p0), _lambda(p10 - p11, p1)),
    ):
        i_be = i_be + w0 * (1.0 - _entropy(_eta(l0))) + w1 * (1.0 - _entropy(_eta(l1)))
    i_be = i_be / 3.0

    # canonical frame: XOR-relabel so the largest weight lands in slot 00
    k = np.argmax(stacked, axis=0)
    canon = [np.take_along_axis(stacked, (k ^ j)[None, ...], axis=0)[0] for j in range(4)]
    ad_incoherent, ad_coherent = _ad_margins(*canon)

    return {
        "i_ab": i_ab,
        "i_be": i_be,
        "ck": i_ab - i_be,
        "ad_incoherent": ad_incoherent,
        "ad_coherent": ad_coherent,
        "distillable": stacked.max(axis=0) - 0.5,
    }
