"""Monte Carlo realization of the full protocol.

Source sampling, sifting, tomography, advantage distillation and both
eavesdropping strategies, used as the empirical oracle for the closed
forms in :mod:`tomoqkd.security`.

Randomness is fully reproducible: every stream is a Philox generator
keyed by (seed, stream id, chunk index), so identical configurations
produce bit-identical sessions and chunked generation is independent of
any worker schedule.  Pair outcomes are drawn from the density-matrix
oracle's joint outcome tables, not from the analytic marginals, which
keeps the simulation an independent check on them.

Eve is simulated at the distributional level: her square-root
measurement on a sorted ancilla succeeds with probability eta^m_a, and
that Bernoulli draw (or, for the coherent attack, the per-block biased
coin with the joint-measurement error probability) is the only
observable her apparatus has.  She is granted exact knowledge of the
correlation subspace of every matched pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import chi2

from . import oracle
from .security import (
    BlockCase,
    BlockErrorInputs,
    alice_bob_block_error,
    block_case_weights,
    eve_coherent_block_error,
    eve_incoherent_block_error_exact,
    guess_probabilities,
)
from .states import Basis, BellDiagonalState, basis_marginals, overlaps

__all__ = [
    "SimConfig",
    "SessionRecord",
    "SiftedKey",
    "TomographyEstimate",
    "ADOutcome",
    "EveStats",
    "sample_session",
    "sift",
    "reconstruct_tomography",
    "tomography_from_counts",
    "run_advantage_distillation",
    "simulate_eve_incoherent",
    "simulate_eve_coherent",
    "estimate_error_rates",
    "wilson_interval",
    "run_protocol",
    "ProtocolRun",
]

_CHUNK = 1 << 18

# stream ids for the independent generators of one run
_STREAM_PAIRS = 0
_STREAM_AD = 1
_STREAM_EVE_INCOHERENT = 2
_STREAM_EVE_COHERENT = 3


def _rng(seed: int, stream: int, chunk: int = 0) -> np.random.Generator:
    """Counter-style generator for (seed, stream, chunk)."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((seed, stream, chunk))))


@dataclass(frozen=True)
class SimConfig:
    """One protocol run: state, session size, AD block length, seed, policy.

    ``paper_faithful`` forces balanced per-block basis counts: it
    requires the round-robin basis policy (matched pairs then cycle
    x, y, z) and a block length divisible by 3.
    """

    state: BellDiagonalState
    n_pairs: int
    block_length: int
    rng_seed: int
    basis_policy: str = "uniform-random"
    paper_faithful: bool = False

    def __post_init__(self) -> None:
        if self.block_length < 1:
            raise ValueError("block_length must be at least 1")
        if self.n_pairs < self.block_length:
            raise ValueError(
                f"n_pairs ({self.n_pairs}) must be at least block_length ({self.block_length})"
            )
        if not 0 <= self.rng_seed < 2**64:
            raise ValueError("rng_seed must fit in 64 unsigned bits")
        if self.basis_policy not in ("uniform-random", "round-robin"):
            raise ValueError(f"unknown basis_policy {self.basis_policy!r}")
        if self.paper_faithful:
            if self.block_length % 3 != 0:
                raise ValueError("paper-faithful mode needs a block length divisible by 3")
            if self.basis_policy != "round-robin":
                raise ValueError("paper-faithful mode needs the round-robin basis policy")


@dataclass(frozen=True)
class SessionRecord:
    """Columnar per-pair measurement data for one session.

    ``eve_subspace`` is the correlation subspace index a = bitA xor bitB
    revealed to Eve by her sorting projection (meaningful for matched
    pairs, where it indexes her ancilla ensemble).
    """

    basis_a: np.ndarray
    basis_b: np.ndarray
    bit_a: np.ndarray
    bit_b: np.ndarray
    matched: np.ndarray
    eve_subspace: np.ndarray

    def __len__(self) -> int:
        return len(self.basis_a)


@dataclass(frozen=True)
class SiftedKey:
    """Matched pairs only; key bits carry the public y-flip convention.

    Bob complements his y-basis outcomes before they enter the raw key,
    so per-position agreement probability is (q0, r1, p0) in (x, y, z).
    """

    basis: np.ndarray
    key_a: np.ndarray
    key_b: np.ndarray
    subspace: np.ndarray

    def __len__(self) -> int:
        return len(self.basis)


def _joint_cumulative(state: BellDiagonalState) -> np.ndarray:
    """(9, 4) cumulative outcome tables, row index 3 * basisA + basisB."""
    cum = np.empty((9, 4))
    for a in Basis:
        for b in Basis:
            probs = oracle.joint_outcome_probs(state, a, b).reshape(4)
            cum[3 * a.value + b.value] = np.cumsum(probs / probs.sum())
    cum[:, -1] = 1.0  # guard: cumsum roundoff must not strand a draw past the table
    return cum


def _sample_chunk(
    cum: np.ndarray, policy: str, seed: int, chunk_index: int, offset: int, size: int
) -> SessionRecord:
    rng = _rng(seed, _STREAM_PAIRS, chunk_index)
    if policy == "uniform-random":
        basis_a = rng.integers(0, 3, size=size, dtype=np.uint8)
        basis_b = rng.integers(0, 3, size=size, dtype=np.uint8)
        combo = basis_a.astype(np.intp) * 3 + basis_b
    else:  # round-robin over the 9 ordered basis pairs
        combo = (offset + np.arange(size, dtype=np.intp)) % 9
        basis_a = (combo // 3).astype(np.uint8)
        basis_b = (combo % 3).astype(np.uint8)
    u = rng.random(size)
    cell = (u[:, None] > cum[combo]).sum(axis=1).astype(np.uint8)
    bit_a = cell >> 1
    bit_b = cell & 1
    matched = basis_a == basis_b
    return SessionRecord(basis_a, basis_b, bit_a, bit_b, matched, bit_a ^ bit_b)


def _iter_chunks(config: SimConfig):
    cum = _joint_cumulative(config.state)
    offset = 0
    index = 0
    while offset < config.n_pairs:
        size = min(_CHUNK, config.n_pairs - offset)
        yield _sample_chunk(cum, config.basis_policy, config.rng_seed, index, offset, size)
        offset += size
        index += 1


def sample_session(config: SimConfig) -> SessionRecord:
    """Draw the full per-pair record stream for a configuration."""
    chunks = list(_iter_chunks(config))
    if len(chunks) == 1:
        return chunks[0]
    return SessionRecord(
        *(np.concatenate([getattr(c, name) for c in chunks])
          for name in ("basis_a", "basis_b", "bit_a", "bit_b", "matched", "eve_subspace"))
    )


def sift(session: SessionRecord) -> SiftedKey:
    """Keep matched pairs and apply the y-basis complement to Bob's bits."""
    mask = session.matched
    basis = session.basis_a[mask]
    key_a = session.bit_a[mask]
    key_b = session.bit_b[mask] ^ (basis == Basis.Y.value)
    return SiftedKey(basis, key_a, key_b.astype(np.uint8), session.eve_subspace[mask])


@dataclass(frozen=True)
class TomographyEstimate:
    """Linear-inversion estimate of the four Bell weights.

    The three matched-basis agreement frequencies determine the weights:
        p00 = (p0 + q0 + r1 - 1) / 2,   p01 = p0 - p00,
        p10 = q0 - p00,                 p11 = r1 - p00.
    The three frequencies are independent binomials, so all four weights
    share one propagated standard error.  The six mismatched-basis cells
    carry no signal for a Bell-diagonal state; their chi-square against
    uniformity is reported as a diagnostic.
    """

    p_hat: np.ndarray
    std_err: np.ndarray
    counts: np.ndarray  # (3, 3, 4) by (basisA, basisB, 2*bitA+bitB)
    n_matched: np.ndarray  # matched-pair counts per basis (x, y, z)
    uniformity_stat: float
    uniformity_threshold: float
    bell_diagonal_ok: bool
    projected: bool


def _project_to_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection of a unit-sum vector onto the simplex."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u)
    rho = np.nonzero(u + (1.0 - css) / np.arange(1, len(v) + 1) > 0)[0][-1]
    tau = (1.0 - css[rho]) / (rho + 1)
    return np.clip(v + tau, 0.0, None)


def tomography_from_counts(counts: np.ndarray) -> TomographyEstimate:
    """Reconstruct the state from a (3, 3, 4) outcome-count table.

    Counts may be real-valued (e.g. exact expected counts); every
    matched basis must carry positive weight.
    """
    counts = np.asarray(counts, dtype=float)
    if counts.shape != (3, 3, 4):
        raise ValueError(f"counts must have shape (3, 3, 4), got {counts.shape}")
    x, y, z = Basis.X.value, Basis.Y.value, Basis.Z.value
    n_matched = np.array([counts[b, b].sum() for b in (x, y, z)])
    if np.any(n_matched <= 0):
        raise ValueError("every matched basis needs at least one pair")

    def same_fraction(b: int) -> float:
        c = counts[b, b]
        return (c[0] + c[3]) / c.sum()

    q0_hat = same_fraction(x)
    r1_hat = 1.0 - same_fraction(y)
    p0_hat = same_fraction(z)
    p00 = (p0_hat + q0_hat + r1_hat - 1.0) / 2.0
    p_hat = np.array([p00, p0_hat - p00, q0_hat - p00, r1_hat - p00])

    variances = [
        f * (1.0 - f) / n
        for f, n in zip((q0_hat, r1_hat, p0_hat), n_matched)
    ]
    shared_err = 0.5 * math.sqrt(sum(variances))
    std_err = np.full(4, shared_err)

    projected = bool(np.any(p_hat < 0.0))
    if projected:
        p_hat = _project_to_simplex(p_hat)

    stat = 0.0
    dof = 0
    for a in range(3):
        for b in range(3):
            if a == b:
                continue
            cell = counts[a, b]
            total = cell.sum()
            if total <= 0:
                continue
            expected = total / 4.0
            stat += float(((cell - expected) ** 2 / expected).sum())
            dof += 3
    threshold = float(chi2.ppf(0.99, dof)) if dof else math.inf
    return TomographyEstimate(
        p_hat=p_hat,
        std_err=std_err,
        counts=counts,
        n_matched=n_matched,
        uniformity_stat=stat,
        uniformity_threshold=threshold,
        bell_diagonal_ok=stat <= threshold,
        projected=projected,
    )


def _session_counts(session: SessionRecord) -> np.ndarray:
    index = (
        (session.basis_a.astype(np.intp) * 3 + session.basis_b) * 4
        + session.bit_a.astype(np.intp) * 2
        + session.bit_b
    )
    return np.bincount(index, minlength=36).reshape(3, 3, 4).astype(float)


def reconstruct_tomography(session: SessionRecord) -> TomographyEstimate:
    """Tomographic reconstruction from a session's raw records."""
    return tomography_from_counts(_session_counts(session))


@dataclass(frozen=True)
class ADOutcome:
    """Result of advantage distillation over one sifted key.

    Accepted-block arrays are aligned: ``alice_bits[i]`` and
    ``bob_bits[i]`` are the distilled bits of accepted block i, whose
    per-basis position counts sit in ``counts[i]`` (x, y, z order) and
    whose case (0 = distilled bits equal, 1 = complementary) in
    ``case[i]``.  ``accepted_rows`` indexes into the block grid of the
    trimmed key; ``order``, when set, is the key permutation applied
    before blocking (the optional seeded shuffle).
    """

    block_length: int
    blocks_total: int
    blocks_accepted: int
    accepted_rows: np.ndarray
    alice_bits: np.ndarray
    bob_bits: np.ndarray
    case: np.ndarray
    counts: np.ndarray
    e_ab: float
    order: np.ndarray | None = None

    @property
    def acceptance_rate(self) -> float:
        return self.blocks_accepted / self.blocks_total if self.blocks_total else 0.0


def run_advantage_distillation(
    key_a: np.ndarray,
    key_b: np.ndarray,
    basis: np.ndarray,
    block_length: int,
    rng: np.random.Generator,
    shuffle: bool = False,
) -> ADOutcome:
    """Block the raw keys, run the XOR-broadcast homogeneity protocol.

    Blocks are formed in arrival order (or, with ``shuffle``, in a
    seeded random order both parties agree on publicly); the trailing
    partial block is dropped.  Per block, Alice broadcasts her block XOR
    a fresh random bit; Bob subtracts his block and accepts iff the
    residue is homogeneous, recording the common value while Alice
    records her random bit.
    """
    if len(key_a) != len(key_b) or len(key_a) != len(basis):
        raise ValueError("key and basis arrays must have equal length")
    order = None
    if shuffle:
        order = rng.permutation(len(key_a))
        key_a = key_a[order]
        key_b = key_b[order]
        basis = basis[order]
    n_blocks = len(key_a) // block_length
    if n_blocks == 0:
        raise ValueError("not enough key bits for a single block")
    trim = n_blocks * block_length
    blocks_a = key_a[:trim].reshape(n_blocks, block_length)
    blocks_b = key_b[:trim].reshape(n_blocks, block_length)
    blocks_basis = basis[:trim].reshape(n_blocks, block_length)

    secret = rng.integers(0, 2, size=n_blocks, dtype=np.uint8)
    residue = blocks_a ^ blocks_b ^ secret[:, None]
    accepted = (residue == residue[:, :1]).all(axis=1)
    rows = np.nonzero(accepted)[0]

    bob_bits = residue[rows, 0]
    alice_bits = secret[rows]
    case = (alice_bits ^ bob_bits).astype(np.uint8)
    counts = np.stack(
        [(blocks_basis[rows] == code).sum(axis=1) for code in range(3)], axis=1
    )
    e_ab = float(case.mean()) if len(rows) else math.nan
    return ADOutcome(
        block_length=block_length,
        blocks_total=n_blocks,
        blocks_accepted=len(rows),
        accepted_rows=rows,
        alice_bits=alice_bits,
        bob_bits=bob_bits,
        case=case,
        counts=counts,
        e_ab=e_ab,
        order=order,
    )


@dataclass(frozen=True)
class EveStats:
    """Empirical error statistics of one eavesdropping strategy."""

    n_blocks: int
    errors: int
    e_be: float
    errors_by_case: tuple[int, int]
    blocks_by_case: tuple[int, int]
    guess_accuracy_by_basis: tuple[float, float, float] | None = None


def _accepted_positions(sifted: SiftedKey, outcome: ADOutcome):
    trim = outcome.blocks_total * outcome.block_length
    shape = (outcome.blocks_total, outcome.block_length)
    rows = outcome.accepted_rows
    columns = []
    for name in ("basis", "subspace", "key_a", "key_b"):
        column = getattr(sifted, name)
        if outcome.order is not None:
            column = column[outcome.order]
        columns.append(column[:trim].reshape(shape)[rows])
    return tuple(columns)


def simulate_eve_incoherent(
    sifted: SiftedKey,
    outcome: ADOutcome,
    state: BellDiagonalState,
    rng: np.random.Generator,
) -> EveStats:
    """Per-pair square-root measurements plus majority voting.

    For each position of an accepted block Eve guesses Bob's raw key
    bit, correctly with probability eta^m_a for the realized basis m and
    subspace a.  She XORs her guessed block with Alice's broadcast and
    majority-votes the residue; ties fall to a fair coin.
    """
    basis, subspace, key_a, key_b = _accepted_positions(sifted, outcome)
    if len(basis) == 0:
        raise ValueError("no accepted blocks to attack")
    eta_table = guess_probabilities(state).table()
    success = eta_table[basis.astype(np.intp), subspace.astype(np.intp)]
    wrong = (rng.random(basis.shape) >= success).astype(np.uint8)
    guesses = key_b ^ wrong

    broadcast = key_a ^ outcome.alice_bits[:, None]
    eve_residue = guesses ^ broadcast
    ones = eve_residue.sum(axis=1)
    length = outcome.block_length
    votes = np.where(2 * ones > length, 1, 0).astype(np.uint8)
    ties = 2 * ones == length
    if ties.any():
        votes[ties] = rng.integers(0, 2, size=int(ties.sum()), dtype=np.uint8)

    errors_mask = votes != outcome.bob_bits
    errors = int(errors_mask.sum())
    by_case_errors = tuple(int(errors_mask[outcome.case == c].sum()) for c in (0, 1))
    by_case_blocks = tuple(int((outcome.case == c).sum()) for c in (0, 1))
    accuracy = tuple(
        float(1.0 - wrong[basis == code].mean()) if (basis == code).any() else math.nan
        for code in range(3)
    )
    return EveStats(
        n_blocks=len(votes),
        errors=errors,
        e_be=errors / len(votes),
        errors_by_case=by_case_errors,
        blocks_by_case=by_case_blocks,
        guess_accuracy_by_basis=accuracy,
    )


def simulate_eve_coherent(
    sifted: SiftedKey,
    outcome: ADOutcome,
    state: BellDiagonalState,
    rng: np.random.Generator,
) -> EveStats:
    """Joint measurement per accepted block.

    The block's realized basis counts and case fix the inner product of
    the two candidate L-ancilla states; Eve's distilled-bit guess is
    wrong with the corresponding square-root-measurement probability.
    """
    if outcome.blocks_accepted == 0:
        raise ValueError("no accepted blocks to attack")
    lam = overlaps(state)
    lam_case = np.array(
        [
            [lam.lambda_x[0], lam.lambda_y[1], lam.lambda_z[0]],
            [lam.lambda_x[1], lam.lambda_y[0], lam.lambda_z[1]],
        ]
    )
    big_lambda = np.prod(
        lam_case[outcome.case.astype(np.intp)] ** outcome.counts, axis=1
    )
    p_err = 0.5 * (1.0 - np.sqrt(np.clip(1.0 - big_lambda**2, 0.0, None)))
    errors_mask = rng.random(len(p_err)) < p_err
    errors = int(errors_mask.sum())
    by_case_errors = tuple(int(errors_mask[outcome.case == c].sum()) for c in (0, 1))
    by_case_blocks = tuple(int((outcome.case == c).sum()) for c in (0, 1))
    return EveStats(
        n_blocks=len(p_err),
        errors=errors,
        e_be=errors / len(p_err),
        errors_by_case=by_case_errors,
        blocks_by_case=by_case_blocks,
    )


def wilson_interval(successes: int, trials: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion (95% by default)."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1.0 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def estimate_error_rates(outcome: ADOutcome, eve: EveStats | None = None) -> dict:
    """Wilson intervals for the empirical rates, plus the E_AB/E_BE ratio.

    The ratio interval uses the delta method on the two independent
    binomial estimates and is omitted when either rate is zero.
    """
    if outcome.blocks_accepted == 0:
        raise ValueError("no accepted blocks")
    n = outcome.blocks_accepted
    k = int(outcome.case.sum())
    low, high = wilson_interval(k, n)
    summary = {
        "blocks_accepted": n,
        "e_ab": outcome.e_ab,
        "e_ab_low": low,
        "e_ab_high": high,
    }
    if eve is not None:
        low_be, high_be = wilson_interval(eve.errors, eve.n_blocks)
        summary.update({"e_be": eve.e_be, "e_be_low": low_be, "e_be_high": high_be})
        if outcome.e_ab > 0.0 and eve.e_be > 0.0:
            ratio = outcome.e_ab / eve.e_be
            var_ab = outcome.e_ab * (1.0 - outcome.e_ab) / n
            var_be = eve.e_be * (1.0 - eve.e_be) / eve.n_blocks
            rel = math.sqrt(var_ab / outcome.e_ab**2 + var_be / eve.e_be**2)
            half = 1.959963984540054 * ratio * rel
            summary.update(
                {"ratio": ratio, "ratio_low": max(0.0, ratio - half), "ratio_high": ratio + half}
            )
    return summary


@dataclass(frozen=True)
class ProtocolRun:
    """Everything one simulated run produced, ready for the manifest."""

    config: SimConfig
    tomography: TomographyEstimate
    sifted_length: int
    ad: ADOutcome
    eve_incoherent: EveStats
    eve_coherent: EveStats
    estimates: dict = field(default_factory=dict)


def run_protocol(config: SimConfig) -> ProtocolRun:
    """Sample, sift, reconstruct, distill and attack in one pass.

    Chunks are streamed so only the sifted key stays in memory; the
    tomography counts are accumulated on the fly.
    """
    counts = np.zeros((3, 3, 4))
    sifted_parts: list[SiftedKey] = []
    for chunk in _iter_chunks(config):
        counts += _session_counts(chunk)
        sifted_parts.append(sift(chunk))
    sifted = SiftedKey(
        *(np.concatenate([getattr(p, name) for p in sifted_parts])
          for name in ("basis", "key_a", "key_b", "subspace"))
    )
    tomo = tomography_from_counts(counts)
    ad = run_advantage_distillation(
        sifted.key_a,
        sifted.key_b,
        sifted.basis,
        config.block_length,
        _rng(config.rng_seed, _STREAM_AD),
    )
    eve_inc = simulate_eve_incoherent(
        sifted, ad, config.state, _rng(config.rng_seed, _STREAM_EVE_INCOHERENT)
    )
    eve_coh = simulate_eve_coherent(
        sifted, ad, config.state, _rng(config.rng_seed, _STREAM_EVE_COHERENT)
    )
    estimates = estimate_error_rates(ad, eve_inc)
    return ProtocolRun(
        config=config,
        tomography=tomo,
        sifted_length=len(sifted),
        ad=ad,
        eve_incoherent=eve_inc,
        eve_coherent=eve_coh,
        estimates=estimates,
    )


def expected_acceptance_rate(config: SimConfig) -> float:
    """Exact probability that a block passes the homogeneity test.

    Positions of a uniform-policy sifted key carry i.i.d. uniform bases,
    so the all-same and all-different terms factor per position.  Under
    round-robin the sifted bases cycle x, y, z deterministically and the
    per-block counts depend only on the block's phase offset; the three
    phases are averaged.
    """
    m = basis_marginals(config.state)
    length = config.block_length
    if config.basis_policy == "uniform-random":
        same = ((m.q0 + m.r1 + m.p0) / 3.0) ** length
        diff = ((m.q1 + m.r0 + m.p1) / 3.0) ** length
        return same + diff
    same_by_basis = (m.q0, m.r1, m.p0)
    diff_by_basis = (m.q1, m.r0, m.p1)
    total = 0.0
    for phase in range(3):
        bases = [(phase + i) % 3 for i in range(length)]
        same = math.prod(same_by_basis[b] for b in bases)
        diff = math.prod(diff_by_basis[b] for b in bases)
        total += same + diff
    return total / 3.0


def expected_block_error_analytics(config: SimConfig, outcome: ADOutcome) -> dict:
    """Exact expectations conditioned on the realized accepted blocks.

    Averages the closed-form acceptance-conditional error rates over the
    realized per-block basis counts (evaluated once per distinct count
    vector), for comparison with the empirical rates.
    """
    state = config.state
    uniques, inverse = np.unique(outcome.counts, axis=0, return_inverse=True)
    e_ab = np.empty(len(uniques))
    eve_mix = np.empty(len(uniques))
    eve_by_case = np.empty((len(uniques), 2))
    for i, (n_x, n_y, n_z) in enumerate(uniques):
        inputs_i = BlockErrorInputs(int(n_x), int(n_y), int(n_z), BlockCase.I)
        inputs_ii = BlockErrorInputs(int(n_x), int(n_y), int(n_z), BlockCase.II)
        e_ab[i] = alice_bob_block_error(inputs_i, state)
        err_i = eve_incoherent_block_error_exact(inputs_i, state)
        err_ii = eve_incoherent_block_error_exact(inputs_ii, state)
        w_i, w_ii = block_case_weights(inputs_i, state)
        eve_by_case[i] = (err_i, err_ii)
        eve_mix[i] = w_i * err_i + w_ii * err_ii
    per_block_case_err = eve_by_case[inverse, outcome.case.astype(np.intp)]
    coherent_expected = np.empty(outcome.blocks_accepted)
    for i, (n_x, n_y, n_z) in enumerate(uniques):
        for case in (BlockCase.I, BlockCase.II):
            mask = (inverse == i) & (outcome.case == case.value)
            if mask.any():
                coherent_expected[mask] = eve_coherent_block_error(
                    BlockErrorInputs(int(n_x), int(n_y), int(n_z), case), state
                )
    return {
        "e_ab_expected": float(e_ab[inverse].mean()),
        "eve_incoherent_expected_mixture": float(eve_mix[inverse].mean()),
        "eve_incoherent_expected_conditional": float(per_block_case_err.mean()),
        "eve_incoherent_conditional_variance": float(
            (per_block_case_err * (1.0 - per_block_case_err)).mean()
        ),
        "eve_coherent_expected_conditional": float(coherent_expected.mean()),
    }
