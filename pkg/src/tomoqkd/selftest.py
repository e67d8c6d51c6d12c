"""Cross-module invariant suites, runnable without the test harness.

Each check raises :class:`CheckFailure` with a diagnostic on violation.
The CLI's ``selftest`` subcommand runs all of them and converts any
failure into a nonzero exit code.
"""

from __future__ import annotations

import math

import numpy as np

from . import oracle, regions, simulation
from .security import margin_arrays
from .states import (
    AngleParameterization,
    Basis,
    basis_marginals,
    from_angles,
    from_probabilities,
    is_distillable,
    overlaps,
    to_angles,
    werner,
)

__all__ = ["CheckFailure", "all_checks", "run_all"]


class CheckFailure(AssertionError):
    """An internal invariant does not hold."""


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise CheckFailure(message)


def _random_states(rng: np.random.Generator, n: int, exclude_band: float = 0.0) -> np.ndarray:
    """(n, 4) weight vectors, uniform on the simplex, optionally keeping
    every sample's largest weight away from the distillability boundary."""
    probs = rng.dirichlet((1.0, 1.0, 1.0, 1.0), size=n)
    if exclude_band > 0.0:
        while True:
            bad = np.abs(probs.max(axis=1) - 0.5) <= exclude_band
            if not bad.any():
                break
            probs[bad] = rng.dirichlet((1.0, 1.0, 1.0, 1.0), size=int(bad.sum()))
    return probs


def check_marginal_normalization(n: int = 10_000, seed: int = 101) -> None:
    probs = _random_states(np.random.default_rng(seed), n)
    for row in probs:
        m = basis_marginals(from_probabilities(*row))
        for total in (m.p0 + m.p1, m.q0 + m.q1, m.r0 + m.r1):
            _require(abs(total - 1.0) <= 1e-12, f"marginal sum {total} off unity for {row}")


def check_overlap_bounds(n: int = 5_000, seed: int = 102) -> None:
    probs = _random_states(np.random.default_rng(seed), n)
    for row in probs:
        table = overlaps(from_probabilities(*row)).table()
        _require(np.all(np.abs(table) <= 1.0 + 1e-12), f"overlap out of range for {row}")


def check_angle_round_trip(n: int = 2_000, seed: int = 103) -> None:
    rng = np.random.default_rng(seed)
    for _ in range(n):
        p00 = rng.uniform(0.05, 0.95)
        theta = rng.uniform(1e-3, math.pi / 2 - 1e-3)
        phi = rng.uniform(1e-3, math.pi / 2 - 1e-3)
        back = to_angles(from_angles(AngleParameterization(p00, theta, phi)))
        _require(
            abs(back.theta - theta) <= 1e-10 and abs(back.phi - phi) <= 1e-10,
            f"angle round trip drifted: {(p00, theta, phi)} -> {(back.theta, back.phi)}",
        )


def check_oracle_consistency(n: int = 300, seed: int = 104) -> None:
    rng = np.random.default_rng(seed)
    for row in _random_states(rng, n):
        state = from_probabilities(*row)
        m = basis_marginals(state)
        corr = {Basis.X: m.q0, Basis.Y: m.r0, Basis.Z: m.p0}
        for a in Basis:
            for b in Basis:
                table = oracle.joint_outcome_probs(state, a, b)
                _require(abs(table.sum() - 1.0) <= 1e-12, "outcome table not normalized")
                if a is b:
                    same = table[0, 0] + table[1, 1]
                    _require(
                        abs(same - corr[a]) <= 1e-12,
                        f"matched-{a.name} same-outcome mass {same} != {corr[a]}",
                    )
                else:
                    _require(
                        np.max(np.abs(table - 0.25)) <= 1e-12,
                        f"mismatched ({a.name},{b.name}) table not uniform: {table}",
                    )


def check_nppt_agreement(n: int = 10_000, seed: int = 105) -> None:
    rng = np.random.default_rng(seed)
    probs = _random_states(rng, n, exclude_band=1e-12)
    for row in probs:
        state = from_probabilities(*row)
        _require(
            is_distillable(state) == oracle.is_nppt(state),
            f"max-weight rule and NPPT disagree for {row}",
        )
    # near-boundary samples, offsets clear of the indifference band
    for _ in range(100):
        offset = rng.uniform(1e-9, 1e-6) * rng.choice([-1.0, 1.0])
        rest = rng.dirichlet((1.0, 1.0, 1.0))
        row = np.concatenate([[0.5 + offset], (0.5 - offset) * rest])
        if row.max() != row[0]:
            continue  # dominant weight must stay in front for the construction
        state = from_probabilities(*row)
        _require(
            is_distillable(state) == oracle.is_nppt(state),
            f"boundary-band disagreement at offset {offset}",
        )


def check_ad_matches_distillability(n: int = 10_000, seed: int = 106) -> None:
    probs = _random_states(np.random.default_rng(seed), n, exclude_band=1e-6)
    m = margin_arrays(*probs.T)
    ad = m["ad_incoherent"] > 1e-12
    qd = m["distillable"] > 1e-12
    _require(
        np.array_equal(ad, qd),
        f"AD/distillability mismatch on {int((ad != qd).sum())} of {n} states",
    )


def check_coherent_implies_incoherent(n: int = 10_000, seed: int = 107) -> None:
    probs = _random_states(np.random.default_rng(seed), n)
    m = margin_arrays(*probs.T)
    coh = m["ad_coherent"] > 1e-12
    inc = m["ad_incoherent"] > 1e-12
    _require(np.all(inc[coh]), "a coherent-secure state is not incoherent-secure")


def check_resistant_families() -> None:
    for p00 in np.arange(0.55, 0.96, 0.05):
        rest = 1.0 - p00
        for weights in ((p00, rest, 0, 0), (p00, 0, rest, 0), (p00, 0, 0, rest)):
            m = margin_arrays(*weights)
            _require(
                float(m["ck"]) > 1e-12 and float(m["ad_coherent"]) > 1e-12,
                f"two-component mixture {weights} not fully secure",
            )


def check_werner_threshold() -> None:
    value = regions.find_werner_ck_threshold(1e-4)
    _require(0.760 <= value <= 0.770, f"Werner CK threshold {value} outside [0.760, 0.770]")


def check_simulation_determinism() -> None:
    config = simulation.SimConfig(
        state=werner(0.8), n_pairs=30_000, block_length=6, rng_seed=7,
        basis_policy="round-robin", paper_faithful=True,
    )
    first = simulation.run_protocol(config)
    second = simulation.run_protocol(config)
    _require(
        np.array_equal(first.ad.bob_bits, second.ad.bob_bits)
        and first.eve_incoherent.errors == second.eve_incoherent.errors
        and first.eve_coherent.errors == second.eve_coherent.errors,
        "identical configurations produced different runs",
    )


def check_eve_exact_vs_simulation() -> None:
    from .security import BlockErrorInputs, eve_incoherent_block_error_mixture

    config = simulation.SimConfig(
        state=werner(0.8), n_pairs=600_000, block_length=6, rng_seed=11,
        basis_policy="round-robin", paper_faithful=True,
    )
    run = simulation.run_protocol(config)
    expected = eve_incoherent_block_error_mixture(
        BlockErrorInputs.balanced(config.block_length), config.state
    )
    n = run.eve_incoherent.n_blocks
    se = math.sqrt(expected * (1.0 - expected) / n)
    deviation = abs(run.eve_incoherent.e_be - expected)
    _require(
        deviation <= 3.0 * se,
        f"vote simulation off the exact sum by {deviation / se:.2f} standard errors",
    )


def check_region_symmetry_and_nesting() -> None:
    for p00 in (0.55, 0.6, 0.77):
        grid = regions.scan_region(regions.GridSpec(p00=p00, n_theta=65, n_phi=33))
        for name, margin in grid.margins.items():
            _require(
                np.max(np.abs(margin - margin[:, ::-1])) <= 1e-12,
                f"{name} margins break the theta reflection symmetry at p00={p00}",
            )
        coh, inc, ck = (grid.verdict(n) for n in ("ad_coherent", "ad_incoherent", "ck"))
        _require(np.all(inc[coh]), f"coherent cells escape the incoherent region at p00={p00}")
        _require(np.all(inc[ck]), f"CK-secure cells escape the incoherent region at p00={p00}")


def check_ck_monotonicity(seed: int = 108) -> None:
    rng = np.random.default_rng(seed)
    theta = rng.uniform(0.0, math.pi / 2, size=1000)
    phi = rng.uniform(0.0, math.pi / 2, size=1000)
    previous = None
    for p00 in (0.55, 0.65, 0.75, 0.85, 0.95):
        rest = 1.0 - p00
        p01 = rest * np.cos(theta) ** 2 * np.cos(phi) ** 2
        p10 = rest * np.sin(theta) ** 2 * np.cos(phi) ** 2
        p11 = rest * np.sin(phi) ** 2
        ck = margin_arrays(np.full_like(p01, p00), p01, p10, p11)["ck"]
        if previous is not None:
            worst = float((ck - previous).min())
            _require(worst >= -1e-12, f"CK margin decreased by {-worst} when p00 grew to {p00}")
        previous = ck


def all_checks():
    """(name, callable) pairs in execution order."""
    return [
        ("marginal-normalization", check_marginal_normalization),
        ("overlap-bounds", check_overlap_bounds),
        ("angle-round-trip", check_angle_round_trip),
        ("oracle-consistency", check_oracle_consistency),
        ("nppt-agreement", check_nppt_agreement),
        ("ad-matches-distillability", check_ad_matches_distillability),
        ("coherent-implies-incoherent", check_coherent_implies_incoherent),
        ("resistant-families", check_resistant_families),
        ("werner-ck-threshold", check_werner_threshold),
        ("simulation-determinism", check_simulation_determinism),
        ("eve-exact-vs-simulation", check_eve_exact_vs_simulation),
        ("region-symmetry-nesting", check_region_symmetry_and_nesting),
        ("ck-monotonicity", check_ck_monotonicity),
    ]


def run_all(report=print) -> bool:
    """Run every suite; report one line each; True when all pass."""
    ok = True
    for name, check in all_checks():
        try:
            check()
        except CheckFailure as failure:
            ok = False
            report(f"[FAIL] {name}: {failure}")
        else:
            report(f"[ok]   {name}")
    return ok
