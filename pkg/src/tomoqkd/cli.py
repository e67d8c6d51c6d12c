"""Command-line frontend.

Subcommands: analyze, simulate, scan, threshold, selftest.  All
randomness flows from the explicit --seed; outputs are reproducible byte
for byte and carry the tool version plus a content hash of their inputs.

Exit codes: 0 success, 2 validation error, 3 internal invariant failure.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from pathlib import Path

import numpy as np

from . import __version__, regions, selftest, serialize, simulation
from .security import classify_state
from .states import AngleParameterization, BellDiagonalState, from_angles

_EXIT_VALIDATION = 2
_EXIT_INVARIANT = 3

_BASIS_LETTERS = np.array(["x", "y", "z"])


def _input_hash(payload: str) -> str:
    """Git-style blob hash of the canonical input text."""
    data = payload.encode("ascii")
    return hashlib.sha1(b"blob %d\x00" % len(data) + data).hexdigest()


def _state_from_args(args) -> BellDiagonalState:
    given_angles = args.p00 is not None or args.theta is not None or args.phi is not None
    if args.state is not None and given_angles:
        raise ValueError("pass either --state or the angle flags, not both")
    if args.state is not None:
        text = args.state
        if text.startswith("@"):
            text = Path(text[1:]).read_text()
        return serialize.parse_state(text)
    if given_angles:
        if args.p00 is None or args.theta is None or args.phi is None:
            raise ValueError("angle form needs all of --p00, --theta, --phi")
        return from_angles(AngleParameterization(args.p00, args.theta, args.phi))
    raise ValueError("no state given: use --state or --p00/--theta/--phi")


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="ascii")


def cmd_analyze(args) -> int:
    state = _state_from_args(args)
    report = classify_state(state).to_dict()
    report["state"] = serialize.state_to_obj(state)
    print(serialize.dumps(report, indent=2))
    return 0


def _manifest(run: simulation.ProtocolRun, input_hash: str) -> dict:
    config = run.config
    tomo = run.tomography
    analytics = simulation.expected_block_error_analytics(config, run.ad)
    acceptance_expected = simulation.expected_acceptance_rate(config)

    true_report = classify_state(config.state).to_dict()
    estimated_state = BellDiagonalState(*tomo.p_hat)
    estimated_report = classify_state(estimated_state).to_dict()
    verdict_keys = ("ck_secure", "ad_incoherent_secure", "ad_coherent_secure", "distillable")
    verdicts_agree = all(true_report[k] == estimated_report[k] for k in verdict_keys)

    def _zscore(observed: float, expected: float, n: int) -> float:
        variance = expected * (1.0 - expected) / n if n else 0.0
        if variance <= 0.0:
            return 0.0 if observed == expected else float("inf")
        return (observed - expected) / variance**0.5

    n_acc = run.ad.blocks_accepted
    return {
        "tool": "tomoqkd",
        "version": __version__,
        "input_hash": input_hash,
        "config": {
            "state": serialize.state_to_obj(config.state),
            "n_pairs": config.n_pairs,
            "block_length": config.block_length,
            "rng_seed": config.rng_seed,
            "basis_policy": config.basis_policy,
            "paper_faithful": config.paper_faithful,
        },
        "tomography": {
            "p_hat": list(tomo.p_hat),
            "std_err": list(tomo.std_err),
            "n_matched": [int(n) for n in tomo.n_matched],
            "uniformity_stat": tomo.uniformity_stat,
            "uniformity_threshold": tomo.uniformity_threshold,
            "bell_diagonal_ok": tomo.bell_diagonal_ok,
            "projected": tomo.projected,
        },
        "sifted_length": run.sifted_length,
        "ad": {
            "blocks_total": run.ad.blocks_total,
            "blocks_accepted": n_acc,
            "acceptance_rate": run.ad.acceptance_rate,
            "acceptance_expected": acceptance_expected,
            "acceptance_zscore": _zscore(
                run.ad.acceptance_rate, acceptance_expected, run.ad.blocks_total
            ),
            "e_ab": run.ad.e_ab,
            "e_ab_expected": analytics["e_ab_expected"],
        },
        "eve_incoherent": {
            "n_blocks": run.eve_incoherent.n_blocks,
            "errors": run.eve_incoherent.errors,
            "e_be": run.eve_incoherent.e_be,
            "expected_mixture": analytics["eve_incoherent_expected_mixture"],
            "expected_conditional": analytics["eve_incoherent_expected_conditional"],
            "zscore_vs_mixture": _zscore(
                run.eve_incoherent.e_be,
                analytics["eve_incoherent_expected_mixture"],
                run.eve_incoherent.n_blocks,
            ),
        },
        "eve_coherent": {
            "n_blocks": run.eve_coherent.n_blocks,
            "errors": run.eve_coherent.errors,
            "e_be": run.eve_coherent.e_be,
            "expected_conditional": analytics["eve_coherent_expected_conditional"],
        },
        "estimates": run.estimates,
        "analysis": {
            "true_state": true_report,
            "estimated_state": estimated_report,
            "verdicts_agree": verdicts_agree,
        },
    }


def cmd_simulate(args) -> int:
    state = _state_from_args(args)
    if not state.protocol_mode and not args.analysis_mode:
        raise ValueError(
            "simulate needs a protocol-mode state (p00 > 1/2); pass --analysis-mode to override"
        )
    config = simulation.SimConfig(
        state=state,
        n_pairs=args.pairs,
        block_length=args.block_length,
        rng_seed=args.seed,
        basis_policy=args.policy,
        paper_faithful=args.paper_faithful,
    )
    config_obj = {
        "state": serialize.state_to_obj(state),
        "n_pairs": config.n_pairs,
        "block_length": config.block_length,
        "rng_seed": config.rng_seed,
        "basis_policy": config.basis_policy,
        "paper_faithful": config.paper_faithful,
    }
    input_hash = _input_hash(serialize.dumps(config_obj))
    run = simulation.run_protocol(config)
    manifest_text = serialize.dumps(_manifest(run, input_hash), indent=2) + "\n"

    out_dir = Path(args.out)
    _write(out_dir / "manifest.json", manifest_text)
    if args.dump_pairs:
        session = simulation.sample_session(config)
        lines = [f"# tomoqkd {__version__} input-hash={input_hash}"]
        lines.append("pair,basis_a,basis_b,bit_a,bit_b,matched")
        for i in range(len(session)):
            lines.append(
                f"{i},{_BASIS_LETTERS[session.basis_a[i]]},{_BASIS_LETTERS[session.basis_b[i]]},"
                f"{session.bit_a[i]},{session.bit_b[i]},{int(session.matched[i])}"
            )
        _write(out_dir / "pairs.csv", "\n".join(lines) + "\n")
    sys.stdout.write(manifest_text)
    return 0


def cmd_scan(args) -> int:
    try:
        n_theta, n_phi = (int(part) for part in args.grid.lower().split("x"))
    except ValueError as exc:
        raise ValueError(f"--grid must look like 256x256, got {args.grid!r}") from exc
    spec = regions.GridSpec(
        p00=args.p00,
        n_theta=n_theta,
        n_phi=n_phi,
        analysis_mode=args.analysis_mode,
        werner_band=args.werner_band,
    )
    spec_obj = {
        "p00": spec.p00,
        "n_theta": spec.n_theta,
        "n_phi": spec.n_phi,
        "analysis_mode": spec.analysis_mode,
        "werner_band": spec.werner_band,
    }
    input_hash = _input_hash(serialize.dumps(spec_obj))
    header = f"tomoqkd {__version__} input-hash={input_hash} p00={spec.p00:.17g}"
    grid = regions.scan_region(spec)

    formats = {part.strip() for part in args.format.split(",") if part.strip()}
    unknown = formats - {"csv", "pgm", "json"}
    if unknown:
        raise ValueError(f"unknown formats: {sorted(unknown)}")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    if "csv" in formats:
        regions.write_csv(grid, out_dir / "scan.csv", header)
    if "pgm" in formats:
        for verdict in regions.VERDICTS:
            regions.write_pgm(grid, verdict, out_dir / f"{verdict}.pgm", header)
    summary = {
        "tool": "tomoqkd",
        "version": __version__,
        "input_hash": input_hash,
        "spec": spec_obj,
        "fractions": {name: grid.fraction(name) for name in regions.VERDICTS},
    }
    if "json" in formats:
        _write(out_dir / "summary.json", serialize.dumps(summary, indent=2) + "\n")
    print(serialize.dumps(summary, indent=2))
    return 0


def cmd_threshold(args) -> int:
    low, high = regions.find_werner_ck_threshold_bracket(args.tol)
    result = {
        "p00_star": 0.5 * (low + high),
        "bracket": [low, high],
        "tolerance": args.tol,
    }
    print(serialize.dumps(result, indent=2))
    return 0


def cmd_selftest(args) -> int:
    return 0 if selftest.run_all() else _EXIT_INVARIANT


def _add_state_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--state",
        help="state JSON, inline or @file: "
        '{"p": [p00, p01, p10, p11]} or {"p00": x, "theta": t, "phi": f}',
    )
    parser.add_argument("--p00", type=float, help="dominant Bell weight (angle form)")
    parser.add_argument("--theta", type=float, help="theta in radians (angle form)")
    parser.add_argument("--phi", type=float, help="phi in radians (angle form)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tomoqkd",
        description="Security analysis and simulation of tomographic QKD "
        "over Bell-diagonal two-qubit states.",
    )
    parser.add_argument("--version", action="version", version=f"tomoqkd {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="security report for one state")
    _add_state_arguments(p_analyze)
    p_analyze.set_defaults(func=cmd_analyze)

    p_sim = sub.add_parser("simulate", help="Monte Carlo protocol run")
    _add_state_arguments(p_sim)
    p_sim.add_argument("--pairs", type=int, required=True, help="number of distributed pairs")
    p_sim.add_argument("--block-length", type=int, required=True, help="AD block length L")
    p_sim.add_argument("--seed", type=int, required=True, help="64-bit RNG seed")
    p_sim.add_argument(
        "--policy", choices=("uniform-random", "round-robin"), default="uniform-random"
    )
    p_sim.add_argument(
        "--paper-faithful",
        action="store_true",
        help="force balanced per-block basis counts (round-robin policy, L divisible by 3)",
    )
    p_sim.add_argument(
        "--analysis-mode", action="store_true", help="allow states with p00 <= 1/2"
    )
    p_sim.add_argument("--out", required=True, help="output directory")
    p_sim.add_argument(
        "--dump-pairs", action="store_true", help="also write the per-pair CSV log"
    )
    p_sim.set_defaults(func=cmd_simulate)

    p_scan = sub.add_parser("scan", help="map security regions over (theta, phi)")
    p_scan.add_argument("--p00", type=float, required=True)
    p_scan.add_argument("--grid", default="256x256", help="n_theta x n_phi, e.g. 64x64")
    p_scan.add_argument("--out", required=True, help="output directory")
    p_scan.add_argument("--format", default="csv,pgm", help="comma list of csv,pgm,json")
    p_scan.add_argument(
        "--analysis-mode", action="store_true", help="allow p00 outside (1/2, 1]"
    )
    p_scan.add_argument("--werner-band", type=float, default=0.02)
    p_scan.set_defaults(func=cmd_scan)

    p_thr = sub.add_parser("threshold", help="Werner CK threshold by bisection")
    p_thr.add_argument("--tol", type=float, default=1e-6)
    p_thr.set_defaults(func=cmd_threshold)

    p_self = sub.add_parser("selftest", help="run all module invariant suites")
    p_self.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_VALIDATION
    except selftest.CheckFailure as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return _EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
