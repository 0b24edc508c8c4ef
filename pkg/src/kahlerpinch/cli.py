"""Command-line front end.

Subcommands: r0, validate, pinch, chern, identities, sweep, constants.
JSON (or CSV summaries) go to stdout, diagnostics to stderr. Every sampling
command requires an explicit --seed; reruns with identical flags produce
byte-identical stdout.

Exit codes: 0 success, 1 check failed, 2 usage error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3

DIMENSION_CAP = 4
THREADS_ENV_VAR = "KAHLERPINCH_THREADS"


def _apply_thread_override():
    """Propagate the thread-count override to BLAS before numpy loads."""
    value = os.environ.get(THREADS_ENV_VAR)
    if value:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, value)


def _emit(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")


def _fail_usage(message: str) -> int:
    sys.stderr.write(f"error: {message}\n")
    return EXIT_USAGE


def _check_n(n: int) -> int | None:
    if n < 1:
        return EXIT_USAGE
    if n > DIMENSION_CAP:
        return EXIT_RESOURCE
    return None


def _load_tensor(path: str):
    from .curvature import read_tensor

    return read_tensor(path)


def cmd_r0(args) -> int:
    code = _check_n(args.n)
    if code == EXIT_USAGE:
        return _fail_usage(f"--n must be >= 1, got {args.n}")
    if code == EXIT_RESOURCE:
        sys.stderr.write(f"error: --n capped at {DIMENSION_CAP}\n")
        return EXIT_RESOURCE
    from .curvature import complex_hyperbolic_tensor, symmetry_residuals, write_tensor
    from .space import make_space

    tensor = complex_hyperbolic_tensor(make_space(args.n))
    write_tensor(args.out, tensor, args.tol)
    _emit(
        {
            "command": "r0",
            "n": args.n,
            "out": args.out,
            "frobenius_norm": tensor.frobenius_norm(),
            "max_symmetry_residual": max(symmetry_residuals(tensor).values()),
        }
    )
    return EXIT_OK


def cmd_validate(args) -> int:
    from .curvature import check_kahler

    tensor, file_tol = _load_tensor(args.path)
    code = _check_n(tensor.space.n)
    if code == EXIT_RESOURCE:
        sys.stderr.write(f"error: tensor dimension exceeds cap {DIMENSION_CAP}\n")
        return EXIT_RESOURCE
    tol = args.tol if args.tol is not None else file_tol
    certificate = check_kahler(tensor, tol)
    _emit(
        {
            "command": "validate",
            "path": args.path,
            "n": tensor.space.n,
            "residuals": {
                "antisymmetry": certificate.antisymmetry,
                "pair_exchange": certificate.pair_exchange,
                "bianchi": certificate.bianchi,
                "j_invariance": certificate.j_invariance,
            },
            "tolerance": tol,
            "passed": certificate.passed,
        }
    )
    return EXIT_OK if certificate.passed else EXIT_CHECK_FAILED


def cmd_pinch(args) -> int:
    from .curvature import check_kahler
    from .errors import PreconditionError
    from .pinching import pinch

    tensor, file_tol = _load_tensor(args.path)
    code = _check_n(tensor.space.n)
    if code == EXIT_RESOURCE:
        sys.stderr.write(f"error: tensor dimension exceeds cap {DIMENSION_CAP}\n")
        return EXIT_RESOURCE
    certificate = check_kahler(tensor, file_tol)
    if not certificate.passed:
        _emit(
            {
                "command": "pinch",
                "path": args.path,
                "passed": False,
                "reason": "tensor failed Kahler certification",
                "max_symmetry_residual": certificate.max_residual,
            }
        )
        return EXIT_CHECK_FAILED
    try:
        report = pinch(tensor, restarts=args.restarts, seed=args.seed)
    except PreconditionError as exc:
        return _fail_usage(str(exc))
    _emit(
        {
            "command": "pinch",
            "path": args.path,
            "n": tensor.space.n,
            "k_min": report.k_min,
            "k_max": report.k_max,
            "envelope_lo": report.envelope_lo,
            "envelope_hi": report.envelope_hi,
            "argmin_plane": {
                "u": list(report.argmin_plane.u),
                "v": list(report.argmin_plane.v),
            },
            "argmax_plane": {
                "u": list(report.argmax_plane.u),
                "v": list(report.argmax_plane.v),
            },
            "restarts": report.restarts,
            "converged": report.converged,
            "seed": args.seed,
        }
    )
    return EXIT_OK


def _parse_index(text: str, n: int):
    from .chern import ChernIndex
    from .errors import DegreeError

    parts = text.split(",")
    if len(parts) != n:
        raise DegreeError(f"index {text!r} must have {n} comma-separated entries")
    try:
        values = tuple(int(p) for p in parts)
    except ValueError as exc:
        raise DegreeError(f"index {text!r} is not integer-valued") from exc
    return ChernIndex(values)


def cmd_chern(args) -> int:
    from .chern import chern_product, chern_ratio, enumerate_indices
    from .errors import DegreeError
    from .space import random_unitary_frame

    tensor, _ = _load_tensor(args.path)
    n = tensor.space.n
    code = _check_n(n)
    if code == EXIT_RESOURCE:
        sys.stderr.write(f"error: tensor dimension exceeds cap {DIMENSION_CAP}\n")
        return EXIT_RESOURCE
    frame = None
    if args.frame_seed is not None:
        frame = random_unitary_frame(tensor.space, args.frame_seed)
    payload = {"command": "chern", "path": args.path, "n": n, "frame_seed": args.frame_seed}
    try:
        if args.all:
            indices = enumerate_indices(n)
            payload["densities"] = {
                str(i): chern_product(tensor, i, frame).gamma for i in indices
            }
            payload["ratios"] = {
                f"{a}:{b}": chern_ratio(tensor, a, b, frame)
                for a in indices
                for b in indices
                if a != b
            }
        else:
            left, sep, right = args.ratio.partition(":")
            if not sep:
                return _fail_usage(f"--ratio must look like a_1,..,a_n:b_1,..,b_n, got {args.ratio!r}")
            index_i = _parse_index(left, n)
            index_j = _parse_index(right, n)
            payload["ratios"] = {
                f"{index_i}:{index_j}": chern_ratio(tensor, index_i, index_j, frame)
            }
    except DegreeError as exc:
        return _fail_usage(str(exc))
    _emit(payload)
    return EXIT_OK


def cmd_identities(args) -> int:
    code = _check_n(args.n)
    if code == EXIT_USAGE or args.n < 2:
        return _fail_usage(f"--n must be in [2, {DIMENSION_CAP}], got {args.n}")
    if code == EXIT_RESOURCE:
        sys.stderr.write(f"error: --n capped at {DIMENSION_CAP}\n")
        return EXIT_RESOURCE
    from .experiments import identity_suite

    results = identity_suite(args.n, args.samples, args.seed)
    core_keys = (
        "identity_one",
        "solve_vs_direct",
        "polarization_first",
        "polarization_second",
        "reconstruction_roundtrip",
        "berger_max_violation",
        "berger_attainment_gap",
    )
    passed = all(results[k] <= args.tol for k in core_keys)
    _emit(
        {
            "command": "identities",
            "n": args.n,
            "samples": args.samples,
            "seed": args.seed,
            "tolerance": args.tol,
            "residuals": {k: results[k] for k in core_keys},
            "polarization_second_printed": results["polarization_second_printed"],
            "suspected_typo": results["suspected_typo"],
            "fitted_second_coefficient": results["fitted_second_coefficient"],
            "passed": passed,
        }
    )
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def cmd_sweep(args) -> int:
    try:
        with open(args.config, "r", encoding="ascii") as fh:
            config = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        return _fail_usage(f"cannot read sweep config: {exc}")
    for field in ("n", "t_values", "samples_per_t", "seed"):
        if field not in config:
            return _fail_usage(f"sweep config missing field {field!r}")
    n = config["n"]
    code = _check_n(int(n))
    if code == EXIT_USAGE:
        return _fail_usage(f"config n must be >= 1, got {n}")
    if code == EXIT_RESOURCE:
        sys.stderr.write(f"error: config n capped at {DIMENSION_CAP}\n")
        return EXIT_RESOURCE
    from .errors import PreconditionError
    from .experiments import aggregate_by_t, emit_csv, sweep

    try:
        records = sweep(
            int(n),
            config["t_values"],
            int(config["samples_per_t"]),
            int(config["seed"]),
            restarts=config.get("restarts"),
        )
    except PreconditionError as exc:
        return _fail_usage(f"bad sweep config: {exc}")
    except RuntimeError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CHECK_FAILED
    with open(args.out, "w", encoding="ascii") as fh:
        fh.write(emit_csv(records))
    _emit(
        {
            "command": "sweep",
            "config": args.config,
            "out": args.out,
            "records": len(records),
            "excluded": sum(1 for r in records if not r.converged),
            "aggregates": aggregate_by_t(records),
        }
    )
    return EXIT_OK


def cmd_constants(args) -> int:
    if args.epsilon <= 0:
        return _fail_usage(f"--epsilon must be positive, got {args.epsilon}")
    if args.n < 2:
        return _fail_usage(f"--n must be >= 2, got {args.n}")
    if args.n > DIMENSION_CAP:
        sys.stderr.write(f"error: --n capped at {DIMENSION_CAP}\n")
        return EXIT_RESOURCE
    if args.certify and args.seed is None:
        return _fail_usage("--certify requires --seed")
    from .experiments import certify_constants, proof_constants

    chain = proof_constants(args.epsilon, args.n)
    payload = {
        "command": "constants",
        "epsilon": chain.epsilon,
        "n": chain.n,
        "eta": chain.eta,
        "delta_1": chain.delta_1,
        "delta": chain.delta,
        "epsilon_1": chain.epsilon_1,
    }
    exit_code = EXIT_OK
    if args.certify:
        report = certify_constants(chain, args.certify, args.seed)
        payload["certification"] = {
            "samples": report.samples,
            "violations": report.violations,
            "max_ratio_dev": report.max_ratio_dev,
            "max_defect": report.max_defect,
            "retries": report.retries,
            "seed": args.seed,
        }
        if report.violations:
            exit_code = EXIT_CHECK_FAILED
    _emit(payload)
    return exit_code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kahlerpinch",
        description="Pinched Kahler curvature tensors and Chern-form densities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("r0", help="write the complex hyperbolic model tensor to a file")
    p.add_argument("--n", type=int, required=True, help="complex dimension (1..4)")
    p.add_argument("--out", required=True, help="output tensor file")
    p.add_argument("--tol", type=float, default=1e-9, help="symmetry tolerance stored in the file")
    p.set_defaults(func=cmd_r0)

    p = sub.add_parser("validate", help="certify the Kahler symmetries of a tensor file")
    p.add_argument("path", help="tensor file")
    p.add_argument("--tol", type=float, default=None, help="override the file's tolerance")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("pinch", help="certified sectional-curvature extremes")
    p.add_argument("path", help="tensor file")
    p.add_argument("--restarts", type=int, default=None, help="multistart count")
    p.add_argument("--seed", type=int, required=True, help="seed for restart initialization")
    p.set_defaults(func=cmd_pinch)

    p = sub.add_parser("chern", help="Chern-form densities and ratios")
    p.add_argument("path", help="tensor file")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--ratio", help="index pair a_1,..,a_n:b_1,..,b_n")
    group.add_argument("--all", action="store_true", help="all densities and pairwise ratios")
    p.add_argument("--frame-seed", type=int, default=None, help="resample the unitary frame")
    p.set_defaults(func=cmd_chern)

    p = sub.add_parser("identities", help="verify the algebraic identity suite")
    p.add_argument("--n", type=int, default=2, help="complex dimension (2..4)")
    p.add_argument("--samples", type=int, default=50, help="sampled configurations")
    p.add_argument("--seed", type=int, required=True, help="sampling seed")
    p.add_argument("--tol", type=float, default=1e-9, help="pass/fail residual tolerance")
    p.set_defaults(func=cmd_identities)

    p = sub.add_parser("sweep", help="perturbation sweep to CSV")
    p.add_argument("--config", required=True, help="JSON config: n, t_values, samples_per_t, seed[, restarts]")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("constants", help="explicit constant chain (and optional certification)")
    p.add_argument("--epsilon", type=float, required=True, help="target ratio deviation")
    p.add_argument("--n", type=int, required=True, help="complex dimension (2..4)")
    p.add_argument("--certify", type=int, default=0, help="number of certification samples")
    p.add_argument("--seed", type=int, default=None, help="seed (required with --certify)")
    p.set_defaults(func=cmd_constants)

    return parser


def main(argv=None) -> int:
    _apply_thread_override()
    parser = build_parser()
    args = parser.parse_args(argv)
    from .errors import (
        DegenerateDenominatorError,
        NotNegativelyCurvedError,
        PreconditionError,
        ResourceLimitError,
        TensorFormatError,
    )

    try:
        return args.func(args)
    except FileNotFoundError as exc:
        return _fail_usage(f"file not found: {exc.filename}")
    except TensorFormatError as exc:
        return _fail_usage(f"malformed tensor file: {exc}")
    except ResourceLimitError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_RESOURCE
    except (DegenerateDenominatorError, NotNegativelyCurvedError, PreconditionError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
