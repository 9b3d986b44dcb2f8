"""Command-line interface.

Exit codes: 0 success, 1 bad input, 2 certification breach, 3 failed
proof-trace claim.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import io
from .geometry import EmptyError, UnboundedError
from .peeling import PeelError, PeelParams, certify_peel, peel

EXIT_OK, EXIT_INPUT, EXIT_CERT, EXIT_CLAIM = 0, 1, 2, 3


class UsageError(ValueError):
    pass


def _default_seed() -> int:
    raw = os.environ.get("PEELKIT_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"PEELKIT_SEED must be an integer, got {raw!r}") from None


def _emit(text: str, path) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        io.write_atomic(path, text)


def _params(args) -> PeelParams:
    return PeelParams(rho=args.rho, tol=args.tol, max_stages=args.max_stages, seed=args.seed,
                      samples=args.samples, suffix_samples=args.suffix_samples)


def _oracle(args):
    from .lattice import NilOracle

    if args.nil_random is not None:
        return NilOracle(random_max=args.nil_random, seed=args.seed)
    return NilOracle(k=_nil_const(args))


def _nil_const(args) -> int:
    return 2 if args.nil_const is None else args.nil_const


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def cmd_peel(args) -> int:
    P = io.polytope_from_json(io.read_json(args.input))
    params = _params(args)
    dec = peel(P, params)
    _emit(io.dumps(io.decomposition_to_json(dec)), args.output)
    cert = certify_peel(P, dec, params)
    _say(f"pieces={len(dec)} stages={len(dec.stages)} gamma={dec.gamma!r} "
         f"max_radius={cert.max_radius:.6f} certified={cert.ok}")
    return EXIT_OK if cert.ok else EXIT_CERT


def cmd_certify(args) -> int:
    dec = io.decomposition_from_json(io.read_json(args.input))
    P = dec.source if args.polytope is None else io.polytope_from_json(io.read_json(args.polytope))
    params = _params(args)
    try:
        cert = certify_peel(P, dec, params)
    except ValueError as exc:
        raise io.InputError(str(exc)) from exc
    _emit(io.dumps(cert.to_json()), args.output)
    _say(f"covers={cert.covers} radii_ok={cert.piece_radii_ok} "
         f"suffix_convex_ok={cert.suffix_convex_ok}")
    return EXIT_OK if cert.ok else EXIT_CERT


def _check_nm(args):
    if args.n is None or args.m is None:
        raise UsageError("--n and --m are required")
    if args.n < 2:
        raise UsageError(f"--n must be >= 2 (got {args.n}): the exponent simplex is a point at n = 1")
    if args.m < 1:
        raise UsageError(f"--m must be >= 1 (got {args.m})")


def cmd_simulate(args) -> int:
    from .lattice import run_main_proof

    _check_nm(args)
    trace = run_main_proof(args.n, args.m, _oracle(args), _params(args), args.initial_depth)
    _emit(io.dumps(trace.to_json()), args.output)
    failed = trace.failed_claims()
    _say(f"stages={len(trace.stages)} pieces={trace.pieces} contradiction={trace.contradiction}")
    if failed:
        where, claim = failed[0]
        _say(f"failed claim at stage {where}: {claim.text} witness={json.dumps(claim.witness)}")
    return EXIT_OK if trace.contradiction and not failed else EXIT_CLAIM


def cmd_expand(args) -> int:
    from .lattice import brute_force_expand, cross_check, run_main_proof
    from .lattice.monomials import simplex_polytope

    _check_nm(args)
    if args.nil_random is not None:
        raise UsageError("expand needs a constant oracle (--nil-const)")
    params = _params(args)
    dec = peel(simplex_polytope(args.n, args.m, params.tol), params)
    try:
        brute = brute_force_expand(args.n, args.m, _nil_const(args), args.stage_limit, params,
                                   args.term_cap, dec)
    except OverflowError as exc:
        raise UsageError(str(exc)) from exc
    trace = run_main_proof(args.n, args.m, _oracle(args), params, dec=dec)
    check = cross_check(trace, brute, dec)
    doc = {"brute": brute.to_json(), "cross_check": check.to_json(), "peel_ref": trace.peel_ref}
    _emit(io.dumps(doc), args.output)
    _say(f"stages_expanded={len(brute.stages)} brute_ok={brute.ok} agree={check.ok}")
    return EXIT_OK if brute.ok and check.ok else EXIT_CLAIM


def cmd_render(args) -> int:
    from .render import RenderError, render_svg

    dec = io.decomposition_from_json(io.read_json(args.input))
    if args.format == "json":
        doc = {"dim": dec.source.dim, "pieces": len(dec), "stages": len(dec.stages),
               "gamma": dec.gamma, "radius": dec.radius,
               "piece_vertices": [len(pc.body.vertices) for pc in dec.pieces]}
        _emit(io.dumps(doc), args.output)
        return EXIT_OK
    try:
        svg = render_svg(dec, args.width, args.height, args.stroke_scale)
    except RenderError as exc:
        raise UsageError(str(exc)) from exc
    _emit(svg, args.output)
    return EXIT_OK


def build_parser(seed_default: int = 0) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="peelkit", description="Peel convex polytopes into small pieces with convex suffixes, "
        "certify the result, and replay the lattice argument built on it.",
        epilog="exit codes: 0 ok, 1 bad input, 2 certification breach, 3 failed claim")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="input JSON file")
    common.add_argument("--output", help="output file (stdout when omitted)")
    common.add_argument("--rho", type=float, default=1.0, help="piece radius bound")
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--seed", type=int, default=seed_default,
                        help="sampling seed (default: $PEELKIT_SEED or 0)")
    common.add_argument("--samples", type=int, default=10_000, help="coverage samples")
    common.add_argument("--suffix-samples", type=int, default=1_000, help="samples per suffix")
    common.add_argument("--max-stages", type=int, default=1_000_000)
    common.add_argument("--n", type=int)
    common.add_argument("--m", type=int)
    nil = common.add_mutually_exclusive_group()
    # default None: argparse misses a clash when the value is the default object
    nil.add_argument("--nil-const", type=int, help="constant nilpotency index (default 2)")
    nil.add_argument("--nil-random", type=int, metavar="K", help="seeded indices in 1..K")
    common.add_argument("--format", choices=("json", "svg"))
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("peel", parents=[common], help="peel a polytope and certify the result")
    p.set_defaults(func=cmd_peel, needs_input=True)

    p = sub.add_parser("certify", parents=[common], help="certify a decomposition")
    p.add_argument("--polytope", help="polytope to certify against (default: the recorded source)")
    p.set_defaults(func=cmd_certify, needs_input=True)

    p = sub.add_parser("simulate", parents=[common], help="replay the staged lattice argument")
    p.add_argument("--initial-depth", type=int, default=None,
                   help="depth of the starting coefficients (default 2n+1)")
    p.set_defaults(func=cmd_simulate, needs_input=False)

    p = sub.add_parser("expand", parents=[common], help="expand powers term by term and compare")
    p.add_argument("--stage-limit", type=int, default=1)
    p.add_argument("--term-cap", type=int, default=1_000_000)
    p.set_defaults(func=cmd_expand, needs_input=False)

    p = sub.add_parser("render", parents=[common], help="draw a planar decomposition")
    p.add_argument("--width", type=int, default=600)
    p.add_argument("--height", type=int, default=600)
    p.add_argument("--stroke-scale", type=float, default=1.0)
    p.set_defaults(func=cmd_render, needs_input=True)
    return parser


def main(argv=None) -> int:
    try:
        seed = _default_seed()
    except UsageError as exc:
        _say(f"error: {exc}")
        return EXIT_INPUT
    parser = build_parser(seed)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    if args.needs_input and not args.input:
        _say(f"error: {args.command} needs --input")
        return EXIT_INPUT
    if args.format == "svg" and args.command != "render":
        _say("error: --format svg is only available for render")
        return EXIT_INPUT
    if args.command == "render" and args.format is None:
        args.format = "svg"
    try:
        return args.func(args)
    except (io.InputError, UsageError, UnboundedError, EmptyError) as exc:
        _say(f"error: {exc}")
        return EXIT_INPUT
    except PeelError as exc:
        _say(f"error: {exc}")
        return EXIT_CERT
    except ValueError as exc:
        _say(f"error: {exc}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
