"""Batch command-line surface.

Subcommands: pair, build, verify, dist, sweep, mapnr.  Exit codes: 0 success,
1 a verified claim failed, 2 input error (with a machine-readable error JSON
on stdout).  Identical invocations produce byte-identical output; sampled
runs draw from a seeded PCG64 generator.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import distrib, mapnr
from .dickson import Nearfield, build_nearfield
from .gf import DEFAULT_SIZE_CAP, FieldError, Poly
from .numth import NotADicksonPairError, is_dickson_pair

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2


def _emit(obj: dict) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _error(exc: Exception) -> int:
    kind = type(exc).__name__.removesuffix("Error")
    _emit({"schema": "nearfield-error/1", "error": kind, "message": str(exc)})
    return EXIT_INPUT


def _parse_coeffs(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError as exc:
        raise ValueError(f"expected comma-separated integers, got {text!r}") from exc


def _build_from_args(args) -> Nearfield:
    modulus = None
    generator = None
    if args.modulus is not None:
        p = _require_prime_base(args.q)
        modulus = Poly(p, _parse_coeffs(args.modulus))
    if args.generator is not None:
        p = _require_prime_base(args.q)
        coeffs = _parse_coeffs(args.generator)
        if any(not 0 <= int(c) < p for c in coeffs):
            raise ValueError(f"generator coefficients must be residues mod {p}")
        generator = sum(int(c) * p**i for i, c in enumerate(coeffs))
    return build_nearfield(args.q, args.n, modulus=modulus, generator=generator, size_cap=args.size_cap)


def _require_prime_base(q: int) -> int:
    from .numth import prime_power

    pp = prime_power(q)
    if pp is None:
        raise NotADicksonPairError(f"({q}, ?) is not a Dickson pair: condition (i) fails; {q} is not a prime power")
    return pp[0]


def cmd_pair(args) -> int:
    verdict = is_dickson_pair(args.q, args.n)
    out = {
        "schema": "nearfield-pair/1",
        "q": args.q,
        "n": args.n,
        "valid": verdict.ok,
        "violated": verdict.violated,
        "reason": verdict.reason,
    }
    if args.format == "text":
        if verdict.ok:
            sys.stdout.write(f"({args.q}, {args.n}) is a Dickson pair\n")
        else:
            sys.stdout.write(f"({args.q}, {args.n}) is not a Dickson pair: condition ({verdict.violated}) fails; {verdict.reason}\n")
    else:
        _emit(out)
    return EXIT_OK if verdict.ok else EXIT_INPUT


def cmd_build(args) -> int:
    nf = _build_from_args(args)
    _emit(nf.descriptor())
    return EXIT_OK


def cmd_verify(args) -> int:
    nf = _build_from_args(args)
    mode = "sampled" if args.sample is not None else "auto"
    trials = args.sample if args.sample is not None else 1_000_000
    report = nf.verify_left_nearfield(mode=mode, seed=args.seed, trials=trials)
    presentation = nf.verify_presentation()
    _emit(
        {
            "schema": "nearfield-verify/1",
            "nearfield": nf.descriptor(),
            "axioms": report.as_dict(nf),
            "presentation": presentation.as_dict(),
        }
    )
    ok = (
        report.additive_abelian
        and report.multiplicative_group
        and report.left_distributive
        and report.right_distributive == (nf.n == 1)
        and presentation.relations_hold
    )
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_dist(args) -> int:
    nf = _build_from_args(args)
    if (args.alpha is None) != (args.beta is None):
        raise ValueError("--alpha and --beta must be given together")
    if args.alpha is None:
        members = nf.distributive_elements()
        _emit(
            {
                "schema": "nearfield-distributive-elements/1",
                "nearfield": nf.descriptor(),
                "count": int(members.size),
                "elements": [nf.element_str(int(i)) for i in members],
            }
        )
        return EXIT_OK
    alpha = nf.field.element_from_coeffs(_parse_coeffs(args.alpha))
    beta = nf.field.element_from_coeffs(_parse_coeffs(args.beta))
    report = distrib.distributor_report(nf, alpha, beta)
    _emit(report.as_dict(nf))
    return EXIT_OK if report.match else EXIT_MISMATCH


def cmd_sweep(args) -> int:
    nf = _build_from_args(args)
    sample = None if args.all else (args.seed, args.sample)
    if not args.all and args.sample is None:
        raise ValueError("choose --all or --sample COUNT")
    if args.output is not None:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            summary = distrib.sweep(nf, sample=sample, op_budget=args.op_budget, workers=args.workers, csv_out=fh, size_cap=args.size_cap)
        _emit(summary.as_dict())
    else:
        summary = distrib.sweep(nf, sample=sample, op_budget=args.op_budget, workers=args.workers, csv_out=sys.stdout, size_cap=args.size_cap)
        sys.stderr.write(json.dumps(summary.as_dict(), indent=2, sort_keys=True) + "\n")
    ok = summary.mismatches == 0 and summary.symmetry_ok
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_mapnr(args) -> int:
    name = args.group
    if name.upper() in ("Z2", "Z3", "Z4", "Z5", "V4"):
        group = mapnr.builtin_group(name)
    elif os.path.exists(name):
        group = mapnr.load_group(name)
    else:
        raise ValueError(f"unknown group {name!r}: not a builtin and not a file")
    report = mapnr.verify_left_nearring(group, seed=args.seed)
    dmaps = mapnr.distributive_maps(group)
    endos = mapnr.endomorphisms(group)
    dset = set(dmaps)
    closed_add = all(mapnr.map_add(group, f, g) in dset for f in dmaps for g in dmaps)
    closed_comp = all(mapnr.map_compose(group, f, g) in dset for f in dmaps for g in dmaps)
    _emit(
        {
            "schema": "nearfield-mapnr/1",
            "left_nearring": report.as_dict(),
            "distributive_map_count": len(dmaps),
            "distributive_maps": [list(h) for h in dmaps],
            "equals_endomorphisms": dmaps == endos,
            "closed_under_add": closed_add,
            "closed_under_compose": closed_comp,
        }
    )
    ok = (
        report.plus_is_group
        and report.compose_is_semigroup
        and report.left_distributive
        and report.right_distributive == (group.order == 1)
        and dmaps == endos
        and closed_add
        and closed_comp
    )
    return EXIT_OK if ok else EXIT_MISMATCH


def _add_field_flags(sp, with_verify_flags=False) -> None:
    sp.add_argument("q", type=int)
    sp.add_argument("n", type=int)
    sp.add_argument("--modulus", help="modulus coefficients, ascending, e.g. 2,0,0,0,1 for x^4+2")
    sp.add_argument("--generator", help="generator coefficients, ascending, e.g. 2,1 for x+2")
    sp.add_argument("--size-cap", type=int, default=None, help="maximum field size (env NEARFIELD_SIZE_CAP)")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="nearfield", description="Finite Dickson nearfields: build, verify, sweep.")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("pair", help="validate a Dickson pair")
    sp.add_argument("q", type=int)
    sp.add_argument("n", type=int)
    sp.add_argument("--format", choices=("json", "text"), default="json")
    sp.set_defaults(func=cmd_pair)

    sp = sub.add_parser("build", help="build a nearfield and print its descriptor")
    _add_field_flags(sp)
    sp.set_defaults(func=cmd_build)

    sp = sub.add_parser("verify", help="check nearfield axioms and the multiplicative-group relations")
    _add_field_flags(sp)
    sp.add_argument("--sample", type=int, default=None, help="sampled triples instead of the exhaustive scan")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("dist", help="distributive elements, or the distributor set of one pair")
    _add_field_flags(sp)
    sp.add_argument("--alpha", help="coefficients of the first operand")
    sp.add_argument("--beta", help="coefficients of the second operand")
    sp.set_defaults(func=cmd_dist)

    sp = sub.add_parser("sweep", help="distributor sets over all (or sampled) ordered pairs")
    _add_field_flags(sp)
    group = sp.add_mutually_exclusive_group()
    group.add_argument("--all", action="store_true", help="every ordered pair of nonzero elements")
    group.add_argument("--sample", type=int, default=None, metavar="COUNT")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=0, help="0 = available parallelism")
    sp.add_argument("--op-budget", type=int, default=distrib.DEFAULT_OP_BUDGET)
    sp.add_argument("--output", help="write the CSV table to this path (summary JSON goes to stdout)")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("mapnr", help="self-map near-ring M(G) of a small group")
    sp.add_argument("group", help="builtin name (Z2, Z3, Z4, Z5, V4) or a JSON file")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_mapnr)

    args = parser.parse_args(argv)
    if getattr(args, "size_cap", None) is None and hasattr(args, "size_cap"):
        args.size_cap = int(os.environ.get("NEARFIELD_SIZE_CAP", DEFAULT_SIZE_CAP))
    if getattr(args, "workers", None) == 0:
        args.workers = os.cpu_count() or 1

    try:
        return args.func(args)
    except (NotADicksonPairError, FieldError, distrib.BudgetExceededError, mapnr.TooLargeError, mapnr.InvalidGroupError, ValueError, OSError) as exc:
        return _error(exc)


def run() -> None:
    sys.exit(main())
