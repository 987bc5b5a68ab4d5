"""Command line entry point: ``dihedral-tate <subcommand> ...``.

Exit codes: 0 when every check passes, 1 when at least one fails, 2 on bad
input (unknown flags, unreadable or malformed files, contract violations).
Output is plain text and depends only on the arguments.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .arithmetic import CHECKS, DataError, load_field_data, local_cohomology_orders, verify_all
from .cohomology import CohomologyError, FiniteAbGroup, herbrand_quotient, odd_split, tate
from .dmodule import DModule, DModuleError, RandomModuleSpec, SubgroupSpec
from .identities import FuzzConfig, fuzz

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
U64 = 2**64


class InputError(Exception):
    pass


def _q_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma separated list of integers, got {text!r}")


def _seed(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}")
    if not 0 <= n < U64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return n


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {n}")
    return n


def _checks(text: str) -> tuple[str, ...]:
    names = tuple(x.strip() for x in text.split(",") if x.strip())
    bad = [x for x in names if x not in CHECKS]
    if bad or not names:
        raise argparse.ArgumentTypeError(f"unknown checks {bad}; choose from {','.join(CHECKS)}")
    return names


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dihedral-tate", description="Tate cohomology of dihedral modules.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("fuzz", help="run the identity checks on random modules")
    p.add_argument("--q", type=_q_list, required=True, help="comma separated odd q values")
    p.add_argument("--trials", type=_positive, required=True)
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--max-rank", type=_positive, default=None, help="generators per module (default 6)")
    p.add_argument("--torsion-bound", type=_positive, default=None, help="largest torsion exponent (default 36)")
    p.add_argument("--jobs", type=_positive, default=1, help="worker processes; output order is unchanged")
    level = p.add_mutually_exclusive_group()
    level.add_argument("--quiet", action="store_true", help="print only failures and the summary")
    level.add_argument("--verbose", action="store_true", help="print every sub-check")

    p = sub.add_parser("cohomology", help="Tate cohomology group of a module")
    p.add_argument("--module", type=Path, required=True)
    p.add_argument("--subgroup", required=True, help="G, Sigma, SigmaPrime, D, 1, rot:n or ref:i")
    p.add_argument("--degree", type=int, required=True)

    p = sub.add_parser("herbrand", help="Herbrand quotient for a cyclic subgroup")
    p.add_argument("--module", type=Path, required=True)
    p.add_argument("--subgroup", required=True)

    p = sub.add_parser("verify", help="verify the class number statements on a field dataset")
    p.add_argument("--field", type=Path, required=True)
    p.add_argument("--checks", type=_checks, default=tuple(CHECKS), help=f"subset of {','.join(CHECKS)}")

    p = sub.add_parser("local", help="orders of the local unit cohomology from the ramification table")
    p.add_argument("--field", type=Path, required=True)
    return parser


def _read_module(path: Path) -> DModule:
    try:
        return DModule.loads(path.read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}")
    except (json.JSONDecodeError, DModuleError, ValueError) as exc:
        raise InputError(f"bad module file {path}: {exc}")


def _subgroup(text: str, q: int) -> SubgroupSpec:
    try:
        return SubgroupSpec.parse(text, q)
    except ValueError as exc:
        raise InputError(str(exc))


def _divisors(G: FiniteAbGroup) -> str:
    return " ".join(map(str, G.divisors)) or "1"


def cmd_fuzz(args, out) -> int:
    spec = RandomModuleSpec()
    if args.max_rank is not None:
        spec = replace(spec, max_rank=args.max_rank)
    if args.torsion_bound is not None:
        spec = replace(spec, torsion_exponent_bound=args.torsion_bound)
    try:
        config = FuzzConfig(q_list=args.q, trials=args.trials, spec=spec, seed=args.seed)
    except ValueError as exc:
        raise InputError(str(exc))
    report = fuzz(config, jobs=args.jobs)
    for line in report.lines(quiet=args.quiet, verbose=args.verbose):
        print(line, file=out)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_cohomology(args, out) -> int:
    M = _read_module(args.module)
    H = _subgroup(args.subgroup, M.q)
    try:
        T = tate(M, H, args.degree)
    except CohomologyError as exc:
        raise InputError(str(exc))
    print(_divisors(T.group), file=out)
    if T.involution is not None:
        plus, minus = odd_split(T)
        print(f"plus {_divisors(plus)}", file=out)
        print(f"minus {_divisors(minus)}", file=out)
    return EXIT_OK


def cmd_herbrand(args, out) -> int:
    M = _read_module(args.module)
    H = _subgroup(args.subgroup, M.q)
    try:
        Q = herbrand_quotient(M, H)
    except CohomologyError as exc:
        raise InputError(str(exc))
    print(Q, file=out)
    return EXIT_OK


def _load_field(path: Path):
    try:
        return load_field_data(path)
    except DataError as exc:
        raise InputError(str(exc))


def cmd_verify(args, out) -> int:
    fd = _load_field(args.field)
    try:
        report = verify_all(fd, args.checks)
    except DataError as exc:
        raise InputError(str(exc))
    for line in report.lines():
        print(line, file=out)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_local(args, out) -> int:
    fd = _load_field(args.field)
    try:
        lo = local_cohomology_orders(fd)
    except DataError as exc:
        raise InputError(str(exc))
    ok = lo.identity_holds()
    print(f"h0_D {lo.h0_D}", file=out)
    print(f"h1_D {lo.h1_D}", file=out)
    print(f"h1_G {lo.h1_G}", file=out)
    print(f"h1_G = h1_D*h0_D (odd parts) {'PASS' if ok else 'FAIL'}", file=out)
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "fuzz": cmd_fuzz,
    "cohomology": cmd_cohomology,
    "herbrand": cmd_herbrand,
    "verify": cmd_verify,
    "local": cmd_local,
}


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args, out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
