"""
Command-line front end.

Usage:
    python main.py shadow -i inst.json
    python main.py couple -i inst.json --method increasing --verify
    python main.py ustar -i inst.json
    python main.py decompose -i inst.json
    python main.py curves -i inst.json --grid 64 --csv -o output/curves.csv
    python main.py verify -i inst.json [--coupling pi.json]
    python main.py oracle -i inst.json --check minimality|optimality
    python main.py generate --kind cd --seed 7 -o inst.json
    python main.py compare -i inst.json --order pcd
    python main.py validate -i inst.json

Instead of -i, --seed N draws a random convex-decreasing instance.
Results go to stdout (JSON, CSV with --csv) or to -o.

Exit codes:
    0  success, or every verification passed
    1  a verification, order decision or certification failed
    2  input, order-precondition or size-guard error
"""

import argparse
import logging
import sys
from typing import List, Optional

from .config import DEFAULT_GRID, configure_logging, get_seed
from .coupling import antitone_coupling, cost, increasing_coupling, quantile_coupling, verify
from .curves import triple_grid
from .errors import InputFormatError, InternalInconsistencyError, ShadowCouplingError
from .export import (
    export_curves_csv,
    export_instance,
    export_to_json,
    load_coupling,
    load_instance,
)
from .instances import GENERATORS, Instance, random_cd_instance
from .oracle import min_over_couplings, spence_mirrlees_cost
from .order import ORDER_ALIASES, compare
from .regime import decompose, ustar
from .shadow import shadow, shadow_is_minimal
from .validation import check_instance

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2

COUPLINGS = {
    "increasing": increasing_coupling,
    "antitone": antitone_coupling,
    "quantile": quantile_coupling,
}


def _instance(args, warn: bool = True) -> Instance:
    if args.input:
        instance = load_instance(args.input)
    elif args.seed is not None:
        instance = random_cd_instance(args.seed)
    else:
        raise InputFormatError("pass an instance file with -i or a seed with --seed")
    if warn:
        _warn(instance)
    return instance


def _require_probabilities(instance: Instance) -> None:
    for name, m in (("mu", instance.mu), ("nu", instance.nu)):
        if m.mass != 1:
            raise InputFormatError(f"{name} has mass {m.mass}; coupling commands need probability measures")


def _warn(instance: Instance) -> None:
    for warning in check_instance(instance.mu, instance.nu):
        logger.warning(warning)


# ============================================================================
# SUBCOMMANDS
# ============================================================================

def cmd_shadow(args) -> int:
    inst = _instance(args)
    export_to_json(shadow(inst.mu, inst.nu).to_dict(), args.output)
    return EXIT_OK


def cmd_couple(args) -> int:
    inst = _instance(args)
    _require_probabilities(inst)
    pi = COUPLINGS[args.method](inst.mu, inst.nu)
    payload = {"method": args.method, "coupling": pi.to_dict()}
    code = EXIT_OK
    if args.verify:
        report = verify(pi, inst.mu, inst.nu)
        payload["verification"] = report.to_dict()
        if not report.all_ok:
            logger.warning(f"verification failed: {', '.join(report.failures())}")
            code = EXIT_FAILED
    export_to_json(payload, args.output)
    return code


def cmd_ustar(args) -> int:
    inst = _instance(args)
    value = str(ustar(inst.mu, inst.nu))
    if args.output:
        export_to_json({"ustar": value}, args.output)
    else:
        print(value)
    return EXIT_OK


def cmd_decompose(args) -> int:
    inst = _instance(args)
    payload = decompose(inst.mu, inst.nu).to_dict()
    payload["ustar"] = str(ustar(inst.mu, inst.nu))
    export_to_json(payload, args.output)
    return EXIT_OK


def cmd_curves(args) -> int:
    inst = _instance(args)
    _require_probabilities(inst)
    if args.grid < 1:
        raise InputFormatError(f"--grid must be >= 1, got {args.grid}")
    triples = triple_grid(inst.mu, inst.nu, args.grid)
    if args.csv:
        export_curves_csv(triples, args.output)
    else:
        export_to_json({"triples": [t.to_dict() for t in triples]}, args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = _instance(args)
    _require_probabilities(inst)
    pi = load_coupling(args.coupling) if args.coupling else increasing_coupling(inst.mu, inst.nu)
    report = verify(pi, inst.mu, inst.nu)
    export_to_json(report.to_dict(), args.output)
    return EXIT_OK if report.all_ok else EXIT_FAILED


def cmd_oracle(args) -> int:
    inst = _instance(args)
    if args.check == "minimality":
        ok = shadow_is_minimal(inst.mu, inst.nu, shadow(inst.mu, inst.nu))
        payload = {"check": "minimality", "ok": ok}
    else:
        _require_probabilities(inst)
        table = spence_mirrlees_cost(inst.mu, inst.nu)
        pi_cost = cost(increasing_coupling(inst.mu, inst.nu), table)
        lp_value = min_over_couplings(inst.mu, inst.nu, table, "supermartingale").value
        ok = pi_cost == lp_value
        payload = {"check": "optimality", "ok": ok, "cost": str(pi_cost), "lp_value": str(lp_value)}
    export_to_json(payload, args.output)
    return EXIT_OK if ok else EXIT_FAILED


def cmd_generate(args) -> int:
    seed = args.seed if args.seed is not None else get_seed()
    instance = GENERATORS[args.kind](seed)
    export_instance(instance, args.output)
    return EXIT_OK


def cmd_compare(args) -> int:
    inst = _instance(args)
    result = compare(inst.mu, inst.nu, ORDER_ALIASES[args.order])
    export_to_json(result.to_dict(), args.output)
    return EXIT_OK if result.holds else EXIT_FAILED


def cmd_validate(args) -> int:
    inst = _instance(args, warn=False)
    warnings = check_instance(inst.mu, inst.nu)
    out = sys.stdout if not args.output else open(args.output, "w", encoding="utf-8")
    try:
        for w in warnings:
            print(w, file=out)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


# ============================================================================
# PARSER
# ============================================================================

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-i", "--input", help="instance file (JSON with mu and nu)")
    common.add_argument("-o", "--output", help="output file (default: stdout)")
    common.add_argument("--seed", type=int, help="use a random instance from this seed instead of -i")

    parser = argparse.ArgumentParser(
        prog="shadowcoupling",
        description="Shadows, u*, support curves and the increasing supermartingale coupling",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("shadow", parents=[common], help="shadow of mu in nu").set_defaults(func=cmd_shadow)

    p = sub.add_parser("couple", parents=[common], help="build a coupling")
    p.add_argument("--method", choices=sorted(COUPLINGS), default="increasing")
    p.add_argument("--verify", action="store_true", help="attach the verification report")
    p.set_defaults(func=cmd_couple)

    sub.add_parser("ustar", parents=[common], help="regime switch level u*").set_defaults(func=cmd_ustar)
    sub.add_parser("decompose", parents=[common], help="irreducible decomposition").set_defaults(func=cmd_decompose)

    p = sub.add_parser("curves", parents=[common], help="(u, G, R, S, T, phi) on a grid")
    p.add_argument("--grid", type=int, default=DEFAULT_GRID)
    p.add_argument("--csv", action="store_true", help="CSV instead of JSON")
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("verify", parents=[common], help="check a coupling (default: the increasing one)")
    p.add_argument("--coupling", help="coupling file to verify")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", parents=[common], help="LP certification")
    p.add_argument("--check", choices=["minimality", "optimality"], required=True)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("generate", parents=[common], help="write a random instance")
    p.add_argument("--kind", choices=sorted(GENERATORS), default="cd")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("compare", parents=[common], help="decide an order with witness")
    p.add_argument("--order", choices=sorted(ORDER_ALIASES), default="cd")
    p.set_defaults(func=cmd_compare)

    sub.add_parser("validate", parents=[common], help="print instance warnings").set_defaults(func=cmd_validate)
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    """Parse argv, run one subcommand and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    try:
        return args.func(args)
    except InternalInconsistencyError as e:
        logger.error(f"certification failed: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILED
    except ShadowCouplingError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    configure_logging("WARNING")
    sys.exit(run())


if __name__ == "__main__":
    main()
