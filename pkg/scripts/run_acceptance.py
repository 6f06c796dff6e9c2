#!/usr/bin/env python3
"""
Acceptance battery

Runs the worked examples and the randomized property batteries at full size
and logs a pass/fail summary per battery. Exits 1 if any battery fails.

Usage:
    python scripts/run_acceptance.py
    python scripts/run_acceptance.py --seed 7 --only shadow_minimality ustar
    python scripts/run_acceptance.py --scale 0.1      # quick run with fewer instances
"""

import os
import sys
import time
import argparse
import logging
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

# Add project root to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from shadowcoupling.config import DEFAULT_GRID, USTAR_CERTIFICATE_STEPS, configure_logging, get_seed
from shadowcoupling.coupling import antitone_coupling, cost, increasing_coupling, verify
from shadowcoupling.curves import kernel_limit_check, triple_grid
from shadowcoupling.instances import (
    random_cd_instance,
    random_convex_pwl,
    random_martingale_instance,
    random_pcd_instance,
    random_pwl,
    random_separated_instance,
    random_split,
)
from shadowcoupling.measure import DiscreteMeasure, dirac, lift
from shadowcoupling.oracle import min_over_couplings, spence_mirrlees_cost
from shadowcoupling.order import OrderKind, compare, maximal_element
from shadowcoupling.pwl import (
    affine,
    call_potential,
    convex_hull,
    linear_combine,
    put_potential,
    sup_difference,
)
from shadowcoupling.regime import c_of, split_at_ustar, support_separation_holds, ustar
from shadowcoupling.shadow import shadow, shadow_is_minimal
from shadowcoupling.validation import check_triples

configure_logging("INFO")
logger = logging.getLogger(__name__)

F = Fraction


def _m(*pairs) -> DiscreteMeasure:
    return DiscreteMeasure.from_pairs(pairs)


# ============================================================================
# BATTERIES (each returns (passed, total))
# ============================================================================

def worked_examples(seed: int, scale: float) -> Tuple[int, int]:
    nu2 = _m((-2, F(1, 2)), (1, F(1, 2)))
    nu3 = _m((-2, F(1, 3)), (0, F(1, 3)), (2, F(1, 3)))
    mu3 = _m((-2, F(1, 3)), (2, F(1, 3)))
    xi = dirac(0, F(1, 3))
    checks = [
        maximal_element(dirac(0, F(1, 2)), nu2) == dirac(-2, F(1, 2)),
        bool(compare(dirac(0), nu2, OrderKind.CONVEX_DECREASING)),
        bool(compare(dirac(1, F(1, 2)), dirac(0, F(1, 2)), OrderKind.CONVEX_DECREASING)),
        not compare(dirac(0, F(1, 2)), dirac(1, F(1, 2)), OrderKind.CONVEX_DECREASING),
        shadow(mu3, nu3).shadow == mu3,
        shadow(xi, mu3).shadow == _m((-2, F(1, 6)), (2, F(1, 6))),
        shadow(xi, nu3).shadow == xi,
        shadow(xi, shadow(mu3, nu3).shadow).shadow != shadow(xi, nu3).shadow,
        ustar(dirac(0), nu2) == F(3, 4),
        ustar(_m((-1, F(1, 2)), (1, F(1, 2))), _m((-2, F(1, 2)), (0, F(1, 2)))) == F(1, 2),
    ]
    return sum(checks), len(checks)


def shadow_minimality(seed: int, scale: float) -> Tuple[int, int]:
    n = max(1, int(100 * scale))
    passed = 0
    for i in range(n):
        inst = random_pcd_instance(seed + i)
        if shadow_is_minimal(inst.mu, inst.nu, shadow(inst.mu, inst.nu)):
            passed += 1
    return passed, n


def associativity(seed: int, scale: float) -> Tuple[int, int]:
    n = max(1, int(200 * scale))
    passed = 0
    for i in range(n):
        inst = random_pcd_instance(seed + i)
        mu1, mu2 = random_split(seed + 10_000 + i, inst.mu)
        s1 = shadow(mu1, inst.nu).shadow if mu1 else DiscreteMeasure()
        rest = inst.nu - s1
        ok = compare(mu2, rest, OrderKind.POSITIVE_CONVEX_DECREASING).holds
        s2 = shadow(mu2, rest).shadow if mu2 else DiscreteMeasure()
        ok = ok and shadow(inst.mu, inst.nu).shadow == s1 + s2

        xi, _ = random_split(seed + 20_000 + i, inst.mu)
        if xi:
            full = shadow(inst.mu, inst.nu).shadow
            ok = ok and shadow(xi, full).shadow == shadow(xi, inst.nu).shadow
            ok = ok and shadow(xi, inst.nu).shadow <= full
        passed += ok
    return passed, n


def ustar_certificates(seed: int, scale: float) -> Tuple[int, int]:
    n = max(1, int(100 * scale))
    passed = 0
    for i in range(n):
        inst = random_cd_instance(seed + i)
        u = ustar(inst.mu, inst.nu)
        ok = c_of(inst.mu, inst.nu, u) == 0
        if u < 1:
            ok = ok and all(
                c_of(inst.mu, inst.nu, u + (1 - u) / 2 ** j) > 0
                for j in range(1, USTAR_CERTIFICATE_STEPS + 1)
            )
        ok = ok and support_separation_holds(split_at_ustar(inst.mu, inst.nu))
        passed += ok
    return passed, n


def verification_battery(seed: int, scale: float) -> Tuple[int, int]:
    n = max(1, int(100 * scale))
    passed = 0
    for i in range(n):
        inst = random_cd_instance(seed + i)
        report = verify(increasing_coupling(inst.mu, inst.nu), inst.mu, inst.nu)
        if not report.all_ok:
            logger.warning(f"seed {seed + i} fails {report.failures()}")
        passed += report.all_ok
    return passed, n


def sot_optimality(seed: int, scale: float) -> Tuple[int, int]:
    n = max(1, int(100 * scale))
    passed = 0
    for i in range(n):
        inst = random_cd_instance(seed + i)
        table = spence_mirrlees_cost(inst.mu, inst.nu)
        lp = min_over_couplings(inst.mu, inst.nu, table, "supermartingale")
        passed += cost(increasing_coupling(inst.mu, inst.nu), table) == lp.value
    return passed, n


def regime_specializations(seed: int, scale: float) -> Tuple[int, int]:
    n = max(1, int(50 * scale))
    passed = 0
    for i in range(n):
        inst = random_martingale_instance(seed + i)
        report = verify(increasing_coupling(inst.mu, inst.nu), inst.mu, inst.nu)
        pi = increasing_coupling(inst.mu, inst.nu)
        passed += report.all_ok and all(r.drift == 0 for r in pi.rows)

        sep = random_separated_instance(seed + i)
        passed += increasing_coupling(sep.mu, sep.nu) == antitone_coupling(sep.mu, sep.nu)
    return passed, 2 * n


def functional_representation(seed: int, scale: float) -> Tuple[int, int]:
    n = max(1, int(20 * scale))
    passed = 0
    for i in range(n):
        inst = random_cd_instance(seed + i)
        triples = triple_grid(inst.mu, inst.nu, DEFAULT_GRID)
        problems = check_triples(triples)
        ok = not problems and all(kernel_limit_check(inst.mu, inst.nu, t.u, 8) for t in triples)
        if problems:
            logger.warning(f"seed {seed + i}: {problems[0]}")
        passed += ok
    return passed, n


def pwl_identities(seed: int, scale: float) -> Tuple[int, int]:
    n = max(1, int(500 * scale))
    passed = 0
    for i in range(n):
        s = seed + i
        f = random_pwl(s, -1 - i % 2, 1 + i % 3)
        hull = convex_hull(f)
        ok = convex_hull(hull) == hull

        g = random_convex_pwl(s + 1, -1, 0)
        ok = ok and convex_hull(f - g) == convex_hull(hull - g)

        a = random_convex_pwl(s + 2, 0, 1)
        b = random_convex_pwl(s + 3, 0, 2)
        ok = ok and (b - convex_hull(b - a)).is_convex()

        inst = random_pcd_instance(s)
        pf, pg = put_potential(inst.mu), put_potential(inst.nu)
        h = convex_hull(pg - pf)
        slope = inst.nu.mass - inst.mu.mass
        tail = affine(slope, inst.mu.mean - inst.nu.mean)
        eta = sup_difference(tail, pg - pf)
        ok = ok and h.right_slope == slope and eta >= 0
        ok = ok and h.tail_intercepts()[1] == inst.mu.mean - inst.nu.mean - eta

        identity = linear_combine(call_potential(inst.nu), put_potential(inst.nu), 1, -1)
        ok = ok and identity == affine(-inst.nu.mass, inst.nu.mean)
        passed += ok
    return passed, n


BATTERIES: Dict[str, Callable[[int, float], Tuple[int, int]]] = {
    "worked_examples": worked_examples,
    "shadow_minimality": shadow_minimality,
    "associativity": associativity,
    "ustar": ustar_certificates,
    "verification": verification_battery,
    "sot_optimality": sot_optimality,
    "regimes": regime_specializations,
    "functional_representation": functional_representation,
    "pwl_identities": pwl_identities,
}


def main():
    parser = argparse.ArgumentParser(description="Run the acceptance battery")
    parser.add_argument("--seed", type=int, default=None, help="base seed (default: SHADOW_SEED)")
    parser.add_argument("--only", nargs="+", choices=sorted(BATTERIES), help="run only these batteries")
    parser.add_argument("--scale", type=float, default=1.0, help="fraction of the full instance counts")
    args = parser.parse_args()

    seed = args.seed if args.seed is not None else get_seed()
    names: List[str] = args.only or list(BATTERIES)

    logger.info("=" * 60)
    logger.info(f"ACCEPTANCE BATTERY (seed {seed}, scale {args.scale})")
    logger.info("=" * 60)

    failed = []
    for name in names:
        start = time.perf_counter()
        passed, total = BATTERIES[name](seed, args.scale)
        elapsed = time.perf_counter() - start
        status = "PASS" if passed == total else "FAIL"
        logger.info(f"{name:<26} {status}  {passed}/{total}  ({elapsed:.1f}s)")
        if passed != total:
            failed.append(name)

    logger.info("=" * 60)
    if failed:
        logger.error(f"Failed: {', '.join(failed)}")
        sys.exit(1)
    logger.info("All batteries passed")


if __name__ == "__main__":
    main()
