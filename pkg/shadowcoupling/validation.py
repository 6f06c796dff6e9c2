"""
Sanity checks for instances.

Surfaces odd or unusable inputs as warnings (no hard failures); the CLI
prints them for `validate` and logs them at WARNING elsewhere.
"""

from typing import List

from .measure import DiscreteMeasure
from .order import OrderKind, compare


def check_measure(m: DiscreteMeasure, name: str) -> List[str]:
    """Warnings about a single measure."""
    warnings = []
    if m.is_zero:
        warnings.append(f"{name} is the zero measure")
        return warnings
    if m.mass != 1:
        warnings.append(f"{name} has mass {m.mass}, not a probability (coupling commands need mass 1)")
    if len(m) == 1:
        warnings.append(f"{name} is a point mass at {m.atoms[0][0]}")
    return warnings


def check_instance(mu: DiscreteMeasure, nu: DiscreteMeasure) -> List[str]:
    """
    Check a (mu, nu) pair for the preconditions of the constructions.
    Returns list of warning strings (empty if none).
    """
    warnings = check_measure(mu, "mu") + check_measure(nu, "nu")
    if mu.is_zero or nu.is_zero:
        return warnings

    if mu.mass > nu.mass:
        warnings.append(f"mu is heavier than nu ({mu.mass} > {nu.mass}); no shadow exists")
    pcd = compare(mu, nu, OrderKind.POSITIVE_CONVEX_DECREASING)
    if not pcd:
        warnings.append(f"mu is not <=_pcd nu ({pcd.witness}); shadow undefined")
    if mu.mass == nu.mass:
        cd = compare(mu, nu, OrderKind.CONVEX_DECREASING)
        if not cd:
            warnings.append(f"mu is not <=_cd nu ({cd.witness}); coupling constructions undefined")
        elif mu.mean == nu.mean:
            warnings.append("equal means: the pair is in convex order and u* is the full mass")
        elif nu.support_max < mu.support_min:
            warnings.append("nu lies strictly left of mu: every point is a supermartingale point")
    return warnings


def check_triples(triples) -> List[str]:
    """
    Check a u-sorted list of SupportTriples for the shape of the lifted kernel.
    Returns list of violation strings (empty if none).
    """
    from .curves import Region

    warnings = []
    martingale = [t for t in triples if t.region is Region.MARTINGALE]
    downward = [t for t in triples if t.region is Region.SUPERMARTINGALE]

    for t in martingale:
        if t.T is not None or not (t.R <= t.G <= t.S):
            warnings.append(f"u={t.u}: expected R <= G <= S, got R={t.R}, G={t.G}, S={t.S}")
    for t in downward:
        if t.R is not None or t.S is not None or not (t.T < t.G):
            warnings.append(f"u={t.u}: expected T < G, got T={t.T}, G={t.G}")

    for i, a in enumerate(martingale):
        for b in martingale[i + 1:]:
            if b.S < a.S:
                warnings.append(f"S decreases between u={a.u} and u={b.u}")
            if a.R < b.R < a.S:
                warnings.append(f"R({b.u})={b.R} falls inside ({a.R}, {a.S}) at u={a.u}")
        for b in downward:
            if a.R < b.T < a.S:
                warnings.append(f"T({b.u})={b.T} falls inside ({a.R}, {a.S}) at u={a.u}")
    for a, b in zip(downward, downward[1:]):
        if b.T > a.T:
            warnings.append(f"T increases between u={a.u} and u={b.u}")
    return warnings
