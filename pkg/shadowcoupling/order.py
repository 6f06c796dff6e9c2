"""
Decision procedures for the stochastic orders between finite measures.

    pointwise                    a(A) <= b(A) for every set A
    convex                       equal mass, P_a <= P_b, equal means
    convex_decreasing            equal mass, P_a <= P_b
    positive_convex_decreasing   a <=_cd T^b(a) (the maximal element)
    positive_convex              pcd and C_a <= C_b

Potential differences are piecewise linear, so signs on breakpoints and the
two tails decide each inequality exactly. compare() never raises; a failed
decision carries a witness naming the violating evaluation point.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Optional

from .config import checks_enabled
from .errors import DomainError, InternalInconsistencyError
from .measure import ZERO, DiscreteMeasure, quantile
from .pwl import call_potential, linear_combine, put_potential, sup_difference

logger = logging.getLogger(__name__)


class OrderKind(Enum):
    POINTWISE = "pointwise"
    CONVEX = "convex"
    CONVEX_DECREASING = "convex_decreasing"
    POSITIVE_CONVEX = "positive_convex"
    POSITIVE_CONVEX_DECREASING = "positive_convex_decreasing"


# short names accepted by the CLI
ORDER_ALIASES = {
    "le": OrderKind.POINTWISE,
    "c": OrderKind.CONVEX,
    "cd": OrderKind.CONVEX_DECREASING,
    "pc": OrderKind.POSITIVE_CONVEX,
    "pcd": OrderKind.POSITIVE_CONVEX_DECREASING,
}


@dataclass(frozen=True)
class OrderResult:
    holds: bool
    kind: OrderKind
    witness: Optional[str] = None
    point: Optional[Fraction] = None

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> Dict:
        return {
            "holds": self.holds,
            "order": self.kind.value,
            "witness": self.witness,
            "point": None if self.point is None else str(self.point),
        }


def _ok(kind: OrderKind) -> OrderResult:
    return OrderResult(True, kind)


def _fail(kind: OrderKind, witness: str, point: Optional[Fraction] = None) -> OrderResult:
    return OrderResult(False, kind, witness, point)


def _pointwise(a: DiscreteMeasure, b: DiscreteMeasure) -> OrderResult:
    for x, w in a.atoms:
        have = b.weight_at(x)
        if have < w:
            return _fail(OrderKind.POINTWISE, f"atom at {x}: {w} > {have}", x)
    return _ok(OrderKind.POINTWISE)


def _convex_decreasing(a: DiscreteMeasure, b: DiscreteMeasure, kind: OrderKind) -> OrderResult:
    if a.mass != b.mass:
        return _fail(kind, f"masses differ: {a.mass} vs {b.mass}")
    # equal masses: D has zero slope on both tails, breakpoints decide
    d = linear_combine(put_potential(b), put_potential(a), 1, -1)
    for k, v in d.points:
        if v < 0:
            return _fail(kind, f"P_a({k}) exceeds P_b({k}) by {-v}", k)
    return _ok(kind)


def compare(a: DiscreteMeasure, b: DiscreteMeasure, kind: OrderKind) -> OrderResult:
    """
    Decide a <= b in the given order.

    Args:
        a, b: finite measures (masses may differ for pointwise and the positive orders)
        kind: which order to decide

    Returns:
        OrderResult, truthy when the order holds; on failure it names the
        violated inequality and, when there is one, the evaluation point
    """
    if kind is OrderKind.POINTWISE:
        return _pointwise(a, b)

    if kind is OrderKind.CONVEX_DECREASING:
        return _convex_decreasing(a, b, kind)

    if kind is OrderKind.CONVEX:
        res = _convex_decreasing(a, b, kind)
        if not res:
            return res
        if a.mean != b.mean:
            return _fail(kind, f"means differ: {a.mean} vs {b.mean}")
        return _ok(kind)

    if kind is OrderKind.POSITIVE_CONVEX_DECREASING:
        if a.mass > b.mass:
            return _fail(kind, f"mass {a.mass} exceeds available {b.mass}")
        res = _convex_decreasing(a, maximal_element(a, b), kind)
        if not res:
            return _fail(kind, f"not below the maximal element: {res.witness}", res.point)
        return _ok(kind)

    if kind is OrderKind.POSITIVE_CONVEX:
        res = compare(a, b, OrderKind.POSITIVE_CONVEX_DECREASING)
        if not res:
            return _fail(kind, res.witness, res.point)
        ca, cb = call_potential(a), call_potential(b)
        if sup_difference(ca, cb) > 0:
            diff = linear_combine(ca, cb, 1, -1)
            k = max(diff.points, key=lambda p: p[1])[0]
            return _fail(kind, f"C_a({k}) exceeds C_b({k})", k)
        return _ok(kind)

    raise DomainError(f"unknown order {kind!r}")


def maximal_element(mu: DiscreteMeasure, nu: DiscreteMeasure, side: str = "left") -> DiscreteMeasure:
    """
    T^nu(mu): the left-most sub-measure of nu with mass mu(R).

    The result does not depend on which quantile version cuts nu.
    """
    m = mu.mass
    total = nu.mass
    if m > total:
        raise DomainError(f"mass of mu ({m}) exceeds mass of nu ({total})")
    if m == total:
        return nu
    if m == 0:
        return ZERO
    if side == "left":
        g = quantile(nu, m, "left")
    else:
        g = quantile(nu, m, "right")
    below = nu.restrict(hi=g)
    return below + DiscreteMeasure(((g, m - below.mass),))


def disjoint_support_pc(eta: DiscreteMeasure, chi: DiscreteMeasure) -> bool:
    """
    Mass criterion for eta <=_pc chi when the supports are disjoint:
    0 < eta(R) <= min(chi((-inf, l_eta]), chi([r_eta, inf))).
    """
    common = set(eta.locations) & set(chi.locations)
    if common:
        raise DomainError(f"supports overlap at {sorted(common)}")
    m = eta.mass
    if m == 0:
        return False
    left = chi.cdf(eta.support_min)
    right = chi.mass - chi.cdf_left(eta.support_max)
    holds = m <= min(left, right)
    if holds and checks_enabled():
        if not compare(eta, chi, OrderKind.POSITIVE_CONVEX):
            raise InternalInconsistencyError(
                "disjoint-support criterion holds but the positive convex order fails"
            )
    return holds
