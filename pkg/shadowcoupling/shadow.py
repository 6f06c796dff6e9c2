"""
Shadow measures.

For mu <=_pcd nu the shadow S^nu(mu) is the <=_cd-minimal measure eta with
mu <=_cd eta <= nu. It is computed through its potential,

    P_S = P_nu - (P_nu - P_mu)^c,

and the excess c_{mu,nu} = mean(mu) - mean(S) measures how much drift the
embedding needs (zero exactly when the shadow is a martingale target).
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List

from .config import checks_enabled
from .errors import InternalInconsistencyError, OrderViolationError
from .measure import DiscreteMeasure
from .order import OrderKind, compare
from .pwl import PwlFunction, convex_hull, evaluate, linear_combine, measure_of, put_potential

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ShadowResult:
    shadow: DiscreteMeasure
    hull: PwlFunction
    excess: Fraction

    def to_dict(self) -> Dict:
        return {
            "shadow": self.shadow.to_dict()["atoms"],
            "excess": str(self.excess),
        }


def _check_result(mu: DiscreteMeasure, nu: DiscreteMeasure, result: ShadowResult) -> None:
    s = result.shadow
    problems = []
    if s.mass != mu.mass:
        problems.append(f"mass {s.mass} != {mu.mass}")
    if result.excess < 0:
        problems.append(f"negative excess {result.excess}")
    if not compare(s, nu, OrderKind.POINTWISE):
        problems.append("shadow is not dominated by nu")
    if not compare(mu, s, OrderKind.CONVEX_DECREASING):
        problems.append("mu is not <=_cd shadow")
    if problems:
        raise InternalInconsistencyError("shadow invariants failed: " + "; ".join(problems))


def shadow(mu: DiscreteMeasure, nu: DiscreteMeasure) -> ShadowResult:
    """
    S^nu(mu) by the potential formula.

    Args:
        mu: source measure
        nu: target measure with mu <=_pcd nu

    Returns:
        ShadowResult with the shadow, the hull of P_nu - P_mu and the excess

    Raises:
        OrderViolationError: if mu is not <=_pcd nu
    """
    res = compare(mu, nu, OrderKind.POSITIVE_CONVEX_DECREASING)
    if not res:
        raise OrderViolationError(f"shadow needs mu <=_pcd nu: {res.witness}", res.point)
    p_nu = put_potential(nu)
    hull = convex_hull(linear_combine(p_nu, put_potential(mu), 1, -1))
    s = measure_of(linear_combine(p_nu, hull, 1, -1))
    result = ShadowResult(s, hull, mu.mean - s.mean)
    if checks_enabled():
        _check_result(mu, nu, result)
    logger.debug("shadow of %d atoms into %d atoms: %d atoms, excess %s",
                 len(mu), len(nu), len(s), result.excess)
    return result


def excess(mu: DiscreteMeasure, nu: DiscreteMeasure) -> Fraction:
    return shadow(mu, nu).excess


def shadow_sequence(parts: Iterable[DiscreteMeasure], nu: DiscreteMeasure) -> List[DiscreteMeasure]:
    """
    Shadows of consecutive parts, each into what the previous ones left of nu.
    By associativity their running sums are the shadows of the partial sums.
    """
    remaining = nu
    out = []
    for part in parts:
        s = shadow(part, remaining).shadow
        out.append(s)
        remaining = remaining - s
    return out


def shadow_is_minimal(mu: DiscreteMeasure, nu: DiscreteMeasure, result: ShadowResult) -> bool:
    """
    Certify minimality with the LP oracle: for every nu-atom k,
    integral (k - y)^+ dS equals the minimum over {eta: mu <=_cd eta <= nu}.
    """
    from .oracle import min_over_eta

    p_s = put_potential(result.shadow)
    ys = nu.locations
    ok = True
    for k in ys:
        f = {y: max(k - y, Fraction(0)) for y in ys}
        sol = min_over_eta(mu, nu, f)
        if sol.value != evaluate(p_s, k):
            logger.warning(f"shadow not minimal at k={k}: LP {sol.value} vs shadow {evaluate(p_s, k)}")
            ok = False
    return ok


def is_martingale_shadow(mu: DiscreteMeasure, nu: DiscreteMeasure) -> bool:
    return mu.is_zero or shadow(mu, nu).excess == 0
