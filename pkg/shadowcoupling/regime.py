"""
Regime structure of a convex-decreasing pair mu <=_cd nu.

    c(u)      = max(0, sup_k C_{mu_u}(k) - C_nu(k)), the drift the shadow of
                the first u units of mu must absorb
    u*        = sup{u : c(u) = 0}, the switch from martingale to
                supermartingale behaviour
    x*        = G-(u*), the threshold of the martingale points
    decompose = irreducible components of {D > 0}, D = P_nu - P_mu

u* is computed in closed form. On the quantile interval of atom x_i the
call potential C_{mu_u}(k) is affine in u at each fixed breakpoint k, so c
is a max of affine functions there and its last zero is a ratio of
rationals; no root finding is involved.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .config import USTAR_CERTIFICATE_STEPS, checks_enabled
from .errors import DomainError, InternalInconsistencyError, OrderViolationError
from .measure import (
    NEG_INF,
    POS_INF,
    ZERO,
    DiscreteMeasure,
    Extended,
    as_rational,
    lift,
    quantile,
)
from .order import OrderKind, compare
from .pwl import (
    PwlFunction,
    call_potential,
    evaluate,
    linear_combine,
    positive_components,
    put_potential,
    sup_difference,
    zero_set,
)
from .shadow import shadow

logger = logging.getLogger(__name__)


def _require_cd(mu: DiscreteMeasure, nu: DiscreteMeasure) -> None:
    res = compare(mu, nu, OrderKind.CONVEX_DECREASING)
    if not res:
        raise OrderViolationError(f"mu is not <=_cd nu: {res.witness}", res.point)


def _c_value(mu_u: DiscreteMeasure, c_nu: PwlFunction) -> Fraction:
    return max(Fraction(0), sup_difference(call_potential(mu_u), c_nu))


# ============================================================================
# c(u) AND u*
# ============================================================================

def c_of(mu: DiscreteMeasure, nu: DiscreteMeasure, u) -> Fraction:
    """c(u) = max(0, sup_k C_{mu_u}(k) - C_nu(k)) for 0 <= u <= mass(mu)."""
    _require_cd(mu, nu)
    u = as_rational(u)
    if not (0 <= u <= mu.mass):
        raise DomainError(f"u must lie in [0, {mu.mass}], got {u}")
    mu_u = lift(mu, u)
    value = _c_value(mu_u, call_potential(nu))
    if checks_enabled() and not mu_u.is_zero:
        via_shadow = mu_u.mean - shadow(mu_u, nu).shadow.mean
        if via_shadow != value:
            raise InternalInconsistencyError(
                f"c({u}) = {value} by potentials but {via_shadow} by the shadow mean"
            )
    return value


def c_grid(mu: DiscreteMeasure, nu: DiscreteMeasure, n: int) -> List[Tuple[Fraction, Fraction]]:
    """(u, c(u)) on the uniform grid u = j * mass / n, j = 0..n."""
    _require_cd(mu, nu)
    total = mu.mass
    c_nu = call_potential(nu)
    return [(total * j / n, _c_value(lift(mu, total * j / n), c_nu)) for j in range(n + 1)]


def _ustar_walk(mu: DiscreteMeasure, nu: DiscreteMeasure) -> Fraction:
    c_nu = call_potential(nu)
    ks = sorted(set(mu.locations) | set(nu.locations))
    c_nu_at = {k: evaluate(c_nu, k) for k in ks}
    u_prev = Fraction(0)
    c_prev = call_potential(ZERO)
    for i, (x, w) in enumerate(mu.atoms):
        u_hi = u_prev + w
        lines = []
        for k in ks:
            b = max(x - k, Fraction(0))
            a = evaluate(c_prev, k) - c_nu_at[k] - u_prev * b
            lines.append((a, b))
        if max(a + b * u_hi for a, b in lines) <= 0:
            logger.debug("ustar walk: c vanishes through atom %d (u=%s)", i, u_hi)
            u_prev = u_hi
            c_prev = call_potential(lift(mu, u_prev))
            continue
        candidates = [-a / b for a, b in lines if b > 0 and a + b * u_hi > 0]
        return max(u_prev, min([u_hi] + candidates))
    return mu.mass


def ustar(mu: DiscreteMeasure, nu: DiscreteMeasure) -> Fraction:
    """u* = sup{u : c(u) = 0}, exact, with certificates checked when enabled."""
    _require_cd(mu, nu)
    total = mu.mass
    if total == 0:
        return Fraction(0)
    if mu.mean == nu.mean:
        return total
    if nu.support_max < mu.support_min:
        result = Fraction(0)
    else:
        result = _ustar_walk(mu, nu)

    if checks_enabled():
        c_nu = call_potential(nu)
        if _c_value(lift(mu, result), c_nu) != 0:
            raise InternalInconsistencyError(f"c(u*) != 0 at u* = {result}")
        for j in range(1, USTAR_CERTIFICATE_STEPS + 1):
            level = result + (total - result) / 2 ** j
            if _c_value(lift(mu, level), c_nu) <= 0:
                raise InternalInconsistencyError(f"c vanishes at {level} > u* = {result}")
    logger.debug("u* = %s", result)
    return result


def martingale_points(mu: DiscreteMeasure, nu: DiscreteMeasure,
                      u_star: Optional[Fraction] = None) -> Extended:
    """
    x* = G-(u*); -inf when u* = 0 and +inf when u* is the full mass.

    Args:
        mu, nu: a pair with mu <=_cd nu
        u_star: u* when the caller already has it

    Returns:
        The threshold below which every atom of mu is a martingale point.
    """
    u = ustar(mu, nu) if u_star is None else u_star
    if u == 0:
        return NEG_INF
    if u == mu.mass:
        return POS_INF
    return quantile(mu, u, "left")


@dataclass(frozen=True)
class RegimeSplit:
    """mu and nu cut at u*: the martingale pair and the supermartingale remainder."""

    ustar: Fraction
    mu_martingale: DiscreteMeasure
    nu_martingale: DiscreteMeasure
    mu_rest: DiscreteMeasure
    nu_rest: DiscreteMeasure

    def to_dict(self) -> Dict:
        return {
            "ustar": str(self.ustar),
            "mu_martingale": self.mu_martingale.to_dict()["atoms"],
            "nu_martingale": self.nu_martingale.to_dict()["atoms"],
            "mu_rest": self.mu_rest.to_dict()["atoms"],
            "nu_rest": self.nu_rest.to_dict()["atoms"],
        }


def split_at_ustar(mu: DiscreteMeasure, nu: DiscreteMeasure) -> RegimeSplit:
    u = ustar(mu, nu)
    mu_hat = lift(mu, u)
    nu_hat = shadow(mu_hat, nu).shadow if not mu_hat.is_zero else ZERO
    return RegimeSplit(u, mu_hat, nu_hat, mu - mu_hat, nu - nu_hat)


def support_separation_holds(split: RegimeSplit) -> bool:
    """
    What is left of nu after the martingale part lies weakly left of what is
    left of mu, and the two do not both carry an atom at the junction.
    """
    if split.mu_rest.is_zero or split.nu_rest.is_zero:
        return True
    right = split.nu_rest.support_max
    left = split.mu_rest.support_min
    if right < left:
        return True
    return right == left and not (split.nu_rest.weight_at(right) > 0 and split.mu_rest.weight_at(left) > 0)


# ============================================================================
# IRREDUCIBLE DECOMPOSITION
# ============================================================================

@dataclass(frozen=True)
class Component:
    """One irreducible piece: mu|(lo, hi) embedded in nu|(lo, hi) plus boundary mass."""

    lo: Extended
    hi: Extended
    mu_part: DiscreteMeasure
    nu_part: DiscreteMeasure
    alpha: Fraction
    beta: Fraction

    @property
    def is_martingale(self) -> bool:
        return self.hi is not POS_INF

    def contains(self, x) -> bool:
        return self.lo < x < self.hi

    def to_dict(self) -> Dict:
        return {
            "interval": [str(self.lo), str(self.hi)],
            "mu": self.mu_part.to_dict()["atoms"],
            "nu": self.nu_part.to_dict()["atoms"],
            "alpha": str(self.alpha),
            "beta": str(self.beta),
        }


@dataclass(frozen=True)
class IrreducibleDecomposition:
    x_star: Extended
    supermartingale_component: Optional[Component]
    martingale_components: Tuple[Component, ...]
    fixed_part: DiscreteMeasure

    @property
    def components(self) -> List[Component]:
        out = list(self.martingale_components)
        if self.supermartingale_component is not None:
            out.append(self.supermartingale_component)
        return out

    def component_containing(self, x) -> Optional[Component]:
        for comp in self.components:
            if comp.contains(x):
                return comp
        return None

    def to_dict(self) -> Dict:
        return {
            "x_star": str(self.x_star),
            "supermartingale_component": (
                None if self.supermartingale_component is None
                else self.supermartingale_component.to_dict()
            ),
            "martingale_components": [c.to_dict() for c in self.martingale_components],
            "fixed_part": self.fixed_part.to_dict()["atoms"],
        }


def _x_star(d: PwlFunction) -> Extended:
    zeros, intervals = zero_set(d)
    ends: List[Extended] = list(zeros)
    for lo, hi in intervals:
        ends.extend([lo, hi])
    if not ends:
        return NEG_INF
    return max(ends)


def _martingale_component(mu: DiscreteMeasure, nu: DiscreteMeasure, lo, hi) -> Component:
    mu_i = mu.restrict(lo, hi)
    inner = nu.restrict(lo, hi)
    dm = mu_i.mass - inner.mass
    ds = mu_i.mean - inner.mean
    beta = (ds - lo * dm) / (hi - lo)
    alpha = dm - beta
    nu_i = inner + DiscreteMeasure(((lo, alpha), (hi, beta)))
    return Component(lo, hi, mu_i, nu_i, alpha, beta)


def _supermartingale_component(mu: DiscreteMeasure, nu: DiscreteMeasure, x_star) -> Component:
    mu_0 = mu.restrict(x_star, POS_INF)
    inner = nu.restrict(x_star, POS_INF)
    alpha = mu_0.mass - inner.mass
    nu_0 = inner + DiscreteMeasure(((x_star, alpha),))
    return Component(x_star, POS_INF, mu_0, nu_0, alpha, Fraction(0))


def check_component_support(comp: Component) -> None:
    """
    D_i = P_{nu_i} - P_{mu_i} must be positive exactly on (lo, hi).

    Raises:
        InternalInconsistencyError: if D_i is positive anywhere else or
            vanishes somewhere inside the interval.
    """
    d_i = linear_combine(put_potential(comp.nu_part), put_potential(comp.mu_part), 1, -1)
    found = positive_components(d_i)
    if found != [(comp.lo, comp.hi)]:
        shown = ", ".join(f"({lo}, {hi})" for lo, hi in found) or "nowhere"
        raise InternalInconsistencyError(
            f"component ({comp.lo}, {comp.hi}): D_i is positive on {shown}"
        )


def decompose(mu: DiscreteMeasure, nu: DiscreteMeasure) -> IrreducibleDecomposition:
    """Split (mu, nu) along the zeros of D = P_nu - P_mu."""
    _require_cd(mu, nu)
    d = linear_combine(put_potential(nu), put_potential(mu), 1, -1)
    x_star = _x_star(d)

    martingale: List[Component] = []
    supermartingale: Optional[Component] = None
    for lo, hi in positive_components(d):
        if hi is POS_INF:
            supermartingale = _supermartingale_component(mu, nu, x_star)
        else:
            martingale.append(_martingale_component(mu, nu, lo, hi))

    decomposition_nu = ZERO
    decomposition_mu = ZERO
    for comp in martingale + ([supermartingale] if supermartingale else []):
        decomposition_nu = decomposition_nu + comp.nu_part
        decomposition_mu = decomposition_mu + comp.mu_part
    try:
        fixed = nu - decomposition_nu
        fixed_mu = mu - decomposition_mu
    except OrderViolationError as e:
        raise InternalInconsistencyError(f"boundary split exceeds nu: {e}") from e

    if checks_enabled():
        if fixed != fixed_mu:
            raise InternalInconsistencyError("fixed parts of mu and nu differ")
        for comp in martingale:
            if not compare(comp.mu_part, comp.nu_part, OrderKind.CONVEX):
                raise InternalInconsistencyError(f"component ({comp.lo}, {comp.hi}) is not in convex order")
        if supermartingale is not None and not compare(
            supermartingale.mu_part, supermartingale.nu_part, OrderKind.CONVEX_DECREASING
        ):
            raise InternalInconsistencyError("supermartingale component is not in cd order")
        for comp in martingale + ([supermartingale] if supermartingale else []):
            check_component_support(comp)

    logger.debug(f"decompose: x*={x_star}, {len(martingale)} martingale components")
    return IrreducibleDecomposition(x_star, supermartingale, tuple(martingale), fixed)
