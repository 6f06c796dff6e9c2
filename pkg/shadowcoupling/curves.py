"""
Pointwise representation of the increasing supermartingale coupling.

With U, V independent uniforms, pi_I is the law of (G(U), Y(U, V)) where G
is the left quantile of mu and

    Y(u, v) = G(u)                         u <= u*, R(u) = S(u)
            = R(u)  if v <= (S-G)/(S-R)    u <= u*, R(u) < S(u)
            = S(u)  otherwise
            = T(u)                         u > u*

On the martingale side (R, S) are glued from the irreducible components of
(mu_{u*}, S^nu(mu_{u*})). Component i owns the quantile window
(u_l, u_r) = (mu_hat((-inf, l_i]), mu_hat((-inf, r_i))), and inside it

    E_w = P_{nu_i} - P_{(mu_i)_w},   (Q, S) = contact bracket of E_w at G,
    R   = inf{k <= G : D_i(k) = L(k)},

with L the supporting line of E_w^c at G. Window right ends with
G(u_r) < r_i are null points where (R, S) = (l_i, r_i); elsewhere R = G = S.
On the supermartingale side T(u) = G-_{nu~}(M - u), nu~ = nu - S^nu(mu_{u*}).
"""

import functools
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .errors import DomainError, InternalInconsistencyError, OrderViolationError
from .measure import (
    NEG_INF,
    ZERO,
    DiscreteMeasure,
    Extended,
    as_rational,
    dirac,
    left_quantile,
    lift,
)
from .order import OrderKind, compare
from .pwl import (
    PwlFunction,
    contact_bracket,
    convex_hull,
    evaluate,
    linear_combine,
    min_subgradient,
    put_potential,
)
from .regime import Component, IrreducibleDecomposition, decompose, ustar
from .shadow import shadow

logger = logging.getLogger(__name__)


class Region(Enum):
    MARTINGALE = "martingale"
    SUPERMARTINGALE = "supermartingale"


@dataclass(frozen=True)
class SupportTriple:
    u: Fraction
    region: Region
    G: Fraction
    R: Optional[Fraction] = None
    S: Optional[Fraction] = None
    T: Optional[Fraction] = None
    phi: Optional[Fraction] = None

    def to_dict(self) -> Dict:
        def fmt(v):
            return None if v is None else str(v)
        return {
            "u": str(self.u),
            "region": self.region.value,
            "G": fmt(self.G),
            "R": fmt(self.R),
            "S": fmt(self.S),
            "T": fmt(self.T),
            "phi": fmt(self.phi),
        }


@dataclass(frozen=True)
class TwoPointKernel:
    """chi_{c,x,d}: the law on {c, d} with mean x."""

    lower: Fraction
    center: Fraction
    upper: Fraction

    def __post_init__(self):
        if not (self.lower <= self.center <= self.upper):
            raise DomainError(f"need lower <= center <= upper, got {self.lower}, {self.center}, {self.upper}")

    @property
    def law(self) -> DiscreteMeasure:
        c, x, d = self.lower, self.center, self.upper
        if (d - x) * (x - c) == 0:
            return dirac(x)
        return DiscreteMeasure(((c, (d - x) / (d - c)), (d, (x - c) / (d - c))))


def two_point_kernel(c, x, d) -> TwoPointKernel:
    return TwoPointKernel(as_rational(c), as_rational(x), as_rational(d))


# ============================================================================
# SHARED MODEL
# ============================================================================

@dataclass(frozen=True)
class Window:
    """Quantile window (u_left, u_right) owned by one martingale component."""

    component: Component
    u_left: Fraction
    u_right: Fraction
    null_point: bool


@dataclass(frozen=True)
class CurveModel:
    mu: DiscreteMeasure
    nu: DiscreteMeasure
    ustar: Fraction
    mu_hat: DiscreteMeasure
    nu_hat: DiscreteMeasure
    nu_tilde: DiscreteMeasure
    decomposition: Optional[IrreducibleDecomposition]
    windows: Tuple[Window, ...]

    @property
    def mass(self) -> Fraction:
        return self.mu.mass

    def combinatorial_points(self) -> List[Fraction]:
        pts = {self.ustar}
        for win in self.windows:
            pts.update((win.u_left, win.u_right))
        return sorted(p for p in pts if 0 < p < self.mass)


@functools.lru_cache(maxsize=128)
def curve_model(mu: DiscreteMeasure, nu: DiscreteMeasure) -> CurveModel:
    """(mu_{u*}, S^nu(mu_{u*}), decomposition, nu~), computed once per instance."""
    res = compare(mu, nu, OrderKind.CONVEX_DECREASING)
    if not res:
        raise OrderViolationError(f"mu is not <=_cd nu: {res.witness}", res.point)
    u = ustar(mu, nu)
    mu_hat = lift(mu, u)
    nu_hat = shadow(mu_hat, nu).shadow if not mu_hat.is_zero else ZERO
    decomposition = decompose(mu_hat, nu_hat) if not mu_hat.is_zero else None
    windows = []
    if decomposition is not None:
        for comp in decomposition.martingale_components:
            u_left = mu_hat.cdf(comp.lo)
            u_right = mu_hat.cdf_left(comp.hi)
            null_point = u_right > 0 and left_quantile(mu_hat, u_right) < comp.hi
            windows.append(Window(comp, u_left, u_right, null_point))
    logger.debug("curve model: u*=%s, %d windows", u, len(windows))
    return CurveModel(mu, nu, u, mu_hat, nu_hat, nu - nu_hat, decomposition, tuple(windows))


# ============================================================================
# MARTINGALE SIDE
# ============================================================================

@dataclass(frozen=True)
class ComponentGeometry:
    """Hull geometry of one component at relative level w = u - u_left."""

    window: Window
    w: Fraction
    G: Fraction
    d: PwlFunction
    e: PwlFunction
    hull: PwlFunction
    phi: Fraction
    Q: Extended
    R: Extended
    S: Extended


def _first_zero_at_or_below(h: PwlFunction, y: Fraction) -> Extended:
    """Smallest k <= y with h(k) = 0, for h >= 0 on (-inf, y]."""
    k0, v0 = h.points[0]
    if h.left_slope == 0 and v0 == 0 and k0 <= y:
        return NEG_INF
    candidates = [k for k in h.keys if k <= y] + [y]
    zeros = [k for k in candidates if evaluate(h, k) == 0]
    if not zeros:
        raise InternalInconsistencyError(f"no contact of D with its support line below {y}")
    return min(zeros)


def component_geometry(model: CurveModel, u: Fraction) -> Optional[ComponentGeometry]:
    """Geometry at u when u lies in an open component window, else None."""
    for win in model.windows:
        if win.u_left < u < win.u_right:
            comp = win.component
            w = u - win.u_left
            g = left_quantile(comp.mu_part, w)
            p_nu = put_potential(comp.nu_part)
            d = linear_combine(p_nu, put_potential(comp.mu_part), 1, -1)
            e = linear_combine(p_nu, put_potential(lift(comp.mu_part, w)), 1, -1)
            hull = convex_hull(e)
            bracket = contact_bracket(e, g, hull)
            phi = min_subgradient(hull, g)
            line = PwlFunction(phi, ((g, evaluate(hull, g)),), phi)
            r = _first_zero_at_or_below(linear_combine(d, line, 1, -1), g)
            return ComponentGeometry(win, w, g, d, e, hull, phi, bracket.x, r, bracket.z)
    return None


def _original_slope(model: CurveModel, u: Fraction, g: Fraction) -> Fraction:
    """min subgradient of (P_nu - P_{mu_u})^c at G(u)."""
    e = linear_combine(put_potential(model.nu), put_potential(lift(model.mu, u)), 1, -1)
    return min_subgradient(convex_hull(e), g)


# ============================================================================
# PUBLIC EVALUATORS
# ============================================================================

def _check_level(model: CurveModel, u: Fraction) -> None:
    if not (0 < u < model.mass):
        raise DomainError(f"u must lie in (0, {model.mass}), got {u}")


def triple_at(mu: DiscreteMeasure, nu: DiscreteMeasure, u) -> SupportTriple:
    """
    (region, G, R, S, T, phi) at quantile level u; u = u* is martingale.

    Args:
        mu, nu: probability measures with mu <=_cd nu
        u: quantile level in (0, 1)

    Returns:
        SupportTriple; R and S are set on the martingale side, T on the
        supermartingale side
    """
    u = as_rational(u)
    model = curve_model(mu, nu)
    _check_level(model, u)
    g = left_quantile(mu, u)

    if u > model.ustar:
        t = left_quantile(model.nu_tilde, model.mass - u)
        return SupportTriple(u, Region.SUPERMARTINGALE, g, T=t)

    phi = _original_slope(model, u, g)
    geom = component_geometry(model, u)
    if geom is not None:
        if geom.G != g:
            raise InternalInconsistencyError(f"component quantile {geom.G} != G(u) = {g}")
        return SupportTriple(u, Region.MARTINGALE, g, geom.R, geom.S, phi=phi)
    for win in model.windows:
        if win.null_point and u == win.u_right:
            return SupportTriple(u, Region.MARTINGALE, g, win.component.lo, win.component.hi, phi=phi)
    return SupportTriple(u, Region.MARTINGALE, g, g, g, phi=phi)


def triple_grid(mu: DiscreteMeasure, nu: DiscreteMeasure, n: int) -> List[SupportTriple]:
    """Triples at u = M*j/(n+1), j = 1..n, plus every window endpoint and u*."""
    model = curve_model(mu, nu)
    levels = {model.mass * j / (n + 1) for j in range(1, n + 1)}
    levels.update(model.combinatorial_points())
    return [triple_at(mu, nu, u) for u in sorted(levels)]


def lifted_kernel(mu: DiscreteMeasure, nu: DiscreteMeasure, u) -> DiscreteMeasure:
    """Conditional law at level u: chi_{R,G,S} or delta_T."""
    t = triple_at(mu, nu, u)
    if t.region is Region.SUPERMARTINGALE:
        return dirac(t.T)
    return TwoPointKernel(t.R, t.G, t.S).law


def sample_y(mu: DiscreteMeasure, nu: DiscreteMeasure, u, v) -> Fraction:
    """Y(u, v) for uniform levels u in (0, M), v in (0, 1)."""
    v = as_rational(v)
    if not (0 < v < 1):
        raise DomainError(f"v must lie in (0, 1), got {v}")
    t = triple_at(mu, nu, u)
    if t.region is Region.SUPERMARTINGALE:
        return t.T
    if t.R == t.S:
        return t.G
    if v <= (t.S - t.G) / (t.S - t.R):
        return t.R
    return t.S


def _kernel_envelope(model: CurveModel, t: SupportTriple) -> Tuple[Fraction, Fraction, Fraction]:
    """(low, high, reference mass) bounding the shadow of the next slice of mass below u."""
    ref = t.u - model.mu.cdf_left(t.G)
    if t.region is Region.MARTINGALE:
        return t.R, t.S, ref
    above = [x for x in model.nu_tilde.locations if x > t.T]
    high = t.T
    ref = min(ref, t.u - model.ustar)
    if above:
        high = above[0]
        ref = min(ref, model.nu_tilde.cdf(high) - (model.mass - t.u))
    return t.T, high, ref


def kernel_limit_check(mu: DiscreteMeasure, nu: DiscreteMeasure, u, depth: int) -> bool:
    """
    The mass of mu just below level u is shadowed into what the lower levels
    leave of nu. For eps = ref / 2^j, j = 1..depth, the shadow of eps*delta_G(u)
    into nu - S^nu(mu_{u - eps}) must stay inside the support envelope of the
    lifted kernel at u, and the supports must be nested as eps halves.
    """
    if depth < 1:
        raise DomainError(f"depth must be >= 1, got {depth}")
    u = as_rational(u)
    model = curve_model(mu, nu)
    t = triple_at(mu, nu, u)
    low, high, ref = _kernel_envelope(model, t)
    prev: Optional[Tuple[Fraction, Fraction]] = None
    for j in range(1, depth + 1):
        eps = ref / 2 ** j
        base = lift(mu, u - eps)
        used = shadow(base, nu).shadow if not base.is_zero else ZERO
        s = shadow(dirac(t.G, eps), nu - used).shadow
        lo, hi = s.support_min, s.support_max
        if lo < low or hi > high:
            logger.info(f"kernel at u={u}: support [{lo}, {hi}] leaves [{low}, {high}]")
            return False
        if prev is not None and (lo < prev[0] or hi > prev[1]):
            logger.info(f"kernel at u={u}: supports not nested at depth {j}")
            return False
        prev = (lo, hi)
    return True
