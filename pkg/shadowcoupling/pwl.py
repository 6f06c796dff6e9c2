"""
Exact piecewise-linear function algebra.

A PwlFunction is continuous, affine left of its first breakpoint (slope
left_slope), affine right of its last (slope right_slope) and affine between
consecutive breakpoints. Instances are canonical: collinear breakpoints are
pruned and a globally affine function is stored as a single anchor at k = 0,
so structural equality is function equality.

Houses the put/call potentials P_m, C_m, differences such as
D = P_nu - P_mu, the convex hull f^c with pinned tail slopes, contact
brackets X^f / Z^f, left derivatives and the measure encoded by a convex
potential.
"""

import bisect
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .errors import ContractViolationError, NotAPotentialError
from .measure import (
    NEG_INF,
    POS_INF,
    DiscreteMeasure,
    Extended,
    as_rational,
)

logger = logging.getLogger(__name__)

Point = Tuple[Fraction, Fraction]


def _canonical_points(left_slope: Fraction, points: List[Point], right_slope: Fraction) -> Tuple[Point, ...]:
    if not points:
        raise ContractViolationError("a PwlFunction needs at least one anchor point")
    for (k0, _), (k1, _) in zip(points, points[1:]):
        if k1 <= k0:
            raise ContractViolationError(f"breakpoints must be strictly increasing ({k0}, {k1})")
    kept: List[Point] = []
    n = len(points)
    for i, (k, v) in enumerate(points):
        if i == 0:
            before = left_slope
        else:
            pk, pv = points[i - 1]
            before = (v - pv) / (k - pk)
        if i == n - 1:
            after = right_slope
        else:
            nk, nv = points[i + 1]
            after = (nv - v) / (nk - k)
        if before != after:
            kept.append((k, v))
    if kept:
        return tuple(kept)
    k0, v0 = points[0]
    return ((Fraction(0), v0 - left_slope * k0),)


@dataclass(frozen=True)
class PwlFunction:
    left_slope: Fraction
    points: Tuple[Point, ...]
    right_slope: Fraction

    def __post_init__(self):
        ls = as_rational(self.left_slope)
        rs = as_rational(self.right_slope)
        pts = [(as_rational(k), as_rational(v)) for k, v in self.points]
        object.__setattr__(self, "left_slope", ls)
        object.__setattr__(self, "right_slope", rs)
        object.__setattr__(self, "points", _canonical_points(ls, pts, rs))

    @property
    def keys(self) -> List[Fraction]:
        return [k for k, _ in self.points]

    @property
    def is_affine(self) -> bool:
        return len(self.points) == 1 and self.left_slope == self.right_slope

    def slopes(self) -> List[Fraction]:
        """Slopes of all pieces, left tail first and right tail last."""
        out = [self.left_slope]
        for (k0, v0), (k1, v1) in zip(self.points, self.points[1:]):
            out.append((v1 - v0) / (k1 - k0))
        out.append(self.right_slope)
        return out

    def is_convex(self) -> bool:
        s = self.slopes()
        return all(a <= b for a, b in zip(s, s[1:]))

    def tail_intercepts(self) -> Tuple[Fraction, Fraction]:
        """Intercepts of the two tail lines f(k) = slope*k + intercept."""
        k0, v0 = self.points[0]
        kn, vn = self.points[-1]
        return v0 - self.left_slope * k0, vn - self.right_slope * kn

    def __call__(self, k) -> Fraction:
        return evaluate(self, k)

    def __add__(self, other: "PwlFunction") -> "PwlFunction":
        return linear_combine(self, other, 1, 1)

    def __sub__(self, other: "PwlFunction") -> "PwlFunction":
        return linear_combine(self, other, 1, -1)

    def __neg__(self) -> "PwlFunction":
        return scale(self, -1)

    def __rmul__(self, factor) -> "PwlFunction":
        return scale(self, factor)

    def to_dict(self) -> Dict:
        return {
            "left_slope": str(self.left_slope),
            "points": [[str(k), str(v)] for k, v in self.points],
            "right_slope": str(self.right_slope),
        }


@dataclass(frozen=True)
class HullContact:
    """(X^f(y), Z^f(y)): the nearest hull contact points at or around y."""

    x: Extended
    z: Extended


def affine(slope, intercept) -> PwlFunction:
    slope = as_rational(slope)
    return PwlFunction(slope, ((Fraction(0), as_rational(intercept)),), slope)


def constant(value) -> PwlFunction:
    return affine(0, value)


def evaluate(f: PwlFunction, k) -> Fraction:
    """Exact value f(k) by segment interpolation."""
    k = as_rational(k)
    pts = f.points
    k0, v0 = pts[0]
    if k <= k0:
        return v0 + f.left_slope * (k - k0)
    kn, vn = pts[-1]
    if k >= kn:
        return vn + f.right_slope * (k - kn)
    i = bisect.bisect_right(f.keys, k)
    (ka, va), (kb, vb) = pts[i - 1], pts[i]
    return va + (vb - va) * (k - ka) / (kb - ka)


def scale(f: PwlFunction, factor) -> PwlFunction:
    factor = as_rational(factor)
    return PwlFunction(
        f.left_slope * factor,
        tuple((k, v * factor) for k, v in f.points),
        f.right_slope * factor,
    )


def linear_combine(f: PwlFunction, g: PwlFunction, a, b) -> PwlFunction:
    """a*f + b*g on the merged breakpoint set."""
    a = as_rational(a)
    b = as_rational(b)
    keys = sorted(set(f.keys) | set(g.keys))
    return PwlFunction(
        a * f.left_slope + b * g.left_slope,
        tuple((k, a * evaluate(f, k) + b * evaluate(g, k)) for k in keys),
        a * f.right_slope + b * g.right_slope,
    )


# ============================================================================
# POTENTIALS
# ============================================================================

def put_potential(m: DiscreteMeasure) -> PwlFunction:
    """P_m(k) = integral of (k - x)^+ dm(x)."""
    if m.is_zero:
        return constant(0)
    points = []
    value = Fraction(0)
    acc = Fraction(0)
    prev = None
    for x, w in m.atoms:
        if prev is not None:
            value += acc * (x - prev)
        points.append((x, value))
        acc += w
        prev = x
    return PwlFunction(Fraction(0), tuple(points), acc)


def call_potential(m: DiscreteMeasure) -> PwlFunction:
    """C_m(k) = integral of (x - k)^+ dm(x)."""
    if m.is_zero:
        return constant(0)
    points = []
    value = Fraction(0)
    acc = Fraction(0)
    nxt = None
    for x, w in reversed(m.atoms):
        if nxt is not None:
            value += acc * (nxt - x)
        points.append((x, value))
        acc += w
        nxt = x
    points.reverse()
    return PwlFunction(-acc, tuple(points), Fraction(0))


# ============================================================================
# HULLS AND CONTACTS
# ============================================================================

def _cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(f: PwlFunction) -> PwlFunction:
    """
    Largest convex minorant f^c.

    Tail slopes are those of f; tail intercepts are the support-line
    intercepts min_k(f(k) - slope*k), attained at breakpoints. Between the
    two tail contacts the hull is the lower monotone chain of f's breakpoints.
    """
    sl, sr = f.left_slope, f.right_slope
    if sl > sr:
        raise ContractViolationError(
            f"convex hull is -inf: left slope {sl} exceeds right slope {sr}"
        )
    pts = list(f.points)
    left_scores = [v - sl * k for k, v in pts]
    right_scores = [v - sr * k for k, v in pts]
    if sl == sr:
        return affine(sl, min(left_scores))

    lo = min(left_scores)
    a = max(i for i, s in enumerate(left_scores) if s == lo)
    hi = min(right_scores)
    b = min(i for i, s in enumerate(right_scores) if s == hi)

    chain: List[Point] = []
    for p in pts[a:b + 1]:
        while len(chain) >= 2 and _cross(chain[-2], chain[-1], p) <= 0:
            chain.pop()
        chain.append(p)
    logger.debug("convex_hull: %d breakpoints -> %d hull points", len(pts), len(chain))
    return PwlFunction(sl, tuple(chain), sr)


def contact_bracket(f: PwlFunction, y, hull: Optional[PwlFunction] = None) -> HullContact:
    """X^f(y) = sup{x <= y: f^c(x) = f(x)} and Z^f(y) = inf{z >= y: f^c(z) = f(z)}."""
    y = as_rational(y)
    h = hull if hull is not None else convex_hull(f)
    if evaluate(f, y) == evaluate(h, y):
        return HullContact(y, y)
    candidates = sorted(set(f.keys) | set(h.keys))
    contacts = [k for k in candidates if evaluate(f, k) == evaluate(h, k)]
    below = [k for k in contacts if k < y]
    above = [k for k in contacts if k > y]
    return HullContact(
        max(below) if below else NEG_INF,
        min(above) if above else POS_INF,
    )


def min_subgradient(f_convex: PwlFunction, y) -> Fraction:
    """Left derivative of a convex PwlFunction at y (inf of the subdifferential)."""
    if not f_convex.is_convex():
        raise ContractViolationError("min_subgradient needs a convex function")
    y = as_rational(y)
    idx = bisect.bisect_left(f_convex.keys, y)
    return f_convex.slopes()[idx]


def measure_of(f_convex: PwlFunction) -> DiscreteMeasure:
    """The measure whose put potential is f_convex (atoms at slope jumps)."""
    if f_convex.left_slope != 0:
        raise NotAPotentialError(f"left slope must be 0, got {f_convex.left_slope}")
    if f_convex.points[0][1] != 0:
        raise NotAPotentialError(f"left tail must vanish, got {f_convex.points[0][1]}")
    slopes = f_convex.slopes()
    atoms = []
    for (k, _), before, after in zip(f_convex.points, slopes, slopes[1:]):
        jump = after - before
        if jump < 0:
            raise NotAPotentialError(f"slope decreases at {k}; not convex")
        if jump > 0:
            atoms.append((k, jump))
    return DiscreteMeasure(tuple(atoms))


def sup_difference(f: PwlFunction, g: PwlFunction) -> Extended:
    """sup_k (f(k) - g(k)); +inf when a tail diverges upward."""
    h = linear_combine(f, g, 1, -1)
    if h.left_slope < 0 or h.right_slope > 0:
        return POS_INF
    return max(v for _, v in h.points)


# ============================================================================
# ZERO SETS
# ============================================================================

def zero_set(f: PwlFunction) -> Tuple[List[Fraction], List[Tuple[Extended, Extended]]]:
    """
    Exact zero set of f as (isolated points, closed zero intervals).

    Intervals may be unbounded on the tail sides.
    """
    pts = f.points
    points: List[Fraction] = []
    intervals: List[Tuple[Extended, Extended]] = []

    k0, v0 = pts[0]
    if v0 == 0 and f.left_slope == 0:
        intervals.append((NEG_INF, k0))
    elif f.left_slope != 0:
        root = k0 - v0 / f.left_slope
        if root < k0:
            points.append(root)

    for i, (k, v) in enumerate(pts):
        if v == 0:
            points.append(k)
        if i + 1 < len(pts):
            nk, nv = pts[i + 1]
            if v == 0 and nv == 0:
                intervals.append((k, nk))
            elif (v < 0 < nv) or (nv < 0 < v):
                points.append(k + (nk - k) * (-v) / (nv - v))

    kn, vn = pts[-1]
    if vn == 0 and f.right_slope == 0:
        intervals.append((kn, POS_INF))
    elif f.right_slope != 0:
        root = kn - vn / f.right_slope
        if root > kn:
            points.append(root)
    return sorted(set(points)), intervals


def positive_components(f: PwlFunction) -> List[Tuple[Extended, Extended]]:
    """Maximal open intervals on which f > 0, left to right."""
    zeros, intervals = zero_set(f)
    cuts = set(zeros)
    for lo, hi in intervals:
        if lo is not NEG_INF:
            cuts.add(lo)
        if hi is not POS_INF:
            cuts.add(hi)
    cuts = sorted(cuts)
    if not cuts:
        return [(NEG_INF, POS_INF)] if evaluate(f, 0) > 0 else []

    bounds: List[Extended] = [NEG_INF] + cuts + [POS_INF]
    components = []
    for lo, hi in zip(bounds, bounds[1:]):
        if lo is NEG_INF:
            sample = hi - 1
        elif hi is POS_INF:
            sample = lo + 1
        else:
            sample = (lo + hi) / 2
        if evaluate(f, sample) > 0:
            components.append((lo, hi))
    return components
