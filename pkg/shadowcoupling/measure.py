"""
Finitely supported measures on the real line.

A DiscreteMeasure is an immutable, sorted tuple of (location, weight) atoms
with exact Fraction arithmetic. The module provides moments, the CDF and both
quantile versions, restriction, atom-wise arithmetic and the quantile lift

    mu_u = mu|(-inf, G(u)) + (u - mu((-inf, G(u)))) * delta_G(u)

where G is the left-continuous quantile. The zero measure is a regular value.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Tuple, Union

from .errors import DomainError, OrderViolationError

logger = logging.getLogger(__name__)


class Infinity(Enum):
    """Signed infinity sentinel that orders correctly against rationals."""

    NEG = "-inf"
    POS = "+inf"

    def _rank(self) -> int:
        return -1 if self is Infinity.NEG else 1

    def __lt__(self, other):
        if isinstance(other, Infinity):
            return self._rank() < other._rank()
        return self is Infinity.NEG

    def __le__(self, other):
        if isinstance(other, Infinity):
            return self._rank() <= other._rank()
        return self is Infinity.NEG

    def __gt__(self, other):
        if isinstance(other, Infinity):
            return self._rank() > other._rank()
        return self is Infinity.POS

    def __ge__(self, other):
        if isinstance(other, Infinity):
            return self._rank() >= other._rank()
        return self is Infinity.POS

    def __neg__(self):
        return Infinity.POS if self is Infinity.NEG else Infinity.NEG

    def __str__(self) -> str:
        return self.value


NEG_INF = Infinity.NEG
POS_INF = Infinity.POS

Extended = Union[Fraction, Infinity]
Atom = Tuple[Fraction, Fraction]


def as_rational(value) -> Fraction:
    """Convert int / Fraction / exact string to Fraction. Floats are rejected."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise DomainError(f"inexact value {value!r}; pass an int, Fraction or string")
    if isinstance(value, (int, str)):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as e:
            raise DomainError(f"not a rational: {value!r}") from e
    raise DomainError(f"not a rational: {value!r}")


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finite nonnegative measure with strictly increasing atom locations."""

    atoms: Tuple[Atom, ...] = ()

    def __post_init__(self):
        merged: Dict[Fraction, Fraction] = {}
        for x, w in self.atoms:
            x = as_rational(x)
            w = as_rational(w)
            if w < 0:
                raise DomainError(f"negative weight {w} at {x}")
            merged[x] = merged.get(x, Fraction(0)) + w
        canonical = tuple((x, w) for x, w in sorted(merged.items()) if w != 0)
        object.__setattr__(self, "atoms", canonical)

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def from_pairs(cls, pairs: Iterable) -> "DiscreteMeasure":
        return cls(tuple((x, w) for x, w in pairs))

    @classmethod
    def from_dict(cls, weights: Dict) -> "DiscreteMeasure":
        return cls(tuple(weights.items()))

    # ------------------------------------------------------------------
    # basic accessors

    def __len__(self) -> int:
        return len(self.atoms)

    def __iter__(self) -> Iterator[Atom]:
        return iter(self.atoms)

    def __bool__(self) -> bool:
        return bool(self.atoms)

    @property
    def is_zero(self) -> bool:
        return not self.atoms

    @property
    def locations(self) -> List[Fraction]:
        return [x for x, _ in self.atoms]

    @property
    def weights(self) -> List[Fraction]:
        return [w for _, w in self.atoms]

    @property
    def mass(self) -> Fraction:
        return sum((w for _, w in self.atoms), Fraction(0))

    @property
    def mean(self) -> Fraction:
        """First moment (not normalized by mass)."""
        return sum((w * x for x, w in self.atoms), Fraction(0))

    @property
    def support_min(self) -> Extended:
        return self.atoms[0][0] if self.atoms else POS_INF

    @property
    def support_max(self) -> Extended:
        return self.atoms[-1][0] if self.atoms else NEG_INF

    def weight_at(self, x) -> Fraction:
        x = as_rational(x)
        for loc, w in self.atoms:
            if loc == x:
                return w
            if loc > x:
                break
        return Fraction(0)

    def cdf(self, k) -> Fraction:
        """F(k) = m((-inf, k])."""
        return sum((w for x, w in self.atoms if x <= k), Fraction(0))

    def cdf_left(self, k) -> Fraction:
        """m((-inf, k))."""
        return sum((w for x, w in self.atoms if x < k), Fraction(0))

    def restrict(self, lo: Extended = NEG_INF, hi: Extended = POS_INF,
                 lo_closed: bool = False, hi_closed: bool = False) -> "DiscreteMeasure":
        """Restriction to the interval between lo and hi."""
        kept = []
        for x, w in self.atoms:
            above = x >= lo if lo_closed else x > lo
            below = x <= hi if hi_closed else x < hi
            if above and below:
                kept.append((x, w))
        return DiscreteMeasure(tuple(kept))

    def scale(self, factor) -> "DiscreteMeasure":
        factor = as_rational(factor)
        if factor < 0:
            raise DomainError(f"negative scale factor {factor}")
        return DiscreteMeasure(tuple((x, w * factor) for x, w in self.atoms))

    def normalized(self) -> "DiscreteMeasure":
        if self.is_zero:
            raise DomainError("cannot normalize the zero measure")
        return self.scale(1 / self.mass)

    def __add__(self, other: "DiscreteMeasure") -> "DiscreteMeasure":
        return combine(self, other, "add")

    def __sub__(self, other: "DiscreteMeasure") -> "DiscreteMeasure":
        return combine(self, other, "sub")

    def __le__(self, other: "DiscreteMeasure") -> bool:
        """Atom-wise domination."""
        return all(other.weight_at(x) >= w for x, w in self.atoms)

    def __str__(self) -> str:
        if not self.atoms:
            return "0"
        return " + ".join(f"{w}*d({x})" for x, w in self.atoms)

    def to_dict(self) -> Dict:
        return {"atoms": [{"x": str(x), "w": str(w)} for x, w in self.atoms]}


ZERO = DiscreteMeasure()


def dirac(x, weight=1) -> DiscreteMeasure:
    return DiscreteMeasure(((x, weight),))


def moments(m: DiscreteMeasure) -> Tuple[Fraction, Fraction, Extended, Extended]:
    """(mass, mean, support_min, support_max); empty sentinels for the zero measure."""
    return m.mass, m.mean, m.support_min, m.support_max


def left_quantile(m: DiscreteMeasure, u: Fraction) -> Fraction:
    """G-(u) for 0 < u <= mass: the first atom whose CDF reaches u."""
    acc = Fraction(0)
    for x, w in m.atoms:
        acc += w
        if acc >= u:
            return x
    return m.atoms[-1][0]


def _right_quantile(m: DiscreteMeasure, u: Fraction) -> Fraction:
    """G+(u) for 0 <= u < mass: the first atom whose CDF exceeds u."""
    acc = Fraction(0)
    for x, w in m.atoms:
        acc += w
        if acc > u:
            return x
    return m.atoms[-1][0]


def quantile(m: DiscreteMeasure, u, side: str = "left") -> Fraction:
    """
    Quantile function of m.

    side="left":  G-(u) = sup{k: F(k) < u},  requires 0 < u < mass
    side="right": G+(u) = inf{k: F(k) > u},  requires 0 <= u < mass
    """
    u = as_rational(u)
    total = m.mass
    if side == "left":
        if not (0 < u < total):
            raise DomainError(f"left quantile needs 0 < u < {total}, got {u}")
        return left_quantile(m, u)
    if side == "right":
        if not (0 <= u < total):
            raise DomainError(f"right quantile needs 0 <= u < {total}, got {u}")
        return _right_quantile(m, u)
    raise DomainError(f"unknown quantile side {side!r}")


def lift(m: DiscreteMeasure, u) -> DiscreteMeasure:
    """The quantile lift m_u: the left-most part of m with mass u."""
    u = as_rational(u)
    total = m.mass
    if not (0 <= u <= total):
        raise DomainError(f"lift level must lie in [0, {total}], got {u}")
    if u == 0:
        return ZERO
    if u == total:
        return m
    g = left_quantile(m, u)
    below = [(x, w) for x, w in m.atoms if x < g]
    below_mass = sum((w for _, w in below), Fraction(0))
    return DiscreteMeasure(tuple(below) + ((g, u - below_mass),))


def combine(a: DiscreteMeasure, b: DiscreteMeasure, op: str) -> DiscreteMeasure:
    """Atom-wise a + b or a - b; subtraction requires b <= a atom-wise."""
    if op == "add":
        return DiscreteMeasure(a.atoms + b.atoms)
    if op != "sub":
        raise DomainError(f"unknown op {op!r}")
    weights = dict(a.atoms)
    for x, w in b.atoms:
        have = weights.get(x, Fraction(0))
        if have < w:
            raise OrderViolationError(
                f"cannot subtract: atom at {x} has weight {w} but only {have} is available",
                witness=x,
            )
        weights[x] = have - w
    return DiscreteMeasure(tuple(weights.items()))


def refine(m: DiscreteMeasure, parts: int) -> List[DiscreteMeasure]:
    """Split m into `parts` consecutive quantile slices of equal mass."""
    if parts < 1:
        raise DomainError(f"parts must be >= 1, got {parts}")
    if parts == 1:
        return [m]
    step = m.mass / parts
    slices = []
    previous = ZERO
    for j in range(1, parts + 1):
        current = lift(m, step * j)
        slices.append(current - previous)
        previous = current
    return slices
