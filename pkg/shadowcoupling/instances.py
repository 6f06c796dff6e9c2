"""
Seeded random instances for tests and the acceptance battery.

Convex-decreasing pairs are generated constructively: mu is drawn on a small
integer grid and every atom is spread by a two-point kernel whose mean does
not exceed the atom, so mu <=_cd nu holds by construction. Kinds:

    cd          spread with downward drift
    martingale  mean-preserving spread (equal means)
    pcd         a sub-measure of a cd source
    separated   nu supported strictly left of mu
    lattice     tiny pairs with weights on the 1/4 lattice (no order guaranteed)
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from .measure import DiscreteMeasure
from .pwl import PwlFunction

logger = logging.getLogger(__name__)

MAX_MU_ATOMS = 5
MAX_NU_ATOMS = 7
MAX_DENOMINATOR = 12
GRID_LO, GRID_HI = -6, 6


@dataclass(frozen=True)
class Instance:
    mu: DiscreteMeasure
    nu: DiscreteMeasure
    kind: str = "custom"
    seed: Optional[int] = None

    def to_dict(self) -> Dict:
        out = {
            "mu": self.mu.to_dict()["atoms"],
            "nu": self.nu.to_dict()["atoms"],
            "kind": self.kind,
        }
        if self.seed is not None:
            out["seed"] = self.seed
        return out


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_weights(rng: np.random.Generator, n: int, total: Fraction = Fraction(1)) -> List[Fraction]:
    """n positive weights summing to `total`, each a multiple of total/D with D <= 12."""
    denominator = int(rng.integers(max(n, 2), MAX_DENOMINATOR + 1))
    cuts = sorted(int(c) for c in rng.choice(np.arange(1, denominator), size=n - 1, replace=False)) if n > 1 else []
    bounds = [0] + cuts + [denominator]
    return [total * Fraction(b - a, denominator) for a, b in zip(bounds, bounds[1:])]


def random_measure(rng: np.random.Generator, n_atoms: int, lo: int, hi: int,
                   total: Fraction = Fraction(1)) -> DiscreteMeasure:
    n_atoms = min(n_atoms, hi - lo + 1)
    locations = sorted(int(x) for x in rng.choice(np.arange(lo, hi + 1), size=n_atoms, replace=False))
    weights = random_weights(rng, n_atoms, total)
    return DiscreteMeasure(tuple(zip(locations, weights)))


def _target_grid(rng: np.random.Generator, mu: DiscreteMeasure, martingale: bool) -> List[int]:
    forced = {int(mu.support_min) - 1}
    if martingale:
        forced.add(int(mu.support_max) + 1)
    free = int(rng.integers(1, MAX_NU_ATOMS - len(forced) + 1))
    pool = np.arange(GRID_LO, GRID_HI + 1)
    picked = {int(y) for y in rng.choice(pool, size=free, replace=False)}
    grid = sorted(forced | picked)
    while len(grid) > MAX_NU_ATOMS:
        extras = [y for y in grid if y not in forced]
        grid.remove(extras[int(rng.integers(len(extras)))])
    return grid


def _spread(rng: np.random.Generator, x: Fraction, w: Fraction, grid: List[int],
            martingale: bool) -> List[Tuple[Fraction, Fraction]]:
    """Two-point kernel from x onto the grid with mean <= x (= x for martingale)."""
    below = [y for y in grid if y <= x]
    c = Fraction(below[int(rng.integers(len(below)))])
    if martingale:
        above = [y for y in grid if y >= x]
    else:
        above = [y for y in grid if y >= c]
    d = Fraction(above[int(rng.integers(len(above)))])
    if martingale:
        m = x
    else:
        top = min(d, x)
        m = c + (top - c) * Fraction(int(rng.integers(0, 5)), 4)
    if d == c:
        return [(c, w)]
    return [(c, w * (d - m) / (d - c)), (d, w * (m - c) / (d - c))]


def random_cd_instance(seed, martingale: bool = False) -> Instance:
    rng = _rng(seed)
    n = int(rng.integers(1, MAX_MU_ATOMS + 1))
    mu = random_measure(rng, n, -4, 4)
    grid = _target_grid(rng, mu, martingale)
    pieces = []
    for x, w in mu.atoms:
        pieces.extend(_spread(rng, x, w, grid, martingale))
    nu = DiscreteMeasure(tuple(pieces))
    kind = "martingale" if martingale else "cd"
    return Instance(mu, nu, kind, seed if isinstance(seed, int) else None)


def random_martingale_instance(seed) -> Instance:
    return random_cd_instance(seed, martingale=True)


def random_pcd_instance(seed) -> Instance:
    """mu' <= mu <=_cd nu with mu' a random sub-measure of the source."""
    rng = _rng(seed)
    base = random_cd_instance(rng)
    factors = [Fraction(int(rng.integers(0, 3)), 2) for _ in base.mu.atoms]
    if all(f == 0 for f in factors):
        factors[int(rng.integers(len(factors)))] = Fraction(1, 2)
    sub = DiscreteMeasure(tuple((x, w * f) for (x, w), f in zip(base.mu.atoms, factors)))
    return Instance(sub, base.nu, "pcd", seed if isinstance(seed, int) else None)


def random_separated_instance(seed) -> Instance:
    """nu on [-5, 0] and mu on [1, 5]; always mu <=_cd nu."""
    rng = _rng(seed)
    mu = random_measure(rng, int(rng.integers(1, MAX_MU_ATOMS + 1)), 1, 5)
    nu = random_measure(rng, int(rng.integers(1, 6)), -5, 0)
    return Instance(mu, nu, "separated", seed if isinstance(seed, int) else None)


def random_lattice_instance(seed, denominator: int = 4) -> Instance:
    """At most 4 atoms each, weights on the 1/denominator lattice, mu no heavier than nu."""
    rng = _rng(seed)

    def lattice_measure(total_units: int) -> DiscreteMeasure:
        n = int(rng.integers(1, min(4, total_units) + 1))
        locs = sorted(int(x) for x in rng.choice(np.arange(-3, 4), size=n, replace=False))
        cuts = sorted(int(c) for c in rng.choice(np.arange(1, total_units), size=n - 1, replace=False)) if n > 1 else []
        bounds = [0] + cuts + [total_units]
        return DiscreteMeasure(tuple(
            (x, Fraction(b - a, denominator)) for x, (a, b) in zip(locs, zip(bounds, bounds[1:]))
        ))

    nu = lattice_measure(denominator)
    mu = lattice_measure(int(rng.integers(1, denominator + 1)))
    return Instance(mu, nu, "lattice", seed if isinstance(seed, int) else None)


def random_split(seed, m: DiscreteMeasure) -> Tuple[DiscreteMeasure, DiscreteMeasure]:
    """m = a + b with each atom split at a random multiple of 1/4 of its weight."""
    rng = _rng(seed)
    first, second = [], []
    for x, w in m.atoms:
        t = Fraction(int(rng.integers(0, 5)), 4)
        first.append((x, w * t))
        second.append((x, w * (1 - t)))
    return DiscreteMeasure(tuple(first)), DiscreteMeasure(tuple(second))


# ============================================================================
# PIECEWISE-LINEAR FUNCTIONS
# ============================================================================

def random_pwl(seed, left_slope: int, right_slope: int) -> PwlFunction:
    """Arbitrary PWL function with integer breakpoints, values in [-4, 4] and the given tails."""
    rng = _rng(seed)
    n = int(rng.integers(1, 6))
    keys = sorted(int(k) for k in rng.choice(np.arange(-5, 6), size=n, replace=False))
    values = [int(v) for v in rng.integers(-4, 5, size=n)]
    return PwlFunction(Fraction(left_slope), tuple(zip(keys, values)), Fraction(right_slope))


def random_convex_pwl(seed, left_slope: int, right_slope: int) -> PwlFunction:
    """Convex PWL function whose interior slopes climb from left_slope to right_slope."""
    if left_slope > right_slope:
        raise ValueError(f"convex tails need left_slope <= right_slope, got {left_slope} > {right_slope}")
    rng = _rng(seed)
    n = int(rng.integers(1, 6))
    keys = sorted(int(k) for k in rng.choice(np.arange(-5, 6), size=n, replace=False))
    inner = sorted(int(s) for s in rng.integers(left_slope, right_slope + 1, size=n - 1))
    value = Fraction(int(rng.integers(-4, 5)))
    points = [(Fraction(keys[0]), value)]
    for k0, k1, s in zip(keys, keys[1:], inner):
        value += s * (k1 - k0)
        points.append((Fraction(k1), value))
    return PwlFunction(Fraction(left_slope), tuple(points), Fraction(right_slope))


GENERATORS = {
    "cd": random_cd_instance,
    "martingale": random_martingale_instance,
    "pcd": random_pcd_instance,
    "separated": random_separated_instance,
    "lattice": random_lattice_instance,
}


def generate(kind: str, seed: int, count: int) -> List[Instance]:
    """`count` instances of one kind from consecutive seeds."""
    if kind not in GENERATORS:
        raise ValueError(f"unknown instance kind {kind!r}; choose from {sorted(GENERATORS)}")
    make = GENERATORS[kind]
    out = [make(seed + i) for i in range(count)]
    logger.debug("generated %d %s instances from seed %d", count, kind, seed)
    return out
