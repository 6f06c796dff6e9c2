"""
Exact LP oracle.

A dense two-phase tableau simplex over Fractions with Bland's anti-cycling
rule, and the certification problems built on it:

    min_over_eta         min integral f d(eta) over {eta : mu <=_cd eta <= nu}
    min_over_couplings   min integral c d(pi) over supermartingale (or
                         martingale) couplings of (mu, nu)
    brute_force_pcd      lattice enumeration of the positive convex-decreasing
                         order on tiny instances

These are independent of the potential-based constructions and exist to
certify them.
"""

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .config import BRUTE_FORCE_MAX_DENOMINATOR, get_brute_force_max_atoms
from .errors import (
    DomainError,
    InternalInconsistencyError,
    MissingCostError,
    OrderViolationError,
    RefusalError,
)
from .measure import DiscreteMeasure, as_rational
from .order import OrderKind, compare
from .pwl import evaluate, put_potential

logger = logging.getLogger(__name__)

CostTable = Dict[Tuple[Fraction, Fraction], Fraction]


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass
class LpProblem:
    """min objective.x  s.t.  eq_rows x = eq_rhs,  ub_rows x <= ub_rhs,  x >= 0."""

    objective: List[Fraction]
    eq_rows: List[List[Fraction]] = field(default_factory=list)
    eq_rhs: List[Fraction] = field(default_factory=list)
    ub_rows: List[List[Fraction]] = field(default_factory=list)
    ub_rhs: List[Fraction] = field(default_factory=list)

    def __post_init__(self):
        self.objective = [as_rational(c) for c in self.objective]
        n = len(self.objective)
        self.eq_rows = [[as_rational(a) for a in row] for row in self.eq_rows]
        self.ub_rows = [[as_rational(a) for a in row] for row in self.ub_rows]
        self.eq_rhs = [as_rational(b) for b in self.eq_rhs]
        self.ub_rhs = [as_rational(b) for b in self.ub_rhs]
        if len(self.eq_rows) != len(self.eq_rhs) or len(self.ub_rows) != len(self.ub_rhs):
            raise DomainError("constraint rows and right-hand sides differ in length")
        for row in self.eq_rows + self.ub_rows:
            if len(row) != n:
                raise DomainError(f"constraint row has {len(row)} entries, expected {n}")

    @property
    def n_vars(self) -> int:
        return len(self.objective)

    def is_feasible_point(self, x: Sequence[Fraction]) -> bool:
        if any(v < 0 for v in x):
            return False
        for row, b in zip(self.eq_rows, self.eq_rhs):
            if sum(a * v for a, v in zip(row, x)) != b:
                return False
        for row, b in zip(self.ub_rows, self.ub_rhs):
            if sum(a * v for a, v in zip(row, x)) > b:
                return False
        return True


@dataclass
class LpSolution:
    status: LpStatus
    value: Optional[Fraction] = None
    primal: Tuple[Fraction, ...] = ()

    @property
    def is_optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL

    def to_dict(self) -> Dict:
        return {
            "status": self.status.value,
            "value": None if self.value is None else str(self.value),
            "primal": [str(v) for v in self.primal],
        }


class _Tableau:
    """Rows A | b with an explicit basis; the objective row holds reduced costs."""

    def __init__(self, rows: List[List[Fraction]], rhs: List[Fraction], basis: List[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.z: List[Fraction] = []
        self.z_value = Fraction(0)

    @property
    def n_cols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def set_objective(self, cost: List[Fraction]) -> None:
        self.z = list(cost)
        self.z_value = Fraction(0)
        for i, j in enumerate(self.basis):
            cj = self.z[j]
            if cj != 0:
                row = self.rows[i]
                for col in range(self.n_cols):
                    self.z[col] -= cj * row[col]
                self.z_value -= cj * self.rhs[i]

    def pivot(self, i: int, j: int) -> None:
        row = self.rows[i]
        piv = row[j]
        self.rows[i] = row = [a / piv for a in row]
        self.rhs[i] = self.rhs[i] / piv
        for k in range(len(self.rows)):
            if k == i:
                continue
            f = self.rows[k][j]
            if f != 0:
                other = self.rows[k]
                self.rows[k] = [a - f * b for a, b in zip(other, row)]
                self.rhs[k] -= f * self.rhs[i]
        f = self.z[j]
        if f != 0:
            self.z = [a - f * b for a, b in zip(self.z, row)]
            self.z_value -= f * self.rhs[i]
        self.basis[i] = j

    def optimize(self, allowed: Callable[[int], bool]) -> LpStatus:
        """Primal simplex with Bland's rule on the current objective row."""
        steps = 0
        while True:
            entering = next(
                (j for j in range(self.n_cols) if allowed(j) and self.z[j] < 0),
                None,
            )
            if entering is None:
                logger.debug("simplex optimal after %d pivots", steps)
                return LpStatus.OPTIMAL
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    key = (self.rhs[i] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return LpStatus.UNBOUNDED
            self.pivot(best[1], entering)
            steps += 1

    def drop_row(self, i: int) -> None:
        del self.rows[i]
        del self.rhs[i]
        del self.basis[i]


def lp_solve(p: LpProblem) -> LpSolution:
    """Solve an LpProblem exactly; optimal primals are re-verified against every constraint."""
    n = p.n_vars
    n_ub = len(p.ub_rows)
    rows: List[List[Fraction]] = []
    rhs: List[Fraction] = []
    for r, b in zip(p.eq_rows, p.eq_rhs):
        rows.append(list(r) + [Fraction(0)] * n_ub)
        rhs.append(b)
    for s, (r, b) in enumerate(zip(p.ub_rows, p.ub_rhs)):
        slack = [Fraction(0)] * n_ub
        slack[s] = Fraction(1)
        rows.append(list(r) + slack)
        rhs.append(b)
    for i in range(len(rows)):
        if rhs[i] < 0:
            rows[i] = [-a for a in rows[i]]
            rhs[i] = -rhs[i]

    m = len(rows)
    n_struct = n + n_ub
    if m == 0:
        if any(c < 0 for c in p.objective):
            return LpSolution(LpStatus.UNBOUNDED)
        return LpSolution(LpStatus.OPTIMAL, Fraction(0), tuple(Fraction(0) for _ in range(n)))

    for i in range(m):
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        rows[i] = rows[i] + art
    tab = _Tableau(rows, rhs, [n_struct + i for i in range(m)])

    # phase 1: minimize the sum of artificials
    tab.set_objective([Fraction(0)] * n_struct + [Fraction(1)] * m)
    tab.optimize(lambda j: True)
    if -tab.z_value != 0:
        logger.debug("phase 1 ended with infeasibility %s", -tab.z_value)
        return LpSolution(LpStatus.INFEASIBLE)

    # drive artificials out of the basis; rows that cannot pivot are redundant
    i = 0
    while i < len(tab.rows):
        if tab.basis[i] >= n_struct:
            j = next((j for j in range(n_struct) if tab.rows[i][j] != 0), None)
            if j is None:
                tab.drop_row(i)
                continue
            tab.pivot(i, j)
        i += 1

    # phase 2
    tab.set_objective(list(p.objective) + [Fraction(0)] * (n_ub + m))
    status = tab.optimize(lambda j: j < n_struct)
    if status is LpStatus.UNBOUNDED:
        return LpSolution(LpStatus.UNBOUNDED)

    x = [Fraction(0)] * n_struct
    for i, j in enumerate(tab.basis):
        x[j] = tab.rhs[i]
    primal = tuple(x[:n])
    value = sum((c * v for c, v in zip(p.objective, primal)), Fraction(0))
    if not p.is_feasible_point(primal) or value != -tab.z_value:
        raise InternalInconsistencyError("simplex returned a point that violates its constraints")
    return LpSolution(LpStatus.OPTIMAL, value, primal)


# ============================================================================
# CERTIFICATION PROBLEMS
# ============================================================================

def min_over_eta(mu: DiscreteMeasure, nu: DiscreteMeasure, f: Dict[Fraction, Fraction]) -> LpSolution:
    """
    min sum f(y_j) eta_j over eta on nu's atoms with mu <=_cd eta <= nu.

    `f` tabulates a convex nonincreasing test function on nu's atoms.
    """
    res = compare(mu, nu, OrderKind.POSITIVE_CONVEX_DECREASING)
    if not res:
        raise OrderViolationError(f"mu is not <=_pcd nu: {res.witness}", res.point)
    ys = nu.locations
    try:
        objective = [as_rational(f[y]) for y in ys]
    except KeyError as e:
        raise DomainError(f"test function has no value at nu atom {e.args[0]}") from e
    n = len(ys)
    ub_rows, ub_rhs = [], []
    for j, (_, w) in enumerate(nu.atoms):
        row = [Fraction(0)] * n
        row[j] = Fraction(1)
        ub_rows.append(row)
        ub_rhs.append(w)
    ub_rows.append(list(ys))
    ub_rhs.append(mu.mean)
    p_mu = put_potential(mu)
    for k in sorted(set(mu.locations) | set(ys)):
        ub_rows.append([-max(k - y, Fraction(0)) for y in ys])
        ub_rhs.append(-evaluate(p_mu, k))
    problem = LpProblem(objective, [[Fraction(1)] * n], [mu.mass], ub_rows, ub_rhs)
    sol = lp_solve(problem)
    if not sol.is_optimal:
        raise InternalInconsistencyError(
            f"eta-LP is {sol.status.value} although mu <=_pcd nu was certified"
        )
    return sol


def _cost_vector(mu: DiscreteMeasure, nu: DiscreteMeasure, table: CostTable) -> List[Fraction]:
    out = []
    for x in mu.locations:
        for y in nu.locations:
            if (x, y) not in table:
                raise MissingCostError(x, y)
            out.append(as_rational(table[(x, y)]))
    return out


def min_over_couplings(mu: DiscreteMeasure, nu: DiscreteMeasure, table: CostTable,
                       constraint: str = "supermartingale") -> LpSolution:
    """
    Minimize sum c(x_i, y_j) p_ij over couplings of mu and nu.

    Args:
        mu, nu: probability measures with mu <=_cd nu
        table: cost c(x, y) for every source atom x and target atom y
        constraint: "supermartingale" (mean of row i <= x_i) or
                    "martingale" (mean of row i = x_i)

    Returns:
        LpSolution over the variables p_ij, row-major in (mu atom, nu atom)
    """
    res = compare(mu, nu, OrderKind.CONVEX_DECREASING)
    if not res:
        raise OrderViolationError(f"mu is not <=_cd nu: {res.witness}", res.point)
    if constraint not in ("supermartingale", "martingale"):
        raise DomainError(f"unknown constraint {constraint!r}")
    if constraint == "martingale" and mu.mean != nu.mean:
        raise OrderViolationError("martingale couplings need equal means")

    xs, ys = mu.locations, nu.locations
    nx, ny = len(xs), len(ys)
    objective = _cost_vector(mu, nu, table)

    def var(i: int, j: int) -> int:
        return i * ny + j

    eq_rows, eq_rhs, ub_rows, ub_rhs = [], [], [], []
    for i, (_, w) in enumerate(mu.atoms):
        row = [Fraction(0)] * (nx * ny)
        for j in range(ny):
            row[var(i, j)] = Fraction(1)
        eq_rows.append(row)
        eq_rhs.append(w)
    for j, (_, w) in enumerate(nu.atoms):
        row = [Fraction(0)] * (nx * ny)
        for i in range(nx):
            row[var(i, j)] = Fraction(1)
        eq_rows.append(row)
        eq_rhs.append(w)
    for i, x in enumerate(xs):
        row = [Fraction(0)] * (nx * ny)
        for j, y in enumerate(ys):
            row[var(i, j)] = y - x
        if constraint == "martingale":
            eq_rows.append(row)
            eq_rhs.append(Fraction(0))
        else:
            ub_rows.append(row)
            ub_rhs.append(Fraction(0))

    sol = lp_solve(LpProblem(objective, eq_rows, eq_rhs, ub_rows, ub_rhs))
    if not sol.is_optimal:
        raise InternalInconsistencyError(
            f"coupling LP is {sol.status.value} although mu <=_cd nu was certified"
        )
    logger.debug("coupling LP (%s) optimum %s", constraint, sol.value)
    return sol


def coupling_from_solution(mu: DiscreteMeasure, nu: DiscreteMeasure, sol: LpSolution):
    """Turn an optimal min_over_couplings primal into a Coupling."""
    from .coupling import Coupling, CouplingRow

    ys = nu.locations
    ny = len(ys)
    rows = []
    for i, (x, w) in enumerate(mu.atoms):
        mass = DiscreteMeasure(tuple(
            (y, sol.primal[i * ny + j]) for j, y in enumerate(ys)
        ))
        rows.append(CouplingRow(x, w, mass.scale(1 / w)))
    return Coupling(tuple(rows))


def spence_mirrlees_cost(mu: DiscreteMeasure, nu: DiscreteMeasure) -> CostTable:
    """
    c(x, y) = -rank(x) * (y_max + 1 - y)^2 with rank the 1-based index of x
    among mu's atoms.

    c(x2, .) - c(x1, .) is strictly increasing and strictly concave on nu's
    support whenever x1 < x2, which makes the increasing coupling the
    minimiser. With the opposite sign it is the maximiser.
    """
    y_max = nu.support_max
    table: CostTable = {}
    for rank, x in enumerate(mu.locations, start=1):
        for y in nu.locations:
            table[(x, y)] = -rank * (y_max + 1 - y) ** 2
    return table


def brute_force_pcd(mu: DiscreteMeasure, nu: DiscreteMeasure, grid_denominator: int) -> bool:
    """Search the 1/d lattice of sub-measures eta <= nu for one with mu <=_cd eta."""
    limit = get_brute_force_max_atoms()
    if len(mu) > limit or len(nu) > limit:
        raise RefusalError(f"brute force limited to {limit} atoms per measure")
    if not 1 <= grid_denominator <= BRUTE_FORCE_MAX_DENOMINATOR:
        raise RefusalError(
            f"grid denominator must lie in [1, {BRUTE_FORCE_MAX_DENOMINATOR}], got {grid_denominator}"
        )
    d = grid_denominator
    target = mu.mass
    choices = []
    for _, w in nu.atoms:
        values = {Fraction(t, d) for t in range(int(w * d) + 1)}
        values.add(w)
        choices.append(sorted(values))
    ys = nu.locations
    for combo in itertools.product(*choices):
        if sum(combo) != target:
            continue
        eta = DiscreteMeasure(tuple(zip(ys, combo)))
        if compare(mu, eta, OrderKind.CONVEX_DECREASING):
            return True
    return False
