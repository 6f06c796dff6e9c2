"""
Couplings of finite measures and their verification.

A Coupling stores, per source atom x_i of mu, the weight w_i and the
normalized conditional law pi_x. Three constructions are provided:

    increasing_coupling  greedy shadows atom by atom: row i embeds w_i*delta_x_i
                         into what rows 1..i-1 left of nu
    antitone_coupling    decreasing quantile rearrangement
    quantile_coupling    increasing quantile rearrangement

verify() runs the battery of exact checks (marginals, supermartingale,
martingale rows, no-crossing at D-zeros, left and right monotonicity)
and reports each independently with a witness.
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .config import checks_enabled
from .errors import DomainError, InternalInconsistencyError, MissingCostError, OrderViolationError
from .measure import (
    NEG_INF,
    POS_INF,
    ZERO,
    DiscreteMeasure,
    Extended,
    left_quantile,
)
from .order import OrderKind, compare
from .pwl import linear_combine, put_potential, zero_set
from .regime import martingale_points, ustar
from .shadow import shadow

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CouplingRow:
    source: Fraction
    weight: Fraction
    conditional: DiscreteMeasure

    @property
    def joint(self) -> DiscreteMeasure:
        """weight * conditional, the mass this row sends to each target."""
        return self.conditional.scale(self.weight)

    @property
    def drift(self) -> Fraction:
        """mean(conditional) - source; <= 0 for a supermartingale row."""
        return self.conditional.mean - self.source

    def to_dict(self) -> Dict:
        return {
            "x": str(self.source),
            "w": str(self.weight),
            "conditional": self.conditional.to_dict()["atoms"],
        }


@dataclass(frozen=True)
class Coupling:
    rows: Tuple[CouplingRow, ...] = ()

    def first_marginal(self) -> DiscreteMeasure:
        return DiscreteMeasure(tuple((r.source, r.weight) for r in self.rows))

    def second_marginal(self) -> DiscreteMeasure:
        total = ZERO
        for r in self.rows:
            total = total + r.joint
        return total

    def row_at(self, x) -> Optional[CouplingRow]:
        for r in self.rows:
            if r.source == x:
                return r
        return None

    def restrict_sources(self, lo: Extended, hi: Extended) -> "Coupling":
        return Coupling(tuple(r for r in self.rows if lo < r.source < hi))

    def to_dict(self) -> Dict:
        return {"rows": [r.to_dict() for r in self.rows]}


def _merge_rows(pieces: List[Tuple[Fraction, Fraction, Fraction]]) -> Coupling:
    """Build a coupling from (x, y, mass) triples."""
    by_source: Dict[Fraction, Dict[Fraction, Fraction]] = {}
    for x, y, m in pieces:
        if m == 0:
            continue
        targets = by_source.setdefault(x, {})
        targets[y] = targets.get(y, Fraction(0)) + m
    rows = []
    for x in sorted(by_source):
        joint = DiscreteMeasure.from_dict(by_source[x])
        rows.append(CouplingRow(x, joint.mass, joint.scale(1 / joint.mass)))
    return Coupling(tuple(rows))


# ============================================================================
# CONSTRUCTIONS
# ============================================================================

def increasing_coupling(mu: DiscreteMeasure, nu: DiscreteMeasure) -> Coupling:
    """pi_I: the prefix mu|(-inf, x_i] is transported to its shadow S^nu(mu|(-inf, x_i])."""
    res = compare(mu, nu, OrderKind.CONVEX_DECREASING)
    if not res:
        raise OrderViolationError(f"mu is not <=_cd nu: {res.witness}", res.point)
    remaining = nu
    used = ZERO
    rows = []
    for i, (x, w) in enumerate(mu.atoms):
        s = shadow(DiscreteMeasure(((x, w),)), remaining).shadow
        rows.append(CouplingRow(x, w, s.scale(1 / w)))
        remaining = remaining - s
        used = used + s
        if checks_enabled():
            prefix = mu.restrict(hi=x, hi_closed=True)
            if used != shadow(prefix, nu).shadow:
                raise InternalInconsistencyError(
                    f"greedy rows 1..{i + 1} do not match the shadow of mu up to {x}"
                )
    logger.info(f"increasing coupling built with {len(rows)} rows")
    return Coupling(tuple(rows))


def _rearrangement(mu: DiscreteMeasure, nu: DiscreteMeasure, reverse: bool) -> Coupling:
    if mu.mass != nu.mass:
        raise DomainError(f"rearrangements need equal masses ({mu.mass} vs {nu.mass})")
    total = mu.mass
    cuts = set()
    acc = Fraction(0)
    for _, w in mu.atoms:
        acc += w
        cuts.add(acc)
    acc = Fraction(0)
    for _, w in nu.atoms:
        acc += w
        cuts.add(total - acc if reverse else acc)
    cuts.add(Fraction(0))
    grid = sorted(c for c in cuts if 0 <= c <= total)
    pieces = []
    for a, b in zip(grid, grid[1:]):
        x = left_quantile(mu, b)
        y = left_quantile(nu, total - a) if reverse else left_quantile(nu, b)
        pieces.append((x, y, b - a))
    return _merge_rows(pieces)


def antitone_coupling(mu: DiscreteMeasure, nu: DiscreteMeasure) -> Coupling:
    """Quantile slice [a, b] of mu goes to the nu slice [M - b, M - a]."""
    return _rearrangement(mu, nu, reverse=True)


def quantile_coupling(mu: DiscreteMeasure, nu: DiscreteMeasure) -> Coupling:
    """Quantile slice [a, b] of mu goes to the nu slice [a, b]."""
    return _rearrangement(mu, nu, reverse=False)


# ============================================================================
# VERIFICATION
# ============================================================================

@dataclass(frozen=True)
class CheckResult:
    ok: bool
    witness: Optional[str] = None

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> Dict:
        return {"ok": self.ok, "witness": self.witness}


CHECK_NAMES = (
    "marginals_ok",
    "supermartingale_ok",
    "martingale_rows_ok",
    "no_crossing_ok",
    "left_monotone_ok",
    "right_monotone_ok",
)


@dataclass(frozen=True)
class VerificationReport:
    marginals_ok: CheckResult
    supermartingale_ok: CheckResult
    martingale_rows_ok: CheckResult
    no_crossing_ok: CheckResult
    left_monotone_ok: CheckResult
    right_monotone_ok: CheckResult
    x_star: Extended = field(default=NEG_INF)

    @property
    def all_ok(self) -> bool:
        return all(getattr(self, name).ok for name in CHECK_NAMES)

    def failures(self) -> List[str]:
        return [name for name in CHECK_NAMES if not getattr(self, name).ok]

    def to_dict(self) -> Dict:
        out = {name: getattr(self, name).to_dict() for name in CHECK_NAMES}
        out["x_star"] = str(self.x_star)
        out["all_ok"] = self.all_ok
        return out


def _check_marginals(pi: Coupling, mu: DiscreteMeasure, nu: DiscreteMeasure) -> CheckResult:
    for r in pi.rows:
        if r.conditional.mass != 1:
            return CheckResult(False, f"row {r.source}: conditional has mass {r.conditional.mass}")
    first = pi.first_marginal()
    if first != mu:
        return CheckResult(False, f"first marginal {first} != mu")
    second = pi.second_marginal()
    if second != nu:
        return CheckResult(False, f"second marginal {second} != nu")
    return CheckResult(True)


def _check_supermartingale(pi: Coupling) -> CheckResult:
    for r in pi.rows:
        if r.drift > 0:
            return CheckResult(False, f"row {r.source}: conditional mean {r.conditional.mean} > {r.source}")
    return CheckResult(True)


def _martingale_sources(mu: DiscreteMeasure, u_star: Fraction) -> List[Fraction]:
    """Sources whose whole quantile interval lies in (0, u*]."""
    return [x for x in mu.locations if mu.cdf(x) <= u_star]


def _check_martingale_rows(pi: Coupling, sources: List[Fraction]) -> CheckResult:
    wanted = set(sources)
    for r in pi.rows:
        if r.source in wanted and r.drift != 0:
            return CheckResult(False, f"row {r.source}: conditional mean {r.conditional.mean} != {r.source}")
    return CheckResult(True)


def _crossing_points(mu: DiscreteMeasure, nu: DiscreteMeasure) -> List[Fraction]:
    """Exact zeros of D strictly inside (l_mu, r_mu), with zero segments sampled at every atom and gap."""
    d = linear_combine(put_potential(nu), put_potential(mu), 1, -1)
    zeros, intervals = zero_set(d)
    lo, hi = mu.support_min, mu.support_max
    atoms = sorted(set(mu.locations) | set(nu.locations))
    points = set(zeros)
    for a, b in intervals:
        inside = [x for x in atoms if a <= x <= b]
        if a is not NEG_INF:
            inside.append(a)
        if b is not POS_INF:
            inside.append(b)
        inside = sorted(set(inside))
        points.update(inside)
        points.update((p + q) / 2 for p, q in zip(inside, inside[1:]))
    return sorted(p for p in points if lo < p < hi)


def _check_no_crossing(pi: Coupling, mu: DiscreteMeasure, nu: DiscreteMeasure) -> CheckResult:
    for k in _crossing_points(mu, nu):
        for r in pi.rows:
            for y, _ in r.conditional.atoms:
                if (r.source < k < y) or (y < k < r.source):
                    return CheckResult(False, f"mass crosses D-zero {k}: {r.source} -> {y}")
    return CheckResult(True)


def _check_left_monotone(pi: Coupling) -> CheckResult:
    """No (x, y-), (x, y+), (x', y') in the support with x < x' and y- < y' < y+."""
    rows = sorted(pi.rows, key=lambda r: r.source)
    for r, later in itertools.combinations(rows, 2):
        ys = r.conditional.locations
        if len(ys) < 2:
            continue
        y_lo, y_hi = ys[0], ys[-1]
        for y in later.conditional.locations:
            if y_lo < y < y_hi:
                return CheckResult(
                    False,
                    f"({r.source}, {y_lo}), ({r.source}, {y_hi}) and ({later.source}, {y})",
                )
    return CheckResult(True)


def _check_right_monotone(pi: Coupling, martingale: List[Fraction]) -> CheckResult:
    """No (x1, y1), (x2, y2) with x1 < x2, x1 outside the martingale points and y1 < y2."""
    exempt = set(martingale)
    rows = sorted(pi.rows, key=lambda r: r.source)
    for first, second in itertools.combinations(rows, 2):
        if first.source in exempt:
            continue
        y1 = first.conditional.support_min
        y2 = second.conditional.support_max
        if y1 < y2:
            return CheckResult(False, f"({first.source}, {y1}) and ({second.source}, {y2})")
    return CheckResult(True)


def verify(pi: Coupling, mu: DiscreteMeasure, nu: DiscreteMeasure) -> VerificationReport:
    """
    Run every check; never raises on a failing coupling.

    Args:
        pi: the coupling under test
        mu, nu: the intended marginals

    Returns:
        VerificationReport with one CheckResult per property. When mu is not
        <=_cd nu the checks that need u* fail with that reason.
    """
    marginals = _check_marginals(pi, mu, nu)
    supermartingale = _check_supermartingale(pi)
    left = _check_left_monotone(pi)

    cd = compare(mu, nu, OrderKind.CONVEX_DECREASING)
    if cd:
        u_star = ustar(mu, nu)
        x_star = martingale_points(mu, nu, u_star)
        martingale_rows = _check_martingale_rows(pi, _martingale_sources(mu, u_star))
        no_crossing = _check_no_crossing(pi, mu, nu)
        right = _check_right_monotone(pi, [x for x in mu.locations if x <= x_star])
    else:
        reason = f"mu is not <=_cd nu: {cd.witness}"
        martingale_rows = CheckResult(False, reason)
        no_crossing = CheckResult(False, reason)
        right = CheckResult(False, reason)
        x_star = NEG_INF

    report = VerificationReport(marginals, supermartingale, martingale_rows, no_crossing, left, right, x_star)
    if not report.all_ok:
        logger.info(f"verification failed: {', '.join(report.failures())}")
    return report


def cost(pi: Coupling, table: Dict[Tuple[Fraction, Fraction], Fraction]) -> Fraction:
    """Expected cost sum_i w_i sum_j pi_i(y_j) c(x_i, y_j)."""
    total = Fraction(0)
    for r in pi.rows:
        for y, p in r.conditional.atoms:
            if (r.source, y) not in table:
                raise MissingCostError(r.source, y)
            total += r.weight * p * Fraction(table[(r.source, y)])
    return total
