"""
Unit tests for order decisions.

Scenarios:
  a) Convex-decreasing order on the two-atom examples, both directions, with witnesses
  b) Convex order needs equal means; pointwise order is atom-wise domination
  c) Maximal element T^nu(mu) and its independence from the quantile version
  d) Positive convex(-decreasing) order across masses, and the disjoint-support criterion
  e) pcd agrees with lattice brute force on tiny seeded instances
  f) Implication chain between the orders, and the mean bound of cd
  g) Every same-mass sub-measure of nu above mu in pc order is cd-below T^nu(mu)
"""

import itertools
import os
import sys
from fractions import Fraction as F

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from shadowcoupling.errors import DomainError
from shadowcoupling.instances import (
    random_cd_instance,
    random_lattice_instance,
    random_martingale_instance,
    random_split,
)
from shadowcoupling.measure import DiscreteMeasure, dirac
from shadowcoupling.oracle import brute_force_pcd
from shadowcoupling.order import OrderKind, compare, disjoint_support_pc, maximal_element

CD = OrderKind.CONVEX_DECREASING
PCD = OrderKind.POSITIVE_CONVEX_DECREASING


def _m(*pairs):
    return DiscreteMeasure.from_pairs(pairs)


NU = _m((-2, F(1, 2)), (1, F(1, 2)))


def test_point_mass_below_its_spread_with_drift():
    assert compare(dirac(0), NU, CD)
    assert not compare(NU, dirac(0), CD)


def test_cd_direction_on_half_atoms():
    assert compare(dirac(1, F(1, 2)), dirac(0, F(1, 2)), CD)
    res = compare(dirac(0, F(1, 2)), dirac(1, F(1, 2)), CD)
    assert not res
    assert res.point == 1
    assert res.witness


def test_cd_needs_equal_mass():
    res = compare(dirac(0, F(1, 2)), NU, CD)
    assert not res.holds
    assert "mass" in res.witness


def test_convex_order_needs_equal_means():
    assert compare(dirac(0), _m((-1, F(1, 2)), (1, F(1, 2))), OrderKind.CONVEX)
    assert not compare(dirac(0), NU, OrderKind.CONVEX)


def test_pointwise_order():
    assert compare(dirac(1, F(1, 4)), NU, OrderKind.POINTWISE)
    res = compare(dirac(0, F(1, 4)), NU, OrderKind.POINTWISE)
    assert not res
    assert res.point == 0


def test_maximal_element():
    assert maximal_element(dirac(0, F(1, 2)), NU) == dirac(-2, F(1, 2))
    assert NU - maximal_element(dirac(0, F(1, 2)), NU) == dirac(1, F(1, 2))
    three = _m((-2, F(1, 3)), (0, F(1, 3)), (2, F(1, 3)))
    for mass in (F(1, 3), F(1, 2), F(2, 3)):
        mu = dirac(5, mass)
        assert maximal_element(mu, three, "left") == maximal_element(mu, three, "right")
    assert maximal_element(dirac(0), NU) == NU
    with pytest.raises(DomainError):
        maximal_element(dirac(0, 2), NU)


def test_pcd_across_masses():
    assert compare(dirac(0, F(1, 2)), NU, PCD)
    assert compare(dirac(0, F(1, 3)), _m((-2, F(1, 3)), (2, F(1, 3))), PCD)
    assert not compare(dirac(0, F(1, 2)), dirac(1, 1), PCD)
    assert not compare(dirac(0, 2), NU, PCD)


def test_positive_convex_needs_both_tails():
    chi = _m((-2, F(1, 3)), (2, F(1, 3)))
    assert compare(dirac(0, F(1, 3)), chi, OrderKind.POSITIVE_CONVEX)
    assert not compare(dirac(0, F(1, 2)), dirac(-2, 1), OrderKind.POSITIVE_CONVEX)
    assert compare(dirac(0, F(1, 2)), dirac(-2, 1), PCD)


def test_disjoint_support_criterion():
    chi = _m((-2, F(1, 3)), (2, F(1, 3)))
    assert disjoint_support_pc(dirac(0, F(1, 3)), chi)
    assert not disjoint_support_pc(dirac(0, F(1, 2)), chi)
    with pytest.raises(DomainError):
        disjoint_support_pc(dirac(2, F(1, 4)), chi)


@pytest.mark.parametrize("seed", range(25))
def test_pcd_matches_lattice_brute_force(seed):
    inst = random_lattice_instance(seed)
    assert compare(inst.mu, inst.nu, PCD).holds == brute_force_pcd(inst.mu, inst.nu, 4)


def _decisions(a, b):
    return {kind: compare(a, b, kind).holds for kind in OrderKind}


def _assert_chain(a, b):
    holds = _decisions(a, b)
    if holds[OrderKind.CONVEX]:
        assert holds[CD]
    if holds[CD]:
        assert holds[PCD]
        assert a.mass == b.mass
        assert a.mean >= b.mean
    if holds[OrderKind.POSITIVE_CONVEX]:
        assert holds[PCD]
    if holds[OrderKind.POINTWISE]:
        assert holds[OrderKind.POSITIVE_CONVEX]
    return holds


@pytest.mark.parametrize("seed", range(40))
def test_order_chain_on_lattice_pairs(seed):
    inst = random_lattice_instance(seed)
    _assert_chain(inst.mu, inst.nu)
    _assert_chain(inst.nu, inst.mu)


@pytest.mark.parametrize("seed", range(15))
def test_order_chain_on_generated_pairs(seed):
    cd = random_cd_instance(seed)
    assert _assert_chain(cd.mu, cd.nu)[CD]

    mart = random_martingale_instance(seed)
    holds = _assert_chain(mart.mu, mart.nu)
    assert holds[OrderKind.CONVEX]
    assert holds[OrderKind.POSITIVE_CONVEX]

    part, _ = random_split(seed, cd.nu)
    if part:
        assert _assert_chain(part, cd.nu)[OrderKind.POINTWISE]


def _quarter_submeasures(nu, mass):
    """Every eta <= nu with weights on the 1/4 lattice and the given mass."""
    units = [range(int(w * 4) + 1) for w in nu.weights]
    for counts in itertools.product(*units):
        if F(sum(counts), 4) == mass:
            yield DiscreteMeasure(tuple((x, F(c, 4)) for x, c in zip(nu.locations, counts)))


@pytest.mark.parametrize("seed", range(20))
def test_maximal_element_bounds_pc_submeasures(seed):
    inst = random_lattice_instance(seed)
    top = maximal_element(inst.mu, inst.nu)
    for eta in _quarter_submeasures(inst.nu, inst.mu.mass):
        assert compare(eta, inst.nu, OrderKind.POINTWISE)
        if compare(inst.mu, eta, OrderKind.POSITIVE_CONVEX):
            assert compare(eta, top, CD)
