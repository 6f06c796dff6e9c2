"""
Unit tests for the regime structure.

Scenarios:
  a) c(u) on the worked examples and the mean representation of c
  b) u* = 3/4 for (delta_0, nu) and u* = 1/2 for the W instance; trivial regimes
  c) u* certificates and support separation on seeded cd instances
  d) Irreducible decomposition: martingale component, supermartingale component, fixed part
  e) c vanishes exactly where the lift is pc-below nu, and grows strictly past u*
  f) Each component's potential difference is positive on its interval and nowhere else
"""

import os
import sys
from fractions import Fraction as F

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from shadowcoupling.config import USTAR_CERTIFICATE_STEPS
from shadowcoupling.errors import DomainError, InternalInconsistencyError, OrderViolationError
from shadowcoupling.instances import (
    random_cd_instance,
    random_martingale_instance,
    random_separated_instance,
)
from shadowcoupling.measure import NEG_INF, POS_INF, ZERO, DiscreteMeasure, dirac, lift
from shadowcoupling.order import OrderKind, compare
from shadowcoupling.pwl import positive_components, put_potential
from shadowcoupling.regime import (
    Component,
    c_grid,
    c_of,
    check_component_support,
    decompose,
    martingale_points,
    split_at_ustar,
    support_separation_holds,
    ustar,
)
from shadowcoupling.shadow import shadow


def _m(*pairs):
    return DiscreteMeasure.from_pairs(pairs)


NU = _m((-2, F(1, 2)), (1, F(1, 2)))
W_MU = _m((-1, F(1, 2)), (1, F(1, 2)))
W_NU = _m((-2, F(1, 2)), (0, F(1, 2)))


def test_c_on_point_mass_instance():
    assert c_of(dirac(0), NU, 0) == 0
    assert c_of(dirac(0), NU, F(1, 2)) == 0
    assert c_of(dirac(0), NU, F(3, 4)) == 0
    assert c_of(dirac(0), NU, 1) == F(1, 2)
    assert c_of(dirac(0), NU, F(7, 8)) > 0
    with pytest.raises(DomainError):
        c_of(dirac(0), NU, F(3, 2))


def test_c_grid_is_nondecreasing():
    values = [c for _, c in c_grid(W_MU, W_NU, 8)]
    assert values[0] == 0
    assert values[-1] == W_MU.mean - W_NU.mean
    assert all(a <= b for a, b in zip(values, values[1:]))


def test_ustar_examples():
    assert ustar(dirac(0), NU) == F(3, 4)
    assert ustar(W_MU, W_NU) == F(1, 2)


def test_ustar_trivial_regimes():
    assert ustar(dirac(0), _m((-1, F(1, 2)), (1, F(1, 2)))) == 1
    assert ustar(dirac(3), dirac(1)) == 0
    assert ustar(ZERO, ZERO) == 0


def test_ustar_requires_cd():
    with pytest.raises(OrderViolationError):
        ustar(NU, dirac(0))


def test_martingale_points():
    assert martingale_points(dirac(0), NU) == 0
    assert martingale_points(W_MU, W_NU) == -1
    assert martingale_points(dirac(3), dirac(1)) is NEG_INF
    assert martingale_points(dirac(0), _m((-1, F(1, 2)), (1, F(1, 2)))) is POS_INF


def test_split_at_ustar():
    split = split_at_ustar(dirac(0), NU)
    assert split.mu_martingale == dirac(0, F(3, 4))
    assert split.nu_martingale == _m((-2, F(1, 4)), (1, F(1, 2)))
    assert split.mu_rest == dirac(0, F(1, 4))
    assert split.nu_rest == dirac(-2, F(1, 4))
    assert support_separation_holds(split)


@pytest.mark.parametrize("seed", range(25))
def test_ustar_certificates_on_random_instances(seed):
    inst = random_cd_instance(seed)
    u = ustar(inst.mu, inst.nu)
    assert c_of(inst.mu, inst.nu, u) == 0
    if u < 1:
        for j in range(1, USTAR_CERTIFICATE_STEPS + 1):
            assert c_of(inst.mu, inst.nu, u + (1 - u) / 2 ** j) > 0
    assert support_separation_holds(split_at_ustar(inst.mu, inst.nu))


@pytest.mark.parametrize("seed", range(10))
def test_c_is_drift_of_the_lifted_shadow(seed):
    inst = random_cd_instance(seed)
    for j in range(1, 5):
        u = F(j, 4)
        mu_u = lift(inst.mu, u)
        assert c_of(inst.mu, inst.nu, u) == mu_u.mean - shadow(mu_u, inst.nu).shadow.mean


@pytest.mark.parametrize("seed", range(10))
def test_regime_extremes(seed):
    mart = random_martingale_instance(seed)
    assert ustar(mart.mu, mart.nu) == 1
    sep = random_separated_instance(seed)
    assert ustar(sep.mu, sep.nu) == 0


def test_decompose_martingale_pair():
    dec = decompose(dirac(0), _m((-1, F(1, 2)), (1, F(1, 2))))
    assert dec.supermartingale_component is None
    (comp,) = dec.martingale_components
    assert (comp.lo, comp.hi) == (F(-1), F(1))
    assert comp.mu_part == dirac(0)
    assert comp.nu_part == _m((-1, F(1, 2)), (1, F(1, 2)))
    assert (comp.alpha, comp.beta) == (F(1, 2), F(1, 2))
    assert comp.is_martingale
    assert dec.fixed_part == ZERO
    assert dec.component_containing(0) is comp
    assert dec.component_containing(1) is None


def test_decompose_supermartingale_pair():
    dec = decompose(W_MU, W_NU)
    assert dec.x_star == -2
    assert dec.martingale_components == ()
    comp = dec.supermartingale_component
    assert not comp.is_martingale
    assert comp.mu_part == W_MU
    assert comp.nu_part == W_NU
    assert comp.alpha == F(1, 2)
    assert comp.beta == 0
    assert dec.fixed_part == ZERO


def test_decompose_keeps_fixed_atoms():
    mu = _m((-1, F(1, 4)), (3, F(1, 4)), (5, F(1, 2)))
    nu = _m((-2, F(1, 8)), (0, F(1, 8)), (3, F(1, 4)), (5, F(1, 2)))
    dec = decompose(mu, nu)
    assert dec.fixed_part == _m((3, F(1, 4)), (5, F(1, 2)))
    assert [(c.lo, c.hi) for c in dec.martingale_components] == [(F(-2), F(0))]


@pytest.mark.parametrize("seed", range(15))
def test_decomposition_accounts_for_all_mass(seed):
    inst = random_cd_instance(seed)
    dec = decompose(inst.mu, inst.nu)
    total_mu, total_nu = dec.fixed_part, dec.fixed_part
    for comp in dec.components:
        total_mu = total_mu + comp.mu_part
        total_nu = total_nu + comp.nu_part
    assert total_mu == inst.mu
    assert total_nu == inst.nu


def test_martingale_points_with_known_ustar():
    assert martingale_points(W_MU, W_NU, F(1, 2)) == -1
    assert martingale_points(dirac(0), NU, F(3, 4)) == 0
    assert martingale_points(W_MU, W_NU, F(0)) is NEG_INF


@pytest.mark.parametrize("seed", range(15))
def test_c_vanishes_exactly_when_lift_is_pc_below_nu(seed):
    inst = random_cd_instance(seed)
    for j in range(1, 9):
        u = inst.mu.mass * F(j, 8)
        below = compare(lift(inst.mu, u), inst.nu, OrderKind.POSITIVE_CONVEX)
        assert (c_of(inst.mu, inst.nu, u) == 0) == below.holds


@pytest.mark.parametrize("seed", range(15))
def test_c_grows_strictly_after_ustar(seed):
    inst = random_cd_instance(seed)
    u = ustar(inst.mu, inst.nu)
    if u == inst.mu.mass:
        return
    levels = [u + (inst.mu.mass - u) * F(j, 6) for j in range(1, 7)]
    values = [c_of(inst.mu, inst.nu, v) for v in levels]
    assert values[0] > 0
    assert all(a < b for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("seed", range(15))
def test_martingale_part_is_in_convex_order(seed):
    inst = random_cd_instance(seed)
    split = split_at_ustar(inst.mu, inst.nu)
    assert compare(split.mu_martingale, split.nu_martingale, OrderKind.CONVEX)
    assert split.mu_martingale.mass == split.ustar


@pytest.mark.parametrize("seed", range(15))
def test_component_potentials_are_positive_on_their_interval(seed):
    for inst in (random_cd_instance(seed), random_martingale_instance(seed)):
        for comp in decompose(inst.mu, inst.nu).components:
            d_i = put_potential(comp.nu_part) - put_potential(comp.mu_part)
            assert positive_components(d_i) == [(comp.lo, comp.hi)]
            check_component_support(comp)


def test_component_support_check_rejects_wrong_interval():
    spread = _m((-1, F(1, 2)), (1, F(1, 2)))
    good = Component(F(-1), F(1), dirac(0), spread, F(1, 2), F(1, 2))
    check_component_support(good)
    bad = Component(F(-1), F(2), dirac(0), spread, F(1, 2), F(1, 2))
    with pytest.raises(InternalInconsistencyError):
        check_component_support(bad)
