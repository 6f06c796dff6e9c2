"""
Unit tests for the support curves G, R, S, T and the lifted kernel.

Scenarios:
  a) delta_0 into 1/2 d(-2) + 1/2 d(1): u* = 3/4, window geometry below, T = -2 above
  b) W instance: T(5/8) = 0, T(15/16) = -2, martingale triple at 1/4
  c) Two-point kernels and sampling Y(u, v)
  d) Grid monotonicity and kernel limits on seeded cd instances
  e) Levels outside (0, M) are rejected
  f) Inside a component window R and S stay in the component interval and touch the support line
"""

import os
import sys
from fractions import Fraction as F

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from shadowcoupling.curves import (
    Region,
    component_geometry,
    curve_model,
    kernel_limit_check,
    lifted_kernel,
    sample_y,
    triple_at,
    triple_grid,
    two_point_kernel,
)
from shadowcoupling.errors import DomainError
from shadowcoupling.instances import random_cd_instance, random_martingale_instance
from shadowcoupling.measure import DiscreteMeasure, dirac
from shadowcoupling.pwl import evaluate
from shadowcoupling.validation import check_triples


def _m(*pairs):
    return DiscreteMeasure.from_pairs(pairs)


NU2 = _m((-2, F(1, 2)), (1, F(1, 2)))
W_MU = _m((-1, F(1, 2)), (1, F(1, 2)))
W_NU = _m((-2, F(1, 2)), (0, F(1, 2)))


def test_martingale_triple_at_ustar():
    t = triple_at(dirac(0), NU2, F(3, 4))
    assert t.region is Region.MARTINGALE
    assert (t.G, t.R, t.S) == (0, -2, 1)
    assert t.phi == F(1, 4)
    assert t.T is None


def test_martingale_triple_below_ustar():
    t = triple_at(dirac(0), NU2, F(1, 2))
    assert t.region is Region.MARTINGALE
    assert (t.R, t.S) == (-2, 1)


def test_supermartingale_triple_above_ustar():
    t = triple_at(dirac(0), NU2, F(7, 8))
    assert t.region is Region.SUPERMARTINGALE
    assert t.G == 0
    assert t.T == -2
    assert t.R is None and t.S is None
    assert t.to_dict()["R"] is None
    assert t.to_dict()["T"] == "-2"


def test_w_instance_triples():
    t = triple_at(W_MU, W_NU, F(5, 8))
    assert t.region is Region.SUPERMARTINGALE
    assert (t.G, t.T) == (1, 0)
    assert triple_at(W_MU, W_NU, F(15, 16)).T == -2

    low = triple_at(W_MU, W_NU, F(1, 4))
    assert low.region is Region.MARTINGALE
    assert (low.G, low.R, low.S) == (-1, -2, 0)


@pytest.mark.parametrize("u", [0, 1, F(3, 2), -1])
def test_levels_outside_unit_interval(u):
    with pytest.raises(DomainError):
        triple_at(dirac(0), NU2, u)


def test_two_point_kernel_law():
    assert two_point_kernel(-2, 0, 1).law == _m((-2, F(1, 3)), (1, F(2, 3)))
    assert two_point_kernel(0, 0, 1).law == dirac(0)
    assert two_point_kernel(3, 3, 3).law == dirac(3)
    with pytest.raises(DomainError):
        two_point_kernel(1, 0, 2)


def test_lifted_kernel():
    assert lifted_kernel(dirac(0), NU2, F(1, 2)) == _m((-2, F(1, 3)), (1, F(2, 3)))
    assert lifted_kernel(dirac(0), NU2, F(7, 8)) == dirac(-2)


def test_sample_y():
    assert sample_y(dirac(0), NU2, F(1, 2), F(1, 10)) == -2
    assert sample_y(dirac(0), NU2, F(1, 2), F(1, 3)) == -2
    assert sample_y(dirac(0), NU2, F(1, 2), F(9, 10)) == 1
    assert sample_y(dirac(0), NU2, F(7, 8), F(1, 2)) == -2
    with pytest.raises(DomainError):
        sample_y(dirac(0), NU2, F(1, 2), 1)


def test_grid_contains_ustar_and_is_sorted():
    triples = triple_grid(dirac(0), NU2, 3)
    levels = [t.u for t in triples]
    assert levels == sorted(levels)
    assert F(1, 4) in levels and F(3, 4) in levels
    assert all(0 < u < 1 for u in levels)


def test_kernel_limit_on_small_examples():
    for u in (F(1, 2), F(3, 4), F(7, 8)):
        assert kernel_limit_check(dirac(0), NU2, u, 6)
    with pytest.raises(DomainError):
        kernel_limit_check(dirac(0), NU2, F(1, 2), 0)


@pytest.mark.parametrize("seed", range(12))
def test_curve_grid_invariants(seed):
    inst = random_cd_instance(seed)
    triples = triple_grid(inst.mu, inst.nu, 16)
    assert check_triples(triples) == []
    for t in triples:
        if t.region is Region.MARTINGALE:
            assert t.R <= t.G <= t.S
        else:
            assert t.T < t.G


@pytest.mark.parametrize("seed", range(6))
def test_kernel_limits_on_grid(seed):
    inst = random_cd_instance(seed)
    for t in triple_grid(inst.mu, inst.nu, 8):
        assert kernel_limit_check(inst.mu, inst.nu, t.u, 4)


def _window_triples(inst):
    model = curve_model(inst.mu, inst.nu)
    for t in triple_grid(inst.mu, inst.nu, 16):
        if t.region is Region.MARTINGALE:
            geom = component_geometry(model, t.u)
            if geom is not None:
                yield t, geom


@pytest.mark.parametrize("seed", range(12))
def test_component_curves_touch_the_support_line(seed):
    for inst in (random_cd_instance(seed), random_martingale_instance(seed)):
        for t, geom in _window_triples(inst):
            comp = geom.window.component
            assert (t.R, t.S) == (geom.R, geom.S)
            assert comp.lo <= t.R <= t.G <= t.S <= comp.hi

            def line(k):
                return evaluate(geom.hull, geom.G) + geom.phi * (k - geom.G)

            assert evaluate(geom.d, t.R) == line(t.R)
            assert evaluate(geom.e, t.S) == line(t.S)


def test_point_mass_window_geometry():
    model = curve_model(dirac(0), NU2)
    geom = component_geometry(model, F(1, 2))
    comp = geom.window.component
    assert (comp.lo, comp.hi) == (F(-2), F(1))
    assert (geom.window.u_left, geom.window.u_right) == (0, F(3, 4))
    assert (geom.G, geom.R, geom.S) == (0, -2, 1)
    assert component_geometry(model, F(7, 8)) is None
