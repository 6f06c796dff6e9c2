"""
Unit tests for the seeded instance generators.

Scenarios:
  a) Each kind satisfies the order it promises
  b) Atom counts and weight denominators stay within the generator limits
  c) Same seed, same instance
  d) random_split and the piecewise-linear generators
"""

import os
import sys
from fractions import Fraction as F

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from shadowcoupling.instances import (
    MAX_DENOMINATOR,
    MAX_MU_ATOMS,
    MAX_NU_ATOMS,
    generate,
    random_cd_instance,
    random_convex_pwl,
    random_lattice_instance,
    random_martingale_instance,
    random_pcd_instance,
    random_pwl,
    random_separated_instance,
    random_split,
)
from shadowcoupling.order import OrderKind, compare

SEEDS = range(25)


@pytest.mark.parametrize("seed", SEEDS)
def test_cd_instances(seed):
    inst = random_cd_instance(seed)
    assert inst.mu.mass == inst.nu.mass == 1
    assert compare(inst.mu, inst.nu, OrderKind.CONVEX_DECREASING)
    assert 1 <= len(inst.mu) <= MAX_MU_ATOMS
    assert len(inst.nu) <= MAX_NU_ATOMS
    assert all(w.denominator <= MAX_DENOMINATOR for w in inst.mu.weights)
    assert inst.kind == "cd" and inst.seed == seed


@pytest.mark.parametrize("seed", SEEDS)
def test_martingale_instances(seed):
    inst = random_martingale_instance(seed)
    assert inst.mu.mean == inst.nu.mean
    assert compare(inst.mu, inst.nu, OrderKind.CONVEX)


@pytest.mark.parametrize("seed", SEEDS)
def test_pcd_instances(seed):
    inst = random_pcd_instance(seed)
    assert 0 < inst.mu.mass <= inst.nu.mass
    assert compare(inst.mu, inst.nu, OrderKind.POSITIVE_CONVEX_DECREASING)


@pytest.mark.parametrize("seed", SEEDS)
def test_separated_instances(seed):
    inst = random_separated_instance(seed)
    assert inst.nu.support_max < inst.mu.support_min
    assert compare(inst.mu, inst.nu, OrderKind.CONVEX_DECREASING)


@pytest.mark.parametrize("seed", SEEDS)
def test_lattice_instances(seed):
    inst = random_lattice_instance(seed)
    assert inst.nu.mass == 1
    assert inst.mu.mass <= 1
    assert len(inst.mu) <= 4 and len(inst.nu) <= 4
    assert all((4 * w).denominator == 1 for w in inst.mu.weights + inst.nu.weights)


def test_same_seed_same_instance():
    assert random_cd_instance(3) == random_cd_instance(3)
    assert random_pcd_instance(8) == random_pcd_instance(8)


def test_generate():
    batch = generate("separated", 10, 3)
    assert [inst.seed for inst in batch] == [10, 11, 12]
    assert batch[0] == random_separated_instance(10)
    with pytest.raises(ValueError):
        generate("uniform", 0, 1)


def test_to_dict():
    data = random_cd_instance(2).to_dict()
    assert set(data) == {"mu", "nu", "kind", "seed"}
    assert F(data["mu"][0]["w"]) > 0


@pytest.mark.parametrize("seed", range(10))
def test_random_split(seed):
    m = random_cd_instance(seed).nu
    a, b = random_split(seed, m)
    assert a + b == m


@pytest.mark.parametrize("seed", range(10))
def test_pwl_generators(seed):
    f = random_pwl(seed, -2, 3)
    assert (f.left_slope, f.right_slope) == (-2, 3)
    g = random_convex_pwl(seed, -1, 2)
    assert g.is_convex()
    with pytest.raises(ValueError):
        random_convex_pwl(seed, 1, 0)
