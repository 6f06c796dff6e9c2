"""
Unit tests for couplings and their verification.

Scenarios:
  a) Increasing coupling of the W instance (both rows 1/2 d(-2) + 1/2 d(0)) and its cost 15/2
  b) Antitone and quantile couplings of W fail the supermartingale / martingale-row checks
  c) Separated supports: increasing coupling is the antitone coupling
  d) Equal means: increasing coupling is a left-monotone martingale coupling
  e) Full verification battery on seeded cd instances; components of martingale instances
     and of the martingale part of cd instances
  f) Errors: cd precondition, missing cost entries
"""

import os
import sys
from fractions import Fraction as F

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from shadowcoupling.coupling import (
    CHECK_NAMES,
    Coupling,
    antitone_coupling,
    cost,
    increasing_coupling,
    quantile_coupling,
    verify,
)
from shadowcoupling.errors import DomainError, MissingCostError, OrderViolationError
from shadowcoupling.instances import (
    random_cd_instance,
    random_martingale_instance,
    random_separated_instance,
)
from shadowcoupling.measure import DiscreteMeasure, dirac
from shadowcoupling.regime import decompose, split_at_ustar

W_MU = DiscreteMeasure.from_pairs([(-1, F(1, 2)), (1, F(1, 2))])
W_NU = DiscreteMeasure.from_pairs([(-2, F(1, 2)), (0, F(1, 2))])


def _w_cost():
    g = {F(-1): 1, F(1): 2}
    return {(x, y): g[x] * (1 - y) ** 2 for x in W_MU.locations for y in W_NU.locations}


def test_increasing_coupling_of_w_instance():
    pi = increasing_coupling(W_MU, W_NU)
    assert [r.source for r in pi.rows] == [-1, 1]
    for r in pi.rows:
        assert r.weight == F(1, 2)
        assert r.conditional == W_NU
    assert pi.first_marginal() == W_MU
    assert pi.second_marginal() == W_NU
    assert pi.row_at(-1).drift == 0
    assert pi.row_at(1).drift == -2
    assert pi.row_at(7) is None


def test_cost_of_w_instance():
    assert cost(increasing_coupling(W_MU, W_NU), _w_cost()) == F(15, 2)
    zero = {key: 0 for key in _w_cost()}
    assert cost(increasing_coupling(W_MU, W_NU), zero) == 0


def test_cost_missing_entry():
    table = _w_cost()
    del table[(F(1), F(0))]
    with pytest.raises(MissingCostError) as exc:
        cost(increasing_coupling(W_MU, W_NU), table)
    assert exc.value.pair == (F(1), F(0))


def test_w_instance_passes_every_check():
    report = verify(increasing_coupling(W_MU, W_NU), W_MU, W_NU)
    assert report.all_ok
    assert report.x_star == -1
    assert set(report.to_dict()) == set(CHECK_NAMES) | {"x_star", "all_ok"}


def test_rearrangements_of_w_instance():
    anti = antitone_coupling(W_MU, W_NU)
    assert anti.row_at(-1).conditional == dirac(0)
    assert anti.row_at(1).conditional == dirac(-2)
    report = verify(anti, W_MU, W_NU)
    assert not report.supermartingale_ok
    assert report.marginals_ok

    quant = quantile_coupling(W_MU, W_NU)
    assert quant.row_at(-1).conditional == dirac(-2)
    report = verify(quant, W_MU, W_NU)
    assert report.supermartingale_ok
    assert not report.martingale_rows_ok
    assert "martingale_rows_ok" in report.failures()


def test_rearrangement_needs_equal_mass():
    with pytest.raises(DomainError):
        antitone_coupling(dirac(0, F(1, 2)), W_NU)


def test_increasing_coupling_requires_cd():
    with pytest.raises(OrderViolationError):
        increasing_coupling(dirac(0), dirac(1))


def test_verify_reports_instead_of_raising():
    pi = quantile_coupling(dirac(0), dirac(1))
    report = verify(pi, dirac(0), dirac(1))
    assert report.marginals_ok
    assert not report.supermartingale_ok
    assert not report.no_crossing_ok
    assert not report.all_ok


def test_wrong_marginals_detected():
    pi = increasing_coupling(W_MU, W_NU)
    other = DiscreteMeasure.from_pairs([(-2, F(1, 4)), (0, F(3, 4))])
    assert not verify(pi, W_MU, other).marginals_ok
    assert not verify(Coupling(), W_MU, W_NU).marginals_ok


def test_separated_supports_give_antitone_coupling():
    mu = DiscreteMeasure.from_pairs([(1, F(1, 2)), (2, F(1, 2))])
    nu = DiscreteMeasure.from_pairs([(-2, F(1, 2)), (-1, F(1, 2))])
    pi = increasing_coupling(mu, nu)
    assert pi == antitone_coupling(mu, nu)
    assert pi.row_at(1).conditional == dirac(-1)


@pytest.mark.parametrize("seed", range(15))
def test_separated_random(seed):
    inst = random_separated_instance(seed)
    assert increasing_coupling(inst.mu, inst.nu) == antitone_coupling(inst.mu, inst.nu)


@pytest.mark.parametrize("seed", range(15))
def test_equal_means_give_left_monotone_martingale(seed):
    inst = random_martingale_instance(seed)
    pi = increasing_coupling(inst.mu, inst.nu)
    assert all(r.drift == 0 for r in pi.rows)
    report = verify(pi, inst.mu, inst.nu)
    assert report.left_monotone_ok
    assert report.all_ok


@pytest.mark.parametrize("seed", range(30))
def test_verification_battery(seed):
    inst = random_cd_instance(seed)
    report = verify(increasing_coupling(inst.mu, inst.nu), inst.mu, inst.nu)
    assert report.all_ok, report.failures()


@pytest.mark.parametrize("seed", range(15))
def test_components_carry_martingale_couplings(seed):
    inst = random_martingale_instance(seed)
    pi = increasing_coupling(inst.mu, inst.nu)
    for comp in decompose(inst.mu, inst.nu).martingale_components:
        part = pi.restrict_sources(comp.lo, comp.hi)
        assert part.first_marginal() == comp.mu_part
        assert part.second_marginal() == comp.nu_part
        assert all(r.drift == 0 for r in part.rows)


@pytest.mark.parametrize("seed", range(15))
def test_martingale_part_of_cd_instance_matches_components(seed):
    inst = random_cd_instance(seed)
    split = split_at_ustar(inst.mu, inst.nu)
    if split.mu_martingale.is_zero:
        return
    pi_hat = increasing_coupling(split.mu_martingale, split.nu_martingale)
    for comp in decompose(split.mu_martingale, split.nu_martingale).martingale_components:
        part = pi_hat.restrict_sources(comp.lo, comp.hi)
        assert part.first_marginal() == comp.mu_part
        assert part.second_marginal() == comp.nu_part
        assert all(r.drift == 0 for r in part.rows)

    pi = increasing_coupling(inst.mu, inst.nu)
    for x in inst.mu.locations:
        if inst.mu.cdf(x) <= split.ustar:
            assert pi.row_at(x) == pi_hat.row_at(x)


def test_to_dict_shape():
    data = increasing_coupling(W_MU, W_NU).to_dict()
    assert data["rows"][0] == {
        "x": "-1",
        "w": "1/2",
        "conditional": [{"x": "-2", "w": "1/2"}, {"x": "0", "w": "1/2"}],
    }
