"""
Unit tests for instance and curve sanity checks.

Scenarios:
  a) Clean cd instance: only the point-mass note for delta_0
  b) Heavier source, broken order, equal means and separated supports
  c) Hand-built triples that break the kernel shape
"""

import os
import sys
from fractions import Fraction as F

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from shadowcoupling.curves import Region, SupportTriple, triple_grid
from shadowcoupling.measure import DiscreteMeasure, dirac
from shadowcoupling.validation import check_instance, check_measure, check_triples

NU2 = DiscreteMeasure.from_pairs([(-2, F(1, 2)), (1, F(1, 2))])


def _mart(u, g, r, s):
    return SupportTriple(F(u), Region.MARTINGALE, F(g), F(r), F(s))


def _down(u, g, t):
    return SupportTriple(F(u), Region.SUPERMARTINGALE, F(g), T=F(t))


def test_check_measure():
    assert check_measure(DiscreteMeasure(), "mu") == ["mu is the zero measure"]
    assert check_measure(NU2, "nu") == []
    notes = check_measure(dirac(1, F(1, 2)), "mu")
    assert len(notes) == 2
    assert "mass 1/2" in notes[0]


def test_clean_instance():
    assert check_instance(dirac(0), NU2) == ["mu is a point mass at 0"]


def test_instance_problems():
    assert any("heavier" in w for w in check_instance(dirac(0), dirac(0, F(1, 2))))
    assert any("not <=_cd" in w for w in check_instance(dirac(0), dirac(1)))
    martingale = DiscreteMeasure.from_pairs([(-1, F(1, 2)), (1, F(1, 2))])
    assert any("equal means" in w for w in check_instance(dirac(0), martingale))
    assert any("strictly left" in w for w in check_instance(dirac(3), NU2))


def test_grid_is_clean():
    assert check_triples(triple_grid(dirac(0), NU2, 8)) == []


def test_broken_triples():
    assert check_triples([_mart("1/4", 0, 1, 2)])
    assert check_triples([_down("1/2", 0, 1)])
    assert any("S decreases" in w for w in check_triples([_mart("1/4", 0, -1, 3), _mart("1/2", 0, -2, 1)]))
    assert any("R(" in w for w in check_triples([_mart("1/4", 0, -2, 2), _mart("1/2", 1, -1, 3)]))
    assert any("T(" in w for w in check_triples([_mart("1/4", 0, -2, 2), _down("3/4", 1, 0)]))
    assert any("T increases" in w for w in check_triples([_down("1/2", 1, -2), _down("3/4", 2, -1)]))
