# ======================================================================================================================
#      File:  /tests/test_weights.py
#   Project:  Weighted BV Laboratory
#    Author:  Jared Julien <jaredjulien@exsystems.net>
# Copyright:  (c) 2024 Jared Julien, eX Systems
# ---------------------------------------------------------------------------------------------------------------------
# Permission is hereby granted, free of charge, to any person obtaining a copy of this software and associated
# documentation files (the "Software"), to deal in the Software without restriction, including without limitation the
# rights to use, copy, modify, merge, publish, distribute, sublicense, and/or sell copies of the Software, and to
# permit persons to whom the Software is furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all copies or substantial portions of the
# Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR IMPLIED, INCLUDING BUT NOT LIMITED TO THE
# WARRANTIES OF MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE AUTHORS
# OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR
# OTHERWISE, ARISING FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE SOFTWARE.
# ----------------------------------------------------------------------------------------------------------------------
"""Maximal functions, A1 estimates, finiteness classification and Coifman-Rochberg weights."""

# ======================================================================================================================
# Imports
# ----------------------------------------------------------------------------------------------------------------------
import math

import numpy as np
import pytest

from wbv.core import BoxDomain, Measure, Weight, WeightKind, make_grid
from wbv.errors import ClassificationError, CoverageError, InvalidArgumentError
from wbv.weights import (BallFamily, check_pointwise_a1, classify_mf, coifman_rochberg, default_probes,
                         delta_weight, estimate_a1_constant, maximal_function)




# ======================================================================================================================
# Ball Families
# ----------------------------------------------------------------------------------------------------------------------
def test_dyadic_radii_double(line):
    balls = BallFamily.dyadic(line)
    assert balls.radii[0] == pytest.approx(line.spacing[0])
    assert balls.radii[1] / balls.radii[0] == pytest.approx(2.0)
    assert balls.radii[-1] <= line.domain.diameter


def test_family_needs_positive_radii():
    with pytest.raises(InvalidArgumentError):
        BallFamily((0.0, 1.0))
    with pytest.raises(InvalidArgumentError):
        BallFamily(())


def test_family_centers_restrict_admissible_cells(line):
    balls = BallFamily.every_radius(line, centers=[(0.0,)])
    footprint, half = balls.footprint(line, 2 * line.spacing[0])
    assert half == (2,)
    assert np.count_nonzero(footprint) == 5
    assert np.argwhere(balls.admissible(line, half)).tolist() == [[128]]




# ======================================================================================================================
# A1 Estimates
# ----------------------------------------------------------------------------------------------------------------------
def test_constant_weight_estimate_is_one(line, unit):
    assert estimate_a1_constant(unit, line, BallFamily.dyadic(line)) == 1.0


def test_step_weight_estimate_approaches_the_ratio_from_below():
    grid = make_grid(BoxDomain.interval(-1.0, 1.0), 64)
    estimate = estimate_a1_constant(Weight.step(), grid, BallFamily.every_radius(grid))
    # the best ball holds one low cell and 32 high ones
    assert estimate == pytest.approx(65.0 / 33.0)


def test_power_weight_estimate_never_exceeds_the_known_constant():
    grid = make_grid(BoxDomain.interval(-1.0, 1.0), 512)
    w = Weight.power(-0.5)
    estimate = estimate_a1_constant(w, grid, BallFamily.every_radius(grid))
    assert 2.0 < estimate <= w.a1_constant + 1e-9


def test_power_weight_over_balls_centered_at_the_singularity():
    # an odd cell count puts 0 at a cell center, so the family reaches both ends of the domain
    grid = make_grid(BoxDomain.interval(-1.0, 1.0), 1025)
    balls = BallFamily.every_radius(grid, centers=[(0.0,)])
    w = Weight.power(-0.5)
    assert estimate_a1_constant(w, grid, balls) == pytest.approx(2.0, rel=1e-2)
    assert check_pointwise_a1(w, grid, balls).violations == 0


def test_centered_family_on_an_even_grid_misses_a_cell():
    grid = make_grid(BoxDomain.interval(-1.0, 1.0), 1024)
    with pytest.raises(CoverageError):
        maximal_function(Weight.power(-0.5), grid, BallFamily.every_radius(grid, centers=[(0.0,)]))


def test_pointwise_bound_holds_for_the_step_weight():
    grid = make_grid(BoxDomain.interval(-1.0, 1.0), 64)
    report = check_pointwise_a1(Weight.step(), grid, BallFamily.every_radius(grid))
    assert report.constant == 2.0
    assert report.passed
    assert report.max_ratio <= 1.0 + 1e-12


def test_pointwise_bound_fails_with_too_small_a_constant():
    grid = make_grid(BoxDomain.interval(-1.0, 1.0), 64)
    report = check_pointwise_a1(Weight.step(), grid, BallFamily.every_radius(grid), constant=1.0)
    assert not report.passed
    assert report.violations > 0




# ======================================================================================================================
# Maximal Function
# ----------------------------------------------------------------------------------------------------------------------
def test_maximal_function_of_a_dirac_decays_like_one_over_distance():
    grid = make_grid(BoxDomain.interval(-4.0, 4.0), 1024)
    maximal = maximal_function(Measure.dirac((0.0,)), grid, BallFamily.every_radius(grid))
    at = lambda x: maximal.values[grid.cell_of(np.array([x]))[0]]
    assert at(1.0) == pytest.approx(1.0, rel=0.02)
    assert at(2.0) == pytest.approx(0.5, rel=0.02)
    assert at(2.0) < at(1.0)


def test_maximal_function_of_a_constant_weight_is_the_constant(line):
    maximal = maximal_function(Weight.constant(3.0), line, BallFamily.dyadic(line))
    assert np.allclose(maximal.values, 3.0)


def test_maximal_function_needs_every_cell_covered(line):
    with pytest.raises(CoverageError):
        maximal_function(Weight.constant(1.0), line, BallFamily((100.0,)))




# ======================================================================================================================
# Finiteness Classification
# ----------------------------------------------------------------------------------------------------------------------
def test_lebesgue_measure_has_limiting_density_one():
    report = classify_mf(Measure.lebesgue(1), [(0.3,), (1.7,)])
    assert report.member
    assert report.agreement
    assert report.k_estimate == pytest.approx(1.0, rel=1e-3)


def test_dirac_measure_is_finite_with_vanishing_density():
    report = classify_mf(Measure.dirac((0.0,)), [(0.5,), (1.0,), (2.0,)])
    assert report.member
    assert report.agreement
    assert report.k_estimate == 0.0


@pytest.mark.parametrize('point, expected', [(0.5, 2.0), (1.0, 1.0), (2.0, 0.5), (-1.0, 1.0), (4.0, 0.25)])
def test_dirac_maximal_function_is_one_over_the_distance(point, expected):
    # the best ball has the point on one end of its diameter and the atom on the other
    report = classify_mf(Measure.dirac((0.0,)), [(point,), (point + 3.0,)])
    assert report.maximal_values[0] == pytest.approx(expected, rel=0.01)


def test_dirac_maximal_function_in_the_plane():
    report = classify_mf(Measure.dirac((0.0, 0.0)), [(1.0, 0.0), (0.0, 2.0)])
    assert report.maximal_values == pytest.approx([4.0 / math.pi, 1.0 / math.pi], rel=0.02)


def test_geometric_train_has_an_infinite_maximal_function():
    report = classify_mf(Measure.geometric_train(2.0), [(0.5,), (1.5,), (2.5,)])
    assert not report.member
    assert report.agreement


def test_classification_needs_two_probes():
    with pytest.raises(InvalidArgumentError):
        classify_mf(Measure.lebesgue(1), [(0.5,)])


def test_default_probes_avoid_the_origin(line):
    probes = default_probes(line)
    assert len(probes) == 5
    assert all(probe[0] != 0.0 for probe in probes)




# ======================================================================================================================
# Coifman-Rochberg and Powered Weights
# ----------------------------------------------------------------------------------------------------------------------
def test_coifman_rochberg_weight_of_a_dirac():
    grid = make_grid(BoxDomain.interval(-2.0, 2.0), 64)
    w = coifman_rochberg(Measure.dirac((0.0,)), 0.5, grid, BallFamily.dyadic(grid))
    assert w.kind is WeightKind.CoifmanRochberg
    assert w.params['delta'] == 0.5
    samples = w(grid.centers())
    assert np.all(samples > 0) and np.all(np.isfinite(samples))
    assert math.isfinite(estimate_a1_constant(w, grid, BallFamily.dyadic(grid)))


def test_coifman_rochberg_rejects_delta_one(line):
    with pytest.raises(InvalidArgumentError):
        coifman_rochberg(Measure.dirac((0.0,)), 1.0, line, BallFamily.dyadic(line))


def test_coifman_rochberg_rejects_a_measure_with_infinite_maximal_function():
    grid = make_grid(BoxDomain.interval(0.0, 8.0), 64)
    with pytest.raises(ClassificationError):
        coifman_rochberg(Measure.geometric_train(2.0), 0.5, grid, BallFamily.dyadic(grid))


def test_delta_weight_carries_the_reduced_constant():
    w = delta_weight(Weight.power(-0.5), 0.5)
    assert w.params['alpha'] == pytest.approx(-0.25)
    assert w.a1_constant == pytest.approx(math.sqrt(1.0 + math.sqrt(2.0)))


@pytest.mark.parametrize('delta', [0.0, 1.0, 1.5])
def test_delta_weight_needs_delta_strictly_between_zero_and_one(delta):
    with pytest.raises(InvalidArgumentError):
        delta_weight(Weight.step(), delta)




# End of File
