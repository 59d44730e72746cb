# ======================================================================================================================
#      File:  /tests/test_analysis.py
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
"""Coarea, subgraph isometry, weighted measure and the Sobolev and isoperimetric inequalities."""

# ======================================================================================================================
# Imports
# ----------------------------------------------------------------------------------------------------------------------
import math

import numpy as np
import pytest

from wbv.analysis import (coarea_check, empirical_c1, gns_check, isometry_check, isoperimetric_check,
                          subgraph_embed, weighted_measure)
from wbv.bv1d import PiecewiseFunction1D
from wbv.core import BoxDomain, GridFunction, ShapeSet, Weight, make_grid, sample
from wbv.errors import InconsistencyError, InvalidArgumentError
from wbv.expressions import Expression




# ======================================================================================================================
# Coarea
# ----------------------------------------------------------------------------------------------------------------------
@pytest.mark.parametrize('weight, expected', [(Weight.constant(1.0), 2.0), (Weight.step(), 3.0)],
                         ids=['constant', 'step'])
def test_coarea_of_a_tent(weight, expected):
    report = coarea_check(PiecewiseFunction1D.tent(), weight)
    assert report.direct == pytest.approx(expected)
    assert report.integral == pytest.approx(expected, rel=1e-6)
    assert report.gap < 1e-6
    assert len(report.levels) == 200


def test_coarea_of_sampled_indicator(bump, step):
    report = coarea_check(bump, step, levels=10)
    assert report.perimeters == pytest.approx([3.0] * 10)
    assert report.gap == pytest.approx(0.0, abs=1e-12)


def test_coarea_needs_levels(bump, unit):
    with pytest.raises(InvalidArgumentError):
        coarea_check(bump, unit, levels=1)


def test_coarea_writes_csv(tmp_path, unit):
    report = coarea_check(PiecewiseFunction1D.tent(), unit, levels=4)
    path = tmp_path / 'levels.csv'
    report.write_csv(str(path))
    assert path.read_text().splitlines()[0] == 't,perimeter'




# ======================================================================================================================
# Subgraph Embedding
# ----------------------------------------------------------------------------------------------------------------------
def test_lifted_variation_matches_the_weighted_one(bump, step):
    report = isometry_check(bump, step, bump.grid.domain)
    assert report.weighted == pytest.approx(3.0)
    assert report.lifted == pytest.approx(3.0)
    assert report.gap == pytest.approx(0.0, abs=1e-12)
    assert report.lifted_l1 == pytest.approx(report.weighted_l1)
    assert not report.truncated


def test_lift_of_a_set(unit):
    scene = subgraph_embed(ShapeSet.intervals([(0.0, 1.0)]), unit, BoxDomain.interval(-2.0, 2.0), y_resolution=8,
                           resolution=64)
    assert scene.lifted_grid.resolution == (64, 8)
    assert scene.top == 1.0
    assert np.all(scene.inside)
    assert scene.lifted_variation() == pytest.approx(2.0)


def test_unbounded_weight_needs_a_truncation(bump):
    with pytest.raises(InvalidArgumentError):
        subgraph_embed(bump, Weight.power(-0.5), bump.grid.domain)
    scene = subgraph_embed(bump, Weight.power(-0.5), bump.grid.domain, truncation=10.0)
    assert scene.truncated
    assert scene.top == 10.0


def test_function_must_live_on_the_domain(bump, unit):
    with pytest.raises(InvalidArgumentError):
        subgraph_embed(bump, unit, BoxDomain.interval(-1.0, 1.0))




# ======================================================================================================================
# Weighted Measure
# ----------------------------------------------------------------------------------------------------------------------
def test_weighted_measure(unit):
    assert weighted_measure(ShapeSet.disk((0.0, 0.0), 1.0), unit) == pytest.approx(math.pi, rel=1e-6)
    assert weighted_measure(ShapeSet.box_union([((0.0, 0.0), (1.0, 2.0))]), Weight.constant(3.0)) == \
        pytest.approx(6.0)
    assert weighted_measure(ShapeSet.intervals([(0.0, 1.0)]), Weight.power(-0.5)) == pytest.approx(2.0, rel=1e-6)
    assert weighted_measure(ShapeSet.empty(2), unit) == 0.0


def test_weighted_measure_of_a_square_under_a_step():
    square = ShapeSet.box_union([((-0.5, -0.5), (0.5, 0.5))])
    assert weighted_measure(square, Weight.step()) == pytest.approx(1.5, rel=1e-2)




# ======================================================================================================================
# Sobolev and Isoperimetric Inequalities
# ----------------------------------------------------------------------------------------------------------------------
def test_isoperimetric_ratio_of_a_disk(unit):
    report = isoperimetric_check(ShapeSet.disk((0.0, 0.0), 1.0), unit, c1=1.0)
    assert report.exponent == 2.0
    assert report.rhs == pytest.approx(2.0 * math.pi)
    assert report.ratio == pytest.approx(1.0 / (2.0 * math.sqrt(math.pi)), rel=1e-6)
    assert report.residual > 0
    assert report.exponent_consistent


def test_gaussian_stays_below_the_disk_ratio(square, unit):
    f = sample(Expression.parse('exp(-8*(x**2 + y**2))'), make_grid(square, 128))
    report = gns_check(f, unit, c1=1.0)
    assert 0.0 < report.ratio < 1.0 / (2.0 * math.sqrt(math.pi))
    assert report.residual > 0


def test_inequalities_need_two_dimensions(bump, unit):
    with pytest.raises(InvalidArgumentError):
        gns_check(bump, unit)
    with pytest.raises(InvalidArgumentError):
        isoperimetric_check(ShapeSet.intervals([(0.0, 1.0)]), unit)


def test_empirical_constant_is_the_largest_ratio(unit):
    suite = [(ShapeSet.disk((0.0, 0.0), 1.0), unit), (ShapeSet.box_union([((0.0, 0.0), (1.0, 1.0))]), unit)]
    assert empirical_c1(suite) == pytest.approx(1.0 / (2.0 * math.sqrt(math.pi)), rel=1e-6)


def test_constant_function_contradicts_the_inequality(square, unit):
    grid = make_grid(square, 16)
    with pytest.raises(InconsistencyError):
        empirical_c1([(GridFunction(grid, np.ones(grid.shape)), unit)])


def test_empty_suite(unit):
    with pytest.raises(InvalidArgumentError):
        empirical_c1([])




# End of File
