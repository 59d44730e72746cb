# ======================================================================================================================
#      File:  /tests/test_mollify.py
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
"""The cover and partition of unity, and smooth approximation in the weighted variation."""

# ======================================================================================================================
# Imports
# ----------------------------------------------------------------------------------------------------------------------
import csv

import numpy as np
import pytest

from wbv.bv1d import Verdict
from wbv.core import BoxDomain, GridFunction, ShapeSet, Weight, indicator, make_grid
from wbv.errors import CoverageError, InvalidArgumentError, ResolutionError
from wbv.mollify import (approximability_probe, approximation_trace, ball_average_deviation, build_cover,
                         choose_epsilons, lebesgue_trace, mollifier_weight_bound, smooth_approximate, smoothed_weight)




# ======================================================================================================================
# Mollifier Bound
# ----------------------------------------------------------------------------------------------------------------------
def test_smoothing_a_constant_weight():
    assert smoothed_weight(Weight.constant(2.0), 0.1, [0.3]) == pytest.approx(2.0, rel=1e-8)
    assert smoothed_weight(Weight.constant(2.0), 0.1, [0.1, 0.2]) == pytest.approx(2.0, rel=1e-4)


def test_mollified_step_stays_below_the_a1_bound(step):
    report = mollifier_weight_bound(step, 0.1, make_grid(BoxDomain.interval(-1.0, 1.0), 16))
    assert report.constant == pytest.approx(2.0)
    assert report.passed
    assert report.max_ratio <= 1.0 + 1e-6


def test_ball_deviation(unit, step):
    assert ball_average_deviation(unit, [0.1, 0.2], 0.1) == 0.0
    # half of every disk centered on the threshold sees the high side
    assert ball_average_deviation(step, [0.0, 0.3], 0.1) == pytest.approx(0.5, rel=1e-9)


def test_lebesgue_trace_in_the_plane(step):
    assert lebesgue_trace(step, [0.5, 0.0], [0.1, 0.01]) == [0.0, 0.0]
    assert lebesgue_trace(step, [0.0, 0.0], [0.1, 0.01]) == pytest.approx([0.5, 0.5], rel=1e-9)




# ======================================================================================================================
# Cover and Partition of Unity
# ----------------------------------------------------------------------------------------------------------------------
def test_partition_of_unity(square):
    grid = make_grid(square, 64)
    cover = build_cover(square, 3, grid=grid)
    zeta, covered = cover.partition(grid.centers())
    assert np.allclose(np.sum(zeta, axis=0)[covered], 1.0)
    assert np.max(cover.overlap(grid.centers())) <= cover.overlap_bound
    assert cover.distance_floor(1) == pytest.approx(0.25)


def test_outermost_piece_tapers_to_zero():
    grid = make_grid(BoxDomain.interval(-1.0, 1.0), 4096)
    cover = build_cover(grid.domain, 2, grid=grid)
    zeta, covered = cover.partition(grid.centers())
    s = cover.s(grid.centers())
    assert np.all(zeta[:, s >= 2.75] == 0.0)
    assert np.max(np.abs(np.diff(zeta[-1]))) < 0.1
    assert np.allclose(np.sum(zeta, axis=0)[covered], 1.0)
    assert np.max(np.sum(zeta, axis=0)) <= 1.0 + 1e-12


def test_support_must_be_covered():
    grid = make_grid(BoxDomain.interval(-1.0, 1.0), 64)
    with pytest.raises(CoverageError) as error:
        build_cover(grid.domain, 1, GridFunction(grid, np.ones(grid.shape)))
    assert error.value.cells


def test_cover_needs_a_piece(square):
    with pytest.raises(InvalidArgumentError):
        build_cover(square, 0)




# ======================================================================================================================
# Smooth Approximation
# ----------------------------------------------------------------------------------------------------------------------
@pytest.fixture
def fine_bump():
    return indicator(ShapeSet.intervals([(0.0, 1.0)]), make_grid(BoxDomain.interval(-2.0, 2.0), 1024))


def test_smooth_approximation_of_an_interval(fine_bump, unit):
    smooth, diagnostics = smooth_approximate(fine_bump, unit, 0.08, 3)
    assert diagnostics.ratio == pytest.approx(1.0, abs=1e-3)
    assert diagnostics.l1_gap < 0.08
    assert diagnostics.schedule.pieces[0].epsilon == pytest.approx(0.04)
    assert np.max(smooth.values) == pytest.approx(1.0)


def test_approximation_trace_writes_csv(fine_bump, unit, tmp_path):
    trace = approximation_trace(fine_bump, unit, [0.04, 0.08], 3)
    assert [row[0] for row in trace.rows] == [0.08, 0.04]
    assert trace.limit_ratio == pytest.approx(1.0, abs=1e-3)
    path = tmp_path / 'trace.csv'
    trace.write_csv(str(path))
    with open(path) as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == ['epsilon', 'tv', 'ratio', 'l1_gap']
    assert len(rows) == 3


def test_epsilon_must_be_positive(bump, unit):
    cover = build_cover(bump.grid.domain, 3, bump)
    with pytest.raises(InvalidArgumentError):
        choose_epsilons(bump, unit, cover, 0.0)


def test_epsilon_below_two_cells_needs_a_finer_grid(unit):
    coarse = indicator(ShapeSet.intervals([(0.0, 1.0)]), make_grid(BoxDomain.interval(-2.0, 2.0), 64))
    cover = build_cover(coarse.grid.domain, 3, coarse)
    with pytest.raises(ResolutionError):
        choose_epsilons(coarse, unit, cover, 1e-3)




# ======================================================================================================================
# Approximability
# ----------------------------------------------------------------------------------------------------------------------
def test_sampled_jump_at_a_step_is_not_approximable(bump, step):
    report = approximability_probe(bump, step)
    assert report.verdict is Verdict.NotApproximable
    assert report.delta_approximable is None


def test_sampled_jump_under_a_constant_weight(bump, unit):
    report = approximability_probe(bump, unit)
    assert report.verdict is Verdict.Approximable
    assert report.delta_approximable is True




# End of File
