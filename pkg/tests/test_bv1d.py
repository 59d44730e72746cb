# ======================================================================================================================
#      File:  /tests/test_bv1d.py
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
"""Exact one-dimensional weighted variation, perimeter and approximability."""

# ======================================================================================================================
# Imports
# ----------------------------------------------------------------------------------------------------------------------
import math

import pytest

from wbv.bv1d import (PiecewiseFunction1D, Piece, Verdict, approximability_probe_1d, classical_variation,
                      lebesgue_trace, mollified_indicator_tv, perimeter_1d, superlevel_intervals, variation_1d)
from wbv.core import BoxDomain, ShapeSet, Weight
from wbv.errors import InvalidArgumentError




# ======================================================================================================================
# Piecewise Functions
# ----------------------------------------------------------------------------------------------------------------------
def test_jumps_are_measured_from_the_pieces():
    f = PiecewiseFunction1D.from_expressions([0.0], ['0', 'x + 1'])
    assert f.jumps == pytest.approx((1.0,))


def test_given_jumps_must_agree_with_the_pieces():
    with pytest.raises(InvalidArgumentError):
        PiecewiseFunction1D((0.0,), (Piece.flat(0.0), Piece.flat(1.0)), (2.0,))


def test_breakpoints_must_increase():
    with pytest.raises(InvalidArgumentError):
        PiecewiseFunction1D((1.0, 0.0), (Piece.flat(0.0), Piece.flat(1.0), Piece.flat(0.0)))


def test_tent_values():
    tent = PiecewiseFunction1D.tent()
    assert list(tent.evaluate([-2.0, -0.5, 0.0, 0.25, 3.0])) == pytest.approx([0.0, 0.5, 1.0, 0.75, 0.0])




# ======================================================================================================================
# Variation
# ----------------------------------------------------------------------------------------------------------------------
def test_indicator_variation(step, unit):
    bump = PiecewiseFunction1D.indicator(0.0, 1.0)
    assert variation_1d(bump, unit) == pytest.approx(2.0)
    # the weight is low at the threshold itself
    assert variation_1d(bump, step) == pytest.approx(3.0)


def test_tent_variation(unit):
    tent = PiecewiseFunction1D.tent()
    assert variation_1d(tent, unit) == pytest.approx(2.0)
    assert variation_1d(tent, unit, (0.0, 2.0)) == pytest.approx(1.0)
    assert variation_1d(tent, Weight.power(-0.5)) == pytest.approx(4.0, rel=1e-6)


def test_jump_on_a_singular_point_is_infinite():
    assert math.isinf(variation_1d(PiecewiseFunction1D.indicator(0.0, 1.0), Weight.power(-0.5)))


def test_classical_variation():
    assert classical_variation(PiecewiseFunction1D.tent()) == pytest.approx(2.0)
    assert classical_variation(PiecewiseFunction1D.indicator(0.0, 1.0), BoxDomain.interval(-1.0, 0.5)) == \
        pytest.approx(1.0)


def test_superlevel_set_of_a_tent():
    (interval,) = superlevel_intervals(PiecewiseFunction1D.tent(), 0.5, (-2.0, 2.0))
    assert interval == pytest.approx((-0.5, 0.5))




# ======================================================================================================================
# Perimeter
# ----------------------------------------------------------------------------------------------------------------------
def test_interval_perimeter(unit, step):
    assert perimeter_1d([(0.0, 1.0)], unit) == pytest.approx(2.0)
    assert perimeter_1d(ShapeSet.intervals([(-1.0, 0.0), (0.5, 1.0)]), step) == pytest.approx(1 + 1 + 2 + 2)


def test_endpoints_on_the_domain_boundary_do_not_count(unit):
    assert perimeter_1d([(0.0, 1.0)], unit, BoxDomain.interval(0.0, 2.0)) == pytest.approx(1.0)


def test_endpoint_on_a_singular_point_is_infinite():
    assert math.isinf(perimeter_1d([(0.0, 1.0)], Weight.power(-0.5)))


@pytest.mark.parametrize('intervals', [[(0.0, 1.0), (1.0, 2.0)], [(0.0, 1.0), (0.5, 2.0)], [(1.0, 1.0)]])
def test_bad_interval_unions(intervals, unit):
    with pytest.raises(InvalidArgumentError):
        perimeter_1d(intervals, unit)




# ======================================================================================================================
# Mollified Indicators
# ----------------------------------------------------------------------------------------------------------------------
def test_mollified_indicator_variation(unit, step):
    assert mollified_indicator_tv(0.0, 1.0, unit, 0.1) == pytest.approx(2.0, rel=1e-8)
    # half of the bump at 0 sees the high side of the step
    assert mollified_indicator_tv(0.0, 1.0, step, 0.1) == pytest.approx(3.5, rel=1e-8)


def test_bumps_left_of_the_threshold_only_see_the_low_side(step):
    values = [mollified_indicator_tv(-1.0 / k, 1.0, step, 1.0 / k) for k in (8, 16, 32, 64)]
    assert values == pytest.approx([3.0] * 4, rel=1e-8)


@pytest.mark.parametrize('epsilon', [0.0, 0.25, 1.0])
def test_mollifier_width_must_fit(unit, epsilon):
    with pytest.raises(InvalidArgumentError):
        mollified_indicator_tv(0.0, 1.0, unit, epsilon)



def test_point_values_are_invisible_to_the_mollified_sequence(dipped):
    values = [mollified_indicator_tv(-1.0 / k, 1.0, dipped, 1.0 / k) for k in (8, 16, 32, 64)]
    assert values == pytest.approx([4.0] * 4, rel=1e-8)




# ======================================================================================================================
# Approximability
# ----------------------------------------------------------------------------------------------------------------------
def test_lebesgue_averages_at_a_step(step):
    assert lebesgue_trace(step, 0.0, [0.1, 0.01]) == pytest.approx([0.5, 0.5])
    assert lebesgue_trace(step, 1.0, [0.1, 0.01]) == pytest.approx([0.0, 0.0])


def test_jump_at_a_step_is_not_approximable(step):
    report = approximability_probe_1d(PiecewiseFunction1D.indicator(0.0, 1.0), step)
    assert report.verdict is Verdict.NotApproximable
    assert [atom.status for atom in report.atoms] == [Verdict.NotApproximable, Verdict.Approximable]
    assert report.atoms[0].limit == pytest.approx(0.5)


def test_variation_charges_jumps_the_value_at_the_point(dipped):
    assert variation_1d(PiecewiseFunction1D.indicator(0.0, 1.0), dipped) == pytest.approx(2.0, rel=1e-12)
    assert perimeter_1d([(0.0, 1.0)], dipped) == pytest.approx(2.0, rel=1e-12)


def test_lowered_points_are_not_lebesgue_points(dipped):
    assert lebesgue_trace(dipped, 0.0, [0.1, 0.01]) == pytest.approx([1.0, 1.0])
    report = approximability_probe_1d(PiecewiseFunction1D.indicator(0.0, 1.0), dipped)
    assert report.verdict is Verdict.NotApproximable
    assert [atom.status for atom in report.atoms] == [Verdict.NotApproximable] * 2
    assert [atom.limit for atom in report.atoms] == pytest.approx([1.0, 1.0])


def test_continuous_weight_is_approximable(unit):
    report = approximability_probe_1d(PiecewiseFunction1D.indicator(0.0, 1.0), unit)
    assert report.verdict is Verdict.Approximable


def test_probe_needs_a_schedule(unit):
    with pytest.raises(InvalidArgumentError):
        approximability_probe_1d(PiecewiseFunction1D.indicator(0.0, 1.0), unit, [0.1])




# End of File
