# ======================================================================================================================
#      File:  /tests/test_variation.py
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
"""Discrete weighted variation, duality, lower semicontinuity and weighted perimeter."""

# ======================================================================================================================
# Imports
# ----------------------------------------------------------------------------------------------------------------------
import math

import numpy as np
import pytest

from wbv.core import BoxDomain, GridFunction, ShapeSet, Weight, indicator, make_grid
from wbv.errors import FeasibilityError, InvalidArgumentError, PreconditionError
from wbv.expressions import Expression
from wbv.variation import (Method, TestField, bv_norm, divergence, dual_lower_bound, empirical_orders,
                           field_from_function, forward_gradient, gradient_quadrature, lsc_probe, optimal_test_field,
                           random_test_field, refinement_study, weighted_l1, weighted_perimeter, weighted_tv)




# ======================================================================================================================
# Weighted Variation
# ----------------------------------------------------------------------------------------------------------------------
def test_indicator_variation(bump, unit, step):
    assert weighted_tv(bump, unit).value == pytest.approx(2.0)
    # the jump at 0 is charged to the low side of the step
    assert weighted_tv(bump, step).value == pytest.approx(3.0)


def test_indicator_l1_norm(bump, step):
    assert weighted_l1(bump, Weight.constant(1.0)) == pytest.approx(1.0)
    assert weighted_l1(bump, step) == pytest.approx(2.0)


def test_bv_norm_adds_both_parts(bump, step):
    assert bv_norm(bump, step) == pytest.approx(5.0)


def test_variation_of_a_constant_is_zero_under_an_infinite_weight():
    grid = make_grid(BoxDomain.interval(-1.5, 1.5), 3)
    constant = GridFunction(grid, np.ones(grid.shape))
    assert weighted_tv(constant, Weight.power(-0.5)).value == 0.0


def test_variation_is_infinite_when_a_jump_meets_an_infinite_weight():
    grid = make_grid(BoxDomain.interval(-1.5, 1.5), 3)
    f = GridFunction(grid, np.array([0.0, 1.0, 0.0]))
    assert math.isinf(weighted_tv(f, Weight.power(-0.5)).value)


def test_variation_of_a_linear_ramp_converges_at_first_order():
    domain = BoxDomain.cube(0.0, 1.0, 2)
    report = refinement_study(Expression.parse('x'), Weight.constant(1.0), domain, [16, 32, 64])
    assert [value for _, value in report.history] == pytest.approx([15 / 16, 31 / 32, 63 / 64])
    assert report.value == pytest.approx(63 / 64)
    assert report.method is Method.GradientSum
    assert empirical_orders(report.history, 1.0) == pytest.approx([1.0, 1.0])


def test_gradient_quadrature_of_a_ramp():
    domain = BoxDomain.cube(0.0, 1.0, 2)
    assert gradient_quadrature(Expression.parse('x + 2*y'), Weight.constant(1.0), domain, 64) == \
        pytest.approx(math.sqrt(5.0), rel=1e-6)


@pytest.mark.slow
def test_smooth_weighted_variation_matches_the_integral():
    domain = BoxDomain.cube(-1.0, 1.0, 2)
    # narrow enough that the boundary strip without differences carries nothing
    f = Expression.parse('exp(-32*(x**2 + y**2))')
    w = Weight.expression('x**2 + y**2 + 1')
    reference = gradient_quadrature(f, w, domain, 1024)
    report = refinement_study(f, w, domain, [64, 128, 256])
    assert report.value == pytest.approx(reference, rel=0.02)
    assert min(empirical_orders(report.history, reference)) >= 1.5




# ======================================================================================================================
# Duality
# ----------------------------------------------------------------------------------------------------------------------
def test_divergence_is_the_negative_adjoint_of_the_gradient():
    grid = make_grid(BoxDomain.cube(0.0, 1.0, 2), (6, 5))
    rng = np.random.default_rng(1)
    f = rng.standard_normal(grid.shape)
    field = TestField(grid, tuple(_trimmed(rng.standard_normal((2, 6, 5)))))
    gradient = forward_gradient(f, grid.spacing)
    left = np.sum(f * divergence(field.components, grid.spacing))
    right = -np.sum(gradient[0] * field.components[0] + gradient[1] * field.components[1])
    assert left == pytest.approx(right)


def _trimmed(components):
    trimmed = []
    for axis, component in enumerate(components):
        component = np.array(component)
        index = [slice(None)] * component.ndim
        index[axis] = -1
        component[tuple(index)] = 0.0
        trimmed.append(component)
    return trimmed


def test_test_fields_vanish_on_boundary_faces(line):
    with pytest.raises(InvalidArgumentError):
        TestField(line, (np.ones(line.shape),))


@pytest.mark.parametrize('weight', [Weight.constant(1.0), Weight.step()], ids=['constant', 'step'])
def test_optimal_field_attains_the_variation(bump, weight):
    tv = weighted_tv(bump, weight).value
    field = optimal_test_field(bump, weight)
    assert field.certificate(weight) <= 1.0 + 1e-12
    assert dual_lower_bound(bump, weight, field) == pytest.approx(tv, rel=1e-12)


def test_random_fields_never_beat_the_variation(bump, step):
    rng = np.random.default_rng(7)
    tv = weighted_tv(bump, step).value
    for _ in range(50):
        field = random_test_field(bump.grid, step, rng)
        assert field.certificate(step) <= 1.0
        assert dual_lower_bound(bump, step, field) <= tv + 1e-12


def test_infeasible_fields_are_rejected(bump, unit):
    field = field_from_function(lambda points: np.full(points.shape[:-1], 5.0), bump.grid)
    with pytest.raises(FeasibilityError) as error:
        dual_lower_bound(bump, unit, field)
    assert error.value.certificate == pytest.approx(5.0)


def test_fields_from_functions_are_shrunk_under_the_weight(bump, step):
    field = field_from_function(lambda points: np.full(points.shape[:-1], 5.0), bump.grid, step)
    assert field.certificate(step) == pytest.approx(1.0)




# ======================================================================================================================
# Lower Semicontinuity
# ----------------------------------------------------------------------------------------------------------------------
def test_converging_sequence_respects_the_limit(bump, step):
    wave = bump.with_values(np.sin(7.0 * bump.grid.axes()[0]))
    sequence = [bump + wave * 2.0 ** -k for k in range(1, 41)]
    report = lsc_probe(sequence, bump, step)
    assert not report.violated
    assert report.tv_limit == pytest.approx(3.0)
    assert report.l1_gaps[-1] < report.l1_gaps[0]


def test_sequence_that_does_not_converge_is_rejected(bump, step):
    with pytest.raises(PreconditionError) as error:
        lsc_probe([bump + 1.0, bump + 1.0], bump, step)
    assert len(error.value.gaps) == 2


def test_sequence_on_another_grid_is_rejected(bump, step):
    other = indicator(ShapeSet.intervals([(0.0, 1.0)]), make_grid(bump.grid.domain, 128))
    with pytest.raises(InvalidArgumentError):
        lsc_probe([other], bump, step)




# ======================================================================================================================
# Weighted Perimeter
# ----------------------------------------------------------------------------------------------------------------------
def test_square_perimeter():
    square = ShapeSet.box_union([((-0.5, -0.5), (0.5, 0.5))])
    domain = BoxDomain.cube(-2.0, 2.0, 2)
    assert weighted_perimeter(square, Weight.constant(1.0), domain).value == pytest.approx(4.0)
    # left side at 1, right side at 2, top and bottom half at each
    assert weighted_perimeter(square, Weight.step(), domain).value == pytest.approx(6.0)


def test_faces_on_the_domain_boundary_do_not_count():
    domain = BoxDomain.cube(-2.0, 2.0, 2)
    slab = ShapeSet.slab(domain, 1, -1.0, 1.0)
    assert weighted_perimeter(slab, Weight.constant(1.0), domain).value == pytest.approx(8.0)


def test_square_perimeter_under_a_smooth_weight():
    square = ShapeSet.box_union([((0.0, 0.0), (1.0, 1.0))])
    domain = BoxDomain.cube(-2.0, 2.0, 2)
    # x + 1 integrates to 1.5 on the bottom and top, and is 1 and 2 on the left and right sides
    value = weighted_perimeter(square, Weight.expression('x + 1'), domain).value
    assert value == pytest.approx(6.0, rel=1e-8)


def test_circle_perimeter(square):
    report = weighted_perimeter(ShapeSet.disk((0.0, 0.0), 0.5), Weight.constant(1.0), square)
    assert report.method is Method.BoundaryQuadrature
    assert report.value == pytest.approx(math.pi, rel=1e-9)


def test_circle_must_fit_inside_the_domain(square):
    with pytest.raises(InvalidArgumentError):
        weighted_perimeter(ShapeSet.disk((0.0, 0.0), 2.0), Weight.constant(1.0), square)


def test_implicit_circle_perimeter(square):
    shape = ShapeSet.level_set('x**2 + y**2 - 0.25', 2)
    assert weighted_perimeter(shape, Weight.constant(1.0), square).value == pytest.approx(math.pi, rel=0.02)


def test_implicit_points_on_the_line():
    shape = ShapeSet.level_set('x**2 - 1', 1)
    domain = BoxDomain.interval(-2.0, 2.0)
    assert weighted_perimeter(shape, Weight.step(), domain).value == pytest.approx(3.0)


def test_perimeter_through_a_singular_point_is_infinite():
    domain = BoxDomain.interval(-2.0, 2.0)
    shape = ShapeSet.intervals([(0.0, 1.0)])
    assert math.isinf(weighted_perimeter(shape, Weight.power(-0.5), domain).value)


def test_perimeter_dimension_must_match(square):
    with pytest.raises(InvalidArgumentError):
        weighted_perimeter(ShapeSet.intervals([(0.0, 1.0)]), Weight.constant(1.0), square)




# End of File
