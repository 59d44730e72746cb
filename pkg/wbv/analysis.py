# ======================================================================================================================
#      File:  /wbv/analysis.py
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
"""Coarea, the subgraph embedding and the weighted Sobolev / isoperimetric harness."""

# ======================================================================================================================
# Imports
# ----------------------------------------------------------------------------------------------------------------------
import csv
import dataclasses
import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from wbv import bv1d
from wbv.core import (INF, BoxDomain, Grid, GridFunction, Representation, ShapeSet, Weight, WeightKind, indicator,
                      make_grid, weight_samples)
from wbv.errors import InconsistencyError, InvalidArgumentError
from wbv.variation import forward_gradient, weighted_l1, weighted_perimeter, weighted_tv
from wbv.weights import BallFamily, delta_weight, estimate_a1_constant




# ======================================================================================================================
# Constants
# ----------------------------------------------------------------------------------------------------------------------
log = logging.getLogger(__name__)

EXTREMA_SAMPLES = 4097
SUBCELLS = 4
MEASURE_RESOLUTION = 256
ESTIMATE_RESOLUTION = 128
EXPONENT_SLACK = 1e-3




# ======================================================================================================================
# Coarea
# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass
class CoareaReport:
    levels: List[float]
    perimeters: List[float]
    integral: float
    direct: float

    @property
    def gap(self) -> Optional[float]:
        """Relative gap between the level integral and the direct variation; None when either side is infinite."""
        if math.isinf(self.integral) or math.isinf(self.direct):
            return None
        if self.direct == 0:
            return abs(self.integral)
        return abs(self.integral - self.direct) / self.direct

    def to_dict(self) -> Dict:
        return {'levels': len(self.levels), 'integral': self.integral, 'direct': self.direct, 'gap': self.gap}

    def write_csv(self, path: str) -> None:
        with open(path, 'w', newline='') as handle:
            writer = csv.writer(handle)
            writer.writerow(['t', 'perimeter'])
            writer.writerows(zip(self.levels, self.perimeters))


# ----------------------------------------------------------------------------------------------------------------------
def _piecewise_interval(f: bv1d.PiecewiseFunction1D, domain: Optional[BoxDomain]) -> Tuple[float, float]:
    if domain is not None:
        return bv1d._interval(domain)
    lower, upper = f.bounds
    return lower - 1.0, upper + 1.0


# ----------------------------------------------------------------------------------------------------------------------
def _piecewise_extrema(f: bv1d.PiecewiseFunction1D, lower: float, upper: float) -> Tuple[float, float]:
    xs = np.concatenate([np.linspace(lower, upper, EXTREMA_SAMPLES),
                         [x for x in f.breakpoints if lower < x < upper]])
    # one-sided limits at the breakpoints count as well
    limits = [piece.at(x) for j, x in enumerate(f.breakpoints) if lower < x < upper for piece in f.pieces[j:j + 2]]
    values = np.concatenate([f.evaluate(xs), limits])
    return float(values.min()), float(values.max())


# ----------------------------------------------------------------------------------------------------------------------
def coarea_check(f: Union[GridFunction, bv1d.PiecewiseFunction1D], w: Weight, levels: int = 200,
                 domain: Optional[BoxDomain] = None) -> CoareaReport:
    """Integrate the weighted perimeter of {f > t} over t by the midpoint rule and compare with the variation of f.

    Levels sit at the midpoints of a uniform partition of [min f, max f].  Piecewise functions use exact
    superlevel intervals on the line; grid functions use the discrete variation of thresholded samples.
    """
    if levels < 2:
        raise InvalidArgumentError(f'at least two levels are needed, got {levels}')
    if isinstance(f, bv1d.PiecewiseFunction1D):
        lower, upper = _piecewise_interval(f, domain)
        low, high = _piecewise_extrema(f, lower, upper)
        box = BoxDomain.interval(lower, upper)
        direct = bv1d.variation_1d(f, w, (lower, upper))

        def perimeter(t: float) -> float:
            return bv1d.perimeter_1d(bv1d.superlevel_intervals(f, t, (lower, upper)), w, box)
    else:
        low, high = float(np.min(f.values)), float(np.max(f.values))
        direct = weighted_tv(f, w).value

        def perimeter(t: float) -> float:
            return weighted_tv(f.with_values((f.values > t).astype(float)), w).value

    step = (high - low) / levels
    ts = [low + (i + 0.5) * step for i in range(levels)] if step > 0 else []
    perimeters = [perimeter(t) for t in ts]
    integral = INF if any(math.isinf(value) for value in perimeters) else float(np.sum(perimeters) * step)
    report = CoareaReport(ts, perimeters, integral, direct)
    log.debug('coarea with %d levels: integral %.10g against direct %.10g', levels, integral, direct)
    return report




# ======================================================================================================================
# Subgraph Embedding
# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass
class SubgraphScene:
    """The region under the weight, Omega_w = {(x, y) : x in Omega, 0 < y < w(x)}, over a lifted grid.

    The last axis of the lifted grid is y.  Cells are cut by the graph of w; `fractions` gives the share of each
    lifted cell lying below it, and Jf(x, y) = f(x) lives on every cell with a positive share.
    """
    source: GridFunction
    heights: np.ndarray
    lifted_grid: Grid
    truncated: bool = False

    @property
    def dimension(self) -> int:
        return self.source.grid.dimension


    @property
    def top(self) -> float:
        return self.lifted_grid.domain.upper[-1]


    def row_fractions(self, row: int) -> np.ndarray:
        step = self.lifted_grid.spacing[-1]
        return np.clip((self.heights - row * step) / step, 0.0, 1.0)


    def fractions(self) -> np.ndarray:
        rows = self.lifted_grid.resolution[-1]
        return np.stack([self.row_fractions(row) for row in range(rows)], axis=-1)


    @property
    def inside(self) -> np.ndarray:
        return self.fractions() > 0


    def lifted(self) -> GridFunction:
        """Jf on the lifted grid, zero on cells outside Omega_w."""
        values = np.where(self.inside, self.source.values[..., np.newaxis], 0.0)
        return GridFunction(self.lifted_grid, values)


    def lifted_variation(self) -> float:
        """Unweighted variation of Jf inside the open set Omega_w.

        A face between neighbouring columns counts only up to the lower of the two heights, so the part of the
        lifted boundary lying above a downward jump of w is left out.
        """
        grid = self.source.grid
        gradient = forward_gradient(self.source.values, grid.spacing)
        volume = grid.cell_volume * self.lifted_grid.spacing[-1]
        total = 0.0
        for row in range(self.lifted_grid.resolution[-1]):
            fraction = self.row_fractions(row)
            squared = np.zeros(grid.shape)
            for axis in range(grid.dimension):
                neighbour = np.roll(fraction, -1, axis=axis)
                faces = np.minimum(fraction, neighbour)
                squared += (gradient[axis] * faces) ** 2
            total += float(np.sum(np.sqrt(squared))) * volume
        return total


    def lifted_l1(self) -> float:
        """||Jf|| in L1(Omega_w) with cut-cell fractions."""
        grid = self.source.grid
        column = np.minimum(self.heights, self.top)
        return float(np.sum(np.abs(self.source.values) * column) * grid.cell_volume)


# ----------------------------------------------------------------------------------------------------------------------
def subgraph_embed(source: Union[GridFunction, ShapeSet], w: Weight, domain: BoxDomain, y_resolution: int = 256,
                   resolution: int = 256, truncation: Optional[float] = None) -> SubgraphScene:
    """Lift f (or the indicator of E) to Jf on Omega_w in one more dimension.

    Unbounded weights need an explicit truncation height; the scene then records that it was truncated.
    """
    if domain.dimension > 2:
        raise InvalidArgumentError('the lifted scene must fit in three dimensions')
    if isinstance(source, ShapeSet):
        source = indicator(source, make_grid(domain, resolution))
    elif source.grid.domain != domain:
        raise InvalidArgumentError('the function does not live on the given domain')
    heights = weight_samples(w, source.grid)
    top = float(np.max(heights))
    truncated = False
    if not w.bounded or math.isinf(top):
        if truncation is None:
            raise InvalidArgumentError(f'{w!r} is unbounded on the domain; give a truncation height')
        heights = np.minimum(heights, truncation)
        top, truncated = float(truncation), True
        log.info('subgraph of %r truncated at height %g', w, truncation)
    elif truncation is not None and truncation < top:
        heights, top, truncated = np.minimum(heights, truncation), float(truncation), True
    lifted_domain = BoxDomain((*domain.lower, 0.0), (*domain.upper, top))
    lifted_grid = make_grid(lifted_domain, (*source.grid.resolution, y_resolution))
    return SubgraphScene(source, heights, lifted_grid, truncated)


# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass
class IsometryReport:
    weighted: float
    lifted: float
    weighted_l1: float
    lifted_l1: float
    truncated: bool

    @staticmethod
    def _gap(first: float, second: float) -> Optional[float]:
        if math.isinf(first) or math.isinf(second):
            return None if first != second else 0.0
        return abs(first - second) / max(abs(first), abs(second), 1e-300) if first or second else 0.0

    @property
    def gap(self) -> Optional[float]:
        return self._gap(self.weighted, self.lifted)

    @property
    def l1_gap(self) -> Optional[float]:
        return self._gap(self.weighted_l1, self.lifted_l1)

    def to_dict(self) -> Dict:
        return {'weighted': self.weighted, 'lifted': self.lifted, 'gap': self.gap, 'weighted_l1': self.weighted_l1,
                'lifted_l1': self.lifted_l1, 'l1_gap': self.l1_gap, 'truncated': self.truncated}


# ----------------------------------------------------------------------------------------------------------------------
def isometry_check(source: Union[GridFunction, ShapeSet], w: Weight, domain: BoxDomain, resolution: int = 256,
                   y_resolution: int = 256, truncation: Optional[float] = None) -> IsometryReport:
    """Weighted perimeter or variation in n dimensions against the unweighted one of the lift in n + 1.

    Sets are measured on the weighted side by `weighted_perimeter`; functions by `weighted_tv`.  The lift always
    works from samples on the source grid.  The L1 legs are compared as well.
    """
    scene = subgraph_embed(source, w, domain, y_resolution, resolution, truncation)
    if isinstance(source, ShapeSet):
        weighted = weighted_perimeter(source, w, domain).value
    else:
        weighted = weighted_tv(source, w).value
    report = IsometryReport(weighted, scene.lifted_variation(), weighted_l1(scene.source, w), scene.lifted_l1(),
                            scene.truncated)
    log.debug('isometry: weighted %.10g, lifted %.10g', report.weighted, report.lifted)
    return report




# ======================================================================================================================
# Weighted Measure
# ----------------------------------------------------------------------------------------------------------------------
def _enclosing_domain(shape: ShapeSet) -> BoxDomain:
    if shape.representation is Representation.Parametric:
        lower, upper = shape.boundary.bounding_box()
        margin = shape.boundary.radius
        return BoxDomain(tuple(lower - margin), tuple(upper + margin))
    if shape.representation is Representation.Boxes:
        if not shape.boxes:
            return BoxDomain.cube(-1.0, 1.0, shape.dimension)
        lower = np.min([box[0] for box in shape.boxes], axis=0) - 1.0
        upper = np.max([box[1] for box in shape.boxes], axis=0) + 1.0
        return BoxDomain(tuple(lower), tuple(upper))
    raise InvalidArgumentError('an implicit set needs an explicit domain')


# ----------------------------------------------------------------------------------------------------------------------
def weighted_measure(shape: ShapeSet, w: Weight, grid: Optional[Grid] = None) -> float:
    """w(E), the integral of the weight over the set.

    Disks and balls use polar quadrature about their center.  Intervals and constant weights on boxes are exact.
    Everything else uses a midpoint rule with SUBCELLS points per axis inside every cell of the grid.
    """
    if shape.representation is Representation.Parametric:
        return shape.boundary.interior_integral(w)
    if shape.representation is Representation.Boxes:
        if not shape.boxes:
            return 0.0
        if w.kind is WeightKind.Constant:
            return w.params['value'] * sum(float(np.prod(np.subtract(upper, lower))) for lower, upper in shape.boxes)
        if shape.dimension == 1:
            return sum(w.integrate_line(lower[0], upper[0]) for lower, upper in shape.boxes)
    if grid is None:
        grid = make_grid(_enclosing_domain(shape), MEASURE_RESOLUTION)
    fine = grid.refine(SUBCELLS)
    centers = fine.centers()
    inside = shape.contains(centers)
    values = np.where(inside, w(centers), 0.0)
    return float(np.sum(values) * fine.cell_volume)




# ======================================================================================================================
# Sobolev and Isoperimetric Inequalities
# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass
class GnsReport:
    """Both sides of ||f||_(L^1*(w)) <= C1 [w]^power ||Df||_(w^(1/1*)), with power 1/1* or 2/1*."""
    dimension: int
    lhs: float
    rhs: float
    a1_constant: float
    approximable: bool
    c1: Optional[float] = None
    delta_constant: Optional[float] = None
    label: str = ''

    @property
    def exponent(self) -> float:
        return self.dimension / (self.dimension - 1.0)


    @property
    def power(self) -> float:
        return (1.0 if self.approximable else 2.0) / self.exponent


    @property
    def ratio(self) -> float:
        """LHS / ([w]^power RHS): the smallest C1 that makes this case hold."""
        bound = self.a1_constant ** self.power * self.rhs
        if bound == 0:
            return 0.0 if self.lhs == 0 else INF
        return self.lhs / bound


    @property
    def residual(self) -> Optional[float]:
        if self.c1 is None:
            return None
        if self.rhs == 0:
            return -self.lhs
        return self.c1 * self.a1_constant ** self.power * self.rhs - self.lhs


    @property
    def exponent_consistent(self) -> Optional[bool]:
        """Whether [w^(1/1*)] <= [w]^(1/1*) held on the estimating family."""
        if self.delta_constant is None:
            return None
        return self.delta_constant <= self.a1_constant ** (1.0 / self.exponent) + EXPONENT_SLACK


    def to_dict(self) -> Dict:
        return {'label': self.label, 'dimension': self.dimension, 'exponent': self.exponent, 'lhs': self.lhs,
                'rhs': self.rhs, 'a1_constant': self.a1_constant, 'power': self.power, 'c1': self.c1,
                'ratio': self.ratio, 'residual': self.residual, 'delta_constant': self.delta_constant,
                'exponent_consistent': self.exponent_consistent}


# ----------------------------------------------------------------------------------------------------------------------
def _a1_constants(w: Weight, grid: Grid, delta: float) -> Tuple[float, Optional[float]]:
    """[w] (known or estimated) and the estimate of [w^delta] on the same family."""
    if w.kind is WeightKind.Constant:
        return 1.0, 1.0
    balls = BallFamily.dyadic(grid)
    estimate = estimate_a1_constant(w, grid, balls)
    constant = w.a1_constant if w.a1_constant is not None else estimate
    return constant, estimate_a1_constant(delta_weight(w, delta), grid, balls)


# ----------------------------------------------------------------------------------------------------------------------
def _check_dimension(dimension: int) -> None:
    if dimension < 2:
        raise InvalidArgumentError('the Sobolev exponent n / (n - 1) needs n >= 2')


# ----------------------------------------------------------------------------------------------------------------------
def gns_check(f: Union[GridFunction, bv1d.PiecewiseFunction1D], w: Weight, c1: Optional[float] = None,
              approximable: bool = False, label: str = '') -> GnsReport:
    """(sum |f|^1* w h^n)^(1/1*) against the discrete variation of f under w^(1/1*)."""
    if isinstance(f, bv1d.PiecewiseFunction1D):
        _check_dimension(1)
    grid = f.grid
    _check_dimension(grid.dimension)
    exponent = grid.dimension / (grid.dimension - 1.0)
    weights = weight_samples(w, grid)
    magnitude = np.abs(f.values) ** exponent
    with np.errstate(invalid='ignore'):
        integrand = np.where(magnitude == 0, 0.0, magnitude * weights)
    lhs = float(np.sum(integrand) * grid.cell_volume) ** (1.0 / exponent)
    rhs = weighted_tv(f, delta_weight(w, 1.0 / exponent)).value
    constant, delta_constant = _a1_constants(w, grid, 1.0 / exponent)
    report = GnsReport(grid.dimension, lhs, rhs, constant, approximable, c1, delta_constant, label)
    log.debug('gns %s: lhs %.8g rhs %.8g ratio %.8g', label, lhs, rhs, report.ratio)
    return report


# ----------------------------------------------------------------------------------------------------------------------
def isoperimetric_check(shape: ShapeSet, w: Weight, c1: Optional[float] = None, approximable: bool = False,
                        domain: Optional[BoxDomain] = None, label: str = '') -> GnsReport:
    """w(E)^(1/1*) against the perimeter of E weighted by w^(1/1*)."""
    _check_dimension(shape.dimension)
    domain = domain if domain is not None else _enclosing_domain(shape)
    exponent = shape.dimension / (shape.dimension - 1.0)
    lhs = weighted_measure(shape, w, make_grid(domain, MEASURE_RESOLUTION)) ** (1.0 / exponent)
    empty = shape.representation is Representation.Boxes and not shape.boxes
    rhs = 0.0 if empty else weighted_perimeter(shape, delta_weight(w, 1.0 / exponent), domain).value
    constant, delta_constant = _a1_constants(w, make_grid(domain, ESTIMATE_RESOLUTION), 1.0 / exponent)
    report = GnsReport(shape.dimension, lhs, rhs, constant, approximable, c1, delta_constant, label or shape.label)
    log.debug('isoperimetric %s: lhs %.8g rhs %.8g ratio %.8g', report.label, lhs, rhs, report.ratio)
    return report


# ----------------------------------------------------------------------------------------------------------------------
def empirical_c1(suite: Sequence[Tuple[Union[GridFunction, ShapeSet], Weight]], approximable: bool = False) -> float:
    """The smallest C1 that satisfies every member of the suite.

    A member with a positive left side and a vanishing right side contradicts the inequality outright and raises
    InconsistencyError.
    """
    if not suite:
        raise InvalidArgumentError('the suite is empty')
    best = 0.0
    for index, (member, w) in enumerate(suite):
        if isinstance(member, ShapeSet):
            report = isoperimetric_check(member, w, approximable=approximable)
        else:
            report = gns_check(member, w, approximable=approximable)
        if report.rhs == 0 and report.lhs > 0:
            raise InconsistencyError(f'suite member {index} ({report.label}) has variation 0 but norm {report.lhs:g}')
        best = max(best, report.ratio)
    log.info('empirical C1 over %d members: %.8g', len(suite), best)
    return best




# End of File
