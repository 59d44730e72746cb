# ======================================================================================================================
#      File:  /wbv/weights.py
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
"""A1 machinery: the maximal function over a family of discrete balls, A1 constant estimates, the Coifman-Rochberg
weights (M mu)^delta and the finiteness classification of measures.

A "ball" on a grid is the union of the cells whose centers lie within a radius of a cell center.  Averages over such
a ball are exact averages over that union of cells: on the line the cell means of constant, power and step weights
come from their antiderivatives, elsewhere from center samples.
"""

# ======================================================================================================================
# Imports
# ----------------------------------------------------------------------------------------------------------------------
import dataclasses
import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import ndimage

from wbv.core import INF, BALL_VOLUME, Grid, GridFunction, Measure, Weight, WeightKind
from wbv.errors import ClassificationError, CoverageError, InvalidArgumentError, SamplingError




# ======================================================================================================================
# Constants
# ----------------------------------------------------------------------------------------------------------------------
log = logging.getLogger(__name__)

# Relative tolerance on the equality of the limiting ratio K across probes, and the floor below which a limit is 0.
K_TOLERANCE = 1e-2
K_FLOOR = 1e-5

# Geometric radii schedule ratio and the truncation of "R -> infinity" relative to the probe spread.
RADIUS_RATIO = 2.0 ** (1.0 / 128.0)
RADIUS_SPAN = 1e6

# Fractions of the domain used as default probe points; chosen to avoid integers and the origin.
PROBE_FRACTIONS = (0.1237, 0.3311, 0.5719, 0.7793, 0.9131)




# ======================================================================================================================
# Ball Family
# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass(frozen=True)
class BallFamily:
    """Discrete balls of the given radii centered at grid cell centers.

    Only balls that fit inside the domain belong to the family.  `stride` keeps every stride-th center on each axis
    and `centers` restricts the family to balls centered at the cells holding those points.  When `uncentered` the
    maximal function at x ranges over every ball containing x, otherwise only over balls centered at x.
    """
    radii: Tuple[float, ...]
    uncentered: bool = True
    stride: int = 1
    centers: Optional[Tuple[Tuple[float, ...], ...]] = None

    def __post_init__(self):
        radii = tuple(sorted({float(radius) for radius in self.radii}))
        if not radii:
            raise InvalidArgumentError('a ball family needs at least one radius')
        if radii[0] <= 0:
            raise InvalidArgumentError('ball radii must be positive')
        if self.stride < 1:
            raise InvalidArgumentError('stride must be at least 1')
        object.__setattr__(self, 'radii', radii)
        if self.centers is not None:
            object.__setattr__(self, 'centers', tuple(tuple(map(float, np.atleast_1d(c))) for c in self.centers))


    @staticmethod
    def dyadic(grid: Grid, per_octave: int = 1, uncentered: bool = True, stride: int = 1) -> 'BallFamily':
        """Radii h * 2^(j / per_octave) from the smallest spacing up to the domain diameter."""
        step = min(grid.spacing)
        count = int(math.floor(per_octave * math.log2(grid.domain.diameter / step))) + 1
        radii = [step * 2.0 ** (j / per_octave) for j in range(count)]
        return BallFamily(tuple(radii), uncentered, stride)


    @staticmethod
    def every_radius(grid: Grid, uncentered: bool = True, centers=None) -> 'BallFamily':
        """One radius per whole number of cells; the richest family a one-dimensional grid supports."""
        step = min(grid.spacing)
        count = max(grid.resolution) // 2 + 1
        return BallFamily(tuple(step * k for k in range(1, count + 1)), uncentered, 1, centers)


    def footprint(self, grid: Grid, radius: float) -> Tuple[np.ndarray, Tuple[int, ...]]:
        """Boolean offset mask of a ball of `radius` and its half-width in cells per axis."""
        half = tuple(int(math.floor(radius / step + 1e-9)) for step in grid.spacing)
        offsets = np.meshgrid(*[np.arange(-k, k + 1) * step for k, step in zip(half, grid.spacing)], indexing='ij')
        distance = np.sqrt(sum(offset ** 2 for offset in offsets))
        return distance <= radius * (1.0 + 1e-12), half


    def admissible(self, grid: Grid, half: Sequence[int]) -> np.ndarray:
        """Cells that may center a ball with the given half-widths."""
        mask = np.ones(grid.shape, dtype=bool)
        for axis, (k, count) in enumerate(zip(half, grid.resolution)):
            index = np.arange(count)
            keep = (index - k >= 0) & (index + k <= count - 1) & (index % self.stride == 0)
            shape = [1] * grid.dimension
            shape[axis] = count
            mask &= keep.reshape(shape)
        if self.centers is not None:
            chosen = np.zeros(grid.shape, dtype=bool)
            for center in self.centers:
                chosen[tuple(grid.cell_of(np.array(center)))] = True
            mask &= chosen
        return mask




# ======================================================================================================================
# Reports
# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass
class PointwiseReport:
    """Result of comparing a maximal function against constant * weight at every cell center."""
    max_ratio: float
    worst_cell: Tuple[int, ...]
    constant: float
    violations: int
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> Dict:
        return {'max_ratio': self.max_ratio, 'worst_cell': list(self.worst_cell), 'constant': self.constant,
                'violations': self.violations, 'tolerance': self.tolerance, 'passed': self.passed}


# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass
class MFReport:
    """Evaluation of the four equivalent finiteness conditions for a measure at a set of probe points."""
    probes: List[Tuple[float, ...]]
    maximal_values: List[float]
    limsup_ratios: List[float]
    k_estimate: float
    conditions: Dict[str, bool]
    r_max: float

    @property
    def member(self) -> bool:
        return all(self.conditions.values())

    @property
    def agreement(self) -> bool:
        return len(set(self.conditions.values())) == 1

    def to_dict(self) -> Dict:
        return {
            'probes': [list(probe) for probe in self.probes],
            'maximal_values': self.maximal_values,
            'limsup_ratios': self.limsup_ratios,
            'k_estimate': self.k_estimate,
            'conditions': dict(self.conditions),
            'member': self.member,
            'agreement': self.agreement,
            'r_max': self.r_max,
        }




# ======================================================================================================================
# Window Helpers
# ----------------------------------------------------------------------------------------------------------------------
def _densities(source: Union[Measure, Weight, GridFunction], grid: Grid) -> np.ndarray:
    """Average of the source over each cell."""
    if isinstance(source, Measure):
        return source.cell_masses(grid) / grid.cell_volume
    if isinstance(source, GridFunction):
        if not source.grid.matches(grid):
            raise InvalidArgumentError('samples and grid differ')
        return np.asarray(source.values, dtype=float)
    if source.kind is WeightKind.Constant:
        return np.full(grid.shape, source.params['value'])
    return source.cell_means(grid)


# ----------------------------------------------------------------------------------------------------------------------
def _samples(weight: Union[Weight, GridFunction], grid: Grid) -> np.ndarray:
    # Unlike core.sample this lets zeros through: an infimum of 0 is a result, not an error.
    if isinstance(weight, GridFunction):
        return np.asarray(weight.values, dtype=float)
    values = np.asarray(weight(grid.centers()), dtype=float)
    if np.any(np.isnan(values) | (values < 0)):
        raise SamplingError('weight is undefined or negative', np.argwhere(np.isnan(values) | (values < 0))[0])
    return values


# ----------------------------------------------------------------------------------------------------------------------
def _window_sums(values: np.ndarray, footprint: np.ndarray, half: Sequence[int]) -> np.ndarray:
    """Sum of `values` over the footprint around every cell (zero padding); +inf where an infinite value is hit."""
    infinite = np.isinf(values)
    finite = np.where(infinite, 0.0, values)
    if values.ndim == 1:
        k = half[0]
        cumulative = np.concatenate([[0.0], np.cumsum(finite)])
        index = np.arange(len(values))
        sums = cumulative[np.minimum(index + k + 1, len(values))] - cumulative[np.maximum(index - k, 0)]
        counts = np.concatenate([[0], np.cumsum(infinite)])
        hits = counts[np.minimum(index + k + 1, len(values))] - counts[np.maximum(index - k, 0)] > 0
    else:
        kernel = footprint.astype(float)
        sums = ndimage.correlate(finite, kernel, mode='constant', cval=0.0)
        hits = ndimage.correlate(infinite.astype(float), kernel, mode='constant', cval=0.0) > 0.5
    return np.where(hits, INF, sums)


# ----------------------------------------------------------------------------------------------------------------------
def _window_min(values: np.ndarray, footprint: np.ndarray, half: Sequence[int]) -> np.ndarray:
    if values.ndim == 1:
        return ndimage.minimum_filter1d(values, size=2 * half[0] + 1, mode='nearest')
    return ndimage.minimum_filter(values, footprint=footprint, mode='nearest')


# ----------------------------------------------------------------------------------------------------------------------
def _spread_max(values: np.ndarray, footprint: np.ndarray, half: Sequence[int]) -> np.ndarray:
    """Maximum of `values` over all footprints containing each cell (the footprint is symmetric)."""
    if values.ndim == 1:
        return ndimage.maximum_filter1d(values, size=2 * half[0] + 1, mode='constant', cval=-INF)
    return ndimage.maximum_filter(values, footprint=footprint, mode='constant', cval=-INF)


# ----------------------------------------------------------------------------------------------------------------------
def ball_averages(source: Union[Measure, Weight, GridFunction], grid: Grid, balls: BallFamily):
    """Yield (radius, footprint, half-widths, admissible centers, averages) for every radius of the family."""
    densities = _densities(source, grid)
    for radius in balls.radii:
        footprint, half = balls.footprint(grid, radius)
        admissible = balls.admissible(grid, half)
        if not np.any(admissible):
            continue
        averages = _window_sums(densities, footprint, half) / np.count_nonzero(footprint)
        yield radius, footprint, half, admissible, averages




# ======================================================================================================================
# Operations
# ----------------------------------------------------------------------------------------------------------------------
def maximal_function(source: Union[Measure, Weight, GridFunction], grid: Grid, balls: BallFamily) -> GridFunction:
    """Maximal function of a measure or weight over the ball family, evaluated at every cell center.

    Each value is the largest family-ball average among balls containing the cell, so it is a lower bound on the
    true maximal function and grows as the family grows.  Raises CoverageError when some cell lies in no family ball.
    """
    best = np.full(grid.shape, -INF)
    for radius, footprint, half, admissible, averages in ball_averages(source, grid, balls):
        centered = np.where(admissible, averages, -INF)
        spread = _spread_max(centered, footprint, half) if balls.uncentered else centered
        best = np.maximum(best, spread)
        log.debug('maximal function radius %g: max %.6g', radius, np.max(spread))
    uncovered = np.argwhere(best == -INF)
    if len(uncovered):
        raise CoverageError(f'{len(uncovered)} cells lie in no ball of the family', uncovered)
    return GridFunction(grid, best, weight=True)


# ----------------------------------------------------------------------------------------------------------------------
def estimate_a1_constant(weight: Union[Weight, GridFunction], grid: Grid, balls: BallFamily) -> float:
    """Largest ratio of a ball average to the smallest center sample in that ball, over the family.

    Sampling can only overestimate a true infimum, so the result is a lower bound on the A1 constant.  A ball whose
    smallest sample is 0 makes the estimate +inf.
    """
    if isinstance(weight, Weight) and weight.kind is WeightKind.Constant:
        return 1.0
    samples = _samples(weight, grid)
    best = 1.0
    for radius, footprint, half, admissible, averages in ball_averages(weight, grid, balls):
        minima = _window_min(samples, footprint, half)
        with np.errstate(divide='ignore', invalid='ignore'):
            ratios = np.where(minima == 0.0, INF, averages / minima)
        ratios = np.where(np.isnan(ratios) | ~admissible, 1.0, ratios)
        found = float(np.max(ratios))
        log.debug('A1 estimate radius %g: %.8g', radius, found)
        best = max(best, found)
    return best


# ----------------------------------------------------------------------------------------------------------------------
def check_pointwise_a1(weight: Weight, grid: Grid, balls: BallFamily, constant: Optional[float] = None,
                       tolerance: float = 1e-9) -> PointwiseReport:
    """Compare the family maximal function of the weight against constant * w at every cell center.

    Uses the weight's known A1 constant, falling back to the family estimate.  Cells where w is infinite satisfy the
    bound trivially and are skipped.
    """
    if constant is None:
        constant = weight.a1_constant if weight.a1_constant is not None else estimate_a1_constant(weight, grid, balls)
    maximal = maximal_function(weight, grid, balls).values
    values = _samples(weight, grid)
    with np.errstate(divide='ignore', invalid='ignore'):
        ratios = np.where(np.isfinite(values), maximal / (constant * values), 0.0)
    ratios = np.nan_to_num(ratios, nan=0.0, posinf=INF)
    worst = np.unravel_index(int(np.argmax(ratios)), ratios.shape)
    violations = int(np.count_nonzero(ratios > 1.0 + tolerance))
    return PointwiseReport(float(ratios[worst]), tuple(int(i) for i in worst), float(constant), violations, tolerance)


# ----------------------------------------------------------------------------------------------------------------------
def default_probes(grid: Grid) -> List[Tuple[float, ...]]:
    lower, sides = np.array(grid.domain.lower), grid.domain.sides
    return [tuple(lower + fraction * sides) for fraction in PROBE_FRACTIONS]


# ----------------------------------------------------------------------------------------------------------------------
def classify_mf(measure: Measure, probes: Sequence[Sequence[float]], r_min: Optional[float] = None,
                r_max: Optional[float] = None, tolerance: float = K_TOLERANCE, offsets: int = 65) -> MFReport:
    """Decide whether the maximal function of a measure is finite almost everywhere.

    At every probe this measures the maximal function over uncentered balls (radii on a geometric schedule up to
    r_max, centers slid across each ball) and the limiting density mu(B(x, R)) / |B(x, R)|, taken as the largest
    value over the last decade of the schedule.  Four conditions are reported: the maximal function is finite at
    some probe, the limiting density is finite at some probe, it has the same finite value K at every probe, and the
    maximal function is finite at every probe.  They are equivalent, so `agreement` is a check on the numerics.
    """
    probes = [tuple(map(float, np.atleast_1d(probe))) for probe in probes]
    if len(probes) < 2:
        raise InvalidArgumentError('classifying a measure needs at least two probes')
    points = np.array(probes)
    spread = float(np.max(np.sqrt(np.sum((points[:, None] - points[None, :]) ** 2, axis=-1)))) or 1.0
    r_min = spread * 1e-4 if r_min is None else r_min
    r_max = spread * RADIUS_SPAN if r_max is None else r_max
    count = int(math.ceil(math.log(r_max / r_min) / math.log(RADIUS_RATIO))) + 1
    radii = r_min * RADIUS_RATIO ** np.arange(count)
    tail = radii >= radii[-1] / 10.0
    volumes = BALL_VOLUME[measure.dimension] * radii ** measure.dimension
    slides = np.linspace(-1.0, 1.0, offsets)

    maximal_values, limsup_ratios = [], []
    for probe in probes:
        center = np.array(probe)
        best = 0.0
        for direction in _directions(measure, center):
            for slide in slides:
                with np.errstate(over='ignore', invalid='ignore'):
                    masses = measure.ball_mass(center + slide * direction * radii[:, None], radii)
                best = max(best, float(np.max(masses / volumes)))
        with np.errstate(over='ignore', invalid='ignore'):
            centered = measure.ball_mass(center, radii) / volumes
        maximal_values.append(best)
        limsup_ratios.append(float(np.max(centered[tail])))
        log.debug('probe %s: M mu = %.6g, limiting density %.6g', probe, best, limsup_ratios[-1])

    finite_k = [value for value in limsup_ratios if math.isfinite(value)]
    reference = limsup_ratios[0]
    uniform = len(finite_k) == len(limsup_ratios) and all(
        abs(value - reference) <= max(tolerance * max(abs(value), abs(reference)), K_FLOOR)
        for value in limsup_ratios
    )
    conditions = {
        'finite_at_a_point': any(math.isfinite(value) for value in maximal_values),
        'limit_finite_at_a_point': bool(finite_k),
        'uniform_limit': uniform,
        'finite_at_every_probe': all(math.isfinite(value) for value in maximal_values),
    }
    k_estimate = float(np.mean(finite_k)) if uniform else (INF if not finite_k else float(max(finite_k)))
    if k_estimate < K_FLOOR:
        k_estimate = 0.0
    report = MFReport(probes, maximal_values, limsup_ratios, k_estimate, conditions, float(r_max))
    log.info('measure %s: member=%s agreement=%s K=%.6g', measure.to_spec(), report.member, report.agreement,
             k_estimate)
    return report


# ----------------------------------------------------------------------------------------------------------------------
def _directions(measure: Measure, center: np.ndarray) -> List[np.ndarray]:
    # Axis directions plus the direction toward every atom (up to 50) are where uncentered balls gain the most.
    directions = []
    for axis in range(measure.dimension):
        unit = np.zeros(measure.dimension)
        unit[axis] = 1.0
        directions.append(unit)
    if measure.dimension > 1:
        for location, _ in measure.atoms[:50]:
            offset = np.array(location) - center
            length = np.linalg.norm(offset)
            if length > 0:
                directions.append(offset / length)
    return directions


# ----------------------------------------------------------------------------------------------------------------------
def coifman_rochberg(measure: Measure, delta: float, grid: Grid, balls: BallFamily,
                     probes: Optional[Sequence[Sequence[float]]] = None) -> Weight:
    """Tabulate the weight (M mu)^delta on the grid.

    The measure must first classify as having an almost-everywhere finite maximal function.
    """
    if not 0.0 <= delta < 1.0:
        raise InvalidArgumentError(f'delta must lie in [0, 1), got {delta}')
    report = classify_mf(measure, probes if probes is not None else default_probes(grid))
    if not report.member:
        raise ClassificationError(f'measure {measure.to_spec()} has an infinite maximal function', report)
    maximal = maximal_function(measure, grid, balls).values
    if np.any(maximal <= 0):
        raise CoverageError('the ball family does not reach the measure from every cell',
                            np.argwhere(maximal <= 0))
    with np.errstate(over='ignore'):
        values = maximal ** delta
    table = GridFunction(grid, values, weight=True)
    return Weight.tabulated(table, lsc=True, kind=WeightKind.CoifmanRochberg, measure=measure.to_spec(), delta=delta)


# ----------------------------------------------------------------------------------------------------------------------
def delta_weight(weight: Weight, delta: float) -> Weight:
    """The pointwise power w^delta, carrying [w]^delta as its A1 constant when [w] is known."""
    if not 0.0 < delta < 1.0:
        raise InvalidArgumentError(f'delta must lie in (0, 1), got {delta}')
    return Weight.powered(weight, delta)




# End of File
