# ======================================================================================================================
#      File:  /wbv/bv1d.py
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
"""Exact weighted variation on the line for piecewise-smooth functions with jumps.

A piecewise function has breakpoints x1 < ... < xm and m + 1 smooth pieces, the first on (-inf, x1) and the last on
(xm, inf).  Its variation measure is |f'| dx on the pieces plus |jump| at every breakpoint, so the weighted variation
is an integral plus a sum of weight values at the breakpoints.  Weights are evaluated at the breakpoints
themselves, not at one-sided limits.
"""

# ======================================================================================================================
# Imports
# ----------------------------------------------------------------------------------------------------------------------
import dataclasses
from enum import Enum
import logging
import math
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import optimize

from wbv import quadrature
from wbv.core import INF, BoxDomain, ShapeSet, Weight
from wbv.errors import InvalidArgumentError, NumericError
from wbv.expressions import Expression
from wbv.kernel import standard_mollifier




# ======================================================================================================================
# Constants
# ----------------------------------------------------------------------------------------------------------------------
log = logging.getLogger(__name__)

JUMP_TOLERANCE = 1e-10
DEFAULT_SCHEDULE = tuple(2.0 ** -k for k in range(4, 21))
LEBESGUE_TOLERANCE = 1e-3




# ======================================================================================================================
# Pieces
# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass(frozen=True, eq=False)
class Piece:
    """One smooth piece: vectorized value and derivative evaluators on arrays of abscissae."""
    value: Callable[[np.ndarray], np.ndarray]
    derivative: Callable[[np.ndarray], np.ndarray]
    text: str = ''
    constant: Optional[float] = None


    @staticmethod
    def flat(value: float) -> 'Piece':
        value = float(value)
        return Piece(lambda x: np.full(np.shape(x), value), lambda x: np.zeros(np.shape(x)), f'{value:g}', value)


    @staticmethod
    def linear(slope: float, intercept: float) -> 'Piece':
        if slope == 0.0:
            return Piece.flat(intercept)
        return Piece(lambda x: slope * np.asarray(x, dtype=float) + intercept,
                     lambda x: np.full(np.shape(x), float(slope)),
                     f'{slope:g}*x + {intercept:g}')


    @staticmethod
    def parse(text: str, derivative: Optional[str] = None) -> 'Piece':
        """A piece from an expression in x, differentiated symbolically; a five-point stencil covers the rest."""
        expression = Expression.parse(text)
        value = lambda x: expression(np.asarray(x, dtype=float)[..., np.newaxis])
        slope = Expression.parse(derivative) if derivative is not None else expression.derivative(0)
        if slope is not None:
            return Piece(value, lambda x: slope(np.asarray(x, dtype=float)[..., np.newaxis]), text)

        def stencil(x: np.ndarray) -> np.ndarray:
            x = np.asarray(x, dtype=float)
            h = 1e-3 * np.maximum(1.0, np.abs(x))
            return (-value(x + 2 * h) + 8 * value(x + h) - 8 * value(x - h) + value(x - 2 * h)) / (12 * h)
        return Piece(value, stencil, text)


    def at(self, x: float) -> float:
        return float(self.value(np.array([x]))[0])




# ======================================================================================================================
# Piecewise Function
# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass(frozen=True, eq=False)
class PiecewiseFunction1D:
    breakpoints: Tuple[float, ...]
    pieces: Tuple[Piece, ...]
    jumps: Tuple[float, ...] = ()

    def __post_init__(self):
        breakpoints = tuple(float(x) for x in self.breakpoints)
        object.__setattr__(self, 'breakpoints', breakpoints)
        if any(b <= a for a, b in zip(breakpoints[:-1], breakpoints[1:])):
            raise InvalidArgumentError(f'breakpoints must increase strictly: {breakpoints}')
        if len(self.pieces) != len(breakpoints) + 1:
            raise InvalidArgumentError(f'{len(breakpoints)} breakpoints need {len(breakpoints) + 1} pieces')
        measured = tuple(right.at(x) - left.at(x)
                         for x, left, right in zip(breakpoints, self.pieces[:-1], self.pieces[1:]))
        if not self.jumps:
            object.__setattr__(self, 'jumps', measured)
            return
        jumps = tuple(float(jump) for jump in self.jumps)
        if len(jumps) != len(breakpoints):
            raise InvalidArgumentError('one jump height per breakpoint')
        for x, given, actual in zip(breakpoints, jumps, measured):
            if abs(given - actual) > JUMP_TOLERANCE * max(1.0, abs(actual)):
                raise InvalidArgumentError(f'jump at {x:g} is {actual:.12g} by the pieces but {given:.12g} was given')
        object.__setattr__(self, 'jumps', jumps)


    @staticmethod
    def indicator(a: float, b: float) -> 'PiecewiseFunction1D':
        """The indicator of the open interval (a, b)."""
        return PiecewiseFunction1D((a, b), (Piece.flat(0.0), Piece.flat(1.0), Piece.flat(0.0)))


    @staticmethod
    def from_expressions(breakpoints: Sequence[float], expressions: Sequence[str],
                         jumps: Sequence[float] = ()) -> 'PiecewiseFunction1D':
        pieces = []
        for text in expressions:
            try:
                pieces.append(Piece.flat(float(text)))
            except (TypeError, ValueError):
                pieces.append(Piece.parse(text))
        return PiecewiseFunction1D(tuple(breakpoints), tuple(pieces), tuple(jumps))


    @staticmethod
    def piecewise_linear(knots: Sequence[float], left: Sequence[float],
                         right: Sequence[float]) -> 'PiecewiseFunction1D':
        """Linear from left[i] to right[i] on (knots[i], knots[i+1]) and zero outside the knots."""
        knots = [float(x) for x in knots]
        pieces = [Piece.flat(0.0)]
        for (x0, x1), y0, y1 in zip(zip(knots[:-1], knots[1:]), left, right):
            slope = (y1 - y0) / (x1 - x0)
            pieces.append(Piece.linear(slope, y0 - slope * x0))
        pieces.append(Piece.flat(0.0))
        return PiecewiseFunction1D(tuple(knots), tuple(pieces))


    @staticmethod
    def tent(center: float = 0.0, half_width: float = 1.0, height: float = 1.0) -> 'PiecewiseFunction1D':
        """height * max(0, 1 - |x - center| / half_width)."""
        knots = (center - half_width, center, center + half_width)
        return PiecewiseFunction1D.piecewise_linear(knots, (0.0, height), (height, 0.0))


    def spans(self, lower: float = -INF, upper: float = INF) -> List[Tuple[int, float, float]]:
        """(piece index, start, end) for every piece intersected with (lower, upper)."""
        edges = [-INF, *self.breakpoints, INF]
        spans = []
        for index, (start, end) in enumerate(zip(edges[:-1], edges[1:])):
            start, end = max(start, lower), min(end, upper)
            if start < end:
                spans.append((index, start, end))
        return spans


    def evaluate(self, xs: np.ndarray) -> np.ndarray:
        """Values at the given abscissae; a breakpoint takes the value of the piece to its right."""
        xs = np.asarray(xs, dtype=float)
        index = np.searchsorted(np.array(self.breakpoints), xs, side='right')
        values = np.zeros(xs.shape)
        for which, piece in enumerate(self.pieces):
            mask = index == which
            if np.any(mask):
                values[mask] = piece.value(xs[mask])
        return values


    def __call__(self, points: np.ndarray) -> np.ndarray:
        return self.evaluate(np.asarray(points, dtype=float)[..., 0])


    @property
    def bounds(self) -> Tuple[float, float]:
        return (self.breakpoints[0], self.breakpoints[-1]) if self.breakpoints else (0.0, 0.0)




# ======================================================================================================================
# Approximability Reports
# ----------------------------------------------------------------------------------------------------------------------
class Verdict(Enum):
    Approximable = 'approximable'
    NotApproximable = 'not-approximable'
    Inconclusive = 'inconclusive'


# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass
class AtomTrace:
    """Lebesgue averages of a weight around one atom of the variation measure."""
    location: float
    jump: float
    averages: List[float]
    status: Verdict

    @property
    def limit(self) -> float:
        return self.averages[-1] if self.averages else math.nan

    def to_dict(self) -> Dict:
        return {'location': self.location, 'jump': self.jump, 'averages': self.averages, 'limit': self.limit,
                'status': self.status.value}


# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass
class ApproximabilityReport:
    verdict: Verdict
    atoms: List[AtomTrace]
    schedule: List[float]
    delta_approximable: Optional[bool] = None

    def to_dict(self) -> Dict:
        return {'verdict': self.verdict.value, 'atoms': [atom.to_dict() for atom in self.atoms],
                'schedule': self.schedule, 'delta_approximable': self.delta_approximable}




# ======================================================================================================================
# Operations
# ----------------------------------------------------------------------------------------------------------------------
def _interval(interval: Union[None, BoxDomain, Tuple[float, float]]) -> Tuple[float, float]:
    if interval is None:
        return -INF, INF
    if isinstance(interval, BoxDomain):
        if interval.dimension != 1:
            raise InvalidArgumentError('an interval is a one-dimensional domain')
        return interval.lower[0], interval.upper[0]
    return float(interval[0]), float(interval[1])


# ----------------------------------------------------------------------------------------------------------------------
def variation_1d(f: PiecewiseFunction1D, w: Weight,
                 interval: Union[None, BoxDomain, Tuple[float, float]] = None) -> float:
    """Integral of |f'| w over the pieces plus |jump| w(x) over the breakpoints inside the open interval."""
    lower, upper = _interval(interval)
    total = 0.0
    for x, jump in zip(f.breakpoints, f.jumps):
        if lower < x < upper and jump != 0.0:
            total += abs(jump) * w.scalar(x)
    if math.isinf(total):
        return INF
    singular = w.breakpoints()
    for index, start, end in f.spans(lower, upper):
        piece = f.pieces[index]
        if piece.constant is not None:
            continue
        integrand = lambda x, piece=piece: abs(float(piece.derivative(np.array([x]))[0])) * w.scalar(x)
        try:
            total += quadrature.integrate(integrand, start, end, singular, label=f'piece {index} ({piece.text})')
        except NumericError as error:
            raise NumericError(f'piece {index} on ({start:g}, {end:g}): {error}') from error
    return total


# ----------------------------------------------------------------------------------------------------------------------
def classical_variation(f: PiecewiseFunction1D, interval: Union[None, BoxDomain, Tuple[float, float]] = None,
                        samples: int = 2049) -> float:
    """Pointwise variation: sum of |f(t_i+1) - f(t_i)| over a partition refined at every breakpoint."""
    lower, upper = _interval(interval)
    if math.isinf(lower):
        lower = f.bounds[0] - 1.0
    if math.isinf(upper):
        upper = f.bounds[1] + 1.0
    total = 0.0
    for index, start, end in f.spans(lower, upper):
        values = f.pieces[index].value(np.linspace(start, end, samples))
        total += float(np.sum(np.abs(np.diff(values))))
    total += sum(abs(jump) for x, jump in zip(f.breakpoints, f.jumps) if lower < x < upper)
    return total


# ----------------------------------------------------------------------------------------------------------------------
def perimeter_1d(intervals: Union[ShapeSet, Sequence[Tuple[float, float]]], w: Weight,
                 domain: Optional[BoxDomain] = None) -> float:
    """Sum of the weight over the endpoints of a finite union of disjoint open intervals.

    With a domain, endpoints on its boundary do not count.  Overlapping or touching intervals are rejected.
    """
    if isinstance(intervals, ShapeSet):
        if intervals.dimension != 1 or intervals.boxes is None:
            raise InvalidArgumentError('perimeter_1d takes a union of intervals on the line')
        intervals = [(lower[0], upper[0]) for lower, upper in intervals.boxes]
    intervals = sorted((float(a), float(b)) for a, b in intervals)
    for (a0, b0), (a1, b1) in zip(intervals[:-1], intervals[1:]):
        if a1 <= b0:
            raise InvalidArgumentError(f'intervals ({a0:g}, {b0:g}) and ({a1:g}, {b1:g}) overlap or touch')
    lower, upper = _interval(domain)
    total = 0.0
    for a, b in intervals:
        if b <= a:
            raise InvalidArgumentError(f'interval ({a:g}, {b:g}) is empty')
        for endpoint in (a, b):
            if lower < endpoint < upper:
                total += w.scalar(endpoint)
    return total


# ----------------------------------------------------------------------------------------------------------------------
def superlevel_intervals(f: PiecewiseFunction1D, level: float, interval: Tuple[float, float],
                         samples: int = 257) -> List[Tuple[float, float]]:
    """The open set {f > level} inside a bounded interval, as disjoint intervals merged across breakpoints."""
    lower, upper = interval
    pieces = []
    for index, start, end in f.spans(lower, upper):
        piece = f.pieces[index]
        if piece.constant is not None:
            if piece.constant > level:
                pieces.append((start, end))
            continue
        excess = lambda x, piece=piece: piece.at(x) - level
        xs = np.linspace(start, end, samples)
        values = piece.value(xs) - level
        inside = values > 0
        cuts = [start]
        for i in np.flatnonzero(inside[:-1] != inside[1:]):
            cuts.append(optimize.brentq(excess, xs[i], xs[i + 1], xtol=1e-15) if values[i] * values[i + 1] < 0
                        else (xs[i] if values[i] == 0 else xs[i + 1]))
        cuts.append(end)
        for left, right in zip(cuts[:-1], cuts[1:]):
            if right > left and piece.at(0.5 * (left + right)) > level:
                pieces.append((left, right))
    merged: List[Tuple[float, float]] = []
    for start, end in sorted(pieces):
        if merged and start <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], end))
        else:
            merged.append((start, end))
    return merged


# ----------------------------------------------------------------------------------------------------------------------
def mollified_indicator_tv(a: float, b: float, w: Weight, epsilon: float) -> float:
    """Weighted variation of eta_eps * indicator(a, b): the integrals of w against bumps centered at a and b.

    With (a, b, eps) = (-1/k, 1, 1/k) this is the sequence eta_(1/k) * indicator(-1/k, 1).
    """
    if not b > a:
        raise InvalidArgumentError(f'({a:g}, {b:g}) is empty')
    if not 0.0 < epsilon < (b - a) / 4.0:
        raise InvalidArgumentError(f'epsilon must lie in (0, {(b - a) / 4.0:g}), got {epsilon:g}')
    eta = standard_mollifier(epsilon, 1)
    singular = w.breakpoints()
    total = 0.0
    for center in (a, b):
        bump = lambda x, center=center: float(eta(np.array([[x - center]]))[0]) * w.scalar(x)
        total += quadrature.integrate(bump, center - epsilon, center + epsilon, [center, *singular],
                                      rtol=1e-10, label=f'bump at {center:g}')
    return total


# ----------------------------------------------------------------------------------------------------------------------
def lebesgue_trace(w: Weight, x: float, schedule: Sequence[float] = DEFAULT_SCHEDULE) -> List[float]:
    """Averages of |w(y) - w(x)| over (x - eps, x + eps) for each eps of the schedule."""
    center = w.scalar(x)
    if math.isinf(center):
        return [INF for _ in schedule]
    singular = [x, *w.breakpoints()]
    averages = []
    for epsilon in schedule:
        integrand = lambda y: abs(w.scalar(y) - center)
        total = quadrature.integrate(integrand, x - epsilon, x + epsilon, singular, rtol=1e-10,
                                     label=f'lebesgue average at {x:g}')
        averages.append(total / (2.0 * epsilon))
    return averages


# ----------------------------------------------------------------------------------------------------------------------
def _status(averages: Sequence[float], tolerance: float) -> Verdict:
    limit = averages[-1]
    if limit <= tolerance:
        return Verdict.Approximable
    if math.isinf(limit) or abs(limit - averages[-2]) <= tolerance:
        return Verdict.NotApproximable
    return Verdict.Inconclusive


# ----------------------------------------------------------------------------------------------------------------------
def approximability_probe_1d(f: PiecewiseFunction1D, w: Weight, schedule: Sequence[float] = DEFAULT_SCHEDULE,
                             tolerance: float = LEBESGUE_TOLERANCE) -> ApproximabilityReport:
    """Check that every jump of f sits at a Lebesgue point of w.

    The absolutely continuous part of the variation measure is carried by Lebesgue points almost everywhere, so
    only the jumps can fail.  A jump fails when the averages settle above `tolerance`, passes when the last average
    is below it, and is inconclusive otherwise.
    """
    schedule = sorted((float(epsilon) for epsilon in schedule), reverse=True)
    if len(schedule) < 2:
        raise InvalidArgumentError('the epsilon schedule needs at least two values')
    atoms = []
    for x, jump in zip(f.breakpoints, f.jumps):
        if abs(jump) <= JUMP_TOLERANCE:
            continue
        averages = lebesgue_trace(w, x, schedule)
        atoms.append(AtomTrace(x, jump, averages, _status(averages, tolerance)))
        log.debug('jump at %g: averages settle at %.6g (%s)', x, averages[-1], atoms[-1].status.value)
    statuses = {atom.status for atom in atoms}
    if Verdict.NotApproximable in statuses:
        verdict = Verdict.NotApproximable
    elif Verdict.Inconclusive in statuses:
        verdict = Verdict.Inconclusive
    else:
        verdict = Verdict.Approximable
    return ApproximabilityReport(verdict, atoms, schedule)




# End of File
