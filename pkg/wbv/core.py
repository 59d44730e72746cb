# ======================================================================================================================
#      File:  /wbv/core.py
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
"""Domains, grids, sampled functions, weights, sets and measures shared by every other module.

Everything here is immutable once built.  Functions are sampled at cell centers; weights may take the value +inf,
which is carried as `math.inf` through every array.
"""

# ======================================================================================================================
# Imports
# ----------------------------------------------------------------------------------------------------------------------
import dataclasses
from enum import Enum
import logging
import math
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import optimize

from wbv import quadrature
from wbv.errors import InvalidArgumentError, SamplingError
from wbv.expressions import Expression




# ======================================================================================================================
# Constants
# ----------------------------------------------------------------------------------------------------------------------
INF = math.inf

# Volume of the unit ball and area of the unit sphere by dimension.
BALL_VOLUME = {1: 2.0, 2: math.pi, 3: 4.0 * math.pi / 3.0}
SPHERE_AREA = {1: 2.0, 2: 2.0 * math.pi, 3: 4.0 * math.pi}

log = logging.getLogger(__name__)




# ======================================================================================================================
# Box Domain
# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass(frozen=True)
class BoxDomain:
    """An open box (lower, upper) in one to three dimensions."""
    lower: Tuple[float, ...]
    upper: Tuple[float, ...]

    def __post_init__(self):
        lower = tuple(float(value) for value in np.atleast_1d(self.lower))
        upper = tuple(float(value) for value in np.atleast_1d(self.upper))
        object.__setattr__(self, 'lower', lower)
        object.__setattr__(self, 'upper', upper)
        if len(lower) != len(upper):
            raise InvalidArgumentError('lower and upper corners must have the same dimension')
        if not 1 <= len(lower) <= 3:
            raise InvalidArgumentError(f'dimension must be 1, 2 or 3, not {len(lower)}')
        if any(high <= low for low, high in zip(lower, upper)):
            raise InvalidArgumentError(f'upper corner {upper} must exceed lower corner {lower} on every axis')


    @staticmethod
    def interval(lower: float, upper: float) -> 'BoxDomain':
        return BoxDomain((lower,), (upper,))


    @staticmethod
    def cube(lower: float, upper: float, dimension: int) -> 'BoxDomain':
        return BoxDomain((lower,) * dimension, (upper,) * dimension)


    @staticmethod
    def from_dict(data: Dict) -> 'BoxDomain':
        return BoxDomain(tuple(data['lower']), tuple(data['upper']))


    def to_dict(self) -> Dict:
        return {'lower': list(self.lower), 'upper': list(self.upper)}


    @property
    def dimension(self) -> int:
        return len(self.lower)


    @property
    def sides(self) -> np.ndarray:
        return np.array(self.upper) - np.array(self.lower)


    @property
    def diameter(self) -> float:
        return float(np.sqrt(np.sum(self.sides ** 2)))


    @property
    def volume(self) -> float:
        return float(np.prod(self.sides))


    def contains(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        return np.all((points > np.array(self.lower)) & (points < np.array(self.upper)), axis=-1)


    def distance_to_boundary(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        below = points - np.array(self.lower)
        above = np.array(self.upper) - points
        return np.min(np.minimum(below, above), axis=-1)




# ======================================================================================================================
# Grid
# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass(frozen=True)
class Grid:
    """A regular lattice of cells over a box; values live at cell centers lower + (i + 1/2) h."""
    domain: BoxDomain
    resolution: Tuple[int, ...]

    def __post_init__(self):
        resolution = tuple(int(count) for count in np.atleast_1d(self.resolution))
        object.__setattr__(self, 'resolution', resolution)
        if len(resolution) != self.domain.dimension:
            raise InvalidArgumentError(f'{len(resolution)} resolutions given for a {self.domain.dimension}-D domain')
        if any(count < 1 for count in resolution):
            raise InvalidArgumentError(f'resolution must be positive on every axis, got {resolution}')


    @property
    def dimension(self) -> int:
        return self.domain.dimension


    @property
    def shape(self) -> Tuple[int, ...]:
        return self.resolution


    @property
    def size(self) -> int:
        return int(np.prod(self.resolution))


    @property
    def spacing(self) -> Tuple[float, ...]:
        return tuple(float(side / count) for side, count in zip(self.domain.sides, self.resolution))


    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))


    def axes(self) -> List[np.ndarray]:
        """Cell-center coordinates along each axis."""
        return [low + (np.arange(count) + 0.5) * step
                for low, count, step in zip(self.domain.lower, self.resolution, self.spacing)]


    def centers(self) -> np.ndarray:
        """All cell centers as an array shaped (*shape, n)."""
        return np.stack(np.meshgrid(*self.axes(), indexing='ij'), axis=-1)


    def face_centers(self, axis: int) -> np.ndarray:
        """Centers of the faces on the high side of every cell along `axis`, shaped (*shape, n)."""
        points = self.centers().copy()
        points[..., axis] += 0.5 * self.spacing[axis]
        return points


    def cell_of(self, points: np.ndarray) -> np.ndarray:
        """Integer cell index of each point (clipped into the grid), shaped (..., n)."""
        points = np.asarray(points, dtype=float)
        index = np.floor((points - np.array(self.domain.lower)) / np.array(self.spacing)).astype(int)
        return np.clip(index, 0, np.array(self.resolution) - 1)


    def refine(self, factor: int = 2) -> 'Grid':
        return Grid(self.domain, tuple(count * factor for count in self.resolution))


    def matches(self, other: 'Grid') -> bool:
        return self.domain == other.domain and self.resolution == other.resolution




# ======================================================================================================================
# Grid Function
# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass(frozen=True, eq=False)
class GridFunction:
    """One value per cell center.  Weight samples (`weight=True`) may hold +inf; everything else must be finite."""
    grid: Grid
    values: np.ndarray
    weight: bool = False

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != self.grid.shape:
            raise InvalidArgumentError(f'{values.shape} values do not fit a grid shaped {self.grid.shape}')
        if not self.weight and not np.all(np.isfinite(values)):
            cell = np.argwhere(~np.isfinite(values))[0]
            raise SamplingError('function values must be finite', cell)
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)


    def with_values(self, values: np.ndarray) -> 'GridFunction':
        return GridFunction(self.grid, values, self.weight)


    def _other(self, other: Union['GridFunction', float]) -> Union[np.ndarray, float]:
        if isinstance(other, GridFunction):
            if not self.grid.matches(other.grid):
                raise InvalidArgumentError('grid functions live on different grids')
            return other.values
        return float(other)


    def __add__(self, other):
        return self.with_values(self.values + self._other(other))


    def __sub__(self, other):
        return self.with_values(self.values - self._other(other))


    def __mul__(self, other):
        return self.with_values(self.values * self._other(other))

    __rmul__ = __mul__


    def __neg__(self):
        return self.with_values(-self.values)




# ======================================================================================================================
# Weights
# ----------------------------------------------------------------------------------------------------------------------
class WeightKind(Enum):
    Constant = 'const'
    Power = 'power'
    Step = 'step'
    Radial = 'radial'
    Expression = 'expr'
    Product = 'product'
    Powered = 'pow'
    CoifmanRochberg = 'cr'
    Tabulated = 'tabulated'
    Points = 'points'


# ----------------------------------------------------------------------------------------------------------------------
def power_a1_constant(alpha: float) -> float:
    """A1 constant of |x|^alpha on the line, -1 < alpha <= 0, over all intervals.

    An interval [-t b, b] with 0 <= t <= 1 has average (1 + t^(1+alpha)) b^alpha / ((1+alpha)(1+t)) and infimum
    b^alpha, so the constant is the maximum over t of their ratio.  For alpha = -1/2 this is 1 + sqrt(2).
    """
    if alpha == 0.0:
        return 1.0
    if not -1.0 < alpha < 0.0:
        return INF
    ratio = lambda t: (1.0 + t ** (1.0 + alpha)) / ((1.0 + alpha) * (1.0 + t))
    best = optimize.minimize_scalar(lambda t: -ratio(t), bounds=(0.0, 1.0), method='bounded',
                                    options={'xatol': 1e-12})
    return float(max(ratio(best.x), ratio(0.0), ratio(1.0)))


# ----------------------------------------------------------------------------------------------------------------------
def _point_key(location: Tuple[float, ...]) -> str:
    if len(location) == 1:
        return f'{location[0]:g}'
    return '(' + ', '.join(f'{coordinate:g}' for coordinate in location) + ')'


# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass(frozen=True, eq=False)
class Weight:
    """An extended-real weight w: R^n -> (0, inf].

    Build with the static constructors rather than directly.  `a1_constant` holds a known A1 constant when one is
    available analytically (never an estimate); `lsc` records whether lower semicontinuity is asserted.
    """
    kind: WeightKind
    params: Dict[str, Any]
    lsc: bool = True
    a1_constant: Optional[float] = None

    def __post_init__(self):
        if self.a1_constant is not None and not self.a1_constant >= 1.0:
            raise InvalidArgumentError(f'an A1 constant is at least 1, got {self.a1_constant}')


    # ------------------------------------------------------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------------------------------------------------------
    @staticmethod
    def constant(value: float = 1.0) -> 'Weight':
        if not value > 0:
            raise InvalidArgumentError(f'a constant weight must be positive, got {value}')
        return Weight(WeightKind.Constant, {'value': float(value)}, True, 1.0)


    @staticmethod
    def power(alpha: float, center: Optional[Sequence[float]] = None, dimension: int = 1) -> 'Weight':
        center = tuple(float(value) for value in (center if center is not None else (0.0,) * dimension))
        known = power_a1_constant(alpha) if len(center) == 1 and alpha <= 0 else None
        if known is not None and math.isinf(known):
            known = None
        return Weight(WeightKind.Power, {'alpha': float(alpha), 'center': center}, alpha <= 0, known)


    @staticmethod
    def step(threshold: float = 0.0, low: float = 1.0, high: float = 2.0, axis: int = 0) -> 'Weight':
        """`low` on x[axis] <= threshold, `high` beyond it."""
        if not (low > 0 and high > 0):
            raise InvalidArgumentError('step weight values must be positive')
        params = {'threshold': float(threshold), 'low': float(low), 'high': float(high), 'axis': int(axis)}
        return Weight(WeightKind.Step, params, low <= high, max(low, high) / min(low, high))


    @staticmethod
    def radial(profile: Union[str, Expression], lsc: bool = True, a1_constant: Optional[float] = None) -> 'Weight':
        profile = profile if isinstance(profile, Expression) else Expression.parse(profile)
        return Weight(WeightKind.Radial, {'profile': profile}, lsc, a1_constant)


    @staticmethod
    def expression(text: Union[str, Expression], lsc: bool = True, a1_constant: Optional[float] = None) -> 'Weight':
        expression = text if isinstance(text, Expression) else Expression.parse(text)
        return Weight(WeightKind.Expression, {'expression': expression}, lsc, a1_constant)


    @staticmethod
    def product(*factors: 'Weight') -> 'Weight':
        if not factors:
            raise InvalidArgumentError('a product weight needs at least one factor')
        return Weight(WeightKind.Product, {'factors': tuple(factors)}, all(factor.lsc for factor in factors))


    @staticmethod
    def tabulated(table: GridFunction, lsc: bool = True, a1_constant: Optional[float] = None,
                  kind: WeightKind = WeightKind.Tabulated, **params) -> 'Weight':
        if not table.weight:
            table = GridFunction(table.grid, table.values, weight=True)
        return Weight(kind, {'table': table, **params}, lsc, a1_constant)


    @staticmethod
    def powered(base: 'Weight', delta: float) -> 'Weight':
        """Pointwise power base^delta, reduced to a closed form whenever the base has one."""
        known = base.a1_constant ** delta if base.a1_constant is not None else None
        if base.kind is WeightKind.Constant:
            return Weight.constant(base.params['value'] ** delta)
        if base.kind is WeightKind.Power:
            reduced = Weight.power(base.params['alpha'] * delta, base.params['center'], len(base.params['center']))
            return dataclasses.replace(reduced, a1_constant=known)
        if base.kind is WeightKind.Step:
            params = base.params
            reduced = Weight.step(params['threshold'], params['low'] ** delta, params['high'] ** delta, params['axis'])
            return dataclasses.replace(reduced, a1_constant=known)
        return Weight(WeightKind.Powered, {'base': base, 'delta': float(delta)}, base.lsc, known)


    @staticmethod
    def with_points(base: 'Weight', points: Union[Dict, Sequence[Tuple[Any, float]]]) -> 'Weight':
        """The base weight with its value replaced at finitely many points, e.g. {0: 1, 1: 1} on the line.

        Keys are coordinates (a number on the line, a tuple in R^n).  The overrides change no integral, only the
        pointwise values that jump terms and Lebesgue averages are centered on.
        """
        if base.kind in (WeightKind.Product, WeightKind.Powered, WeightKind.Points, WeightKind.Tabulated):
            raise InvalidArgumentError(f'point values go on a single weight, not on {base.kind.value}')
        items = points.items() if isinstance(points, dict) else points
        overrides = []
        for location, value in items:
            location = tuple(float(coordinate) for coordinate in np.atleast_1d(location))
            if not value > 0:
                raise InvalidArgumentError(f'the value at {location} must be positive, got {value}')
            overrides.append((location, float(value)))
        if not overrides:
            return base
        lsc = base.lsc and all(value <= base.scalar(*location) for location, value in overrides)
        known = None
        if base.kind is WeightKind.Constant:
            known = max(1.0, base.params['value'] / min(value for _, value in overrides))
        return Weight(WeightKind.Points, {'base': base, 'points': tuple(overrides)}, lsc, known)


    # ------------------------------------------------------------------------------------------------------------------
    # Evaluation
    # ------------------------------------------------------------------------------------------------------------------
    def __call__(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at points shaped (..., n)."""
        points = np.asarray(points, dtype=float)
        kind, params = self.kind, self.params
        with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
            if kind is WeightKind.Constant:
                return np.full(points.shape[:-1], params['value'])
            if kind is WeightKind.Power:
                distance = np.sqrt(np.sum((points - np.array(params['center'])) ** 2, axis=-1))
                if params['alpha'] == 0.0:
                    return np.ones_like(distance)
                values = distance ** params['alpha']
                return np.where(distance == 0.0, INF if params['alpha'] < 0 else 0.0, values)
            if kind is WeightKind.Step:
                coordinate = points[..., params['axis']]
                return np.where(coordinate <= params['threshold'], params['low'], params['high'])
            if kind is WeightKind.Radial:
                radius = np.sqrt(np.sum(points ** 2, axis=-1))
                return params['profile'](radius[..., np.newaxis])
            if kind is WeightKind.Expression:
                return params['expression'](points)
            if kind is WeightKind.Product:
                values = np.ones(points.shape[:-1])
                for factor in params['factors']:
                    values = values * factor(points)
                return values
            if kind is WeightKind.Powered:
                return params['base'](points) ** params['delta']
            if kind is WeightKind.Points:
                values = np.array(params['base'](points), dtype=float)
                for location, value in params['points']:
                    values = np.where(np.all(points == np.array(location), axis=-1), value, values)
                return values
            table: GridFunction = params['table']
            index = table.grid.cell_of(points)
            return table.values[tuple(np.moveaxis(index, -1, 0))]


    def scalar(self, *coordinates: float) -> float:
        return float(self(np.array([coordinates], dtype=float))[0])


    def line(self, xs: np.ndarray) -> np.ndarray:
        """Evaluate a weight on the real line at an array of abscissae."""
        xs = np.asarray(xs, dtype=float)
        return self(xs[..., np.newaxis])


    # ------------------------------------------------------------------------------------------------------------------
    # Metadata
    # ------------------------------------------------------------------------------------------------------------------
    @property
    def everywhere_a1(self) -> bool:
        """Whether this weight is claimed to be an everywhere-A1 weight."""
        if self.kind is WeightKind.Power:
            return -len(self.params['center']) < self.params['alpha'] <= 0
        if self.kind in (WeightKind.Constant, WeightKind.Step):
            return True
        return self.a1_constant is not None


    @property
    def piecewise_constant(self) -> bool:
        if self.kind in (WeightKind.Constant, WeightKind.Step, WeightKind.Tabulated, WeightKind.CoifmanRochberg):
            return True
        if self.kind is WeightKind.Product:
            return all(factor.piecewise_constant for factor in self.params['factors'])
        if self.kind in (WeightKind.Powered, WeightKind.Points):
            return self.params['base'].piecewise_constant
        return False


    @property
    def bounded(self) -> bool:
        if self.kind is WeightKind.Power:
            return self.params['alpha'] >= 0
        if self.kind in (WeightKind.Powered, WeightKind.Points):
            return self.params['base'].bounded
        return True


    def breakpoints(self, axis: int = 0) -> List[float]:
        """Coordinates along `axis` where the weight is singular or jumps (the points themselves on the line)."""
        kind, params = self.kind, self.params
        if kind is WeightKind.Power:
            return [params['center'][axis]] if axis < len(params['center']) else []
        if kind is WeightKind.Step:
            return [params['threshold']] if params['axis'] == axis else []
        if kind is WeightKind.Radial:
            return [0.0]
        if kind is WeightKind.Product:
            return sorted({point for factor in params['factors'] for point in factor.breakpoints(axis)})
        if kind is WeightKind.Powered:
            return params['base'].breakpoints(axis)
        if kind is WeightKind.Points:
            overrides = [location[axis] for location, _ in params['points'] if axis < len(location)]
            return sorted({*params['base'].breakpoints(axis), *overrides})
        return []


    def cell_means(self, grid: Grid) -> np.ndarray:
        """Average of the weight over each cell.

        Exact on one-dimensional grids for constant, integrable power and step weights (closed-form antiderivative);
        the cell-center sample everywhere else.
        """
        if self.kind is WeightKind.Points:
            return self.params['base'].cell_means(grid)
        if self.kind is WeightKind.Constant:
            return np.full(grid.shape, self.params['value'])
        if grid.dimension == 1:
            antiderivative = self._antiderivative()
            if antiderivative is not None:
                edges = grid.domain.lower[0] + np.arange(grid.resolution[0] + 1) * grid.spacing[0]
                totals = antiderivative(edges)
                return np.diff(totals) / grid.spacing[0]
        return self(grid.centers())


    def _antiderivative(self) -> Optional[Callable[[np.ndarray], np.ndarray]]:
        kind, params = self.kind, self.params
        if kind is WeightKind.Points:
            return params['base']._antiderivative()
        if kind is WeightKind.Constant:
            return lambda x: params['value'] * x
        if kind is WeightKind.Step and params['axis'] == 0:
            threshold, low, high = params['threshold'], params['low'], params['high']
            return lambda x: low * np.minimum(x, threshold) + high * np.maximum(x - threshold, 0.0)
        if kind is WeightKind.Power and params['alpha'] > -1.0:
            center, exponent = params['center'][0], params['alpha'] + 1.0
            return lambda x: np.sign(x - center) * np.abs(x - center) ** exponent / exponent
        return None


    def integrate_line(self, lower: float, upper: float) -> float:
        """Integral of a one-dimensional weight over [lower, upper]."""
        antiderivative = self._antiderivative()
        if antiderivative is not None:
            return float(antiderivative(np.array(upper)) - antiderivative(np.array(lower)))
        return quadrature.integrate(self.scalar, lower, upper, self.breakpoints(), label='weight')


    def to_spec(self) -> str:
        """Render the weight in the experiment-file mini-language."""
        kind, params = self.kind, self.params
        if kind is WeightKind.Constant:
            return f"const({params['value']:g})"
        if kind is WeightKind.Power:
            center = '' if not any(params['center']) else f", center={list(params['center'])}"
            return f"power(alpha={params['alpha']:g}{center})"
        if kind is WeightKind.Step:
            return (f"step(threshold={params['threshold']:g}, low={params['low']:g}, high={params['high']:g}, "
                    f"axis={params['axis']})")
        if kind is WeightKind.Radial:
            return f'radial(profile="{params["profile"].text}")'
        if kind is WeightKind.Expression:
            return f'expr("{params["expression"].text}")'
        if kind is WeightKind.Product:
            return ' * '.join(factor.to_spec() for factor in params['factors'])
        if kind is WeightKind.Powered:
            return f"({params['base'].to_spec()})**{params['delta']:g}"
        if kind is WeightKind.Points:
            overrides = ', '.join(f'{_point_key(location)}: {value:g}' for location, value in params['points'])
            return f"{params['base'].to_spec()[:-1]}, points={{{overrides}}})"
        if kind is WeightKind.CoifmanRochberg:
            return f"cr(measure={params.get('measure', '?')}, delta={params.get('delta', float('nan')):g})"
        return 'tabulated'


    def __repr__(self) -> str:
        return f'Weight<{self.to_spec()}>'




# ======================================================================================================================
# Sets
# ----------------------------------------------------------------------------------------------------------------------
class Representation(Enum):
    Boxes = 'boxes'
    Implicit = 'implicit'
    Parametric = 'parametric'


# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass(frozen=True)
class Circle:
    """A circle in the plane, the boundary of the open disk it encloses."""
    center: Tuple[float, float]
    radius: float

    dimension = 2

    def contains(self, points: np.ndarray) -> np.ndarray:
        return np.sum((np.asarray(points) - np.array(self.center)) ** 2, axis=-1) < self.radius ** 2


    def bounding_box(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.array(self.center) - self.radius, np.array(self.center) + self.radius


    def point(self, theta: float) -> np.ndarray:
        return np.array(self.center) + self.radius * np.array([math.cos(theta), math.sin(theta)])


    def surface_integral(self, weight: Weight) -> float:
        """Line integral of the weight around the circle."""
        integrand = lambda theta: weight(self.point(theta)[np.newaxis])[0] * self.radius
        return quadrature.integrate(integrand, 0.0, 2.0 * math.pi, self._singular_angles(weight), label='circle')


    def interior_integral(self, weight: Weight) -> float:
        """Integral of the weight over the disk, in polar coordinates about the center."""
        def ring(rho: float) -> float:
            if rho == 0.0:
                return 0.0
            circle = Circle(self.center, rho)
            return circle.surface_integral(weight)
        return quadrature.integrate(ring, 0.0, self.radius, label='disk', rtol=1e-9)


    def _singular_angles(self, weight: Weight) -> List[float]:
        # Angles at which the circle passes through a power weight's center.
        if weight.kind is not WeightKind.Power:
            return []
        offset = np.array(weight.params['center'][:2]) - np.array(self.center)
        if abs(np.hypot(*offset) - self.radius) > 1e-12 * max(1.0, self.radius):
            return []
        return [math.atan2(offset[1], offset[0]) % (2.0 * math.pi)]


# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass(frozen=True)
class Sphere:
    """A sphere in space, the boundary of the open ball it encloses."""
    center: Tuple[float, float, float]
    radius: float

    dimension = 3

    def contains(self, points: np.ndarray) -> np.ndarray:
        return np.sum((np.asarray(points) - np.array(self.center)) ** 2, axis=-1) < self.radius ** 2


    def bounding_box(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.array(self.center) - self.radius, np.array(self.center) + self.radius


    def _point(self, radius: float, polar: float, azimuth: float) -> np.ndarray:
        return np.array(self.center) + radius * np.array([math.sin(polar) * math.cos(azimuth),
                                                          math.sin(polar) * math.sin(azimuth),
                                                          math.cos(polar)])


    def surface_integral(self, weight: Weight, radius: Optional[float] = None) -> float:
        radius = self.radius if radius is None else radius
        integrand = lambda polar, azimuth: (weight(self._point(radius, polar, azimuth)[np.newaxis])[0]
                                            * radius ** 2 * math.sin(polar))
        return quadrature.integrate_2d(integrand, (0.0, math.pi), (0.0, 2.0 * math.pi), label='sphere')


    def interior_integral(self, weight: Weight) -> float:
        shell = lambda rho: self.surface_integral(weight, rho) if rho > 0 else 0.0
        return quadrature.integrate(shell, 0.0, self.radius, label='ball', rtol=1e-7)


# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass(frozen=True)
class ShapeSet:
    """A measurable set held in exactly one representation.

    Boxes are open axis-aligned boxes given as (lower, upper) corner pairs; the set is their union.  Implicit sets are
    {phi < 0}.  Parametric sets are the interiors of a Circle or Sphere boundary.
    """
    dimension: int
    boxes: Optional[Tuple[Tuple[Tuple[float, ...], Tuple[float, ...]], ...]] = None
    implicit: Optional[Callable[[np.ndarray], np.ndarray]] = None
    boundary: Optional[Union[Circle, Sphere]] = None
    label: str = ''

    def __post_init__(self):
        populated = [field for field in (self.boxes, self.implicit, self.boundary) if field is not None]
        if len(populated) != 1:
            raise InvalidArgumentError('a shape holds exactly one representation')
        if self.boundary is not None and self.boundary.dimension != self.dimension:
            raise InvalidArgumentError(f'a {type(self.boundary).__name__} does not live in {self.dimension}-D')
        if self.boxes is not None:
            boxes = []
            for lower, upper in self.boxes:
                lower, upper = tuple(map(float, np.atleast_1d(lower))), tuple(map(float, np.atleast_1d(upper)))
                if len(lower) != self.dimension or len(upper) != self.dimension:
                    raise InvalidArgumentError(f'box {lower}-{upper} is not {self.dimension}-D')
                if any(high <= low for low, high in zip(lower, upper)):
                    raise InvalidArgumentError(f'box {lower}-{upper} is empty')
                boxes.append((lower, upper))
            object.__setattr__(self, 'boxes', tuple(boxes))


    @property
    def representation(self) -> Representation:
        if self.boxes is not None:
            return Representation.Boxes
        if self.implicit is not None:
            return Representation.Implicit
        return Representation.Parametric


    @staticmethod
    def empty(dimension: int) -> 'ShapeSet':
        return ShapeSet(dimension, boxes=(), label='empty')


    @staticmethod
    def intervals(intervals: Iterable[Tuple[float, float]]) -> 'ShapeSet':
        intervals = list(intervals)
        label = ' u '.join(f'({low:g}, {high:g})' for low, high in intervals)
        return ShapeSet(1, boxes=tuple(((low,), (high,)) for low, high in intervals), label=label)


    @staticmethod
    def box_union(boxes: Iterable[Tuple[Sequence[float], Sequence[float]]]) -> 'ShapeSet':
        boxes = [(tuple(lower), tuple(upper)) for lower, upper in boxes]
        return ShapeSet(len(boxes[0][0]) if boxes else 1, boxes=tuple(boxes), label='boxes')


    @staticmethod
    def slab(domain: BoxDomain, axis: int, lower: float, upper: float) -> 'ShapeSet':
        """{lower < x[axis] < upper}, truncated to the domain."""
        low, high = list(domain.lower), list(domain.upper)
        low[axis], high[axis] = max(lower, low[axis]), min(upper, high[axis])
        return ShapeSet(domain.dimension, boxes=((tuple(low), tuple(high)),), label=f'slab({lower:g}, {upper:g})')


    @staticmethod
    def disk(center: Sequence[float], radius: float) -> 'ShapeSet':
        return ShapeSet(2, boundary=Circle(tuple(map(float, center)), float(radius)), label=f'disk(r={radius:g})')


    @staticmethod
    def ball(center: Sequence[float], radius: float) -> 'ShapeSet':
        return ShapeSet(3, boundary=Sphere(tuple(map(float, center)), float(radius)), label=f'ball(r={radius:g})')


    @staticmethod
    def level_set(phi: Union[str, Callable[[np.ndarray], np.ndarray]], dimension: int) -> 'ShapeSet':
        text = phi if isinstance(phi, str) else getattr(phi, 'text', 'phi')
        phi = Expression.parse(phi) if isinstance(phi, str) else phi
        return ShapeSet(dimension, implicit=phi, label=f'{{{text} < 0}}')


    def contains(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        if self.boxes is not None:
            inside = np.zeros(points.shape[:-1], dtype=bool)
            for lower, upper in self.boxes:
                inside |= np.all((points > np.array(lower)) & (points < np.array(upper)), axis=-1)
            return inside
        if self.implicit is not None:
            return np.asarray(self.implicit(points)) < 0
        return self.boundary.contains(points)


    def scaled(self, factor: float) -> 'ShapeSet':
        """The image of the set under x -> factor * x."""
        if self.boxes is not None:
            boxes = tuple((tuple(factor * value for value in lower), tuple(factor * value for value in upper))
                          for lower, upper in self.boxes)
            return ShapeSet(self.dimension, boxes=boxes, label=f'{factor:g} * {self.label}')
        if self.implicit is not None:
            phi = self.implicit
            return ShapeSet(self.dimension, implicit=lambda points: phi(np.asarray(points) / factor),
                            label=f'{factor:g} * {self.label}')
        boundary = type(self.boundary)(tuple(factor * value for value in self.boundary.center),
                                       factor * self.boundary.radius)
        return ShapeSet(self.dimension, boundary=boundary, label=f'{factor:g} * {self.label}')




# ======================================================================================================================
# Measures
# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass(frozen=True)
class AtomTrain:
    """Infinitely many atoms on the line: mass base**k at x = k for every integer k >= first."""
    base: float = 2.0
    first: int = 1

    def mass(self, lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
        """Total mass in the closed intervals [lower, upper]; +inf once it overflows."""
        lower, upper = np.broadcast_arrays(np.asarray(lower, dtype=float), np.asarray(upper, dtype=float))
        start = np.maximum(np.ceil(lower), self.first)
        stop = np.floor(upper)
        with np.errstate(over='ignore', invalid='ignore'):
            if self.base == 1.0:
                total = np.maximum(stop - start + 1.0, 0.0)
            else:
                total = (np.power(self.base, stop + 1.0) - np.power(self.base, start)) / (self.base - 1.0)
        total = np.where(np.isnan(total), INF, total)
        return np.where(stop >= start, total, 0.0)


# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass(frozen=True)
class Measure:
    """A locally finite Borel measure: finitely many atoms, an optional atom train, and an optional density.

    The density is either a constant (a multiple of Lebesgue measure) or a GridFunction that vanishes off its grid.
    """
    dimension: int
    atoms: Tuple[Tuple[Tuple[float, ...], float], ...] = ()
    density: Optional[Union[float, GridFunction]] = None
    train: Optional[AtomTrain] = None
    label: str = ''

    def __post_init__(self):
        atoms = []
        for location, mass in self.atoms:
            location = tuple(map(float, np.atleast_1d(location)))
            if len(location) != self.dimension:
                raise InvalidArgumentError(f'atom at {location} is not {self.dimension}-D')
            if not mass > 0:
                raise InvalidArgumentError(f'atom masses must be positive, got {mass}')
            atoms.append((location, float(mass)))
        object.__setattr__(self, 'atoms', tuple(atoms))
        if self.train is not None and self.dimension != 1:
            raise InvalidArgumentError('atom trains live on the line')
        if isinstance(self.density, (int, float)) and self.density < 0:
            raise InvalidArgumentError('a density must be nonnegative')


    @staticmethod
    def lebesgue(dimension: int = 1) -> 'Measure':
        return Measure(dimension, density=1.0, label='lebesgue')


    @staticmethod
    def dirac(location: Sequence[float] = (0.0,)) -> 'Measure':
        location = tuple(map(float, np.atleast_1d(location)))
        return Measure(len(location), atoms=((location, 1.0),), label=f'dirac{location}')


    @staticmethod
    def geometric_train(base: float = 2.0, first: int = 1) -> 'Measure':
        return Measure(1, train=AtomTrain(base, first), label=f'train(base={base:g})')


    def _atom_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        if not self.atoms:
            return np.zeros((0, self.dimension)), np.zeros(0)
        return np.array([location for location, _ in self.atoms]), np.array([mass for _, mass in self.atoms])


    def interval_mass(self, lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
        """Mass of the closed intervals [lower, upper] on the line (vectorized)."""
        lower, upper = np.broadcast_arrays(np.asarray(lower, dtype=float), np.asarray(upper, dtype=float))
        locations, masses = self._atom_arrays()
        total = np.zeros(lower.shape)
        if len(masses):
            order = np.argsort(locations[:, 0])
            ordered, cumulative = locations[order, 0], np.concatenate([[0.0], np.cumsum(masses[order])])
            total = total + (cumulative[np.searchsorted(ordered, upper, side='right')]
                             - cumulative[np.searchsorted(ordered, lower, side='left')])
        if self.train is not None:
            total = total + self.train.mass(lower, upper)
        if isinstance(self.density, GridFunction):
            total = total + self._table_mass(lower, upper)
        elif self.density:
            total = total + self.density * (upper - lower)
        return total


    def _table_mass(self, lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
        # Piecewise-constant density: integrate the cumulative sum exactly.
        table = self.density
        grid = table.grid
        edges = grid.domain.lower[0] + np.arange(grid.resolution[0] + 1) * grid.spacing[0]
        cumulative = np.concatenate([[0.0], np.cumsum(table.values * grid.spacing[0])])
        return np.interp(upper, edges, cumulative) - np.interp(lower, edges, cumulative)


    def ball_mass(self, center: Sequence[float], radius: np.ndarray) -> np.ndarray:
        """Mass of the closed balls B(center, radius) for an array of radii.

        `center` is either one point shared by every radius or an array shaped (..., n) holding one center per radius.
        """
        center = np.asarray(center, dtype=float)
        radius = np.asarray(radius, dtype=float)
        if self.dimension == 1:
            return self.interval_mass(center[..., 0] - radius, center[..., 0] + radius)
        if center.ndim > 1:
            radius = np.broadcast_to(radius, center.shape[:-1])
        locations, masses = self._atom_arrays()
        total = np.zeros(radius.shape)
        if len(masses):
            offsets = locations - (center[..., np.newaxis, :] if center.ndim > 1 else center)
            distances = np.sqrt(np.sum(offsets ** 2, axis=-1))
            total = total + np.sum(masses * (distances <= radius[..., np.newaxis]), axis=-1)
        if isinstance(self.density, GridFunction) and center.ndim > 1:
            total = total + np.array([self._table_ball_mass(point, size) for point, size in
                                      zip(center.reshape(-1, self.dimension), radius.ravel())]).reshape(radius.shape)
        elif isinstance(self.density, GridFunction):
            total = total + self._table_ball_mass(center, radius)
        elif self.density:
            total = total + self.density * BALL_VOLUME[self.dimension] * radius ** self.dimension
        return total


    def _table_ball_mass(self, center: np.ndarray, radius: np.ndarray) -> np.ndarray:
        grid = self.density.grid
        distances = np.sqrt(np.sum((grid.centers() - center) ** 2, axis=-1)).ravel()
        order = np.argsort(distances)
        cumulative = np.concatenate([[0.0], np.cumsum(self.density.values.ravel()[order] * grid.cell_volume)])
        return cumulative[np.searchsorted(distances[order], radius, side='right')]


    def cell_masses(self, grid: Grid) -> np.ndarray:
        """Mass of every cell of the grid (atoms assigned to the cell that contains them)."""
        if grid.dimension != self.dimension:
            raise InvalidArgumentError(f'a {self.dimension}-D measure cannot live on a {grid.dimension}-D grid')
        masses = np.zeros(grid.shape)
        locations, weights = self._atom_arrays()
        if len(weights):
            inside = grid.domain.contains(locations) | np.all(locations == np.array(grid.domain.lower), axis=-1)
            index = grid.cell_of(locations[inside])
            np.add.at(masses, tuple(index.T), weights[inside])
        if self.train is not None:
            edges = grid.domain.lower[0] + np.arange(grid.resolution[0] + 1) * grid.spacing[0]
            masses = masses + self.train.mass(edges[:-1], np.nextafter(edges[1:], -INF))
        if isinstance(self.density, GridFunction):
            if not self.density.grid.matches(grid):
                raise InvalidArgumentError('a tabulated density must share the grid it is measured on')
            masses = masses + self.density.values * grid.cell_volume
        elif self.density:
            masses = masses + self.density * grid.cell_volume
        return masses


    def to_spec(self) -> str:
        return self.label or 'measure'




# ======================================================================================================================
# Operations
# ----------------------------------------------------------------------------------------------------------------------
def make_grid(domain: BoxDomain, resolution: Union[int, Sequence[int]]) -> Grid:
    """Lay a regular grid with the given per-axis resolution (an int applies to every axis) over the domain."""
    counts = [int(resolution)] * domain.dimension if np.isscalar(resolution) else [int(count) for count in resolution]
    if len(counts) != domain.dimension:
        raise InvalidArgumentError(f'{len(counts)} resolutions given for a {domain.dimension}-D domain')
    if any(count < 2 for count in counts):
        raise InvalidArgumentError(f'resolution must be at least 2 on every axis, got {counts}')
    return Grid(domain, tuple(counts))


# ----------------------------------------------------------------------------------------------------------------------
def sample(function: Union[Weight, Expression, Callable[[np.ndarray], np.ndarray]], grid: Grid) -> GridFunction:
    """Evaluate a weight or a function at every cell center.

    Weights may evaluate to +inf; any other non-positive or undefined weight value, and any non-finite function
    value, raises SamplingError naming the first offending cell.
    """
    is_weight = isinstance(function, Weight)
    centers = grid.centers()
    try:
        values = np.asarray(function(centers), dtype=float)
    except Exception as error:
        raise SamplingError(f'evaluation failed: {error}', _first_failure(function, centers)) from error
    if values.shape != grid.shape:
        values = np.broadcast_to(values, grid.shape).copy()
    if is_weight:
        bad = np.isnan(values) | (values <= 0)
        if np.any(bad):
            raise SamplingError('weights must take values in (0, inf]', np.argwhere(bad)[0])
    elif not np.all(np.isfinite(values)):
        raise SamplingError('function is not finite at a cell center', np.argwhere(~np.isfinite(values))[0])
    return GridFunction(grid, values, weight=is_weight)


# ----------------------------------------------------------------------------------------------------------------------
def _first_failure(function, centers: np.ndarray) -> Tuple[int, ...]:
    for index in np.ndindex(centers.shape[:-1]):
        try:
            function(centers[index][np.newaxis])
        except Exception:
            return index
    return (0,) * (centers.ndim - 1)


# ----------------------------------------------------------------------------------------------------------------------
def indicator(shape: ShapeSet, grid: Grid) -> GridFunction:
    """1 at cell centers inside the set, 0 elsewhere."""
    if shape.dimension != grid.dimension:
        raise InvalidArgumentError(f'a {shape.dimension}-D set cannot be sampled on a {grid.dimension}-D grid')
    return GridFunction(grid, shape.contains(grid.centers()).astype(float))


# ----------------------------------------------------------------------------------------------------------------------
def weight_samples(weight: Union[Weight, GridFunction], grid: Grid) -> np.ndarray:
    """Samples of a weight at the grid's cell centers, checking that tabulated samples share the grid."""
    if isinstance(weight, GridFunction):
        if not weight.grid.matches(grid):
            raise InvalidArgumentError('weight samples and function live on different grids')
        return weight.values
    return sample(weight, grid).values




# End of File
