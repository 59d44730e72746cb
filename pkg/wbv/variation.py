# ======================================================================================================================
#      File:  /wbv/variation.py
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
"""Discrete weighted total variation, weighted perimeters, dual lower bounds and the lower semicontinuity probe.

The discrete gradient is the forward difference along every axis, zero at the last index, and the divergence is its
exact negative adjoint:

    sum(grad(f) . p) == -sum(f * div(p))

so any test field with |p| <= w per cell gives a lower bound on the discrete weighted variation, up to rounding.
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
from wbv.core import (INF, BoxDomain, Grid, GridFunction, Representation, ShapeSet, Weight, make_grid, sample,
                      weight_samples)
from wbv.errors import FeasibilityError, InvalidArgumentError, PreconditionError




# ======================================================================================================================
# Constants
# ----------------------------------------------------------------------------------------------------------------------
log = logging.getLogger(__name__)

FEASIBILITY_SLACK = 1e-12
IMPLICIT_RESOLUTION = 512




# ======================================================================================================================
# Reports
# ----------------------------------------------------------------------------------------------------------------------
class Method(Enum):
    GradientSum = 'gradient-sum'
    FaceSum = 'face-sum'
    BoundaryQuadrature = 'boundary-quadrature'
    DualBound = 'dual-bound'


# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass
class VariationReport:
    value: float
    method: Method
    resolution: Optional[Tuple[int, ...]] = None
    spacing: Optional[Tuple[float, ...]] = None
    error_estimate: Optional[float] = None
    history: List[Tuple[float, float]] = dataclasses.field(default_factory=list)

    def __post_init__(self):
        if not self.value >= 0:
            raise InvalidArgumentError(f'a variation is nonnegative, got {self.value}')


    def to_dict(self) -> Dict:
        return {
            'value': self.value,
            'method': self.method.value,
            'resolution': list(self.resolution) if self.resolution else None,
            'spacing': list(self.spacing) if self.spacing else None,
            'error_estimate': self.error_estimate,
            'history': [list(entry) for entry in self.history],
        }


# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass
class LscReport:
    tv_limit: float
    tv_values: List[float]
    l1_gaps: List[float]
    liminf: float
    gap: float
    tolerance: float

    @property
    def violated(self) -> bool:
        return self.gap < -self.tolerance

    def to_dict(self) -> Dict:
        return {'tv_limit': self.tv_limit, 'tv_values': self.tv_values, 'l1_gaps': self.l1_gaps,
                'liminf': self.liminf, 'gap': self.gap, 'tolerance': self.tolerance, 'violated': self.violated}




# ======================================================================================================================
# Finite Differences
# ----------------------------------------------------------------------------------------------------------------------
def forward_gradient(values: np.ndarray, spacing: Sequence[float]) -> np.ndarray:
    """Forward differences along every axis, stacked first; zero at the last index of each axis."""
    values = np.asarray(values, dtype=float)
    gradient = np.zeros((values.ndim,) + values.shape)
    for axis, step in enumerate(spacing):
        head = [slice(None)] * values.ndim
        head[axis] = slice(0, -1)
        gradient[axis][tuple(head)] = np.diff(values, axis=axis) / step
    return gradient


# ----------------------------------------------------------------------------------------------------------------------
def divergence(field: Sequence[np.ndarray], spacing: Sequence[float]) -> np.ndarray:
    """Negative adjoint of `forward_gradient`: d[0] = p[0], d[i] = p[i] - p[i-1], d[-1] = -p[-2], per axis."""
    total = np.zeros(np.shape(field[0]))
    for axis, (component, step) in enumerate(zip(field, spacing)):
        component = np.moveaxis(np.asarray(component, dtype=float), axis, 0)
        difference = np.empty_like(component)
        difference[0] = component[0]
        difference[1:-1] = component[1:-1] - component[:-2]
        difference[-1] = -component[-2]
        total += np.moveaxis(difference, 0, axis) / step
    return total


# ----------------------------------------------------------------------------------------------------------------------
def _weighted_magnitude(weights: np.ndarray, magnitude: np.ndarray) -> np.ndarray:
    # 0 * inf is 0: a cell with no gradient contributes nothing whatever its weight.
    with np.errstate(invalid='ignore'):
        return np.where(magnitude == 0.0, 0.0, weights * magnitude)




# ======================================================================================================================
# Weighted Variation
# ----------------------------------------------------------------------------------------------------------------------
def weighted_tv(f: GridFunction, w: Union[Weight, GridFunction]) -> VariationReport:
    """Sum over cells of w(x) |grad f(x)| h^n, with w sampled at the cell the forward difference starts from."""
    grid = f.grid
    weights = weight_samples(w, grid)
    gradient = forward_gradient(f.values, grid.spacing)
    magnitude = np.sqrt(np.sum(gradient ** 2, axis=0))
    value = float(np.sum(_weighted_magnitude(weights, magnitude)) * grid.cell_volume)
    return VariationReport(value, Method.GradientSum, grid.resolution, grid.spacing)


# ----------------------------------------------------------------------------------------------------------------------
def weighted_l1(f: GridFunction, w: Union[Weight, GridFunction]) -> float:
    """Discrete norm of f in L1(w): sum |f| w h^n."""
    weights = weight_samples(w, f.grid)
    return float(np.sum(_weighted_magnitude(weights, np.abs(f.values))) * f.grid.cell_volume)


# ----------------------------------------------------------------------------------------------------------------------
def bv_norm(f: GridFunction, w: Union[Weight, GridFunction]) -> float:
    return weighted_l1(f, w) + weighted_tv(f, w).value


# ----------------------------------------------------------------------------------------------------------------------
def gradient_quadrature(function: Callable[[np.ndarray], np.ndarray], w: Weight, domain: BoxDomain,
                        resolution: int = 2048, step: float = 1e-6) -> float:
    """Midpoint quadrature of |grad f| w for a smooth f, with central-difference gradients of step `step`."""
    grid = make_grid(domain, resolution)
    centers = grid.centers()
    squared = np.zeros(grid.shape)
    for axis in range(grid.dimension):
        offset = np.zeros(grid.dimension)
        offset[axis] = step
        squared += ((function(centers + offset) - function(centers - offset)) / (2.0 * step)) ** 2
    weights = sample(w, grid).values
    return float(np.sum(_weighted_magnitude(weights, np.sqrt(squared))) * grid.cell_volume)


# ----------------------------------------------------------------------------------------------------------------------
def refinement_study(function: Callable[[np.ndarray], np.ndarray], w: Weight, domain: BoxDomain,
                     resolutions: Sequence[int]) -> VariationReport:
    """weighted_tv of a sampled function on each resolution; the finest value is reported, all values in history."""
    history = []
    for resolution in resolutions:
        grid = make_grid(domain, resolution)
        report = weighted_tv(sample(function, grid), w)
        history.append((max(grid.spacing), report.value))
        log.debug('refinement %s: TV_w = %.10g', grid.resolution, report.value)
    grid = make_grid(domain, resolutions[-1])
    return VariationReport(history[-1][1], Method.GradientSum, grid.resolution, grid.spacing, history=history)


# ----------------------------------------------------------------------------------------------------------------------
def empirical_orders(history: Sequence[Tuple[float, float]], reference: float) -> List[float]:
    """Observed convergence orders log(e_i / e_i+1) / log(h_i / h_i+1) along a refinement history."""
    orders = []
    for (h0, v0), (h1, v1) in zip(history[:-1], history[1:]):
        e0, e1 = abs(v0 - reference), abs(v1 - reference)
        orders.append(INF if e1 == 0 else math.log(e0 / e1) / math.log(h0 / h1))
    return orders




# ======================================================================================================================
# Test Fields and Duality
# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass(frozen=True, eq=False)
class TestField:
    """A staggered vector field: component a at index i lives on the face between cells i and i + e_a.

    Components vanish at the last index along their own axis, which holds the faces on the domain boundary.
    """
    __test__ = False    # not a pytest class

    grid: Grid
    components: Tuple[np.ndarray, ...]

    def __post_init__(self):
        components = tuple(np.array(component, dtype=float) for component in self.components)
        if len(components) != self.grid.dimension:
            raise InvalidArgumentError(f'a {self.grid.dimension}-D field needs {self.grid.dimension} components')
        for axis, component in enumerate(components):
            if component.shape != self.grid.shape:
                raise InvalidArgumentError(f'component {axis} is shaped {component.shape}, not {self.grid.shape}')
            if np.any(np.take(component, -1, axis=axis) != 0.0):
                raise InvalidArgumentError(f'component {axis} must vanish on the boundary faces')
            component.setflags(write=False)
        object.__setattr__(self, 'components', components)


    @staticmethod
    def zero(grid: Grid) -> 'TestField':
        return TestField(grid, tuple(np.zeros(grid.shape) for _ in range(grid.dimension)))


    def magnitude(self) -> np.ndarray:
        return np.sqrt(sum(component ** 2 for component in self.components))


    def certificate(self, w: Union[Weight, GridFunction]) -> float:
        """Largest |phi| / w over the cells; at most 1 for a feasible field."""
        weights = weight_samples(w, self.grid)
        magnitude = self.magnitude()
        with np.errstate(divide='ignore', invalid='ignore'):
            ratios = np.where(magnitude == 0.0, 0.0, magnitude / weights)
        return float(np.max(ratios))


    def divergence(self) -> np.ndarray:
        return divergence(self.components, self.grid.spacing)


# ----------------------------------------------------------------------------------------------------------------------
def _zero_boundary(components: Sequence[np.ndarray]) -> List[np.ndarray]:
    trimmed = []
    for axis, component in enumerate(components):
        component = np.array(component, dtype=float)
        index = [slice(None)] * component.ndim
        index[axis] = -1
        component[tuple(index)] = 0.0
        trimmed.append(component)
    return trimmed


# ----------------------------------------------------------------------------------------------------------------------
def dual_lower_bound(f: GridFunction, w: Union[Weight, GridFunction], field: TestField) -> float:
    """Sum f div(phi) h^n for a feasible test field; never exceeds weighted_tv(f, w) beyond rounding."""
    if not field.grid.matches(f.grid):
        raise InvalidArgumentError('test field and function live on different grids')
    certificate = field.certificate(w)
    if certificate > 1.0 + FEASIBILITY_SLACK:
        raise FeasibilityError(certificate)
    return float(np.sum(f.values * field.divergence()) * f.grid.cell_volume)


# ----------------------------------------------------------------------------------------------------------------------
def optimal_test_field(f: GridFunction, w: Union[Weight, GridFunction]) -> TestField:
    """phi = -w grad f / |grad f|, the field whose dual bound equals the discrete weighted variation.

    Cells where w is infinite get no field; the bound is then finite while the variation is not.
    """
    weights = weight_samples(w, f.grid)
    gradient = forward_gradient(f.values, f.grid.spacing)
    magnitude = np.sqrt(np.sum(gradient ** 2, axis=0))
    with np.errstate(divide='ignore', invalid='ignore'):
        scale = np.where((magnitude > 0) & np.isfinite(weights), -weights / magnitude, 0.0)
    return TestField(f.grid, tuple(_zero_boundary([component * scale for component in gradient])))


# ----------------------------------------------------------------------------------------------------------------------
def field_from_function(function: Callable[[np.ndarray], np.ndarray], grid: Grid,
                        w: Optional[Union[Weight, GridFunction]] = None) -> TestField:
    """Sample a vector field at face centers and, given a weight, shrink it cell by cell until |phi| <= w.

    `function` maps points shaped (..., n) to vectors shaped (..., n); on the line it may return scalars.
    """
    components = []
    for axis in range(grid.dimension):
        values = np.asarray(function(grid.face_centers(axis)), dtype=float)
        if grid.dimension == 1 and values.shape == grid.shape:
            values = values[..., np.newaxis]
        components.append(values[..., axis])
    components = _zero_boundary(components)
    if w is not None:
        weights = weight_samples(w, grid)
        magnitude = np.sqrt(sum(component ** 2 for component in components))
        with np.errstate(divide='ignore', invalid='ignore'):
            shrink = np.where(magnitude > weights, weights / magnitude, 1.0)
        components = [component * shrink for component in components]
    return TestField(grid, tuple(components))


# ----------------------------------------------------------------------------------------------------------------------
def random_test_field(grid: Grid, w: Union[Weight, GridFunction], rng: np.random.Generator) -> TestField:
    """A random feasible field: a uniform direction per cell with magnitude uniform in [0, w)."""
    weights = weight_samples(w, grid)
    finite = weights[np.isfinite(weights)]
    cap = np.where(np.isfinite(weights), weights, finite.max() if finite.size else 1.0)
    raw = rng.standard_normal((grid.dimension,) + grid.shape)
    length = np.sqrt(np.sum(raw ** 2, axis=0))
    length = np.where(length == 0.0, 1.0, length)
    scale = rng.uniform(0.0, 1.0, grid.shape) * cap / length
    return TestField(grid, tuple(_zero_boundary([component * scale for component in raw])))




# ======================================================================================================================
# Lower Semicontinuity
# ----------------------------------------------------------------------------------------------------------------------
def lsc_probe(sequence: Sequence[GridFunction], f: GridFunction, w: Union[Weight, GridFunction],
              tolerance: float = 1e-9, convergence: float = 0.05, tail: Optional[int] = None) -> LscReport:
    """Compare the liminf of TV_w along a sequence converging to f in L1(w) against TV_w(f).

    The liminf is the smallest value over the tail (the last half by default).  A sequence whose last L1(w) gap is
    not below `convergence` (relative to max(1, |f|)) or above its first gap raises PreconditionError.
    """
    if not sequence:
        raise InvalidArgumentError('the sequence is empty')
    for member in sequence:
        if not member.grid.matches(f.grid):
            raise InvalidArgumentError('every member of the sequence must share the grid of the limit')
    gaps = [weighted_l1(member - f, w) for member in sequence]
    size = max(1.0, weighted_l1(f, w))
    if gaps[-1] > convergence * size or gaps[-1] > gaps[0]:
        raise PreconditionError('sequence does not converge in L1(w)', gaps)
    values = [weighted_tv(member, w).value for member in sequence]
    limit = weighted_tv(f, w).value
    tail = tail or max(1, len(sequence) // 2)
    liminf = min(values[-tail:])
    gap = liminf - limit if math.isfinite(limit) else (0.0 if math.isinf(liminf) else -INF)
    report = LscReport(limit, values, gaps, liminf, gap, tolerance * max(1.0, limit if math.isfinite(limit) else 1.0))
    log.debug('lsc probe: liminf %.10g vs %.10g (gap %.3g)', liminf, limit, gap)
    return report




# ======================================================================================================================
# Weighted Perimeter
# ----------------------------------------------------------------------------------------------------------------------
def weighted_perimeter(shape: ShapeSet, w: Weight, domain: BoxDomain,
                       resolution: int = IMPLICIT_RESOLUTION) -> VariationReport:
    """w-perimeter of a set inside the open domain.

    Box unions are summed face by face over the union's boundary (faces on the domain boundary do not count);
    piecewise-constant weights use the value at the face center times the face area, other weights are integrated
    over each face.  Circles and spheres are integrated by quadrature.  Implicit sets use a smeared surface delta
    on a grid of `resolution` cells per axis.
    """
    if shape.dimension != domain.dimension:
        raise InvalidArgumentError(f'a {shape.dimension}-D set cannot be measured in a {domain.dimension}-D domain')
    representation = shape.representation
    if representation is Representation.Boxes:
        value = _face_sum(shape, w, domain)
        return VariationReport(value, Method.FaceSum)
    if representation is Representation.Parametric:
        low, high = shape.boundary.bounding_box()
        if np.any(low < np.array(domain.lower)) or np.any(high > np.array(domain.upper)):
            raise InvalidArgumentError(f'{shape.label} does not close up inside the domain')
        return VariationReport(shape.boundary.surface_integral(w), Method.BoundaryQuadrature)
    if domain.dimension == 1:
        return VariationReport(_implicit_points(shape, w, domain, resolution), Method.BoundaryQuadrature)
    return _implicit_surface(shape, w, domain, resolution)


# ----------------------------------------------------------------------------------------------------------------------
def _face_sum(shape: ShapeSet, w: Weight, domain: BoxDomain) -> float:
    """Face sum over the boundary of a union of boxes, on coordinates compressed to box edges and weight jumps."""
    n = domain.dimension
    coordinates = []
    for axis in range(n):
        low, high = domain.lower[axis], domain.upper[axis]
        edges = {low, high}
        for lower, upper in shape.boxes:
            edges.update(min(max(value, low), high) for value in (lower[axis], upper[axis]))
        if w.piecewise_constant:
            edges.update(point for point in w.breakpoints(axis) if low < point < high)
        coordinates.append(np.array(sorted(edges)))
    middles = [0.5 * (edges[:-1] + edges[1:]) for edges in coordinates]
    occupied = shape.contains(np.stack(np.meshgrid(*middles, indexing='ij'), axis=-1))

    total = 0.0
    for axis in range(n):
        change = np.diff(occupied.astype(np.int8), axis=axis) != 0
        for index in map(tuple, np.argwhere(change)):
            position = coordinates[axis][index[axis] + 1]
            extents = [(coordinates[other][index[other]], coordinates[other][index[other] + 1])
                       for other in range(n) if other != axis]
            contribution = _face_integral(w, axis, position, extents, n)
            total += contribution
            if math.isinf(total):
                return INF
    return total


# ----------------------------------------------------------------------------------------------------------------------
def _face_integral(w: Weight, axis: int, position: float, extents: List[Tuple[float, float]], n: int) -> float:
    def point(*others: float) -> np.ndarray:
        coordinates = list(others)
        coordinates.insert(axis, position)
        return np.array([coordinates], dtype=float)

    if n == 1:
        return float(w(point())[0])
    if w.piecewise_constant:
        center = [0.5 * (low + high) for low, high in extents]
        area = float(np.prod([high - low for low, high in extents]))
        value = float(w(point(*center))[0])
        return value * area
    if n == 2:
        (low, high), = extents
        other = 1 - axis
        return quadrature.integrate(lambda t: float(w(point(t))[0]), low, high, w.breakpoints(other),
                                    label=f'face x{axis}={position:g}')
    first, second = extents
    return quadrature.integrate_2d(lambda u, v: float(w(point(u, v))[0]), first, second,
                                   label=f'face x{axis}={position:g}')


# ----------------------------------------------------------------------------------------------------------------------
def _implicit_points(shape: ShapeSet, w: Weight, domain: BoxDomain, resolution: int) -> float:
    """Boundary points of a one-dimensional level set, located by bracketing sign changes."""
    xs = np.linspace(domain.lower[0], domain.upper[0], 8 * resolution + 1)[1:-1]
    phi = lambda x: float(shape.implicit(np.array([[x]]))[0])
    values = np.asarray(shape.implicit(xs[:, np.newaxis]), dtype=float)
    total = 0.0
    for index in np.flatnonzero(np.sign(values[:-1]) != np.sign(values[1:])):
        if values[index + 1] == 0.0:
            continue    # counted from the next bracket
        if values[index] == 0.0:
            root = xs[index]
        else:
            root = optimize.brentq(phi, xs[index], xs[index + 1], xtol=1e-14)
        total += w.scalar(root)
    return total


# ----------------------------------------------------------------------------------------------------------------------
def _implicit_surface(shape: ShapeSet, w: Weight, domain: BoxDomain, resolution: int) -> VariationReport:
    """Smeared delta: sum w delta_eps(phi) |grad phi| h^n with a cosine delta of half-width 1.5 cells."""
    grid = make_grid(domain, resolution)
    phi = np.asarray(shape.implicit(grid.centers()), dtype=float)
    gradient = np.gradient(phi, *grid.spacing)
    magnitude = np.sqrt(sum(component ** 2 for component in gradient))
    width = 1.5 * max(grid.spacing) * max(float(np.max(magnitude)), 1e-300)
    delta = np.where(np.abs(phi) < width, (1.0 + np.cos(np.pi * phi / width)) / (2.0 * width), 0.0)
    density = delta * magnitude
    weights = sample(w, grid).values
    value = float(np.sum(_weighted_magnitude(weights, density)) * grid.cell_volume)
    return VariationReport(value, Method.BoundaryQuadrature, grid.resolution, grid.spacing,
                           error_estimate=max(grid.spacing))




# End of File
