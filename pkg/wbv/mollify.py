# ======================================================================================================================
#      File:  /wbv/mollify.py
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
"""Smooth approximation by mollification on a cover of the domain.

The domain is covered by a core and dyadic shells toward its boundary.  A smooth partition of unity subordinate to
that cover splits f into pieces f * zeta_k, each piece is mollified at its own scale eps_k, and the results are
summed.  Near the boundary the pieces get thinner, so eps_k shrinks with k.

Distances are measured through s(x) = log2(D / dist(x, boundary)) with D half the smallest side of the box:

    core      Omega_1 = {s < 2}              zeta support  s <= 1.75
    shell k   Omega_k = {k - 1 < s < k + 1}  zeta support  |s - k| <= 0.75

so no point lies in more than three pieces.  The pieces are normalised together with the shell after the last
one, so the last zeta tapers to 0 and the zeta_k sum to 1 up to s = depth + 0.25.
"""

# ======================================================================================================================
# Imports
# ----------------------------------------------------------------------------------------------------------------------
import csv
import dataclasses
import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import legendre

from wbv import bv1d, quadrature
from wbv.core import INF, BoxDomain, Grid, GridFunction, Weight, weight_samples
from wbv.errors import CoverageError, InconsistencyError, InvalidArgumentError, ResolutionError
from wbv.kernel import convolve, standard_mollifier
from wbv.variation import forward_gradient, weighted_l1, weighted_tv
from wbv.weights import BallFamily, delta_weight, estimate_a1_constant




# ======================================================================================================================
# Constants
# ----------------------------------------------------------------------------------------------------------------------
log = logging.getLogger(__name__)

SHELL_HALF_WIDTH = 0.75
CORE_EDGE = 1.75
OVERLAP_LIMIT = 4
PARTITION_TOLERANCE = 1e-10




# ======================================================================================================================
# Mollifier Bound
# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass
class BoundReport:
    """Largest ratio (eta_eps * w)(x) / (C w(x)) over cell centers."""
    max_ratio: float
    worst_point: Tuple[float, ...]
    constant: float
    epsilon: float
    violations: int
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> Dict:
        return {'max_ratio': self.max_ratio, 'worst_point': list(self.worst_point), 'constant': self.constant,
                'epsilon': self.epsilon, 'violations': self.violations, 'tolerance': self.tolerance,
                'passed': self.passed}


# ----------------------------------------------------------------------------------------------------------------------
def smoothed_weight(w: Weight, epsilon: float, point: np.ndarray, nodes: int = 48) -> float:
    """(eta_eps * w)(point): adaptive quadrature on the line, a Gauss-Legendre product rule in the plane and space."""
    point = np.asarray(point, dtype=float)
    eta = standard_mollifier(epsilon, len(point))
    if len(point) == 1:
        x = float(point[0])
        integrand = lambda y: float(eta(np.array([[x - y]]))[0]) * w.scalar(y)
        return quadrature.integrate(integrand, x - epsilon, x + epsilon, [x, *w.breakpoints()], rtol=1e-10,
                                    label=f'eta * w at {x:g}')
    abscissae, weights = legendre.leggauss(nodes)
    grids = np.meshgrid(*([abscissae * epsilon] * len(point)), indexing='ij')
    offsets = np.stack(grids, axis=-1)
    factors = np.prod(np.meshgrid(*([weights * epsilon] * len(point)), indexing='ij'), axis=0)
    values = eta(offsets) * w(point + offsets)
    return float(np.sum(np.where(eta(offsets) > 0, values, 0.0) * factors))


# ----------------------------------------------------------------------------------------------------------------------
def mollifier_weight_bound(w: Weight, epsilon: float, grid: Grid, constant: Optional[float] = None,
                           tolerance: float = 1e-6) -> BoundReport:
    """Check eta_eps * w <= [w] w at every cell center where w is finite."""
    if constant is None:
        if w.a1_constant is not None:
            constant = w.a1_constant
        else:
            constant = estimate_a1_constant(w, grid, BallFamily.dyadic(grid, per_octave=4))
    centers = grid.centers().reshape(-1, grid.dimension)
    values = w(centers)
    worst, worst_point, violations = 0.0, tuple(centers[0]), 0
    for point, value in zip(centers, values):
        if not math.isfinite(value):
            continue
        ratio = smoothed_weight(w, epsilon, point) / (constant * value)
        if ratio > worst:
            worst, worst_point = ratio, tuple(float(x) for x in point)
        if ratio > 1.0 + tolerance:
            violations += 1
    log.debug('mollifier bound eps=%g: max ratio %.8g at %s', epsilon, worst, worst_point)
    return BoundReport(worst, worst_point, float(constant), float(epsilon), violations, tolerance)




# ======================================================================================================================
# Cover and Partition of Unity
# ----------------------------------------------------------------------------------------------------------------------
def _smooth_step(t: np.ndarray) -> np.ndarray:
    """C-infinity step: 0 for t <= 0, 1 for t >= 1."""
    t = np.asarray(t, dtype=float)
    with np.errstate(divide='ignore', over='ignore', under='ignore', invalid='ignore'):
        rise = np.where(t > 0, np.exp(-1.0 / np.where(t > 0, t, 1.0)), 0.0)
        fall = np.where(t < 1, np.exp(-1.0 / np.where(t < 1, 1.0 - t, 1.0)), 0.0)
    return rise / (rise + fall)


# ----------------------------------------------------------------------------------------------------------------------
def _bump(t: np.ndarray) -> np.ndarray:
    """C-infinity bump supported on (-1, 1)."""
    t = np.asarray(t, dtype=float)
    inside = np.abs(t) < 1.0
    with np.errstate(over='ignore', under='ignore'):
        return np.where(inside, np.exp(1.0 / np.where(inside, t * t - 1.0, -1.0)), 0.0)


# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass(frozen=True)
class CoverPartition:
    """Core plus dyadic shells over a box, with the smooth partition of unity zeta_k subordinate to them."""
    domain: BoxDomain
    depth: int

    @property
    def scale(self) -> float:
        return 0.5 * float(np.min(self.domain.sides))


    @property
    def pieces(self) -> List[int]:
        return list(range(1, self.depth + 1))


    @property
    def overlap_bound(self) -> int:
        return 3


    def s(self, points: np.ndarray) -> np.ndarray:
        distance = self.domain.distance_to_boundary(points)
        with np.errstate(divide='ignore'):
            return np.log2(self.scale / distance)


    def piece_range(self, k: int) -> Tuple[float, float]:
        """The open range of s covered by Omega_k."""
        return (-INF, 2.0) if k == 1 else (k - 1.0, k + 1.0)


    def in_piece(self, k: int, s: np.ndarray) -> np.ndarray:
        low, high = self.piece_range(k)
        return (s > low) & (s < high)


    def distance_floor(self, k: int) -> float:
        """Smallest distance to the domain boundary over Omega_k."""
        return self.scale * 2.0 ** -(self.piece_range(k)[1])


    def _raw(self, k: int, s: np.ndarray) -> np.ndarray:
        if k == 1:
            return _smooth_step((CORE_EDGE - s) / SHELL_HALF_WIDTH)
        return _bump((s - k) / SHELL_HALF_WIDTH)


    def covered(self, points: np.ndarray) -> np.ndarray:
        """Where the zeta_k sum to 1: short of the first shell past the last piece."""
        return self.s(points) <= self.depth + 1.0 - SHELL_HALF_WIDTH


    def partition(self, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """(zeta shaped (depth, ...), covered mask) at the given points.

        The pieces are normalised together with the shell that would follow the last one, so zeta_depth falls
        smoothly to 0 and every zeta_k is compactly supported in the domain.  Past the covered region the sum drops
        below 1.
        """
        s = self.s(points)
        raw = np.stack([self._raw(k, s) for k in self.pieces])
        total = np.sum(raw, axis=0) + self._raw(self.depth + 1, s)
        positive = total > 0
        zeta = np.where(positive, raw / np.where(positive, total, 1.0), 0.0)
        return zeta, self.covered(points)


    def overlap(self, points: np.ndarray) -> np.ndarray:
        """Number of pieces Omega_k containing each point."""
        s = self.s(points)
        return np.sum([self.in_piece(k, s) for k in self.pieces], axis=0)


# ----------------------------------------------------------------------------------------------------------------------
def build_cover(domain: BoxDomain, depth: int, f: Optional[GridFunction] = None,
                grid: Optional[Grid] = None) -> CoverPartition:
    """Cover the domain with a core and depth - 1 shells.

    Given a function, every cell where it is nonzero must be covered, otherwise CoverageError lists the cells.  The
    partition sum and the overlap count are verified at the cell centers of the function's grid (or `grid`).
    """
    if depth < 1:
        raise InvalidArgumentError(f'depth must be at least 1, got {depth}')
    cover = CoverPartition(domain, int(depth))
    grid = f.grid if f is not None else grid
    if grid is not None:
        centers = grid.centers()
        zeta, covered = cover.partition(centers)
        error = np.max(np.abs(np.sum(zeta, axis=0) - 1.0)[covered], initial=0.0)
        overlap = int(np.max(cover.overlap(centers)))
        if error > PARTITION_TOLERANCE or overlap > OVERLAP_LIMIT:
            raise InconsistencyError(f'cover of depth {depth}: partition error {error:.3g}, overlap {overlap}')
        log.debug('cover depth %d: %d of %d cells covered, overlap %d', depth, int(np.sum(covered)), grid.size,
                  overlap)
    if f is not None:
        _check_coverage(cover, f)
    return cover


# ----------------------------------------------------------------------------------------------------------------------
def _check_coverage(cover: CoverPartition, f: GridFunction) -> None:
    covered = cover.covered(f.grid.centers())
    missing = np.argwhere((f.values != 0) & ~covered)
    if len(missing):
        raise CoverageError(f'depth {cover.depth} leaves {len(missing)} cells of the support uncovered', missing)




# ======================================================================================================================
# Epsilon Schedule
# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass
class PieceSchedule:
    """The scale chosen for one piece and the five conditions measured at that scale."""
    k: int
    epsilon: float
    threshold: float
    residual: float
    gradient_residual: float
    contained: bool
    inside_domain: bool
    halvings: int

    @property
    def satisfied(self) -> bool:
        return (self.contained and self.inside_domain and self.residual < self.threshold
                and self.gradient_residual < self.threshold)

    def to_dict(self) -> Dict:
        return dataclasses.asdict(self)


# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass
class EpsilonSchedule:
    epsilon: float
    pieces: List[PieceSchedule]

    def to_dict(self) -> Dict:
        return {'epsilon': self.epsilon, 'pieces': [piece.to_dict() for piece in self.pieces]}


# ----------------------------------------------------------------------------------------------------------------------
def choose_epsilons(f: GridFunction, w: Union[Weight, GridFunction], cover: CoverPartition,
                    epsilon: float) -> EpsilonSchedule:
    """Halve eps_k from eps / 2 until every condition holds for piece k.

    The conditions are eps_k < eps; the mollified piece stays inside Omega_k (on the samples); the eps_k
    neighbourhood of Omega_k stays inside the domain; and the L1(w) distances between f zeta_k, f grad(zeta_k) and
    their mollifications are both below 2^-k eps.  Pieces where f zeta_k vanishes keep eps / 2.  Raises
    ResolutionError once eps_k would drop below two cells.
    """
    grid = f.grid
    if not epsilon > 0:
        raise InvalidArgumentError(f'epsilon must be positive, got {epsilon}')
    weights = weight_samples(w, grid)
    if math.isinf(weighted_l1(f, w)):
        raise InvalidArgumentError('f is not integrable against the weight')
    _check_coverage(cover, f)
    centers = grid.centers()
    zeta, _ = cover.partition(centers)
    s = cover.s(centers)
    floor = 2.0 * max(grid.spacing)
    volume = grid.cell_volume

    def residual(original: np.ndarray, smoothed: np.ndarray) -> float:
        gap = np.abs(smoothed - original)
        with np.errstate(invalid='ignore'):
            return float(np.sum(np.where(gap == 0, 0.0, gap * weights)) * volume)

    pieces: List[PieceSchedule] = []
    for index, k in enumerate(cover.pieces):
        threshold = 2.0 ** -k * epsilon
        piece = f.values * zeta[index]
        if not np.any(piece != 0):
            pieces.append(PieceSchedule(k, epsilon / 2.0, threshold, 0.0, 0.0, True, True, 0))
            continue
        gradient = np.gradient(zeta[index], *grid.spacing)
        if grid.dimension == 1:
            gradient = [gradient]
        scale, halvings, last = epsilon / 2.0, 0, None
        while True:
            if scale < floor:
                measured = [record.to_dict() for record in pieces] + ([last.to_dict()] if last else [])
                raise ResolutionError(f'piece {k} needs eps_k below two cells ({floor:g}); refine the grid',
                                      measured)
            smoothed = convolve(piece, grid, scale)
            support = np.abs(smoothed) > 1e-14 * np.max(np.abs(piece))
            contained = bool(np.all(cover.in_piece(k, s[support])))
            inside = scale < cover.distance_floor(k)
            first = residual(piece, smoothed)
            squared = np.zeros(grid.shape)
            for component in gradient:
                term = f.values * component
                squared += (convolve(term, grid, scale) - term) ** 2
            second = residual(np.zeros(grid.shape), np.sqrt(squared))
            last = PieceSchedule(k, scale, threshold, first, second, contained, inside, halvings)
            log.debug('piece %d eps_k=%g: residuals %.3g / %.3g (limit %.3g) contained=%s', k, scale, first, second,
                      threshold, contained)
            if last.satisfied:
                pieces.append(last)
                break
            scale, halvings = scale / 2.0, halvings + 1
    return EpsilonSchedule(float(epsilon), pieces)




# ======================================================================================================================
# Smooth Approximation
# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass
class ApproximationDiagnostics:
    schedule: EpsilonSchedule
    l1_gap: float
    tv: float
    tv_original: float

    @property
    def ratio(self) -> float:
        if self.tv_original == 0:
            return 1.0 if self.tv == 0 else INF
        return self.tv / self.tv_original

    def to_dict(self) -> Dict:
        return {'schedule': self.schedule.to_dict(), 'l1_gap': self.l1_gap, 'tv': self.tv,
                'tv_original': self.tv_original, 'ratio': self.ratio}


# ----------------------------------------------------------------------------------------------------------------------
def smooth_approximate(f: GridFunction, w: Union[Weight, GridFunction], epsilon: float,
                       depth: int) -> Tuple[GridFunction, ApproximationDiagnostics]:
    """f_eps = sum_k (f zeta_k) * eta_(eps_k), with its L1(w) distance to f and its weighted variation."""
    grid = f.grid
    cover = build_cover(grid.domain, depth, f)
    schedule = choose_epsilons(f, w, cover, epsilon)
    zeta, _ = cover.partition(grid.centers())
    total = np.zeros(grid.shape)
    for index, piece in enumerate(schedule.pieces):
        values = f.values * zeta[index]
        if np.any(values != 0):
            total += convolve(values, grid, piece.epsilon)
    smooth = f.with_values(total)
    diagnostics = ApproximationDiagnostics(schedule, weighted_l1(smooth - f, w), weighted_tv(smooth, w).value,
                                           weighted_tv(f, w).value)
    log.info('smooth approximation eps=%g: L1(w) gap %.3g, TV ratio %.6g', epsilon, diagnostics.l1_gap,
             diagnostics.ratio)
    return smooth, diagnostics


# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass
class ApproximationTrace:
    rows: List[Tuple[float, float, float, float]]    # (eps, TV_w(f_eps), ratio, L1(w) gap)

    @property
    def limit_ratio(self) -> float:
        return self.rows[-1][2]

    def to_dict(self) -> Dict:
        return {'rows': [list(row) for row in self.rows], 'limit_ratio': self.limit_ratio}

    def write_csv(self, path: str) -> None:
        with open(path, 'w', newline='') as handle:
            writer = csv.writer(handle)
            writer.writerow(['epsilon', 'tv', 'ratio', 'l1_gap'])
            writer.writerows(self.rows)


# ----------------------------------------------------------------------------------------------------------------------
def approximation_trace(f: GridFunction, w: Union[Weight, GridFunction], schedule: Sequence[float],
                        depth: int) -> ApproximationTrace:
    """smooth_approximate over a decreasing epsilon schedule; the last ratio stands in for the limit."""
    rows = []
    for epsilon in sorted(schedule, reverse=True):
        _, diagnostics = smooth_approximate(f, w, epsilon, depth)
        rows.append((float(epsilon), diagnostics.tv, diagnostics.ratio, diagnostics.l1_gap))
    return ApproximationTrace(rows)




# ======================================================================================================================
# Approximability
# ----------------------------------------------------------------------------------------------------------------------
def ball_average_deviation(w: Weight, x: Sequence[float], epsilon: float, nodes: int = 48) -> float:
    """Average of |w(y) - w(x)| over the ball B(x, eps), in polar or spherical coordinates about x."""
    x = np.asarray(x, dtype=float)
    center = float(w(x[np.newaxis])[0])
    if math.isinf(center):
        return INF
    if len(x) == 1:
        return bv1d.lebesgue_trace(w, float(x[0]), [epsilon])[0]
    radii, radial_weights = legendre.leggauss(nodes)
    radii = 0.5 * epsilon * (radii + 1.0)
    radial_weights = 0.5 * epsilon * radial_weights
    if len(x) == 2:
        angles = np.linspace(0.0, 2.0 * np.pi, 4 * nodes, endpoint=False)
        r, theta = np.meshgrid(radii, angles, indexing='ij')
        offsets = np.stack([r * np.cos(theta), r * np.sin(theta)], axis=-1)
        measure = radial_weights[:, None] * r * (2.0 * np.pi / len(angles))
    else:
        polar, polar_weights = legendre.leggauss(nodes)
        angles = np.linspace(0.0, 2.0 * np.pi, 2 * nodes, endpoint=False)
        r, cos_polar, phi = np.meshgrid(radii, polar, angles, indexing='ij')
        sin_polar = np.sqrt(1.0 - cos_polar ** 2)
        offsets = np.stack([r * sin_polar * np.cos(phi), r * sin_polar * np.sin(phi), r * cos_polar], axis=-1)
        measure = (radial_weights[:, None, None] * r ** 2 * polar_weights[None, :, None]
                   * (2.0 * np.pi / len(angles)))
    deviation = np.abs(w(x + offsets) - center)
    return float(np.sum(deviation * measure) / np.sum(measure))


# ----------------------------------------------------------------------------------------------------------------------
def lebesgue_trace(w: Weight, x: Sequence[float], schedule: Optional[Sequence[float]] = None) -> List[float]:
    """Ball averages of |w - w(x)| around x along the schedule, in any dimension."""
    schedule = bv1d.DEFAULT_SCHEDULE if schedule is None else schedule
    return [ball_average_deviation(w, x, epsilon) for epsilon in schedule]


# ----------------------------------------------------------------------------------------------------------------------
def _jump_points(f: GridFunction, limit: int) -> List[np.ndarray]:
    """Face centers where the sampled function jumps, thinned evenly to at most `limit` points."""
    grid = f.grid
    gradient = forward_gradient(f.values, grid.spacing)
    points = []
    for axis in range(grid.dimension):
        faces = grid.face_centers(axis)
        points.extend(faces[gradient[axis] != 0])
    if len(points) > limit:
        chosen = np.linspace(0, len(points) - 1, limit).round().astype(int)
        points = [points[index] for index in chosen]
    return points


# ----------------------------------------------------------------------------------------------------------------------
def approximability_probe(f: Union[GridFunction, 'bv1d.PiecewiseFunction1D'], w: Weight,
                          schedule: Optional[Sequence[float]] = None,
                          tolerance: Optional[float] = None, limit: int = 64,
                          check_delta: bool = True) -> 'bv1d.ApproximabilityReport':
    """Decide whether the atoms of |Df| sit at Lebesgue points of w.

    Piecewise functions go to the exact one-dimensional probe.  For grid functions the atoms are the faces where
    the samples jump.  When the verdict is approximable, the probe is repeated for w^(1/2) and the outcome is
    recorded as `delta_approximable`.
    """
    schedule = bv1d.DEFAULT_SCHEDULE if schedule is None else schedule
    tolerance = bv1d.LEBESGUE_TOLERANCE if tolerance is None else tolerance
    if isinstance(f, bv1d.PiecewiseFunction1D):
        report = bv1d.approximability_probe_1d(f, w, schedule, tolerance)
    else:
        schedule = sorted((float(epsilon) for epsilon in schedule), reverse=True)
        atoms = []
        for point in _jump_points(f, limit):
            averages = lebesgue_trace(w, point, schedule)
            atoms.append(bv1d.AtomTrace(float(point[0]) if len(point) == 1 else tuple(point.tolist()), 1.0,
                                        averages, bv1d._status(averages, tolerance)))
        statuses = {atom.status for atom in atoms}
        if bv1d.Verdict.NotApproximable in statuses:
            verdict = bv1d.Verdict.NotApproximable
        elif bv1d.Verdict.Inconclusive in statuses:
            verdict = bv1d.Verdict.Inconclusive
        else:
            verdict = bv1d.Verdict.Approximable
        report = bv1d.ApproximabilityReport(verdict, atoms, schedule)
    if check_delta and report.verdict is bv1d.Verdict.Approximable:
        again = approximability_probe(f, delta_weight(w, 0.5), schedule, tolerance, limit, check_delta=False)
        report.delta_approximable = again.verdict is bv1d.Verdict.Approximable
    return report




# End of File
