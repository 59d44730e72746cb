# ======================================================================================================================
#      File:  /wbv/kernel.py
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
"""The standard mollifier eta_eps and discrete convolution against it."""

# ======================================================================================================================
# Imports
# ----------------------------------------------------------------------------------------------------------------------
import dataclasses
import functools
import math
from typing import Tuple

import numpy as np
from scipy import integrate as sp_integrate
from scipy import ndimage

from wbv import quadrature
from wbv.core import SPHERE_AREA, Grid
from wbv.errors import InvalidArgumentError, ResolutionError




# ======================================================================================================================
# Mollifier
# ----------------------------------------------------------------------------------------------------------------------
@functools.lru_cache(maxsize=None)
def normalization(dimension: int) -> float:
    """c_n such that c_n exp(1 / (|x|^2 - 1)) integrates to 1 over the unit ball of R^n."""
    radial = lambda r: math.exp(1.0 / (r * r - 1.0)) * r ** (dimension - 1) if r < 1.0 else 0.0
    mass = quadrature.integrate(radial, 0.0, 1.0, rtol=1e-13, atol=1e-15, label='mollifier mass')
    return 1.0 / (SPHERE_AREA[dimension] * mass)


# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass(frozen=True)
class Mollifier:
    """eta_eps(x) = eps^-n eta(x / eps), evaluated on offsets shaped (..., n)."""
    epsilon: float
    dimension: int

    def __call__(self, offsets: np.ndarray) -> np.ndarray:
        offsets = np.asarray(offsets, dtype=float)
        squared = np.sum((offsets / self.epsilon) ** 2, axis=-1)
        inside = squared < 1.0
        with np.errstate(divide='ignore', over='ignore', under='ignore'):
            bump = np.exp(1.0 / np.where(inside, squared - 1.0, -1.0))
        return np.where(inside, normalization(self.dimension) * bump / self.epsilon ** self.dimension, 0.0)


    @property
    def peak(self) -> float:
        return normalization(self.dimension) * math.exp(-1.0) / self.epsilon ** self.dimension


    def kernel(self, grid: Grid) -> np.ndarray:
        """The mollifier sampled on grid offsets within its support, rescaled to sum exactly to 1."""
        half = [int(math.ceil(self.epsilon / step)) for step in grid.spacing]
        if self.epsilon <= min(grid.spacing):
            raise ResolutionError(f'epsilon {self.epsilon:g} is below the grid spacing; refine the grid')
        offsets = np.stack(np.meshgrid(*[np.arange(-k, k + 1) * step for k, step in zip(half, grid.spacing)],
                                       indexing='ij'), axis=-1)
        values = self(offsets)
        return values / np.sum(values)


    def cdf(self, t: np.ndarray) -> np.ndarray:
        """Mass of the one-dimensional mollifier on (-inf, t]; exactly 0 below -eps and 1 above eps."""
        table, cumulative = _cdf_table()
        return np.interp(np.asarray(t, dtype=float) / self.epsilon, table, cumulative, left=0.0, right=1.0)


# ----------------------------------------------------------------------------------------------------------------------
@functools.lru_cache(maxsize=1)
def _cdf_table(points: int = 8193) -> Tuple[np.ndarray, np.ndarray]:
    ts = np.linspace(-1.0, 1.0, points)
    density = Mollifier(1.0, 1)(ts[:, np.newaxis])
    cumulative = sp_integrate.cumulative_trapezoid(density, ts, initial=0.0)
    return ts, cumulative / cumulative[-1]


# ----------------------------------------------------------------------------------------------------------------------
def standard_mollifier(epsilon: float, dimension: int) -> Mollifier:
    if not epsilon > 0:
        raise InvalidArgumentError(f'epsilon must be positive, got {epsilon}')
    if dimension not in SPHERE_AREA:
        raise InvalidArgumentError(f'dimension must be 1, 2 or 3, not {dimension}')
    return Mollifier(float(epsilon), int(dimension))


# ----------------------------------------------------------------------------------------------------------------------
def mollified_indicator(a: float, b: float, epsilon: float, xs: np.ndarray) -> np.ndarray:
    """(eta_eps * indicator(a, b))(x) = F(x - a) - F(x - b) with F the mollifier's distribution function."""
    eta = standard_mollifier(epsilon, 1)
    xs = np.asarray(xs, dtype=float)
    return eta.cdf(xs - a) - eta.cdf(xs - b)


# ----------------------------------------------------------------------------------------------------------------------
def convolve(values: np.ndarray, grid: Grid, epsilon: float) -> np.ndarray:
    """Discrete mollification: a direct sum against the renormalized kernel, zero outside the grid."""
    kernel = standard_mollifier(epsilon, grid.dimension).kernel(grid)
    return ndimage.convolve(np.asarray(values, dtype=float), kernel, mode='constant', cval=0.0)




# End of File
