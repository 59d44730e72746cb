# ======================================================================================================================
#      File:  /wbv/quadrature.py
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
"""Adaptive quadrature helpers wrapping QUADPACK's Gauss-Kronrod rules."""

# ======================================================================================================================
# Imports
# ----------------------------------------------------------------------------------------------------------------------
import logging
import math
from typing import Callable, Iterable, Tuple

from scipy import integrate as sp_integrate

from wbv.errors import NumericError




# ======================================================================================================================
# Constants
# ----------------------------------------------------------------------------------------------------------------------
RTOL = 1e-8
ATOL = 1e-13
LIMIT = 400

log = logging.getLogger(__name__)




# ======================================================================================================================
# Functions
# ----------------------------------------------------------------------------------------------------------------------
def integrate(function: Callable[[float], float], lower: float, upper: float, points: Iterable[float] = (),
              rtol: float = RTOL, atol: float = ATOL, label: str = 'integrand') -> float:
    """Integrate `function` over [lower, upper], splitting at each of `points` that falls strictly inside.

    Splitting at weight singularities and jumps keeps every sub-integral smooth or endpoint-singular, which is what
    the 21-point Kronrod extension handles well.  Returns +inf when the integrand is infinite on a set QUADPACK
    actually samples.  Raises NumericError when a sub-integral does not converge.
    """
    if upper < lower:
        return -integrate(function, upper, lower, points, rtol, atol, label)
    breaks = sorted({float(point) for point in points if lower < point < upper})
    edges = [lower, *breaks, upper]
    total = 0.0
    for left, right in zip(edges[:-1], edges[1:]):
        if left == right:
            continue
        value, error = _piece(function, left, right, rtol, atol, label)
        total += value
    return total


# ----------------------------------------------------------------------------------------------------------------------
def _piece(function, left: float, right: float, rtol: float, atol: float, label: str) -> Tuple[float, float]:
    result = sp_integrate.quad(function, left, right, epsrel=rtol, epsabs=atol, limit=LIMIT, full_output=1)
    value, error = result[0], result[1]
    if math.isnan(value):
        raise NumericError(f'{label} is undefined somewhere on [{left:g}, {right:g}]')
    if math.isinf(value):
        return value, 0.0
    if len(result) > 3:
        # QUADPACK flagged a problem; accept the value only when the error estimate still meets the tolerance.
        if error > 10.0 * max(atol, rtol * abs(value)):
            raise NumericError(f'quadrature of {label} did not converge on [{left:g}, {right:g}]: '
                               f'{result[3].splitlines()[0]} (estimate {value:.6g} +/- {error:.2g})')
    log.debug('quad %s on [%g, %g] = %.12g (+/- %.2g)', label, left, right, value, error)
    return value, error


# ----------------------------------------------------------------------------------------------------------------------
def integrate_2d(function: Callable[[float, float], float], first: Tuple[float, float], second: Tuple[float, float],
                 rtol: float = 1e-7, label: str = 'integrand') -> float:
    """Integrate function(u, v) over the rectangle first x second."""
    value, error = sp_integrate.dblquad(lambda v, u: function(u, v), first[0], first[1], second[0], second[1],
                                        epsrel=rtol, epsabs=ATOL)
    if math.isnan(value):
        raise NumericError(f'{label} is undefined on the rectangle {first} x {second}')
    return value




# End of File
