# ======================================================================================================================
#      File:  /tests/conftest.py
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
"""Shared fixtures for the test suite."""

# ======================================================================================================================
# Imports
# ----------------------------------------------------------------------------------------------------------------------
import pytest

from wbv.core import BoxDomain, ShapeSet, Weight, indicator, make_grid




# ======================================================================================================================
# Fixtures
# ----------------------------------------------------------------------------------------------------------------------
@pytest.fixture
def line():
    """(-2, 2) split into 256 cells, so 0 and 1 both fall on cell faces."""
    return make_grid(BoxDomain.interval(-2.0, 2.0), 256)


@pytest.fixture
def square():
    return BoxDomain.cube(-1.0, 1.0, 2)


@pytest.fixture
def step():
    return Weight.step(threshold=0.0, low=1.0, high=2.0)


@pytest.fixture
def unit():
    return Weight.constant(1.0)


@pytest.fixture
def dipped():
    """2 everywhere except 1 at the points 0 and 1."""
    return Weight.with_points(Weight.constant(2.0), {0.0: 1.0, 1.0: 1.0})


@pytest.fixture
def bump(line):
    """Indicator of (0, 1) sampled on the line grid."""
    return indicator(ShapeSet.intervals([(0.0, 1.0)]), line)




# End of File
