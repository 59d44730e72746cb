# ======================================================================================================================
#      File:  /wbv/errors.py
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
"""Exceptions raised by the laboratory."""

# ======================================================================================================================
# Imports
# ----------------------------------------------------------------------------------------------------------------------
from typing import Any, List, Sequence




# ======================================================================================================================
# Base Class
# ----------------------------------------------------------------------------------------------------------------------
class WbvError(Exception):
    """Base for every error the laboratory raises on purpose."""




# ======================================================================================================================
# Argument Errors
# ----------------------------------------------------------------------------------------------------------------------
class InvalidArgumentError(WbvError, ValueError):
    pass


# ----------------------------------------------------------------------------------------------------------------------
class ConfigError(WbvError, ValueError):
    """An experiment file failed validation.  `fields` lists one message per offending field."""

    def __init__(self, message: str, fields: Sequence[str] = ()):
        self.fields: List[str] = list(fields)
        if self.fields:
            message += ': ' + '; '.join(self.fields)
        super().__init__(message)




# ======================================================================================================================
# Numerical Errors
# ----------------------------------------------------------------------------------------------------------------------
class SamplingError(WbvError):
    def __init__(self, message: str, cell: Sequence[int]):
        self.cell = tuple(int(index) for index in cell)
        super().__init__(f'{message} (cell {self.cell})')


# ----------------------------------------------------------------------------------------------------------------------
class CoverageError(WbvError):
    def __init__(self, message: str, cells: Sequence[Sequence[int]] = ()):
        self.cells = [tuple(int(index) for index in cell) for cell in cells]
        if self.cells:
            shown = ', '.join(str(cell) for cell in self.cells[:8])
            more = f' and {len(self.cells) - 8} more' if len(self.cells) > 8 else ''
            message += f' [uncovered: {shown}{more}]'
        super().__init__(message)


# ----------------------------------------------------------------------------------------------------------------------
class FeasibilityError(WbvError):
    def __init__(self, certificate: float):
        self.certificate = float(certificate)
        super().__init__(f'test field is not feasible: max |phi|/w = {self.certificate:.6g} > 1')


# ----------------------------------------------------------------------------------------------------------------------
class ClassificationError(WbvError):
    def __init__(self, message: str, report: Any = None):
        self.report = report
        super().__init__(message)


# ----------------------------------------------------------------------------------------------------------------------
class ResolutionError(WbvError):
    """The grid is too coarse to meet a tolerance; refine and try again."""

    def __init__(self, message: str, residuals: Any = None):
        self.residuals = residuals
        super().__init__(message)


# ----------------------------------------------------------------------------------------------------------------------
class NumericError(WbvError):
    pass


# ----------------------------------------------------------------------------------------------------------------------
class PreconditionError(WbvError):
    def __init__(self, message: str, gaps: Sequence[float] = ()):
        self.gaps = [float(gap) for gap in gaps]
        super().__init__(message)


# ----------------------------------------------------------------------------------------------------------------------
class InconsistencyError(WbvError):
    pass




# End of File
