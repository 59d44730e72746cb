# ======================================================================================================================
#      File:  /wbv/expressions.py
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
"""Small numpy expressions used by experiment files.

Expressions such as `x**2 + 2`, `(1 + r)**-0.5` or `where(x0 > 0, 2, 1)` are parsed by sympy against a fixed
namespace, rejected if they name anything outside it, and lambdified to numpy.  The coordinate names are:

    x, y, z     first, second and third coordinate
    x0, x1, x2  the same coordinates by index
    r           Euclidean norm of the point
"""

# ======================================================================================================================
# Imports
# ----------------------------------------------------------------------------------------------------------------------
import dataclasses
import re
from tokenize import TokenError
from typing import Any, Callable, Dict, Optional

import numpy as np
import sympy as sp
from sympy.core.function import AppliedUndef
from sympy.parsing.sympy_parser import parse_expr, standard_transformations

from wbv.errors import InvalidArgumentError




# ======================================================================================================================
# Namespace
# ----------------------------------------------------------------------------------------------------------------------
X0, X1, X2, R = sp.symbols('x0 x1 x2 r', real=True)
COORDINATES = (X0, X1, X2)

SYMBOLS: Dict[str, sp.Symbol] = {
    'x': X0, 'y': X1, 'z': X2,
    'x0': X0, 'x1': X1, 'x2': X2,
    'r': R,
}


def _where(condition, then, otherwise) -> sp.Piecewise:
    return sp.Piecewise((then, condition), (otherwise, True))


# Elementwise min/max stay opaque to sympy; lambdify resolves them from NUMPY_FUNCTIONS.
NUMPY_FUNCTIONS: Dict[str, Callable] = {
    'minimum': np.minimum,
    'maximum': np.maximum,
}

FUNCTIONS: Dict[str, Any] = {
    'abs': sp.Abs,
    'sqrt': sp.sqrt,
    'exp': sp.exp,
    'log': sp.log,
    'sin': sp.sin,
    'cos': sp.cos,
    'tan': sp.tan,
    'arctan': sp.atan,
    'tanh': sp.tanh,
    'sign': sp.sign,
    'floor': sp.floor,
    'where': _where,
    **{name: sp.Function(name) for name in NUMPY_FUNCTIONS},
}

CONSTANTS: Dict[str, sp.Expr] = {
    'pi': sp.pi,
    'e': sp.E,
}

# Only what the standard transformations emit for numbers and names.
PARSER_GLOBALS = {
    '__builtins__': {},
    'Integer': sp.Integer,
    'Float': sp.Float,
    'Rational': sp.Rational,
    'Symbol': sp.Symbol,
    'Function': sp.Function,
}

ATTRIBUTE = re.compile(r'__|\.\s*[A-Za-z_]')
# sympy reads these as structural equality, which is a constant.
EQUALITY = re.compile(r'==|!=')




# ======================================================================================================================
# Expression Class
# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass(frozen=True)
class Expression:
    """A parsed expression in the coordinate variables with its numpy evaluator."""
    text: str
    expr: Any = dataclasses.field(compare=False, repr=False, default=None)
    function: Optional[Callable] = dataclasses.field(compare=False, repr=False, default=None)


    @staticmethod
    def parse(text: str) -> 'Expression':
        text = str(text).strip()
        if ATTRIBUTE.search(text):
            raise InvalidArgumentError(f'attribute access is not allowed in expression "{text}"')
        if EQUALITY.search(text):
            raise InvalidArgumentError(f'"==" and "!=" are not supported in expression "{text}"; '
                                       'compare with <, <=, > or >=')
        namespace = {**SYMBOLS, **FUNCTIONS, **CONSTANTS}
        try:
            expr = parse_expr(text, local_dict=namespace, global_dict=dict(PARSER_GLOBALS),
                              transformations=standard_transformations)
        except (SyntaxError, TokenError, TypeError, ValueError, NameError, AttributeError) as error:
            raise InvalidArgumentError(f'cannot parse expression "{text}": {error}') from error
        return Expression.from_sympy(expr, text)


    @staticmethod
    def from_sympy(expr: Any, text: Optional[str] = None) -> 'Expression':
        text = str(expr) if text is None else text
        if not isinstance(expr, sp.Expr):
            raise InvalidArgumentError(f'"{text}" is not a numeric expression')
        unknown = sorted(str(symbol) for symbol in expr.free_symbols - set(SYMBOLS.values()))
        if unknown:
            raise InvalidArgumentError(f'unknown name "{unknown[0]}" in expression "{text}"')
        undefined = sorted({call.func.__name__ for call in expr.atoms(AppliedUndef)} - set(NUMPY_FUNCTIONS))
        if undefined:
            raise InvalidArgumentError(f'"{undefined[0]}" is not a known function in expression "{text}"')
        function = sp.lambdify((X0, X1, X2, R), expr, modules=[NUMPY_FUNCTIONS, 'numpy'])
        return Expression(text, expr, function)


    def __call__(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at `points`, an array shaped (..., n); returns an array shaped (...)."""
        points = np.asarray(points, dtype=float)
        dimension = points.shape[-1]
        coordinates = [points[..., index] if index < dimension else np.zeros(points.shape[:-1]) for index in range(3)]
        radius = np.sqrt(np.sum(points ** 2, axis=-1))
        with np.errstate(divide='ignore', invalid='ignore', over='ignore'):
            value = np.asarray(self.function(*coordinates, radius), dtype=float)
        if value.shape != points.shape[:-1]:
            value = np.broadcast_to(value, points.shape[:-1]).copy()
        return value


    def scalar(self, x: float) -> float:
        """Evaluate a one-dimensional expression at a single point."""
        return float(self(np.array([[x]], dtype=float))[0])


    def derivative(self, axis: int = 0) -> Optional['Expression']:
        """The exact partial derivative along `axis`, or None where sympy leaves it unevaluated."""
        expanded = self.expr.subs(R, sp.sqrt(sum(coordinate ** 2 for coordinate in COORDINATES)))
        slope = sp.diff(expanded, COORDINATES[axis])
        if slope.has(sp.Derivative, sp.DiracDelta, sp.Subs):
            return None
        return Expression.from_sympy(slope, f'd({self.text})/d{COORDINATES[axis]}')




# End of File
