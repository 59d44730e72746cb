# ======================================================================================================================
#      File:  /wbv/config.py
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
"""A proper in-memory model for an experiment that can be read from YAML or JSON files.

Follows the same schema as the .json schema located in the schema folder.  The `build_*` helpers turn the textual
specs of weights, functions, shapes and measures into the objects the numerical modules work with.
"""

# ======================================================================================================================
# Imports
# ----------------------------------------------------------------------------------------------------------------------
import ast
import dataclasses
from enum import Enum
import json
import math
import os.path
from typing import Any, Dict, List, Optional, Union

import yaml

from wbv.bv1d import PiecewiseFunction1D
from wbv.core import BoxDomain, Grid, GridFunction, Measure, ShapeSet, Weight, indicator, make_grid, sample
from wbv.errors import ConfigError, WbvError
from wbv.expressions import Expression
from wbv.weights import BallFamily, coifman_rochberg




# ======================================================================================================================
# Enumerations
# ----------------------------------------------------------------------------------------------------------------------
class Kind(Enum):
    A1 = 'a1'
    MaximalFunction = 'maxfn'
    MF = 'mf'
    TV = 'tv'
    Perimeter = 'perimeter'
    BV1D = 'bv1d'
    Mollify = 'mollify'
    Coarea = 'coarea'
    Embed = 'embed'
    GNS = 'gns'
    Isoperimetric = 'isoperimetric'
    LSC = 'lsc'
    Duality = 'duality'
    Suite = 'suite'


# ----------------------------------------------------------------------------------------------------------------------
class Provenance(Enum):
    Published = 'published'
    Trivial = 'trivial'
    Derived = 'derived'


# ----------------------------------------------------------------------------------------------------------------------
class Comparison(Enum):
    Equal = 'equal'
    AtMost = 'at-most'
    AtLeast = 'at-least'




# ======================================================================================================================
# Expectation Dataclass
# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass
class Expectation:
    quantity: str
    value: float
    provenance: Provenance
    tolerance: float = 1e-9
    relative: bool = False
    comparison: Comparison = Comparison.Equal


    @staticmethod
    def from_dict(data: Dict) -> 'Expectation':
        return Expectation(
            quantity=data['quantity'],
            value=_number(data['value']),
            provenance=Provenance(data['provenance']),
            tolerance=float(data.get('tolerance', 1e-9)),
            relative=bool(data.get('relative', False)),
            comparison=Comparison(data.get('comparison', 'equal')),
        )


    def to_dict(self) -> Dict:
        return {
            'quantity': self.quantity,
            'value': 'inf' if math.isinf(self.value) else self.value,
            'provenance': self.provenance.value,
            'tolerance': self.tolerance,
            'relative': self.relative,
            'comparison': self.comparison.value,
        }


    def check(self, actual: Optional[float]) -> bool:
        """Compare a computed value against this expectation."""
        if actual is None or math.isnan(actual):
            return False
        if math.isinf(self.value) or math.isinf(actual):
            if self.comparison is Comparison.AtMost:
                return actual <= self.value
            if self.comparison is Comparison.AtLeast:
                return actual >= self.value
            return actual == self.value
        slack = self.tolerance * (abs(self.value) if self.relative else 1.0)
        if self.comparison is Comparison.AtMost:
            return actual <= self.value + slack
        if self.comparison is Comparison.AtLeast:
            return actual >= self.value - slack
        return abs(actual - self.value) <= slack


# ----------------------------------------------------------------------------------------------------------------------
def _number(value: Any) -> float:
    if isinstance(value, str) and value.strip().lower() in ('inf', '+inf', 'infinity'):
        return math.inf
    return float(value)




# ======================================================================================================================
# Experiment Dataclass
# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass
class ExperimentConfig:
    name: str
    kind: Kind
    description: str = ''
    anchor: str = ''
    domain: Optional[Dict] = None
    resolution: Union[int, List[int], None] = None
    weight: str = 'const(1)'
    function: Optional[Dict] = None
    shape: Optional[Dict] = None
    measure: Optional[Dict] = None
    measures: Dict[str, Dict] = dataclasses.field(default_factory=dict)
    params: Dict[str, Any] = dataclasses.field(default_factory=dict)
    members: List[Dict] = dataclasses.field(default_factory=list)
    fixtures: List[str] = dataclasses.field(default_factory=list)
    expected: List[Expectation] = dataclasses.field(default_factory=list)
    output: Optional[str] = None


    @staticmethod
    def from_dict(data: Dict) -> 'ExperimentConfig':
        """Construct an experiment from the provided python dict object, collecting every field problem."""
        if not isinstance(data, dict):
            raise ConfigError('an experiment file must hold a mapping')
        problems = []
        for required in ('name', 'kind'):
            if required not in data:
                problems.append(f'"{required}" is required')
        known = {field.name for field in dataclasses.fields(ExperimentConfig)}
        problems.extend(f'unknown field "{key}"' for key in data if key not in known)
        kind = None
        try:
            kind = Kind(data.get('kind'))
        except ValueError:
            if 'kind' in data:
                problems.append(f'kind "{data["kind"]}" is not one of {", ".join(k.value for k in Kind)}')
        expected = []
        for index, entry in enumerate(data.get('expected', [])):
            try:
                expected.append(Expectation.from_dict(entry))
            except (KeyError, TypeError, ValueError) as error:
                problems.append(f'expected[{index}]: {error}')
        if problems:
            raise ConfigError(f'experiment "{data.get("name", "?")}" is invalid', problems)
        return ExperimentConfig(
            name=str(data['name']),
            kind=kind,
            description=data.get('description', ''),
            anchor=data.get('anchor', ''),
            domain=data.get('domain'),
            resolution=data.get('resolution'),
            weight=data.get('weight', 'const(1)'),
            function=data.get('function'),
            shape=data.get('shape'),
            measure=data.get('measure'),
            measures=data.get('measures', {}),
            params=data.get('params', {}),
            members=data.get('members', []),
            fixtures=data.get('fixtures', []),
            expected=expected,
            output=data.get('output'),
        )


    def to_dict(self) -> Dict:
        data = {
            'name': self.name,
            'kind': self.kind.value,
            'weight': self.weight,
        }
        for attribute in ('description', 'anchor', 'domain', 'resolution', 'function', 'shape', 'measure',
                          'measures', 'params', 'members', 'fixtures', 'output'):
            value = getattr(self, attribute)
            if value:
                data[attribute] = value
        if self.expected:
            data['expected'] = [expectation.to_dict() for expectation in self.expected]
        return data


    @property
    def dimension(self) -> int:
        return self.box().dimension if self.domain else 1


    def box(self) -> BoxDomain:
        if not self.domain:
            raise ConfigError(f'experiment "{self.name}" needs a domain')
        return build_domain(self.domain)


    def grid(self, resolution: Union[int, List[int], None] = None) -> Grid:
        resolution = resolution if resolution is not None else self.resolution
        if resolution is None:
            raise ConfigError(f'experiment "{self.name}" needs a resolution')
        return make_grid(self.box(), resolution)


    def param(self, key: str, default: Any = None) -> Any:
        return self.params.get(key, default)




# ======================================================================================================================
# Builders
# ----------------------------------------------------------------------------------------------------------------------
def build_domain(data: Dict) -> BoxDomain:
    try:
        return BoxDomain.from_dict(data)
    except (KeyError, TypeError) as error:
        raise ConfigError('a domain needs "lower" and "upper" corners', [str(error)]) from error


# ----------------------------------------------------------------------------------------------------------------------
def _literal(node: ast.AST, text: str) -> Any:
    if isinstance(node, ast.Name):
        return node.id
    try:
        return ast.literal_eval(node)
    except ValueError as error:
        raise ConfigError(f'weight "{text}" holds an argument that is not a literal') from error


# ----------------------------------------------------------------------------------------------------------------------
def parse_weight(text: str, dimension: int = 1, measures: Optional[Dict[str, Measure]] = None,
                 grid: Optional[Grid] = None) -> Weight:
    """Build a weight from the mini-language, e.g. `step(threshold=0, low=1, high=2)` or `power(alpha=-0.5)`.

    Factors joined by `*` become a product weight.  `cr(measure=<name>, delta=...)` needs the named measure and a
    grid to tabulate the maximal function on.
    Any call also takes `points={x: value}` to override the weight at finitely many points, e.g.
    `const(2, points={0: 1, 1: 1})`.
    """
    try:
        tree = ast.parse(str(text).strip(), mode='eval')
    except SyntaxError as error:
        raise ConfigError(f'weight "{text}" does not parse', [error.msg]) from error
    return _weight_node(tree.body, str(text), dimension, measures or {}, grid)


# ----------------------------------------------------------------------------------------------------------------------
def _weight_node(node: ast.AST, text: str, dimension: int, measures: Dict[str, Measure],
                 grid: Optional[Grid]) -> Weight:
    if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Mult):
        left = _weight_node(node.left, text, dimension, measures, grid)
        right = _weight_node(node.right, text, dimension, measures, grid)
        return Weight.product(left, right)
    if not (isinstance(node, ast.Call) and isinstance(node.func, ast.Name)):
        raise ConfigError(f'weight "{text}" must be a call such as const(1) or power(alpha=-0.5)')
    name = node.func.id
    args = [_literal(arg, text) for arg in node.args]
    kwargs = {keyword.arg: _literal(keyword.value, text) for keyword in node.keywords}
    overrides = kwargs.pop('points', None)
    weight = _named_weight(name, text, args, kwargs, measures, grid, dimension)
    if overrides is None:
        return weight
    if not isinstance(overrides, dict):
        raise ConfigError(f'weight "{text}" needs points as a mapping such as {{0: 1, 1: 1}}')
    try:
        return Weight.with_points(weight, overrides)
    except WbvError as error:
        raise ConfigError(f'weight "{text}" has bad point values', [str(error)]) from error


# ----------------------------------------------------------------------------------------------------------------------
def _named_weight(name: str, text: str, args: List, kwargs: Dict, measures: Dict[str, Measure],
                  grid: Optional[Grid], dimension: int) -> Weight:
    try:
        if name == 'const':
            return Weight.constant(*args, **kwargs)
        if name == 'power':
            return Weight.power(*args, dimension=dimension, **kwargs)
        if name == 'step':
            return Weight.step(*args, **kwargs)
        if name == 'radial':
            return Weight.radial(*args, **_renamed(kwargs))
        if name == 'expr':
            return Weight.expression(*args, **_renamed(kwargs))
        if name == 'cr':
            return _coifman_rochberg(text, measures, grid, *args, **kwargs)
    except TypeError as error:
        raise ConfigError(f'weight "{text}" has bad arguments', [str(error)]) from error
    except WbvError as error:
        if isinstance(error, ConfigError):
            raise
        raise ConfigError(f'weight "{text}" is invalid', [str(error)]) from error
    raise ConfigError(f'unknown weight "{name}" in "{text}"')


# ----------------------------------------------------------------------------------------------------------------------
def _renamed(kwargs: Dict) -> Dict:
    if 'a1' in kwargs:
        kwargs = dict(kwargs)
        kwargs['a1_constant'] = kwargs.pop('a1')
    return kwargs


# ----------------------------------------------------------------------------------------------------------------------
def _coifman_rochberg(text: str, measures: Dict[str, Measure], grid: Optional[Grid], measure: str,
                      delta: float) -> Weight:
    if grid is None:
        raise ConfigError(f'weight "{text}" needs a grid to tabulate on')
    source = measures.get(measure) or _builtin_measure(measure, grid.dimension)
    if source is None:
        raise ConfigError(f'weight "{text}" names an unknown measure "{measure}"')
    return coifman_rochberg(source, delta, grid, BallFamily.dyadic(grid, per_octave=4))


# ----------------------------------------------------------------------------------------------------------------------
def _builtin_measure(name: str, dimension: int) -> Optional[Measure]:
    if name == 'lebesgue':
        return Measure.lebesgue(dimension)
    if name == 'dirac':
        return Measure.dirac((0.0,) * dimension)
    return None


# ----------------------------------------------------------------------------------------------------------------------
def build_measure(data: Union[str, Dict], dimension: int = 1) -> Measure:
    """A measure from `lebesgue`, `dirac`, or a mapping of type atoms / density / train."""
    if isinstance(data, str):
        measure = _builtin_measure(data, dimension)
        if measure is None:
            raise ConfigError(f'unknown measure "{data}"')
        return measure
    kind = data.get('type')
    if kind == 'atoms':
        atoms = tuple((tuple(atom['location']), float(atom['mass'])) for atom in data['atoms'])
        return Measure(dimension, atoms=atoms, density=data.get('density'), label=data.get('label', 'atoms'))
    if kind == 'density':
        return Measure(dimension, density=float(data.get('value', 1.0)), label=data.get('label', 'density'))
    if kind == 'train':
        return Measure.geometric_train(float(data.get('base', 2.0)), int(data.get('first', 1)))
    raise ConfigError(f'unknown measure type "{kind}"', ['use atoms, density or train'])


# ----------------------------------------------------------------------------------------------------------------------
def build_shape(data: Dict, domain: Optional[BoxDomain] = None) -> ShapeSet:
    kind = data.get('type')
    if kind == 'intervals':
        return ShapeSet.intervals([tuple(interval) for interval in data['intervals']])
    if kind == 'boxes':
        return ShapeSet.box_union([(tuple(lower), tuple(upper)) for lower, upper in data['boxes']])
    if kind == 'slab':
        if domain is None:
            raise ConfigError('a slab is truncated to the domain, which is missing')
        return ShapeSet.slab(domain, int(data.get('axis', 1)), float(data['lower']), float(data['upper']))
    if kind == 'circle':
        return ShapeSet.disk(data.get('center', (0.0, 0.0)), float(data['radius']))
    if kind == 'sphere':
        return ShapeSet.ball(data.get('center', (0.0, 0.0, 0.0)), float(data['radius']))
    if kind == 'implicit':
        return ShapeSet.level_set(data['phi'], int(data.get('dimension', domain.dimension if domain else 2)))
    if kind == 'empty':
        return ShapeSet.empty(int(data.get('dimension', domain.dimension if domain else 1)))
    raise ConfigError(f'unknown shape type "{kind}"',
                      ['use intervals, boxes, slab, circle, sphere, implicit or empty'])


# ----------------------------------------------------------------------------------------------------------------------
def build_piecewise(data: Dict) -> PiecewiseFunction1D:
    kind = data.get('type')
    if kind == 'piecewise':
        return PiecewiseFunction1D.from_expressions(data['breakpoints'], [str(piece) for piece in data['pieces']],
                                                    data.get('jumps', ()))
    if kind == 'indicator':
        intervals = data['shape']['intervals']
        if len(intervals) != 1:
            raise ConfigError('an exact indicator takes a single interval')
        return PiecewiseFunction1D.indicator(*intervals[0])
    if kind == 'tent':
        return PiecewiseFunction1D.tent(float(data.get('center', 0.0)), float(data.get('half_width', 1.0)),
                                        float(data.get('height', 1.0)))
    if kind == 'piecewise-linear':
        return PiecewiseFunction1D.piecewise_linear(data['knots'], data['left'], data['right'])
    raise ConfigError(f'function type "{kind}" has no exact one-dimensional form')


# ----------------------------------------------------------------------------------------------------------------------
def build_function(data: Dict, grid: Grid) -> GridFunction:
    """Sample a function spec on the grid."""
    kind = data.get('type')
    if kind == 'indicator':
        return indicator(build_shape(data['shape'], grid.domain), grid)
    if kind == 'expression':
        return sample(Expression.parse(data['text']), grid)
    if kind in ('piecewise', 'tent', 'piecewise-linear'):
        return sample(build_piecewise(data), grid)
    raise ConfigError(f'unknown function type "{kind}"',
                      ['use indicator, expression, piecewise, piecewise-linear or tent'])




# ======================================================================================================================
# Helper Functions
# ----------------------------------------------------------------------------------------------------------------------
def load_config(filename: str) -> ExperimentConfig:
    """Load an experiment (either in .json or .yaml format) from the provided filename."""
    with open(filename, 'r') as handle:
        if filename.endswith('.json'):
            data = json.load(handle)
        elif filename.endswith(('.yaml', '.yml')):
            data = yaml.safe_load(handle)
        else:
            raise ConfigError(f'Unsupported experiment format: {os.path.splitext(filename)[1]}')
    return ExperimentConfig.from_dict(data)




# End of File
