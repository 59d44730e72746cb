# ======================================================================================================================
#      File:  /wbv/runner.py
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
"""Run an experiment: dispatch on its kind, compare the computed values with the expectations, and emit the report.

Every handler returns an `Outcome`: named scalar values (the quantities expectations refer to), a details mapping
with the module reports, and CSV traces.  A numerical failure is embedded in the report instead of propagating;
an invalid config propagates as ConfigError.
"""

# ======================================================================================================================
# Imports
# ----------------------------------------------------------------------------------------------------------------------
from concurrent.futures import ThreadPoolExecutor
import csv
import dataclasses
import hashlib
import json
import logging
import math
import os
import time
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from wbv import analysis, bv1d, mollify, variation, weights
from wbv.config import (ConfigError, Expectation, ExperimentConfig, Kind, build_domain, build_function,
                        build_measure, build_piecewise, build_shape, parse_weight)
from wbv.core import BoxDomain, Grid, GridFunction, ShapeSet, Weight, make_grid, sample
from wbv.errors import WbvError
from wbv.expressions import Expression
from wbv.fixtures import list_fixtures, load_fixture




# ======================================================================================================================
# Constants
# ----------------------------------------------------------------------------------------------------------------------
log = logging.getLogger(__name__)

THREADS_VARIABLE = 'WBV_THREADS'
PIECEWISE_TYPES = ('piecewise', 'piecewise-linear', 'tent')




# ======================================================================================================================
# Reports
# ----------------------------------------------------------------------------------------------------------------------
def clean(value: Any) -> Any:
    """Make a value JSON friendly: numpy scalars become floats and non-finite floats become strings."""
    if isinstance(value, dict):
        return {str(key): clean(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [clean(item) for item in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return 'nan'
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return value
    return value


# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass
class Trace:
    """Rows of a CSV trace under a header."""
    header: List[str]
    rows: List[Sequence[float]]

    def write_csv(self, path: str) -> None:
        with open(path, 'w', newline='') as handle:
            writer = csv.writer(handle)
            writer.writerow(self.header)
            writer.writerows(self.rows)


# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass
class Outcome:
    values: Dict[str, Optional[float]] = dataclasses.field(default_factory=dict)
    details: Dict[str, Any] = dataclasses.field(default_factory=dict)
    traces: Dict[str, Any] = dataclasses.field(default_factory=dict)
    children: List['RunReport'] = dataclasses.field(default_factory=list)


# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass
class CheckRecord:
    quantity: str
    value: Optional[float]
    expected: Expectation
    passed: bool

    def to_dict(self) -> Dict:
        expected = self.expected.to_dict()
        return {
            'quantity': self.quantity,
            'value': clean(self.value),
            'expected': expected['value'],
            'tolerance': expected['tolerance'],
            'relative': expected['relative'],
            'comparison': expected['comparison'],
            'provenance': expected['provenance'],
            'passed': self.passed,
        }


# ----------------------------------------------------------------------------------------------------------------------
@dataclasses.dataclass
class RunReport:
    name: str
    kind: Kind
    digest: str
    values: Dict[str, Optional[float]] = dataclasses.field(default_factory=dict)
    records: List[CheckRecord] = dataclasses.field(default_factory=list)
    details: Dict[str, Any] = dataclasses.field(default_factory=dict)
    error: Optional[str] = None
    children: List['RunReport'] = dataclasses.field(default_factory=list)
    traces: Dict[str, Any] = dataclasses.field(default_factory=dict, repr=False)

    @property
    def passed(self) -> bool:
        return (self.error is None and all(record.passed for record in self.records)
                and all(child.passed for child in self.children))

    @property
    def summary(self) -> Dict[str, int]:
        checks = self.records + [record for child in self.children for record in child.records]
        return {
            'experiments': 1 + len(self.children),
            'checks': len(checks),
            'passed': sum(record.passed for record in checks),
            'failed': sum(not record.passed for record in checks),
            'errors': sum(report.error is not None for report in [self, *self.children]),
        }

    def to_dict(self) -> Dict:
        data = {
            'name': self.name,
            'kind': self.kind.value,
            'digest': self.digest,
            'values': clean(self.values),
            'records': [record.to_dict() for record in self.records],
            'details': clean(self.details),
            'error': self.error,
            'passed': self.passed,
        }
        if self.children:
            data['children'] = [child.to_dict() for child in self.children]
            data['summary'] = self.summary
        return data




# ======================================================================================================================
# Helpers
# ----------------------------------------------------------------------------------------------------------------------
def digest(config: ExperimentConfig) -> str:
    """sha256 over the canonical JSON form of the config."""
    text = json.dumps(clean(config.to_dict()), sort_keys=True)
    return hashlib.sha256(text.encode('utf-8')).hexdigest()


# ----------------------------------------------------------------------------------------------------------------------
def _weight(config: ExperimentConfig, grid: Optional[Grid] = None, text: Optional[str] = None) -> Weight:
    dimension = grid.dimension if grid is not None else config.dimension
    measures = {name: build_measure(spec, dimension) for name, spec in config.measures.items()}
    return parse_weight(text or config.weight, dimension, measures, grid)


# ----------------------------------------------------------------------------------------------------------------------
def _require(config: ExperimentConfig, *fields: str) -> None:
    missing = [f'"{field}" is required for kind {config.kind.value}' for field in fields if not getattr(config, field)]
    if missing:
        raise ConfigError(f'experiment "{config.name}" is incomplete', missing)


# ----------------------------------------------------------------------------------------------------------------------
def _callable(spec: Dict, domain: Optional[BoxDomain] = None) -> Callable[[np.ndarray], np.ndarray]:
    """A function spec as a callable on points shaped (..., n)."""
    kind = spec.get('type')
    if kind == 'expression':
        return Expression.parse(spec['text'])
    if kind == 'indicator':
        shape = build_shape(spec['shape'], domain)
        return lambda points: shape.contains(points).astype(float)
    return build_piecewise(spec)


# ----------------------------------------------------------------------------------------------------------------------
def _balls(config: ExperimentConfig, grid: Grid) -> weights.BallFamily:
    family = config.param('family', 'dyadic')
    uncentered = bool(config.param('uncentered', True))
    if family == 'every':
        centers = config.param('centers')
        return weights.BallFamily.every_radius(grid, uncentered, [tuple(c) for c in centers] if centers else None)
    if family == 'dyadic':
        return weights.BallFamily.dyadic(grid, int(config.param('per_octave', 1)), uncentered,
                                         int(config.param('stride', 1)))
    raise ConfigError(f'unknown ball family "{family}"', ['use dyadic or every'])


# ----------------------------------------------------------------------------------------------------------------------
def _flag(value: Optional[bool]) -> Optional[float]:
    return None if value is None else float(bool(value))




# ======================================================================================================================
# Handlers
# ----------------------------------------------------------------------------------------------------------------------
HANDLERS: Dict[Kind, Callable[[ExperimentConfig, Optional[int]], Outcome]] = {}


def handles(kind: Kind):
    def register(function):
        HANDLERS[kind] = function
        return function
    return register


# ----------------------------------------------------------------------------------------------------------------------
@handles(Kind.A1)
def _run_a1(config: ExperimentConfig, threads: Optional[int]) -> Outcome:
    grid = config.grid()
    w = _weight(config, grid)
    balls = _balls(config, grid)
    estimate = weights.estimate_a1_constant(w, grid, balls)
    pointwise = weights.check_pointwise_a1(w, grid, balls, constant=config.param('constant'))
    outcome = Outcome({'a1_constant': estimate, 'known_constant': w.a1_constant,
                       'pointwise_max_ratio': pointwise.max_ratio,
                       'pointwise_violations': float(pointwise.violations)},
                      {'weight': w.to_spec(), 'pointwise': pointwise.to_dict()})
    delta = config.param('delta')
    if delta is not None:
        reduced = weights.estimate_a1_constant(weights.delta_weight(w, delta), grid, balls)
        outcome.values['delta_a1_constant'] = reduced
        outcome.values['delta_excess'] = reduced - estimate ** delta
    epsilon = config.param('mollifier_epsilon')
    if epsilon is not None:
        coarse = make_grid(grid.domain, config.param('bound_resolution', 32))
        bound = mollify.mollifier_weight_bound(w, epsilon, coarse, config.param('constant'))
        outcome.values['mollifier_max_ratio'] = bound.max_ratio
        outcome.values['mollifier_violations'] = float(bound.violations)
        outcome.details['mollifier'] = bound.to_dict()
    return outcome


# ----------------------------------------------------------------------------------------------------------------------
@handles(Kind.MaximalFunction)
def _run_maximal(config: ExperimentConfig, threads: Optional[int]) -> Outcome:
    grid = config.grid()
    source = build_measure(config.measure, grid.dimension) if config.measure else _weight(config, grid)
    maximal = weights.maximal_function(source, grid, _balls(config, grid))
    values = {'max': float(np.max(maximal.values)), 'min': float(np.min(maximal.values))}
    for index, probe in enumerate(config.param('probes', [])):
        values[f'maximal_{index}'] = float(maximal.values[tuple(grid.cell_of(np.array(probe, dtype=float)))])
    traces = {}
    if grid.dimension == 1:
        traces['profile'] = Trace(['x', 'maximal'], list(zip(grid.axes()[0].tolist(), maximal.values.tolist())))
    return Outcome(values, {}, traces)


# ----------------------------------------------------------------------------------------------------------------------
@handles(Kind.MF)
def _run_mf(config: ExperimentConfig, threads: Optional[int]) -> Outcome:
    _require(config, 'measure')
    dimension = config.dimension
    measure = build_measure(config.measure, dimension)
    probes = config.param('probes')
    if probes is None:
        probes = weights.default_probes(config.grid(config.resolution or 2))
    report = weights.classify_mf(measure, probes, config.param('r_min'), config.param('r_max'))
    values = {'member': _flag(report.member), 'agreement': _flag(report.agreement), 'k_estimate': report.k_estimate}
    for index, value in enumerate(report.maximal_values):
        values[f'maximal_{index}'] = value
    return Outcome(values, {'measure': measure.to_spec(), 'report': report.to_dict()})


# ----------------------------------------------------------------------------------------------------------------------
@handles(Kind.TV)
def _run_tv(config: ExperimentConfig, threads: Optional[int]) -> Outcome:
    _require(config, 'function')
    resolutions = config.param('resolutions')
    if not resolutions:
        grid = config.grid()
        report = variation.weighted_tv(build_function(config.function, grid), _weight(config, grid))
        return Outcome({'tv': report.value}, {'report': report.to_dict()})

    box = config.box()
    w = _weight(config)
    function = _callable(config.function, box)
    report = variation.refinement_study(function, w, box, resolutions)
    values = {'tv': report.value}
    if config.function.get('type') == 'expression':
        reference = variation.gradient_quadrature(function, w, box, int(config.param('reference_resolution', 2048)))
        orders = variation.empirical_orders(report.history, reference)
        values.update({'reference': reference, 'relative_error': abs(report.value - reference) / abs(reference),
                       'min_order': min(orders) if orders else None})
    trace = Trace(['h', 'tv'], [list(entry) for entry in report.history])
    return Outcome(values, {'report': report.to_dict()}, {'refinement': trace})


# ----------------------------------------------------------------------------------------------------------------------
@handles(Kind.Perimeter)
def _run_perimeter(config: ExperimentConfig, threads: Optional[int]) -> Outcome:
    _require(config, 'shape')
    box = config.box()
    w = _weight(config)
    unit = Weight.constant(1.0)
    lengths = config.param('lengths')
    if not lengths:
        shape = build_shape(config.shape, box)
        if box.dimension == 1:
            weighted, unweighted = bv1d.perimeter_1d(shape, w, box), bv1d.perimeter_1d(shape, unit, box)
        else:
            weighted = variation.weighted_perimeter(shape, w, box).value
            unweighted = variation.weighted_perimeter(shape, unit, box).value
        return Outcome({'perimeter': weighted, 'unweighted': unweighted})

    # the domain is stretched along the first axis to (-L, L) for every L
    rows = []
    for length in lengths:
        domain = BoxDomain((-float(length), *box.lower[1:]), (float(length), *box.upper[1:]))
        shape = build_shape(config.shape, domain)
        rows.append((float(length), variation.weighted_perimeter(shape, w, domain).value,
                     variation.weighted_perimeter(shape, unit, domain).value))
        log.info('perimeter at L = %g: weighted %.10g, unweighted %.10g', *rows[-1])
    changes = [abs(b[1] - a[1]) / a[1] for a, b in zip(rows[:-1], rows[1:])]
    growth = [b[2] / a[2] for a, b in zip(rows[:-1], rows[1:])]
    values = {'perimeter': rows[-1][1], 'unweighted': rows[-1][2],
              'doubling_change': changes[-1] if changes else None, 'unweighted_growth': min(growth) if growth else None}
    return Outcome(values, {}, {'lengths': Trace(['L', 'weighted', 'unweighted'], rows)})


# ----------------------------------------------------------------------------------------------------------------------
@handles(Kind.BV1D)
def _run_bv1d(config: ExperimentConfig, threads: Optional[int]) -> Outcome:
    _require(config, 'function')
    f = build_piecewise(config.function)
    w = _weight(config)
    interval = config.box() if config.domain else None
    values = {'variation': bv1d.variation_1d(f, w, interval)}
    details = {'weight': w.to_spec()}
    if config.shape:
        values['perimeter'] = bv1d.perimeter_1d(build_shape(config.shape), w, interval)
    if config.param('classical'):
        values['classical'] = bv1d.classical_variation(f, interval)
    for index, (a, b, epsilon) in enumerate(config.param('mollified', [])):
        values[f'mollified_{index}'] = bv1d.mollified_indicator_tv(a, b, w, epsilon)
    if config.param('probe'):
        report = bv1d.approximability_probe_1d(f, w)
        values['approximable'] = _flag(report.verdict is bv1d.Verdict.Approximable)
        for index, atom in enumerate(report.atoms):
            values[f'atom_limit_{index}'] = atom.limit
        details['approximability'] = report.to_dict()
    return Outcome(values, details)


# ----------------------------------------------------------------------------------------------------------------------
@handles(Kind.Mollify)
def _run_mollify(config: ExperimentConfig, threads: Optional[int]) -> Outcome:
    _require(config, 'function')
    grid = config.grid()
    f = build_function(config.function, grid)
    w = _weight(config, grid)
    depth = int(config.param('depth', 3))
    schedule = config.param('epsilons', [0.08, 0.04, 0.02])
    trace = mollify.approximation_trace(f, w, schedule, depth)
    values = {'ratio': trace.limit_ratio, 'tv_original': variation.weighted_tv(f, w).value,
              'l1_gap': trace.rows[-1][3], 'a1_constant': w.a1_constant}
    details = {'trace': trace.to_dict()}
    if config.param('probe'):
        report = mollify.approximability_probe(f, w)
        values['approximable'] = _flag(report.verdict is bv1d.Verdict.Approximable)
        values['delta_approximable'] = _flag(report.delta_approximable)
        values['atom_limit_max'] = max((atom.limit for atom in report.atoms), default=0.0)
        details['approximability'] = report.to_dict()
    bound_epsilon = config.param('bound_epsilon')
    if bound_epsilon is not None:
        coarse = make_grid(grid.domain, config.param('bound_resolution', 32))
        bound = mollify.mollifier_weight_bound(w, bound_epsilon, coarse)
        values['mollifier_max_ratio'] = bound.max_ratio
        details['mollifier'] = bound.to_dict()
    return Outcome(values, details, {'approximation': trace})


# ----------------------------------------------------------------------------------------------------------------------
@handles(Kind.Coarea)
def _run_coarea(config: ExperimentConfig, threads: Optional[int]) -> Outcome:
    _require(config, 'function')
    w = _weight(config)
    if config.function.get('type') in PIECEWISE_TYPES and config.dimension == 1 and config.resolution is None:
        f = build_piecewise(config.function)
        domain = config.box() if config.domain else None
    else:
        grid = config.grid()
        f, domain = build_function(config.function, grid), None
    counts = config.param('levels', [200])
    reports = [analysis.coarea_check(f, w, int(count), domain) for count in counts]
    values = {'gap': reports[0].gap, 'integral': reports[0].integral, 'direct': reports[0].direct}
    for count, report in zip(counts, reports):
        values[f'gap_{count}'] = report.gap
    return Outcome(values, {'levels': [report.to_dict() for report in reports]}, {'levels': reports[0]})


# ----------------------------------------------------------------------------------------------------------------------
@handles(Kind.Embed)
def _run_embed(config: ExperimentConfig, threads: Optional[int]) -> Outcome:
    box = config.box()
    w = _weight(config)
    resolution = int(config.resolution or 256)
    if config.shape:
        source = build_shape(config.shape, box)
    else:
        _require(config, 'function')
        source = build_function(config.function, make_grid(box, resolution))
    report = analysis.isometry_check(source, w, box, resolution, int(config.param('y_resolution', 256)),
                                     config.param('truncation'))
    values = {key: report.to_dict()[key] for key in ('weighted', 'lifted', 'gap', 'weighted_l1', 'lifted_l1',
                                                     'l1_gap')}
    return Outcome(values, {'report': report.to_dict()})


# ----------------------------------------------------------------------------------------------------------------------
def _member(config: ExperimentConfig, spec: Dict, shrink: float = 1.0) -> Tuple[Union[GridFunction, ShapeSet], Weight]:
    """A suite member (function or set, weight), optionally shrunk toward the origin."""
    box = build_domain(spec['domain']) if 'domain' in spec else config.box()
    weight_text = spec.get('weight', config.weight)
    if 'shape' in spec:
        shape = build_shape(spec['shape'], box)
        return (shape.scaled(shrink) if shrink != 1.0 else shape), _weight(config, None, weight_text)
    grid = make_grid(box, spec.get('resolution', config.resolution or 128))
    function = _callable(spec['function'], box)
    if shrink != 1.0:
        f = sample(lambda points: function(np.asarray(points) / shrink), grid)
    else:
        f = build_function(spec['function'], grid)
    return f, _weight(config, grid, weight_text)


# ----------------------------------------------------------------------------------------------------------------------
def _inequality(member: Union[GridFunction, ShapeSet], w: Weight, c1: float, approximable: bool,
                label: str) -> analysis.GnsReport:
    if isinstance(member, ShapeSet):
        return analysis.isoperimetric_check(member, w, c1, approximable, label=label)
    return analysis.gns_check(member, w, c1, approximable, label=label)


# ----------------------------------------------------------------------------------------------------------------------
@handles(Kind.GNS)
def _run_gns(config: ExperimentConfig, threads: Optional[int]) -> Outcome:
    _require(config, 'members')
    approximable = bool(config.param('approximable', False))
    suite = [_member(config, spec) for spec in config.members]
    c1 = config.param('c1')
    c1 = float(c1) if c1 is not None else analysis.empirical_c1(suite, approximable)

    labels = [spec.get('label', f'member {index}') for index, spec in enumerate(config.members)]
    reports = [_inequality(member, w, c1, approximable, label) for (member, w), label in zip(suite, labels)]
    shrink = float(config.param('shrink', 0.5))
    held_out = []
    for index in config.param('held_out', []):
        member, w = _member(config, config.members[index], shrink)
        held_out.append(_inequality(member, w, c1, approximable, f'{labels[index]} x{shrink:g}'))

    residuals = [report.residual for report in reports + held_out]
    consistent = [report.exponent_consistent for report in reports if report.exponent_consistent is not None]
    values = {
        'c1': c1,
        'min_residual': min(residuals),
        'held_out_min_residual': min((report.residual for report in held_out), default=None),
        'exponent_consistent': _flag(all(consistent)),
        'members': float(len(reports)),
        'held_out': float(len(held_out)),
    }
    rows = [(report.label, report.lhs, report.rhs, report.ratio, report.residual) for report in reports + held_out]
    return Outcome(values, {'members': [report.to_dict() for report in reports],
                            'held_out': [report.to_dict() for report in held_out]},
                   {'residuals': Trace(['label', 'lhs', 'rhs', 'ratio', 'residual'], rows)})


# ----------------------------------------------------------------------------------------------------------------------
@handles(Kind.Isoperimetric)
def _run_isoperimetric(config: ExperimentConfig, threads: Optional[int]) -> Outcome:
    _require(config, 'shape')
    domain = config.box() if config.domain else None
    shape = build_shape(config.shape, domain)
    report = analysis.isoperimetric_check(shape, _weight(config, None), config.param('c1'),
                                          bool(config.param('approximable', False)), domain)
    values = {'lhs': report.lhs, 'rhs': report.rhs, 'ratio': report.ratio, 'residual': report.residual}
    return Outcome(values, {'report': report.to_dict()})


# ----------------------------------------------------------------------------------------------------------------------
@handles(Kind.LSC)
def _run_lsc(config: ExperimentConfig, threads: Optional[int]) -> Outcome:
    """Randomized sequences f + a r^k g converging to f in L1(w), compared against TV_w(f)."""
    _require(config, 'function')
    grid = config.grid()
    f = build_function(config.function, grid)
    w = _weight(config, grid)
    rng = np.random.default_rng(int(config.param('seed', 0)))
    length = int(config.param('length', 48))
    reports, rows = [], []
    for index in range(int(config.param('sequences', 20))):
        noise = f.with_values(rng.standard_normal(grid.shape))
        amplitude, rate = rng.uniform(0.1, 1.0), rng.uniform(0.25, 0.5)
        sequence = [f + noise * (amplitude * rate ** k) for k in range(1, length + 1)]
        report = variation.lsc_probe(sequence, f, w, tail=int(config.param('tail', 2)))
        reports.append(report)
        rows.append((index, report.liminf, report.tv_limit, report.gap))
    values = {'min_gap': min(report.gap for report in reports),
              'violations': float(sum(report.violated for report in reports)),
              'tv_limit': reports[0].tv_limit}
    return Outcome(values, {}, {'sequences': Trace(['sequence', 'liminf', 'tv', 'gap'], rows)})


# ----------------------------------------------------------------------------------------------------------------------
@handles(Kind.Duality)
def _run_duality(config: ExperimentConfig, threads: Optional[int]) -> Outcome:
    _require(config, 'function')
    grid = config.grid()
    f = build_function(config.function, grid)
    w = _weight(config, grid)
    tv = variation.weighted_tv(f, w).value
    scale = max(tv, 1.0)
    rng = np.random.default_rng(int(config.param('seed', 0)))
    bounds = [variation.dual_lower_bound(f, w, variation.random_test_field(grid, w, rng))
              for _ in range(int(config.param('fields', 100)))]
    optimal = variation.dual_lower_bound(f, w, variation.optimal_test_field(f, w))
    values = {'tv': tv, 'optimal': optimal, 'max_excess': (max(bounds) - tv) / scale,
              'optimal_gap': abs(optimal - tv) / scale}
    return Outcome(values, {'random_bounds': {'max': max(bounds), 'min': min(bounds)}})


# ----------------------------------------------------------------------------------------------------------------------
def _run_child(config: ExperimentConfig) -> RunReport:
    try:
        return run(config, threads=1)
    except ConfigError as error:
        report = RunReport(config.name, config.kind, digest(config))
        report.error = f'{type(error).__name__}: {error}'
        return report


# ----------------------------------------------------------------------------------------------------------------------
@handles(Kind.Suite)
def _run_suite(config: ExperimentConfig, threads: Optional[int]) -> Outcome:
    names = config.fixtures or [name for name, fixture in list_fixtures().items() if fixture.kind is not Kind.Suite]
    configs = []
    for name in names:
        fixture = load_fixture(name)
        if fixture.kind is Kind.Suite:
            raise ConfigError(f'suite "{config.name}" cannot nest suite "{name}"')
        configs.append(fixture)
    workers = threads or int(os.environ.get(THREADS_VARIABLE, 0)) or (os.cpu_count() or 1)
    log.info('running %d experiments on %d threads', len(configs), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        children = list(pool.map(_run_child, configs))
    children.sort(key=lambda child: child.name)
    passed = sum(child.passed for child in children)
    return Outcome({'experiments': float(len(children)), 'passed': float(passed),
                    'failed': float(len(children) - passed)}, {}, {}, children)




# ======================================================================================================================
# Entry Points
# ----------------------------------------------------------------------------------------------------------------------
def run(config: ExperimentConfig, threads: Optional[int] = None) -> RunReport:
    """Dispatch the experiment and compare each expectation against the value it names."""
    report = RunReport(config.name, config.kind, digest(config))
    started = time.perf_counter()
    log.info('experiment %s (%s) started', config.name, config.kind.value)
    try:
        outcome = HANDLERS[config.kind](config, threads)
    except ConfigError:
        raise
    except WbvError as error:
        log.error('experiment %s failed: %s', config.name, error)
        report.error = f'{type(error).__name__}: {error}'
        outcome = Outcome()

    report.values = outcome.values
    report.details = outcome.details
    report.traces = outcome.traces
    report.children = outcome.children
    for expectation in config.expected:
        value = outcome.values.get(expectation.quantity)
        report.records.append(CheckRecord(expectation.quantity, value, expectation, expectation.check(value)))
    log.info('experiment %s finished in %.2f s: %s', config.name, time.perf_counter() - started,
             'pass' if report.passed else 'FAIL')
    return report


# ----------------------------------------------------------------------------------------------------------------------
def write_outputs(report: RunReport, directory: str) -> List[str]:
    """Write report.json and one trace_<experiment>_<trace>.csv per trace; returns the paths written."""
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, 'report.json')
    with open(path, 'w') as handle:
        json.dump(report.to_dict(), handle, indent=2, sort_keys=True)
        handle.write('\n')
    written = [path]
    for experiment in [report, *report.children]:
        for name, trace in sorted(experiment.traces.items()):
            path = os.path.join(directory, f'trace_{experiment.name}_{name}.csv')
            trace.write_csv(path)
            written.append(path)
    return written




# End of File
