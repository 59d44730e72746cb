# ======================================================================================================================
#      File:  /tests/test_config.py
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
"""Experiment files, expectations and the builders for weights, measures, shapes and functions."""

# ======================================================================================================================
# Imports
# ----------------------------------------------------------------------------------------------------------------------
import glob
import math
import os.path

import pytest

from wbv.config import (Comparison, ConfigError, Expectation, ExperimentConfig, Kind, Provenance, build_function,
                        build_measure, build_piecewise, build_shape, load_config, parse_weight)
from wbv.core import BoxDomain, WeightKind, make_grid
from wbv.fixtures import FIXTURE_DIR, list_fixtures, load_fixture
from wbv.validate import validate_file




# ======================================================================================================================
# Expectations
# ----------------------------------------------------------------------------------------------------------------------
def expect(value, **kwargs):
    return Expectation('q', value, Provenance.Derived, **kwargs)


def test_equality_within_tolerance():
    assert expect(3.0, tolerance=1e-6).check(3.0000005)
    assert not expect(3.0, tolerance=1e-6).check(3.00001)
    assert expect(100.0, tolerance=0.02, relative=True).check(101.5)


def test_one_sided_comparisons():
    assert expect(0.01, comparison=Comparison.AtMost).check(0.005)
    assert not expect(0.01, comparison=Comparison.AtMost).check(0.02)
    assert expect(0.9, comparison=Comparison.AtLeast).check(1.1)
    assert not expect(0.9, comparison=Comparison.AtLeast).check(0.5)


def test_infinite_values():
    assert expect(math.inf).check(math.inf)
    assert not expect(math.inf).check(1e300)
    assert expect(math.inf, comparison=Comparison.AtMost).check(5.0)


def test_missing_values_never_pass():
    assert not expect(1.0).check(None)
    assert not expect(1.0).check(math.nan)


def test_expectation_reads_inf():
    expectation = Expectation.from_dict({'quantity': 'perimeter', 'value': 'inf', 'provenance': 'published'})
    assert math.isinf(expectation.value)
    assert expectation.to_dict()['value'] == 'inf'




# ======================================================================================================================
# Experiments
# ----------------------------------------------------------------------------------------------------------------------
def test_every_problem_is_reported():
    with pytest.raises(ConfigError) as error:
        ExperimentConfig.from_dict({'kind': 'bogus', 'colour': 'red',
                                    'expected': [{'quantity': 'tv', 'value': 1, 'provenance': 'rumour'}]})
    assert len(error.value.fields) == 4


def test_experiment_must_be_a_mapping():
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict(['name', 'kind'])


def test_defaults():
    config = ExperimentConfig.from_dict({'name': 'bare', 'kind': 'tv'})
    assert config.kind is Kind.TV
    assert config.weight == 'const(1)'
    assert config.dimension == 1
    with pytest.raises(ConfigError):
        config.grid()


def test_fixture_survives_a_dict_round_trip():
    config = load_fixture('step-remark')
    assert ExperimentConfig.from_dict(config.to_dict()) == config


def test_unknown_fixture():
    with pytest.raises(ConfigError):
        load_fixture('no-such-fixture')


def test_unsupported_extension(tmp_path):
    path = tmp_path / 'experiment.toml'
    path.write_text('name = "x"\n')
    with pytest.raises(ConfigError):
        load_config(str(path))


def test_json_experiment(tmp_path):
    path = tmp_path / 'experiment.json'
    path.write_text('{"name": "j", "kind": "bv1d", "function": {"type": "tent"}}')
    assert load_config(str(path)).function == {'type': 'tent'}


@pytest.mark.parametrize('filename', sorted(glob.glob(os.path.join(FIXTURE_DIR, '*.yaml'))),
                         ids=os.path.basename)
def test_fixture_validates(filename):
    assert validate_file(filename)['error'] == []


def test_fixture_names_match_files():
    names = {os.path.splitext(os.path.basename(path))[0] for path in glob.glob(os.path.join(FIXTURE_DIR, '*.yaml'))}
    assert set(list_fixtures()) == names




# ======================================================================================================================
# Weights
# ----------------------------------------------------------------------------------------------------------------------
def test_parse_step_weight():
    w = parse_weight('step(threshold=0, low=1, high=2)')
    assert w.scalar(-1.0) == 1.0
    assert w.scalar(1.0) == 2.0


def test_parse_product_weight():
    w = parse_weight('const(3) * step()')
    assert w.to_spec() == 'const(3) * step(threshold=0, low=1, high=2, axis=0)'
    assert w.scalar(1.0) == 6.0


def test_parse_power_weight_in_the_plane():
    w = parse_weight('power(alpha=-0.5)', 2)
    assert w.scalar(0.0, 4.0) == pytest.approx(0.5)


def test_parse_point_values():
    w = parse_weight('const(2, points={0: 1, 1: 1})')
    assert w.kind is WeightKind.Points
    assert [w.scalar(x) for x in (0.0, 0.5, 1.0)] == [1.0, 2.0, 1.0]
    assert parse_weight(w.to_spec()).to_spec() == w.to_spec()


@pytest.mark.parametrize('text', ['const(2, points=[0, 1])', 'const(2, points={0: -1})'])
def test_bad_point_values(text):
    with pytest.raises(ConfigError):
        parse_weight(text)


@pytest.mark.parametrize('text', ['wobble(1)', 'step(bogus=1)', 'step(', '2 + const(1)'])
def test_bad_weights(text):
    with pytest.raises(ConfigError):
        parse_weight(text)


def test_maximal_function_weight_needs_a_grid():
    with pytest.raises(ConfigError):
        parse_weight('cr(measure="dirac", delta=0.5)')


def test_maximal_function_weight_needs_a_known_measure():
    grid = make_grid(BoxDomain.interval(-2.0, 2.0), 16)
    with pytest.raises(ConfigError):
        parse_weight('cr(measure="nowhere", delta=0.5)', 1, {}, grid)




# ======================================================================================================================
# Builders
# ----------------------------------------------------------------------------------------------------------------------
def test_build_measures():
    assert build_measure('dirac').interval_mass(-1.0, 1.0) == 1.0
    train = build_measure({'type': 'train', 'base': 2.0})
    assert math.isinf(train.interval_mass(-1e6, 1e6))
    atoms = build_measure({'type': 'atoms', 'atoms': [{'location': [0.5], 'mass': 2.0}]})
    assert atoms.interval_mass(0.0, 1.0) == 2.0
    with pytest.raises(ConfigError):
        build_measure('cantor')
    with pytest.raises(ConfigError):
        build_measure({'type': 'fractal'})


def test_build_shapes(square):
    assert build_shape({'type': 'circle', 'radius': 0.5}).contains([[0.0, 0.0]])[0]
    slab = build_shape({'type': 'slab', 'axis': 1, 'lower': -0.5, 'upper': 0.5}, square)
    assert slab.contains([[0.9, 0.0]])[0]
    with pytest.raises(ConfigError):
        build_shape({'type': 'slab', 'lower': 0, 'upper': 1})
    with pytest.raises(ConfigError):
        build_shape({'type': 'blob'})


def test_build_piecewise_functions():
    tent = build_piecewise({'type': 'tent', 'half_width': 2})
    assert tent.evaluate([1.0])[0] == pytest.approx(0.5)
    steps = build_piecewise({'type': 'piecewise', 'breakpoints': [0], 'pieces': [0, 'x + 1']})
    assert steps.jumps == pytest.approx((1.0,))
    with pytest.raises(ConfigError):
        build_piecewise({'type': 'indicator', 'shape': {'type': 'intervals', 'intervals': [[0, 1], [2, 3]]}})
    with pytest.raises(ConfigError):
        build_piecewise({'type': 'expression', 'text': 'x'})


def test_build_functions(line):
    f = build_function({'type': 'indicator', 'shape': {'type': 'intervals', 'intervals': [[0, 1]]}}, line)
    assert f.values.sum() == 64
    g = build_function({'type': 'expression', 'text': 'x'}, line)
    assert g.values[0] == pytest.approx(line.axes()[0][0])
    with pytest.raises(ConfigError):
        build_function({'type': 'noise'}, line)




# End of File
