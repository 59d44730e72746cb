# ======================================================================================================================
#      File:  /tests/test_cli.py
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
"""The command line front end."""

# ======================================================================================================================
# Imports
# ----------------------------------------------------------------------------------------------------------------------
import os.path

from click.testing import CliRunner
import pytest

from wbv.fixtures import FIXTURE_DIR
from wbv.main import cli




# ======================================================================================================================
# Fixtures
# ----------------------------------------------------------------------------------------------------------------------
@pytest.fixture
def invoke():
    runner = CliRunner()
    return lambda *args: runner.invoke(cli, list(args))




# ======================================================================================================================
# Tests
# ----------------------------------------------------------------------------------------------------------------------
def test_list_fixtures(invoke):
    assert invoke('fixtures').exit_code == 0


def test_show_fixture(invoke):
    result = invoke('-v', 'fixtures', 'step-remark')
    assert result.exit_code == 0
    assert 'intervals' in result.output


def test_unknown_fixture(invoke):
    assert invoke('fixtures', 'no-such-fixture').exit_code == 2


def test_validate_fixture_directory(invoke):
    result = invoke('validate', FIXTURE_DIR)
    assert result.exit_code == 0
    assert 'ERROR' not in result.output


def test_validate_broken_file(invoke, tmp_path):
    path = tmp_path / 'broken.yaml'
    path.write_text('name: broken\n')
    result = invoke('validate', str(path))
    assert result.exit_code == 1
    assert 'ERROR' in result.output


def test_run_fixture_file(invoke, tmp_path):
    result = invoke('run', os.path.join(FIXTURE_DIR, 'step-remark.yaml'), '-o', str(tmp_path))
    assert result.exit_code == 0, result.output
    assert (tmp_path / 'report.json').exists()


def test_run_failing_experiment(invoke, tmp_path):
    path = tmp_path / 'tent.yaml'
    path.write_text('name: tent\nkind: bv1d\nfunction: {type: tent}\n'
                    'expected:\n- {quantity: variation, value: 7, provenance: derived}\n')
    assert invoke('run', str(path), '-o', str(tmp_path)).exit_code == 1


def test_one_off_experiment(invoke, tmp_path):
    result = invoke('bv1d', '-f', '{type: tent}', '-w', 'step()', '-p', 'classical=true', '-o', str(tmp_path))
    assert result.exit_code == 0, result.output
    assert (tmp_path / 'report.json').exists()


def test_bad_parameter(invoke, tmp_path):
    assert invoke('bv1d', '-f', '{type: tent}', '-p', 'bad', '-o', str(tmp_path)).exit_code == 2


def test_incomplete_one_off_experiment(invoke, tmp_path):
    assert invoke('tv', '-o', str(tmp_path)).exit_code == 2




# End of File
