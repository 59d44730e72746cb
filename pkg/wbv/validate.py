# ======================================================================================================================
#      File:  /wbv/validate.py
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
"""A command to assist with validating experiment YAML files."""

# ======================================================================================================================
# Imports
# ----------------------------------------------------------------------------------------------------------------------
import glob
import os.path
from typing import Callable, Dict, List

import click
from rich import print

from wbv.config import (ConfigError, ExperimentConfig, Kind, build_domain, build_measure, load_config,
                        parse_weight)




# ======================================================================================================================
# Constants
# ----------------------------------------------------------------------------------------------------------------------
REQUIRED = {
    Kind.A1: ('domain', 'resolution'),
    Kind.MaximalFunction: ('domain', 'resolution'),
    Kind.MF: ('measure',),
    Kind.TV: ('domain', 'function'),
    Kind.Perimeter: ('domain', 'shape'),
    Kind.BV1D: ('function',),
    Kind.Mollify: ('domain', 'resolution', 'function'),
    Kind.Coarea: ('function',),
    Kind.Embed: ('domain',),
    Kind.GNS: ('members',),
    Kind.Isoperimetric: ('shape',),
    Kind.LSC: ('domain', 'resolution', 'function'),
    Kind.Duality: ('domain', 'resolution', 'function'),
    Kind.Suite: (),
}




# ======================================================================================================================
# Checks
# ----------------------------------------------------------------------------------------------------------------------
def check_config(config: ExperimentConfig, error: Callable[[str], None], warning: Callable[[str], None]) -> None:
    """Report every problem with an experiment that loaded; `error` and `warning` receive one message each."""
    for field in REQUIRED[config.kind]:
        if not getattr(config, field):
            error(f'"{field}" is required for kind {config.kind.value}.')

    if config.domain:
        try:
            build_domain(config.domain)
        except (ConfigError, ValueError) as problem:
            error(f'Domain is invalid: {problem}')

    if config.resolution is not None:
        counts = config.resolution if isinstance(config.resolution, list) else [config.resolution]
        if not all(isinstance(count, int) and count >= 2 for count in counts):
            error('Resolution must be an integer (or a list of integers) of at least 2.')

    if config.kind is not Kind.Suite and 'cr(' not in config.weight:
        try:
            parse_weight(config.weight, config.dimension if config.domain else 1)
        except (ConfigError, ValueError) as problem:
            error(f'Weight "{config.weight}" does not parse: {problem}')

    for name, spec in config.measures.items():
        try:
            build_measure(spec)
        except (ConfigError, KeyError, TypeError, ValueError) as problem:
            error(f'Measure "{name}" is invalid: {problem}')

    for expectation in config.expected:
        if not expectation.tolerance > 0:
            error(f'Expectation on "{expectation.quantity}" needs a positive tolerance.')

    if config.kind is Kind.Suite:
        if config.expected:
            warning('A suite passes when its experiments pass; its own expectations only see the counts.')
    elif not config.expected:
        warning('No expected values are given, so the experiment can only fail on errors.')

    if not config.anchor:
        warning('No anchor is given to tie the experiment to its source.')
    if len(config.description) < 20:
        warning('Description is short.')


# ----------------------------------------------------------------------------------------------------------------------
def validate_file(filename: str) -> Dict[str, List[str]]:
    """Errors and warnings for one experiment file."""
    found = {'error': [], 'warning': []}
    try:
        config = load_config(filename)
    except ConfigError as problem:
        found['error'].append(str(problem))
        return found
    except Exception as problem:
        found['error'].append(f'The file could not be loaded: {problem}')
        return found
    check_config(config, found['error'].append, found['warning'].append)
    return found




# ======================================================================================================================
# Validate Command
# ----------------------------------------------------------------------------------------------------------------------
@click.command()
@click.argument('path', type=click.Path(exists=True))
def validate(path):
    """Validate the experiment file at PATH and report any issues with content.

    If PATH is a single file, only that file will be validated.  If path is a directory, all .yaml files in that
    directory will be validated as experiments.
    """
    if os.path.isfile(path):
        filenames = [path]
    else:
        filenames = sorted(glob.glob(os.path.join(path, '*.yaml')))

    errors = 0
    for filename in filenames:
        print(f'Processing {filename}...')
        found = validate_file(filename)
        for message in found['error']:
            print(f'[red][bold]ERROR:[/bold] {message}[/]')
        for message in found['warning']:
            print(f'[yellow][bold]WARNING:[/bold] {message}[/]')

        if not found['error'] and not found['warning']:
            print('[green]No errors or warnings found.[/]')
        if found['warning']:
            print(f"A total of [yellow bold]{len(found['warning'])} warnings[/] were found.")
        if found['error']:
            print(f"A total of [red bold]{len(found['error'])} errors[/] were found.")
        print()
        errors += len(found['error'])

    if errors:
        raise SystemExit(1)




# End of File
