# ======================================================================================================================
#      File:  /wbv/main.py
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
"""Command line front end for the weighted BV laboratory."""

# ======================================================================================================================
# Imports
# ----------------------------------------------------------------------------------------------------------------------
import logging
import sys

import click
import yaml
from rich import box, print
from rich.logging import RichHandler
from rich.table import Table

from wbv.config import ConfigError, ExperimentConfig, Kind, load_config
from wbv.fixtures import fixtures
from wbv.runner import RunReport, THREADS_VARIABLE, clean, run, write_outputs
from wbv.validate import validate




# ======================================================================================================================
# Main Function
# ----------------------------------------------------------------------------------------------------------------------
@click.group()
@click.option('-v', '--verbose', count=True, help='increase verbosity of output')
@click.option('-t', '--threads', type=int, envvar=THREADS_VARIABLE, help='cap on parallel experiments in a suite')
@click.version_option(package_name='wbv')
@click.pass_context
def cli(ctx, verbose, threads):
    """The weighted BV laboratory - numerical experiments on weighted variation, perimeter and A1 weights."""
    # Setup logging output.
    levels = [logging.WARNING, logging.INFO, logging.DEBUG]
    level = levels[min(2, verbose)]
    logging.basicConfig(level=level, format='%(message)s', handlers=[RichHandler(show_path=False)])
    ctx.obj = {'threads': threads}




# ======================================================================================================================
# Report Output
# ----------------------------------------------------------------------------------------------------------------------
def show_report(report: RunReport) -> None:
    """Print the checks of a report (and of every experiment in a suite) as a table."""
    table = Table(box=box.ROUNDED, title=f'[bold magenta]{report.name}[/] [i]({report.kind.value})[/]')
    table.add_column('Experiment', style='cyan')
    table.add_column('Quantity')
    table.add_column('Value', justify='right')
    table.add_column('Expected', justify='right')
    table.add_column('Provenance', style='green')
    table.add_column('Result')
    for experiment in [report, *report.children]:
        if experiment.error:
            table.add_row(experiment.name, '-', '-', '-', '-', f'[red][bold]ERROR:[/bold] {experiment.error}[/]')
        for record in experiment.records:
            value = clean(record.value)
            expected = f'{record.expected.comparison.value} {clean(record.expected.value)}'
            result = '[green]pass[/]' if record.passed else '[red][bold]FAIL[/bold][/]'
            table.add_row(experiment.name, record.quantity, f'{value:.10g}' if isinstance(value, float) else str(value),
                          expected, record.expected.provenance.value, result)
    print(table)
    if not report.records and not report.children and not report.error:
        for quantity, value in report.values.items():
            print(f'- [bold yellow]{quantity}[/]: {clean(value)}')
    verdict = '[green bold]PASS[/]' if report.passed else '[red bold]FAIL[/]'
    print(f'{report.name}: {verdict}')


# ----------------------------------------------------------------------------------------------------------------------
def _finish(ctx: click.Context, config: ExperimentConfig, output: str) -> None:
    try:
        report = run(config, threads=ctx.obj['threads'])
    except ConfigError as error:
        raise click.UsageError(str(error))
    show_report(report)
    for path in write_outputs(report, output or config.output or '.'):
        logging.getLogger(__name__).info('wrote %s', path)
    sys.exit(0 if report.passed else 1)




# ======================================================================================================================
# Run Commands
# ----------------------------------------------------------------------------------------------------------------------
@cli.command('run')
@click.argument('config', type=click.Path(exists=True, dir_okay=False))
@click.option('-o', '--output', type=click.Path(file_okay=False), help='directory for report.json and the traces')
@click.pass_context
def run_command(ctx, config, output):
    """Run the experiment described by the CONFIG file."""
    try:
        experiment = load_config(config)
    except ConfigError as error:
        raise click.UsageError(str(error))
    _finish(ctx, experiment, output)


# ----------------------------------------------------------------------------------------------------------------------
@cli.command()
@click.option('-f', '--fixture', 'names', multiple=True, help='limit the suite to these fixtures')
@click.option('-o', '--output', type=click.Path(file_okay=False), help='directory for report.json and the traces')
@click.pass_context
def suite(ctx, names, output):
    """Run every named fixture (or just those given) and summarise."""
    config = ExperimentConfig.from_dict({'name': 'suite', 'kind': 'suite', 'fixtures': list(names),
                                         'anchor': 'full acceptance battery'})
    _finish(ctx, config, output)




# ======================================================================================================================
# One-off Experiment Commands
# ----------------------------------------------------------------------------------------------------------------------
def _inline(ctx, param, value):
    """Parse an option given as inline YAML, e.g. --domain '{lower: [-1], upper: [1]}'."""
    if value is None:
        return None
    try:
        return yaml.safe_load(value)
    except yaml.YAMLError as error:
        raise click.BadParameter(f'not valid YAML: {error}')


def _pairs(ctx, param, values):
    params = {}
    for value in values:
        key, sep, text = value.partition('=')
        if not sep:
            raise click.BadParameter(f'"{value}" should look like KEY=VALUE')
        params[key] = yaml.safe_load(text)
    return params


def kind_command(kind: Kind) -> click.Command:
    """A command that runs one experiment of the given kind from flags mirroring the config fields."""
    @click.command(name=kind.value, help=f'Run a one-off "{kind.value}" experiment described by flags.')
    @click.option('-n', '--name', default=kind.value, help='experiment name used in the report')
    @click.option('-w', '--weight', default='const(1)', help='weight, e.g. "power(alpha=-0.5)"')
    @click.option('-d', '--domain', callback=_inline, help="inline YAML, e.g. '{lower: [-1], upper: [1]}'")
    @click.option('-r', '--resolution', type=int, help='cells per axis')
    @click.option('-f', '--function', callback=_inline, help='function spec as inline YAML')
    @click.option('-s', '--shape', callback=_inline, help='shape spec as inline YAML')
    @click.option('-m', '--measure', callback=_inline, help='measure spec as inline YAML, or lebesgue / dirac')
    @click.option('-p', '--param', 'params', multiple=True, callback=_pairs, help='KEY=VALUE, value read as YAML')
    @click.option('-o', '--output', type=click.Path(file_okay=False), help='directory for report.json and traces')
    @click.pass_context
    def command(ctx, name, weight, domain, resolution, function, shape, measure, params, output):
        data = {'name': name, 'kind': kind.value, 'weight': weight, 'params': params}
        for key, value in (('domain', domain), ('resolution', resolution), ('function', function),
                           ('shape', shape), ('measure', measure)):
            if value is not None:
                data[key] = value
        try:
            config = ExperimentConfig.from_dict(data)
        except ConfigError as error:
            raise click.UsageError(str(error))
        _finish(ctx, config, output)
    return command




# ======================================================================================================================
# External Commands
# ----------------------------------------------------------------------------------------------------------------------
cli.add_command(fixtures)
cli.add_command(validate)
for _kind in Kind:
    if _kind is not Kind.Suite:
        cli.add_command(kind_command(_kind))




# End of File
