# ======================================================================================================================
#      File:  /wbv/fixtures.py
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
"""The named fixture registry and a command to print it to the terminal."""

# ======================================================================================================================
# Imports
# ----------------------------------------------------------------------------------------------------------------------
import glob
import os.path
from typing import Dict

import click
import yaml
from rich import box, print
from rich.console import Group
from rich.panel import Panel
from rich.syntax import Syntax
from rich.table import Table

from wbv.config import ConfigError, ExperimentConfig, load_config




# ======================================================================================================================
# Registry
# ----------------------------------------------------------------------------------------------------------------------
FIXTURE_DIR = os.path.join(os.path.dirname(__file__), 'fixtures')


def list_fixtures() -> Dict[str, ExperimentConfig]:
    """Every packaged fixture, keyed and ordered by name."""
    fixtures = {}
    for filename in sorted(glob.glob(os.path.join(FIXTURE_DIR, '*.yaml'))):
        config = load_config(filename)
        fixtures[config.name] = config
    return dict(sorted(fixtures.items()))


# ----------------------------------------------------------------------------------------------------------------------
def load_fixture(name: str) -> ExperimentConfig:
    fixtures = list_fixtures()
    if name not in fixtures:
        raise ConfigError(f'no fixture named "{name}"', [f'known fixtures: {", ".join(fixtures)}'])
    return fixtures[name]




# ======================================================================================================================
# Fixtures Command
# ----------------------------------------------------------------------------------------------------------------------
@click.command()
@click.argument('name', required=False)
def fixtures(name):
    """List the named fixtures, or show the fixture NAME in full."""
    if name is None:
        table = Table(box=box.ROUNDED, title='Fixtures')
        table.add_column('Name', style='bold magenta')
        table.add_column('Kind', style='cyan')
        table.add_column('Anchor', style='green')
        table.add_column('Description')
        for config in list_fixtures().values():
            table.add_row(config.name, config.kind.value, config.anchor, config.description)
        print(table)
        return

    try:
        config = load_fixture(name)
    except ConfigError as error:
        raise click.UsageError(str(error))
    text = yaml.safe_dump(config.to_dict(), sort_keys=False)
    content = Group(config.description + '\n', Syntax(text, 'yaml'))
    title = f'[bold magenta]{config.name}[/] [i]({config.kind.value})[/]'
    print(Panel(content, box=box.ROUNDED, title=title, subtitle=config.anchor, subtitle_align='left'))




# End of File
