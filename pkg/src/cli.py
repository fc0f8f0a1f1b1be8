"""
Command-line interface for ictmc.
"""
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import click
from dotenv import load_dotenv

from .config import get_settings
from .ergodicity import check_ergodic
from .errors import IctmcError
from .harness import RunReport, get_method_info, load_model, parse_queries, reproduce_table, run_query, table_to_csv
from .harness.table import DEFAULT_FIXTURE

# Load environment variables
load_dotenv('config/.env')

LOG_LEVELS = ['DEBUG', 'INFO', 'WARNING', 'ERROR']


def _fail(error: IctmcError):
    click.echo(f"Error: {error}", err=True)
    sys.exit(error.exit_code)


@click.group()
@click.option('--log-level', type=click.Choice(LOG_LEVELS, case_sensitive=False),
              help='Log level (overrides ICTMC_LOG_LEVEL)')
def cli(log_level):
    """ictmc - Guaranteed-error lower expectations for imprecise continuous-time Markov chains."""
    try:
        level = (log_level or get_settings().log_level).upper()
    except IctmcError as e:
        _fail(e)
    if level not in LOG_LEVELS:
        click.echo(f"Error: Unknown log level {level!r}", err=True)
        sys.exit(3)
    logging.basicConfig(level=getattr(logging, level),
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')


@cli.command()
@click.option('--method', '-m', type=click.Choice(list(get_method_info())),
              help='Method to describe')
def info(method):
    """Show information about the available methods."""
    methods = get_method_info()

    if method:
        info_dict = methods[method]
        click.echo(f"\n{info_dict['name']}")
        click.echo("=" * 50)
        click.echo(f"Guarantee: {info_dict['guarantee']}")
        click.echo(f"Description: {info_dict['description']}")
        click.echo(f"\nParameters:")
        for parameter in info_dict['parameters']:
            click.echo(f"  - {parameter}")
    else:
        click.echo("\nAvailable Methods:")
        click.echo("=" * 50)
        for key, info_dict in methods.items():
            click.echo(f"\n{key}: {info_dict['name']}")
            click.echo(f"  Guarantee: {info_dict['guarantee']}")
            click.echo(f"  Parameters: {', '.join(info_dict['parameters'])}")


@cli.command()
@click.option('--model', '-M', required=True, type=click.Path(), help='Model file (JSON)')
@click.option('--query', '-q', 'query_arg', required=True, help='Query file or inline JSON')
@click.option('--csv', 'output_format', flag_value='csv', help='Write the report as CSV')
@click.option('--json', 'output_format', flag_value='json', default=True, help='Write the report as JSON (default)')
@click.option('--jobs', '-j', default=1, type=click.IntRange(min=1), help='Queries run in parallel')
def run(model, query_arg, output_format, jobs):
    """Run one or more queries against a model."""
    try:
        Q = load_model(model)
        if os.path.exists(query_arg):
            with open(query_arg, 'r', encoding='utf-8') as f:
                queries = parse_queries(f.read(), Q.state_space, path=query_arg)
        else:
            queries = parse_queries(query_arg, Q.state_space, path='<inline>')
    except IctmcError as e:
        _fail(e)

    def attempt(indexed):
        index, query = indexed
        try:
            entry = run_query(Q, query)
            entry['index'] = index
            return entry, None
        except IctmcError as e:
            return None, e

    if jobs > 1 and len(queries) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            outcomes = list(executor.map(attempt, enumerate(queries)))
    else:
        outcomes = [attempt(item) for item in enumerate(queries)]

    report = RunReport(model=model)
    failure = None
    for index, (entry, error) in enumerate(outcomes):
        if error is None:
            report.entries.append(entry)
            click.echo(f"✓ Query {index} ({entry['query']['method']}): {entry['iterations']} iterations", err=True)
        else:
            failure = failure or error
            click.echo(f"✗ Query {index}: {error}", err=True)

    click.echo(report.to_csv() if output_format == 'csv' else report.to_json(), nl=output_format != 'csv')
    if failure is not None:
        sys.exit(failure.exit_code)


@cli.command()
@click.option('--model', '-M', required=True, type=click.Path(), help='Model file (JSON)')
@click.option('--json', 'as_json', is_flag=True, help='Write the report as JSON')
def check(model, as_json):
    """Report whether a model is ergodic."""
    try:
        Q = load_model(model)
        report = check_ergodic(Q)
    except IctmcError as e:
        _fail(e)

    labels = Q.state_space.all_labels()
    if as_json:
        data = report.to_dict(labels)
        data.update({'model': model, 'states': list(labels), 'norm': Q.norm})
        click.echo(json.dumps(data, indent=2, sort_keys=True))
        return

    click.echo(f"\nModel: {model}")
    click.echo("=" * 50)
    click.echo(f"States: {len(labels)}")
    click.echo(f"Operator norm: {Q.norm!r}")
    top_class = ', '.join(labels[x] for x in sorted(report.top_class)) or '(empty)'
    click.echo(f"Top class: {top_class}")
    click.echo(f"{'✓' if report.regular else '✗'} Top class regular")
    click.echo(f"{'✓' if report.absorbing else '✗'} Top class absorbing")
    click.echo(f"\nErgodic: {'yes' if report.ergodic else 'no'}")


@cli.command()
@click.option('--repeats', '-r', default=50, type=click.IntRange(min=1), help='Runs averaged per duration')
@click.option('--fixture', '-f', default=DEFAULT_FIXTURE, type=click.Path(), help='Two-state model file')
@click.option('--output', '-o', type=click.Path(), help='Write the CSV to a file')
def table1(repeats, fixture, output):
    """Compare the approximation methods on the two-state model (CSV)."""
    click.echo(f"Running 5 configurations, {repeats} repeats each...", err=True)
    try:
        rows = reproduce_table(fixture, repeats)
    except IctmcError as e:
        _fail(e)

    text = table_to_csv(rows)
    if output:
        with open(output, 'w', encoding='utf-8') as f:
            f.write(text)
        click.echo(f"✓ Saved table to {output}", err=True)
    else:
        click.echo(text, nl=False)


if __name__ == '__main__':
    cli()
