#!/usr/bin/env python3
"""
Command line entry point.

    bounds    tabulate distance bounds and error exponents to CSV
    build     construct a preset, save its bundle, print verified parameters
    verify    brute-force and structural checks of a bundle or preset
    simulate  Monte Carlo BSC run from a key=value config file
    sweep     success rate against exact error weight

Failures print one JSON line {"error": ..., "type": ...} on stderr and exit 1.
"""

import functools
import json
import logging
import sys

import click
import numpy as np

from code_manager import CodeManager, PRESETS
from config import get_config, load_simulation_config
from errors import ExpanderCodeError

logger = logging.getLogger(__name__)


def _configure_logging(level: str):
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )


def _to_json(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"not serializable: {type(value).__name__}")


def _echo_json(payload):
    click.echo(json.dumps(payload, indent=2, sort_keys=True, default=_to_json))


def _float_list(text: str):
    try:
        return [float(x) for x in text.split(',') if x.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated numbers, got {text!r}")


def _int_list(text: str):
    try:
        return [int(x) for x in text.split(',') if x.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {text!r}")


def handle_errors(func):
    """Turn domain errors into a JSON error line and exit code 1."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (ExpanderCodeError, ValueError, OSError) as e:
            logger.error(f"{type(e).__name__}: {e}")
            click.echo(json.dumps({'error': str(e), 'type': type(e).__name__}), err=True)
            sys.exit(1)

    return wrapper


@click.group()
@click.option('--log-level', default=None, help='Logging level (defaults to LOG_LEVEL).')
@click.pass_context
def cli(ctx, log_level):
    config = get_config()
    _configure_logging(log_level or config.LOG_LEVEL)
    ctx.obj = CodeManager(config)


@cli.command()
@click.option('--quantity', '-q', 'quantities', multiple=True, required=True,
              help='gv, zyablov, m_level, bz_distance, e0, forney, multilevel, bz_exponent')
@click.option('--rates', default='0.1,0.2,0.3,0.4,0.5', help='Comma-separated rates.')
@click.option('--p', 'p_values', default='', help='Comma-separated crossover probabilities.')
@click.option('--m', 'm_values', default='', help='Comma-separated level counts.')
@click.option('--out', default=None, help='CSV path; stdout when omitted.')
@click.pass_obj
@handle_errors
def bounds(manager: CodeManager, quantities, rates, p_values, m_values, out):
    """Evaluate bounds over a grid."""
    frame = manager.bounds_grid(quantities, _float_list(rates), _float_list(p_values), _int_list(m_values))
    if out:
        frame.to_csv(out, index=False)
        logger.info(f"Wrote {len(frame)} rows to {out}")
    else:
        click.echo(frame.to_csv(index=False), nl=False)


@cli.command()
@click.argument('kind', type=click.Choice(sorted(PRESETS)))
@click.option('--preset', default='tiny', help='Preset name.')
@click.option('--seed', type=int, default=None, help='Construction seed.')
@click.option('--out', default=None, help='Bundle path to write.')
@click.pass_obj
@handle_errors
def build(manager: CodeManager, kind, preset, seed, out):
    """Construct a preset and print its parameters."""
    logger.info("=" * 60)
    logger.info(f"BUILD: {kind}:{preset}")
    logger.info("=" * 60)
    code = manager.build_preset(kind, preset, seed)
    if out:
        manager.save(code, out, seed)
    _echo_json(manager.describe(code))


@cli.command()
@click.argument('code')
@click.option('--seed', type=int, default=None, help='Seed for presets and sampled checks.')
@click.pass_obj
@handle_errors
def verify(manager: CodeManager, code, seed):
    """Check a bundle file or a preset reference such as multilevel:tiny."""
    report = manager.verify(manager.resolve_code(code, seed), seed)
    _echo_json(report)
    if not report['success']:
        sys.exit(1)


@cli.command()
@click.argument('config_path')
@click.pass_obj
@handle_errors
def simulate(manager: CodeManager, config_path):
    """Run a simulation config file."""
    sim = load_simulation_config(config_path)
    logger.info("=" * 60)
    logger.info(f"SIMULATE: {sim.code}, {sim.trials} trials x {len(sim.p_grid)} points, mode {sim.mode}")
    logger.info("=" * 60)
    result = manager.simulate(sim)
    _echo_json(result['paths'])


@cli.command()
@click.argument('code')
@click.option('--weights', required=True, help='Comma-separated error weights.')
@click.option('--samples', type=int, default=200, help='Patterns per weight when not exhaustive.')
@click.option('--seed', type=int, default=None, help='Master seed.')
@click.option('--out', default=None, help='CSV path; stdout when omitted.')
@click.pass_obj
@handle_errors
def sweep(manager: CodeManager, code, weights, samples, seed, out):
    """Success rate against error weight."""
    frame = manager.sweep(manager.resolve_code(code, seed), _int_list(weights), samples, seed)
    if out:
        frame.to_csv(out, index=False)
    else:
        click.echo(frame.to_csv(index=False), nl=False)


if __name__ == '__main__':
    cli()
