"""Shared plumbing for the equilibrium management commands."""
import logging
from contextlib import contextmanager
from pathlib import Path

from django.conf import settings
from django.core.exceptions import ValidationError
from django.core.management.base import CommandError

from equilibrium.exceptions import DomainError, SolverError, StructuralError
from equilibrium.monge_ampere import default_atom_tolerance

logger = logging.getLogger('equilibrium.commands')

EXIT_FAILED = 1
EXIT_INVALID = 2
EXIT_SOLVER = 3


def config(key):
    """One value of settings.RADIAL_EQUILIBRIUM."""
    return settings.RADIAL_EQUILIBRIUM[key]


def grid_defaults():
    """GridSpec keyword defaults from settings."""
    defaults = {
        'points': config('GRID_POINTS'),
        's_min': config('S_MIN'),
        'margin': config('S_MARGIN'),
        'tolerance': config('REFINE_TOLERANCE'),
        'max_points': config('MAX_GRID_POINTS'),
    }
    return defaults


def atom_tolerance(dimension):
    """Support threshold for the configured factor."""
    return default_atom_tolerance(dimension, config('ATOM_TOLERANCE_FACTOR'))


def output_dir(option):
    """--out-dir, falling back to OUTPUT_DIR."""
    return Path(option) if option else Path(config('OUTPUT_DIR'))


@contextmanager
def command_errors():
    """Translate library errors into CommandError with the documented exit codes."""
    try:
        yield
    except FileNotFoundError as exc:
        raise CommandError(f'file not found: {exc.filename}', returncode=EXIT_INVALID) from exc
    except ValidationError as exc:
        raise CommandError(
            'invalid input: ' + '; '.join(exc.messages), returncode=EXIT_INVALID) from exc
    except StructuralError as exc:
        raise CommandError(f'malformed data: {exc}', returncode=EXIT_INVALID) from exc
    except (DomainError, SolverError) as exc:
        logger.warning('%s: %s', type(exc).__name__, exc)
        raise CommandError(f'{type(exc).__name__}: {exc}', returncode=EXIT_SOLVER) from exc


def describe_support(report):
    """One-line text for a support report."""
    parts = [f'sphere r={r:.10g}' for r in report.atoms]
    parts += [f'[{lo:.10g}, {hi:.10g}]' for lo, hi in report.density_intervals]
    if report.origin_mass:
        parts.append(f'origin mass {report.origin_mass:.6g}')
    return ', '.join(parts) if parts else 'empty'
