"""Radial psh function generated by a measure document."""
from pathlib import Path

from django.core.management.base import BaseCommand

from equilibrium.persson import admissible, reconstruct
from equilibrium.radial_core import check_class
from equilibrium.specs import (
    MEASURE_SCHEMA, build_report, document_hash, load_document, parse_measure, write_report,
)

from ._common import command_errors, output_dir


class Command(BaseCommand):
    """manage.py reconstruct MEASURE [--u0 C] [--out-dir DIR]"""
    help = 'Reconstruct the bounded-below radial psh function of a radial measure'

    def add_arguments(self, parser):
        parser.add_argument('measure', help='measure document (JSON)')
        parser.add_argument('--u0', type=float, help='value at the origin (default: document)')
        parser.add_argument('--out-dir', help='directory for the report')

    def handle(self, *args, **options):
        path = Path(options['measure'])
        with command_errors():
            measure, u0 = parse_measure(load_document(path, MEASURE_SCHEMA))
            if options['u0'] is not None:
                u0 = options['u0']
            verdict = admissible(measure, measure.dimension)
            profile = reconstruct(measure, measure.dimension, u0)
        flags = check_class(profile)
        report = build_report('profile', {
            'dimension': measure.dimension,
            'u0': u0,
            'admissibility': verdict.diagnostic,
            'profile': profile.as_dict(),
            'class': flags.as_dict(),
        }, spec_sha256=document_hash(path))
        target = write_report(output_dir(options['out_dir']) / f'{path.stem}.profile.json',
                              report)
        self.stdout.write(
            f'{profile.breakpoints.size} breakpoints, right slope {profile.right_slope:.15g}, '
            f'in L+: {flags.in_L_plus}')
        self.stdout.write(self.style.SUCCESS(f'wrote {target}'))
