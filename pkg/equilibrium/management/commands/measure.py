"""Monge-Ampère measure of a profile document."""
from pathlib import Path

from django.core.management.base import BaseCommand

from equilibrium.monge_ampere import ma_cdf, support
from equilibrium.radial_core import check_class
from equilibrium.specs import (
    PROFILE_SCHEMA, build_report, document_hash, load_document, parse_profile_document,
    write_report,
)

from ._common import atom_tolerance, command_errors, describe_support, output_dir


class Command(BaseCommand):
    """manage.py measure PROFILE [--out-dir DIR]"""
    help = 'Compute the Monge-Ampère measure (ball-mass CDF) of a radial profile'

    def add_arguments(self, parser):
        parser.add_argument('profile', help='profile document (JSON)')
        parser.add_argument('--out-dir', help='directory for the report')

    def handle(self, *args, **options):
        path = Path(options['profile'])
        with command_errors():
            profile, n = parse_profile_document(load_document(path, PROFILE_SCHEMA))
            measure = ma_cdf(profile, n)
        report_support = support(measure, atom_tolerance(n))
        report = build_report('measure', {
            'dimension': n,
            'class': check_class(profile).as_dict(),
            'measure': measure.as_dict(),
            'support': report_support.as_dict(),
        }, spec_sha256=document_hash(path))
        target = write_report(output_dir(options['out_dir']) / f'{path.stem}.measure.json',
                              report)
        self.stdout.write(f'support: {describe_support(report_support)}')
        self.stdout.write(f'total mass: {measure.total_mass:.15g}')
        self.stdout.write(self.style.SUCCESS(f'wrote {target}'))
