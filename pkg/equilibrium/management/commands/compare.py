"""Mutual absolute continuity of the measures in two reports."""
from pathlib import Path

from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand

from equilibrium.extremal import compare_abs_continuity
from equilibrium.specs import (
    MEASURE_SCHEMA, REPORT_SCHEMA, dumps, load_document, parse_measure,
)

from ._common import atom_tolerance, command_errors


def measure_from_report(path):
    """The measure embedded in a solution or measure report."""
    report = load_document(path, REPORT_SCHEMA)
    body = report.get('solution', report)
    if 'measure' not in body:
        raise ValidationError(f'{Path(path).name}: report carries no measure')
    data = dict(body['measure'])
    data.pop('total_mass', None)
    measure, _ = parse_measure({'schema': MEASURE_SCHEMA, **data})
    return measure


class Command(BaseCommand):
    """manage.py compare REPORT1 REPORT2 [--json]"""
    help = 'Decide m1 << m2 and m2 << m1 for the measures of two reports'

    def add_arguments(self, parser):
        parser.add_argument('first', help='report of m1')
        parser.add_argument('second', help='report of m2')
        parser.add_argument('--json', action='store_true', help='machine-readable output')

    def handle(self, *args, **options):
        with command_errors():
            m1 = measure_from_report(options['first'])
            m2 = measure_from_report(options['second'])
            verdict = compare_abs_continuity(m1, m2, atom_tolerance(m1.dimension))
        if options['json']:
            self.stdout.write(dumps(verdict.as_dict()), ending='')
            return
        self.stdout.write(f'm1 << m2: {verdict.m1_ll_m2}')
        self.stdout.write(f'm2 << m1: {verdict.m2_ll_m1}')
        for reason in verdict.reasons:
            self.stdout.write(f'  {reason}')
