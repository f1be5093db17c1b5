"""Verify a gluing across a sphere (radial pieces) or the unit circle (disc reflection)."""
from pathlib import Path

from django.core.management.base import BaseCommand

from equilibrium.glue import disc_reflection_glue, radial_glue, radial_glue_check, submean_check
from equilibrium.specs import (
    GLUE_SCHEMA, build_report, document_hash, load_document, parse_glue, write_report,
)

from ._common import command_errors, config, output_dir


class Command(BaseCommand):
    """manage.py glue_check GLUE [--samples N] [--seed S] [--workers W]"""
    help = 'Check the normal-derivative criterion and sample the sub-mean-value inequality'

    def add_arguments(self, parser):
        parser.add_argument('glue', help='glue document (JSON)')
        parser.add_argument('--samples', type=int, help='Monte Carlo circles')
        parser.add_argument('--seed', type=int, help='seed for the sampler')
        parser.add_argument('--workers', type=int, default=1, help='sampler threads')
        parser.add_argument('--out-dir', help='directory for the report')

    def handle(self, *args, **options):
        path = Path(options['glue'])
        with command_errors():
            spec = parse_glue(load_document(path, GLUE_SCHEMA))
            samples = options['samples'] or spec['samples'] or config('GLUE_SAMPLES')
            seed = options['seed'] if options['seed'] is not None else (
                spec['seed'] if spec['seed'] is not None else config('SEED'))
            body = {'kind': spec['kind']}
            if spec['kind'] == 'radial':
                check = radial_glue_check(spec['inner'], spec['outer'], spec['radius'])
                body['interface'] = check.as_dict()
                g = radial_glue(spec['inner'], spec['outer'], spec['radius'], spec['dimension'])
            else:
                g = disc_reflection_glue(spec['h'])
                body['interface'] = {'continuous': True, 'normal_bound_ok': True,
                                     'jump': g.interface_gap(seed=seed)}
            rr = spec['radius_range']
            result = submean_check(g, samples, tuple(rr) if rr else None, seed,
                                   workers=options['workers'])
        body['submean'] = result.as_dict()
        report = build_report('glue', body, spec_sha256=document_hash(path), seed=seed)
        target = write_report(output_dir(options['out_dir']) / f'{path.stem}.glue.json', report)
        style = self.style.SUCCESS if result.violations == 0 else self.style.WARNING
        self.stdout.write(style(
            f'{result.violations}/{result.samples} sub-mean violations '
            f'(worst excess {result.worst_excess:.3g})'))
        self.stdout.write(f'wrote {target}')
