"""Run the catalogue of worked examples and print PASS/FAIL per fixture."""
import math

from django.core.management.base import BaseCommand, CommandError

from equilibrium.gallery import FIXTURES, GalleryConfig, run_gallery
from equilibrium.models import SolutionRecord
from equilibrium.specs import build_report, dumps, write_report

from ._common import EXIT_FAILED, config, output_dir


class Command(BaseCommand):
    """manage.py gallery [--fixture NAME ...] [--grid-points N] [--json] [--record]"""
    help = 'Reproduce the worked examples and check them against their closed forms'

    def add_arguments(self, parser):
        parser.add_argument('--fixture', action='append', choices=sorted(FIXTURES),
                            help='run only this fixture (repeatable)')
        parser.add_argument('--grid-points', type=int,
                            help='fixed grid size per component instead of refinement')
        parser.add_argument('--dimension', type=int, help='complex dimension n')
        parser.add_argument('--samples', type=int, help='Monte Carlo circles per glue fixture')
        parser.add_argument('--seed', type=int, help='base seed')
        parser.add_argument('--truncation', type=int, help='terms kept in countable unions')
        parser.add_argument('--workers', type=int, help='fixtures run concurrently')
        parser.add_argument('--json', action='store_true', help='print the summary as JSON')
        parser.add_argument('--out-dir', help='also write per-fixture reports here')
        parser.add_argument('--record', action='store_true',
                            help='archive every fixture report in the database')

    def handle(self, *args, **options):
        gallery_config = GalleryConfig(
            dimension=options['dimension'] or config('GALLERY_DIMENSION'),
            grid_points=options['grid_points'],
            samples=options['samples'] or config('GALLERY_SAMPLES'),
            seed=options['seed'] if options['seed'] is not None else config('SEED'),
            truncation=options['truncation'] or config('GALLERY_TRUNCATION'),
        )
        workers = options['workers'] or config('GALLERY_WORKERS')
        results = run_gallery(gallery_config, options['fixture'], workers)

        summary = build_report('gallery', {
            'dimension': gallery_config.dimension,
            'fixtures': [r.as_dict() for r in results],
        }, seed=gallery_config.seed)
        if options['out_dir']:
            out = output_dir(options['out_dir'])
            write_report(out / 'gallery.json', summary)
            for result in results:
                for name, body in result.reports.items():
                    write_report(out / f'{name}.report.json',
                                 build_report('solution', {'label': name, 'solution': body},
                                              seed=gallery_config.seed))
        if options['record']:
            for result in results:
                SolutionRecord.record(
                    result.name, 'gallery', {'fixture': result.as_dict(), **result.reports},
                    gallery_config.dimension, passed=result.passed)

        if options['json']:
            self.stdout.write(dumps(summary), ending='')
        else:
            for result in results:
                status = self.style.SUCCESS('PASS') if result.passed else self.style.ERROR('FAIL')
                error = 'inf' if math.isinf(result.max_error) else f'{result.max_error:.3e}'
                self.stdout.write(
                    f'{status} {result.name:<28} max error {error}  {result.seconds:7.2f}s')
                if not result.passed and 'error' in result.checks:
                    self.stdout.write(f'     {result.checks["error"]}')
        failed = [r.name for r in results if not r.passed]
        if failed:
            raise CommandError(f'{len(failed)} fixture(s) failed: {", ".join(failed)}',
                               returncode=EXIT_FAILED)
