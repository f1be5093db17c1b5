"""Compute V_{K,Q} (or U_{K,Q,Ω}) for a problem document."""
import dataclasses
from pathlib import Path

from django.core.management.base import BaseCommand

from equilibrium.extremal import Problem, solve
from equilibrium.models import SolutionRecord
from equilibrium.specs import (
    PROBLEM_SCHEMA, build_report, document_hash, load_document, parse_problem, plot_radii,
    profile_table, write_csv, write_report,
)

from ._common import (
    atom_tolerance, command_errors, describe_support, grid_defaults, output_dir,
)


class Command(BaseCommand):
    """manage.py solve SPEC [--relative R] [--grid-points N] [--csv] [--record]"""
    help = 'Solve a radial weighted extremal problem and write its report'

    def add_arguments(self, parser):
        parser.add_argument('spec', help='problem document (JSON)')
        parser.add_argument('--relative', type=float, metavar='R',
                            help='solve relative to the ball B(0, R) instead')
        parser.add_argument('--grid-points', type=int,
                            help='fixed number of grid points per component (no refinement)')
        parser.add_argument('--out-dir', help='directory for reports and CSV tables')
        parser.add_argument('--csv', action='store_true', help='also write (r, V, f) as CSV')
        parser.add_argument('--record', action='store_true',
                            help='archive the report in the database')

    def handle(self, *args, **options):
        path = Path(options['spec'])
        with command_errors():
            doc = load_document(path, PROBLEM_SCHEMA)
            problem, grid, output, label = parse_problem(doc, grid_defaults())
            if options['grid_points']:
                grid = dataclasses.replace(grid, points=options['grid_points'], tolerance=None)
            if options['relative'] is not None:
                problem = Problem(problem.dimension, problem.domain, problem.weight,
                                  'relative', options['relative'])
            solution = solve(problem, grid, atom_tolerance(problem.dimension))
        label = label or path.stem
        sha = document_hash(path)
        report = build_report('solution', {
            'label': label,
            'problem': problem.as_dict(),
            'solution': solution.as_dict(),
        }, spec_sha256=sha)
        out = output_dir(options['out_dir'])
        target = (Path(output['report']) if output.get('report')
                  else out / f'{path.stem}.report.json')
        write_report(target, report)
        if options['csv'] or output.get('csv'):
            radii = plot_radii(solution.profile, solution.measure, grid.margin)
            csv_path = Path(output['csv']) if output.get('csv') else out / f'{path.stem}.csv'
            write_csv(csv_path, ['r', 'V', 'f'],
                      *profile_table(solution.profile, solution.measure, radii))
        if options['record']:
            SolutionRecord.record(label, 'solve', report, problem.dimension, problem.mode,
                                  spec_sha256=sha)
        self.stdout.write(f'support: {describe_support(solution.support)}')
        self.stdout.write(f'total mass: {solution.measure.total_mass:.15g}')
        self.stdout.write(self.style.SUCCESS(f'wrote {target}'))
