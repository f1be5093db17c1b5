"""
Catalogue of closed-form constructions checked end to end.

Each fixture builds a problem (or a measure, or a glued function), runs it
through the library and compares against the known closed form. Fixtures are
registered with :func:`fixture` and run by :func:`run_gallery`.
"""
from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .exceptions import GlueRejected
from .extremal import (
    GridSpec, Problem, boundary_support_check, compare_abs_continuity, quadratic_ball_problem,
    quadratic_ball_threshold, random_competitors, solve, verify_domination,
)
from .glue import (
    HarmonicPolynomial, disc_reflection_glue, radial_glue, radial_glue_check, submean_check,
)
from .monge_ampere import SupportReport, lelong_mass, ma_cdf, support
from .persson import reconstruct, shell_measure, sphere_measure, truncated_union
from .radial_core import RadialProfile, RadialSet, RadialWeight, check_class, to_log

logger = logging.getLogger(__name__)

PROFILE_TOLERANCE = 1e-6
MASS_TOLERANCE = 1e-8
ROUND_TRIP_TOLERANCE = 1e-8
SUPPORT_SLACK = 1e-6

FIXTURES = {}


@dataclass(frozen=True)
class GalleryConfig:
    """Knobs shared by all fixtures."""
    dimension: int = 2
    grid_points: int | None = None
    samples: int = 100_000
    seed: int = 20260117
    truncation: int = 8
    competitors: int = 100

    def grid(self, **overrides):
        """Refined default grid, or a fixed grid of ``grid_points`` per component."""
        if self.grid_points:
            overrides.setdefault('tolerance', None)
            return GridSpec(points=self.grid_points, **overrides)
        return GridSpec(**overrides)


@dataclass
class FixtureResult:
    """Outcome of one fixture."""
    name: str
    passed: bool
    max_error: float = 0.0
    checks: dict = field(default_factory=dict)
    reports: dict = field(default_factory=dict)
    seconds: float = 0.0

    def as_dict(self):
        """Summary without wall time (reports stay byte-identical)."""
        return {
            'name': self.name,
            'passed': self.passed,
            'max_error': self.max_error,
            'checks': self.checks,
        }


def fixture(name):
    """Register a fixture function ``fn(config) -> FixtureResult``."""
    def decorator(fn):
        FIXTURES[name] = fn
        return fn
    return decorator


def _sample_s(lo, hi, points=10_000):
    return np.linspace(lo, hi, points)


def _sup_error(profile, expected, s):
    return float(np.max(np.abs(np.asarray(profile.tilde(s)) - expected(s))))


def _support_matches(report, atoms=(), intervals=(), slack=SUPPORT_SLACK):
    expected = SupportReport(atoms=tuple(atoms), density_intervals=tuple(intervals))
    return (report.covered_by(expected, rel_slack=slack, abs_slack=slack)
            and expected.covered_by(report, rel_slack=slack, abs_slack=slack))


def _mass_error(measure):
    target = lelong_mass(measure.dimension)
    return abs(measure.total_mass - target) / target


def _competitors_ok(solution, problem, config, seed_offset):
    rng = np.random.default_rng(config.seed + seed_offset)
    worst = -np.inf
    for competitor in random_competitors(solution, problem, config.competitors, rng):
        gap = np.asarray(competitor.tilde(solution.grid.s)) - np.asarray(
            solution.profile.tilde(solution.grid.s))
        worst = max(worst, float(gap.max()))
        if problem.mode == 'global':
            report = verify_domination(competitor, solution.profile, solution.measure,
                                       solution.check_s, support_report=solution.support)
            worst = max(worst, report.max_violation)
    return worst <= 1e-10, worst


def _solution_fixture(name, problem, config, expected, s_range, atoms=(), intervals=(),
                      seed_offset=0):
    sol = solve(problem, config.grid())
    error = _sup_error(sol.profile, expected, _sample_s(*s_range))
    checks = {
        'profile_error': error,
        'support': _support_matches(sol.support, atoms, intervals),
        'support_in_contact': sol.support.covered_by(sol.contact, abs_slack=1e-12),
    }
    competitors_ok, worst = _competitors_ok(sol, problem, config, seed_offset)
    checks['competitors_below'] = competitors_ok
    checks['competitor_gap'] = worst
    if problem.mode == 'global':
        checks['mass_error'] = _mass_error(sol.measure)
        checks['mass_ok'] = checks['mass_error'] <= MASS_TOLERANCE
    else:
        checks['boundary_value'] = float(sol.profile.tilde(to_log(problem.omega_radius)))
    passed = error <= PROFILE_TOLERANCE and all(
        v for k, v in checks.items() if isinstance(v, bool))
    return FixtureResult(name, passed, error, checks, {name: sol.as_dict()}), sol


def _lines(slopes, intercepts):
    return RadialProfile.from_lines(slopes, intercepts)


def example_one_weight():
    """Q = max(log r, -1/2) - 1."""
    return RadialWeight.scaled_profile(1.0, _lines([0.0, 0.5], [-1.5, -1.0]))


def example_two_weight():
    """Q = ½ max(log r, -1/2) - ½."""
    return RadialWeight.scaled_profile(1.0, _lines([0.0, 0.25], [-0.75, -0.5]))


def shell_weight(inner, outer):
    """Q = (r - r0 log r - r0 + r0 log R)/(R - r0)."""
    width = outer - inner
    return RadialWeight.sum(
        RadialWeight.power(1.0 / width, 1.0),
        RadialWeight.scaled_log(-inner / width, (inner * math.log(outer) - inner) / width),
    )


def _example_one(config, mode, omega=None):
    problem = Problem(config.dimension, RadialSet.ball(1.0), example_one_weight(), mode, omega)
    return solve(problem, config.grid()), problem


@fixture('example1_global')
def example1_global(config):
    problem = Problem(config.dimension, RadialSet.ball(1.0), example_one_weight())
    expected = _lines([0.0, 0.5], [-1.5, -1.0]).tilde
    result, _ = _solution_fixture('example1_global', problem, config, expected, (-12.0, 4.0),
                                  atoms=[math.exp(-0.5)], seed_offset=1)
    return result


@fixture('example1_relative_B2')
def example1_relative_b2(config):
    problem = Problem(config.dimension, RadialSet.ball(1.0), example_one_weight(),
                      'relative', 2.0)
    expected = _lines([0.0, 0.5, 0.5 / math.log(2.0)], [-1.5, -1.0, -1.0]).tilde
    result, _ = _solution_fixture(
        'example1_relative_B2', problem, config, expected, (-12.0, to_log(2.0)),
        atoms=[math.exp(-0.5), 1.0], seed_offset=2)
    return result


@fixture('example1_relative_Be')
def example1_relative_be(config):
    problem = Problem(config.dimension, RadialSet.ball(1.0), example_one_weight(),
                      'relative', math.e)
    expected = _lines([0.0, 0.5], [-1.5, -1.0]).tilde
    result, _ = _solution_fixture('example1_relative_Be', problem, config, expected,
                                  (-12.0, 2.0), atoms=[math.exp(-0.5)], seed_offset=3)
    return result


@fixture('example1_abs_continuity')
def example1_abs_continuity(config):
    relative, _ = _example_one(config, 'relative', 2.0)
    global_, _ = _example_one(config, 'global')
    verdict = compare_abs_continuity(relative.measure, global_.measure)
    passed = verdict.m1_ll_m2 is False and verdict.m2_ll_m1 is True
    return FixtureResult('example1_abs_continuity', passed, 0.0, verdict.as_dict())


def _example_two(config, mode, omega=None):
    problem = Problem(config.dimension, RadialSet.ball(1.0), example_two_weight(), mode, omega)
    return solve(problem, config.grid()), problem


@fixture('example2_global')
def example2_global(config):
    n = config.dimension
    problem = Problem(n, RadialSet.ball(1.0), example_two_weight())
    expected = _lines([0.0, 0.25, 0.5], [-0.75, -0.5, -0.5]).tilde
    result, sol = _solution_fixture('example2_global', problem, config, expected, (-12.0, 4.0),
                                    atoms=[math.exp(-0.5), 1.0], seed_offset=4)
    masses = [a.mass for a in sol.measure.atoms]
    want = [math.pi ** n, lelong_mass(n) - math.pi ** n]
    mass_error = max(abs(m - w) for m, w in zip(masses, want)) / lelong_mass(n) if len(
        masses) == 2 else math.inf
    result.checks['atom_mass_error'] = mass_error
    result.passed = result.passed and mass_error <= MASS_TOLERANCE
    return result


@fixture('example2_relative_Be')
def example2_relative_be(config):
    problem = Problem(config.dimension, RadialSet.ball(1.0), example_two_weight(),
                      'relative', math.e)
    expected = _lines([0.0, 0.25], [-0.75, -0.5]).tilde
    result, _ = _solution_fixture('example2_relative_Be', problem, config, expected,
                                  (-12.0, 2.0), atoms=[math.exp(-0.5)], seed_offset=5)
    return result


@fixture('example2_abs_continuity')
def example2_abs_continuity(config):
    global_, _ = _example_two(config, 'global')
    relative, _ = _example_two(config, 'relative', math.e)
    verdict = compare_abs_continuity(global_.measure, relative.measure)
    passed = verdict.m1_ll_m2 is False and verdict.m2_ll_m1 is True
    return FixtureResult('example2_abs_continuity', passed, 0.0, verdict.as_dict())


def sphere_radii(m):
    """r_i = 2^{i-1}."""
    return [2.0 ** i for i in range(m)]


@fixture('spheres')
def spheres(config):
    """Q_1 = 0 on B(0, r_1), Q_m = ½ V_{m-1} on B(0, r_m), m = 1..4."""
    n = config.dimension
    radii = sphere_radii(4)
    weight = RadialWeight.constant(0.0)
    slopes, intercepts = [0.0], [0.0]
    checks = {}
    worst = 0.0
    passed = True
    reports = {}
    for m, r in enumerate(radii, start=1):
        problem = Problem(n, RadialSet.ball(r), weight)
        top = _closed_top(slopes, intercepts, r)
        expected = _lines(slopes + [0.5], intercepts + [top]).tilde
        result, sol = _solution_fixture(
            f'spheres_m{m}', problem, config, expected, (-12.0, to_log(r) + 4.0),
            atoms=radii[:m], seed_offset=10 + m)
        checks[f'm{m}'] = result.checks
        worst = max(worst, result.max_error)
        passed = passed and result.passed
        reports.update(result.reports)
        # next weight and closed form: half of this extremal function
        slopes = [0.5 * a for a in slopes + [0.5]]
        intercepts = [0.5 * b for b in intercepts + [top]]
        weight = RadialWeight.scaled_profile(0.5, sol.profile)
    return FixtureResult('spheres', passed, worst, checks, reports)


def _closed_top(slopes, intercepts, radius):
    """Intercept of the slope-1/2 ray leaving max_j(a_j s + b_j) at s = log r^2."""
    s = to_log(radius)
    value = max(a * s + b for a, b in zip(slopes, intercepts))
    return value - 0.5 * s


def shell_closed_form(inner, outer):
    """V for the shell weight: Q(r0) inside, Q on the shell, log(r/R) + 1 outside."""
    weight = shell_weight(inner, outer)
    lo, hi = to_log(inner), to_log(outer)
    floor = weight.tilde(lo)
    top = weight.tilde(hi)

    def expected(s):
        s = np.asarray(s, dtype=float)
        inside = np.clip(s, lo, hi)
        return np.where(s > hi, top + 0.5 * (s - hi), np.where(s < lo, floor,
                                                                 weight.tilde(inside)))
    return expected


@fixture('shell')
def shell(config):
    n = config.dimension
    inner, outer = 1.0, math.e
    problem = Problem(n, RadialSet.shell(inner, outer), shell_weight(inner, outer))
    result, sol = _solution_fixture(
        'shell', problem, config, shell_closed_form(inner, outer), (-6.0, 6.0),
        intervals=[(inner, outer)], seed_offset=20)
    template = shell_measure(inner, outer, n)
    t = np.linspace(0.0, 4.0, 10_000)
    cdf_error = float(np.max(np.abs(np.asarray(sol.measure.cdf(t)) - template.cdf(t))))
    cdf_error /= lelong_mass(n)
    result.checks['cdf_error'] = cdf_error
    result.passed = result.passed and cdf_error <= PROFILE_TOLERANCE
    return result


@fixture('shell_reconstruct')
def shell_reconstruct(config):
    """reconstruct(shell CDF, u0 = 0) equals the closed form minus Q(r0)."""
    n = config.dimension
    inner, outer = 1.0, math.e
    profile = reconstruct(shell_measure(inner, outer, n), n, 0.0)
    closed = shell_closed_form(inner, outer)
    offset = float(shell_weight(inner, outer).tilde(0.0))
    error = _sup_error(profile, lambda s: closed(s) - offset, _sample_s(-6.0, 6.0))
    flags = check_class(profile)
    checks = {'profile_error': error, 'in_L_plus': flags.in_L_plus,
              'bounded_below': flags.bounded_below}
    return FixtureResult('shell_reconstruct', error <= 1e-8 and flags.in_L_plus, error, checks)


def _quadratic_fixture(name, coefficient, config):
    radius = 1.0
    problem = quadratic_ball_problem(coefficient, radius, config.dimension)

    def expected(s):
        s = np.asarray(s, dtype=float)
        return np.where(s <= 0.0, coefficient * (np.exp(np.minimum(s, 0.0)) - 1.0), 0.5 * s)
    result, _ = _solution_fixture(name, problem, config, expected, (-12.0, 4.0),
                                  intervals=[(0.0, radius)], seed_offset=30)
    return result


@fixture('quadratic_ball_A0.3')
def quadratic_ball_03(config):
    return _quadratic_fixture('quadratic_ball_A0.3', 0.3, config)


@fixture('quadratic_ball_A0.5')
def quadratic_ball_05(config):
    return _quadratic_fixture('quadratic_ball_A0.5', 0.5, config)


@fixture('quadratic_threshold_R2')
def quadratic_threshold(config):
    report = quadratic_ball_threshold(2.0, config.dimension)
    error = abs(report.threshold - 0.125)
    passed = error <= 1e-6 and report.matches == '2AR^2 <= 1'
    return FixtureResult('quadratic_threshold_R2', passed, error, report.as_dict())


@fixture('disc_reflection')
def disc_reflection(config):
    h = HarmonicPolynomial(0.0, cos=(0.5,))
    g = disc_reflection_glue(h)
    gap = g.interface_gap(seed=config.seed)
    report = submean_check(g, config.samples, seed=config.seed)
    far = np.exp(np.linspace(np.log(10.0), np.log(100.0), 64))[:, None].astype(complex)
    growth = float(np.max(np.abs(g(far) - np.log(np.abs(far[:, 0])) - h(1.0 / far[:, 0]))))
    checks = {'interface_gap': gap, 'submean': report.as_dict(), 'growth_error': growth}
    passed = gap <= 1e-10 and report.violations == 0 and growth <= 1e-12
    return FixtureResult('disc_reflection', passed, gap, checks)


@fixture('disc_reflection_rejected')
def disc_reflection_rejected(config):
    try:
        disc_reflection_glue(HarmonicPolynomial(0.0, cos=(1.0,)))
    except GlueRejected as exc:
        return FixtureResult('disc_reflection_rejected', abs(exc.worst_theta) <= 1e-12, 0.0,
                             {'worst_theta': exc.worst_theta, 'worst_value': exc.worst_value})
    return FixtureResult('disc_reflection_rejected', False, 0.0, {'rejected': False})


def _quadratic_glue(name, factor, config):
    n = config.dimension
    radius = 1.0
    coefficient = factor / (2.0 * radius ** 2)
    inner = RadialWeight.power(coefficient, 2.0, -coefficient * radius ** 2)
    outer = RadialWeight.scaled_log(1.0, -math.log(radius))
    check = radial_glue_check(inner, outer, radius)
    g = radial_glue(inner, outer, radius, n, label=name)
    report = submean_check(g, config.samples, seed=config.seed)
    checks = {'glue': check.as_dict(), 'submean': report.as_dict()}
    return check, report, checks


@fixture('quadratic_glue_threshold')
def quadratic_glue_threshold(config):
    check, report, checks = _quadratic_glue('quadratic_glue_threshold', 1.0, config)
    passed = check.accepted and abs(check.margin) <= 1e-12 and report.violations == 0
    return FixtureResult('quadratic_glue_threshold', passed, abs(check.margin), checks)


@fixture('quadratic_glue_steep')
def quadratic_glue_steep(config):
    check, report, checks = _quadratic_glue('quadratic_glue_steep', 1.2, config)
    passed = check.derivative_ok is False and report.violations >= 1
    return FixtureResult('quadratic_glue_steep', passed, 0.0, checks)


def _boundary_fixture(name, weight, config, expect_boundary=True):
    problem = Problem(config.dimension, RadialSet.ball(1.0), weight)
    sol = solve(problem, config.grid())
    report = boundary_support_check(problem, sol)
    if expect_boundary:
        passed = report.applicable and bool(report.support_on_boundary) and _support_matches(
            sol.support, atoms=[1.0])
    else:
        passed = not report.applicable and _support_matches(sol.support,
                                                            intervals=[(0.0, 1.0)])
    return FixtureResult(name, passed, 0.0, report.as_dict(), {name: sol.as_dict()})


@fixture('superharmonic_r2')
def superharmonic_r2(config):
    return _boundary_fixture('superharmonic_r2', RadialWeight.power(-1.0, 2.0), config)


@fixture('superharmonic_r4')
def superharmonic_r4(config):
    return _boundary_fixture('superharmonic_r4', RadialWeight.power(-1.0, 4.0), config)


@fixture('harmonic_constant')
def harmonic_constant(config):
    return _boundary_fixture('harmonic_constant', RadialWeight.constant(0.0), config)


@fixture('subharmonic_quadratic')
def subharmonic_quadratic(config):
    weight = RadialWeight.power(0.3, 2.0, -0.3)
    return _boundary_fixture('subharmonic_quadratic', weight, config, expect_boundary=False)


def union_components(count, dimension):
    """Alternating spheres (odd i, radius i) and shells (even i, [i - 1/2, i])."""
    for i in range(1, count + 1):
        if i % 2:
            yield sphere_measure(float(i), dimension)
        else:
            yield shell_measure(i - 0.5, float(i), dimension)


@fixture('countable_union')
def countable_union(config):
    n = config.dimension
    k = config.truncation
    partial, deficit = truncated_union(union_components(k, n), k)
    folded, _ = truncated_union(union_components(k, n), k, fold_tail=True)
    profile = reconstruct(folded, n, 0.0)
    rebuilt = ma_cdf(profile, n)
    t = np.linspace(0.0, k + 1.0, 10_000)
    cdf_error = float(np.max(np.abs(np.asarray(rebuilt.cdf(t)) - folded.cdf(t))))
    deficit_error = abs(lelong_mass(n) - partial.total_mass - deficit)
    atoms = [float(i) for i in range(1, k + 1, 2)]
    intervals = [(i - 0.5, float(i)) for i in range(2, k + 1, 2)]
    checks = {
        'cdf_error': cdf_error,
        'deficit': deficit,
        'deficit_error': deficit_error,
        'in_L_plus': check_class(profile).in_L_plus,
        'support': _support_matches(support(rebuilt), atoms, intervals),
    }
    passed = (cdf_error <= ROUND_TRIP_TOLERANCE and deficit_error <= 1e-9 * lelong_mass(n)
              and checks['in_L_plus'] and checks['support'])
    return FixtureResult('countable_union', passed, cdf_error, checks)


@fixture('mass_normalization')
def mass_normalization(config):
    checks = {}
    worst = 0.0
    for n in (1, 2, 3, 4):
        problem = Problem(n, RadialSet.ball(1.0), example_two_weight())
        sol = solve(problem, config.grid())
        shell_sol = solve(Problem(n, RadialSet.shell(1.0, math.e), shell_weight(1.0, math.e)),
                          config.grid())
        errors = [_mass_error(sol.measure), _mass_error(shell_sol.measure)]
        checks[f'n{n}'] = errors
        worst = max(worst, *errors)
    return FixtureResult('mass_normalization', worst <= MASS_TOLERANCE, worst, checks)


def run_fixture(name, config):
    """Run one fixture; exceptions count as a FAIL with the message."""
    started = time.perf_counter()
    try:
        result = FIXTURES[name](config)
    except Exception as exc:  # pylint: disable=broad-except
        logger.exception('fixture %s raised', name)
        result = FixtureResult(name, False, math.inf, {'error': f'{type(exc).__name__}: {exc}'})
    result.seconds = time.perf_counter() - started
    return result


def run_gallery(config=None, names=None, workers=1):
    """Run fixtures (concurrently with ``workers`` > 1); results keep catalogue order."""
    config = config or GalleryConfig()
    names = list(names or FIXTURES)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda name: run_fixture(name, config), names))
    return [run_fixture(name, config) for name in names]
