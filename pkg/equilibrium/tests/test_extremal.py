"""Tests for the envelope solver and the analyses built on it."""
import math

import numpy as np
from django.test import SimpleTestCase

from equilibrium.exceptions import DomainError, StructuralError, UnsupportedWeight
from equilibrium.extremal import (
    GridSpec, Problem, boundary_support_check, classify_weight, compare_abs_continuity,
    constraint_grid, contact_set, lower_hull, quadratic_ball_problem, quadratic_ball_threshold,
    random_competitors, solve, solve_global, solve_relative, verify_domination,
)
from equilibrium.monge_ampere import lelong_mass
from equilibrium.persson import shell_measure, sphere_measure
from equilibrium.radial_core import RadialProfile, RadialSet, RadialWeight, check_class

GRID = GridSpec(points=512, s_min=-30.0, tolerance=None)


class LowerHullTests(SimpleTestCase):

    def test_drops_points_above_the_hull(self):
        xs = np.array([0.0, 1.0, 2.0, 3.0])
        ys = np.array([0.0, 2.0, 1.0, 0.0])
        self.assertEqual(list(lower_hull(xs, ys)), [0, 3])

    def test_collinear_points_dropped(self):
        xs = np.arange(5.0)
        self.assertEqual(list(lower_hull(xs, 2 * xs)), [0, 4])


class ProblemTests(SimpleTestCase):

    def test_relative_needs_radius(self):
        with self.assertRaises(StructuralError):
            Problem(1, RadialSet.ball(1.0), RadialWeight.constant(0.0), 'relative')

    def test_omega_must_contain_K(self):
        with self.assertRaises(DomainError):
            Problem(1, RadialSet.ball(2.0), RadialWeight.constant(0.0), 'relative', 1.5)

    def test_unknown_mode(self):
        with self.assertRaises(StructuralError):
            Problem(1, RadialSet.ball(1.0), RadialWeight.constant(0.0), 'local')

    def test_grid_window_must_be_ordered(self):
        with self.assertRaises(StructuralError):
            GridSpec(s_min=0.0, s_max=0.0)

    def test_constraint_grid_covers_components(self):
        problem = Problem(1, RadialSet(((0.0, 1.0), (2.0, 2.0))), RadialWeight.constant(0.0))
        cgrid = constraint_grid(problem, GRID)
        self.assertEqual(set(cgrid.component.tolist()), {0, 1})
        self.assertAlmostEqual(cgrid.s.max(), 2 * math.log(2.0))
        self.assertEqual(cgrid.s.min(), -30.0)


class GlobalSolveTests(SimpleTestCase):
    """V_{K,Q} for closed-form cases."""

    def test_unit_ball_without_weight(self):
        for n in (1, 2):
            sol = solve(Problem(n, RadialSet.ball(1.0), RadialWeight.constant(0.0)), GRID)
            s = np.linspace(-10.0, 10.0, 101)
            np.testing.assert_allclose(sol.profile.tilde(s), np.maximum(s / 2, 0.0), atol=1e-10)
            self.assertEqual(sol.support.atoms, (1.0,))
            self.assertEqual(sol.support.density_intervals, ())
            self.assertAlmostEqual(sol.measure.total_mass, lelong_mass(n), delta=1e-9)
            self.assertTrue(check_class(sol.profile).in_L_plus)

    def test_sphere(self):
        sol = solve_global(Problem(2, RadialSet.sphere(2.0), RadialWeight.constant(0.0)), GRID)
        self.assertAlmostEqual(sol.profile.value(1.0), 0.0)
        self.assertAlmostEqual(sol.profile.value(2.0 * math.e), 1.0)
        np.testing.assert_allclose(sol.support.atoms, [2.0])

    def test_shifted_constant_weight(self):
        sol = solve(Problem(1, RadialSet.ball(1.0), RadialWeight.constant(-1.0)), GRID)
        self.assertAlmostEqual(sol.profile.value(0.5), -1.0)
        self.assertAlmostEqual(sol.profile.value(math.e), 0.0)

    def test_quadratic_weight_touches_whole_ball(self):
        problem = quadratic_ball_problem(0.3, 1.0, 2)
        sol = solve(problem, GridSpec(points=256, s_min=-20.0))
        for r in (0.1, 0.5, 0.9):
            self.assertAlmostEqual(sol.profile.value(r), 0.3 * (r * r - 1.0), places=8)
        self.assertEqual(len(sol.support.density_intervals), 1)
        lo, hi = sol.support.density_intervals[0]
        self.assertLess(lo, 1e-3)
        self.assertAlmostEqual(hi, 1.0)
        self.assertAlmostEqual(sol.measure.total_mass, lelong_mass(2), delta=1e-8)

    def test_steep_weight_is_not_reached_everywhere(self):
        # Q = max(log r, -1/2) - 1 on the closed unit ball
        weight = RadialWeight.scaled_profile(1.0, RadialProfile.from_lines([0.0, 0.5],
                                                                           [-1.5, -1.0]))
        sol = solve(Problem(1, RadialSet.ball(1.0), weight), GRID)
        s = np.linspace(-6.0, 6.0, 61)
        np.testing.assert_allclose(sol.profile.tilde(s), np.maximum(s / 2, -0.5) - 1.0,
                                   atol=1e-10)
        # log r carries no Monge-Ampère mass off the origin: only the kink charges
        np.testing.assert_allclose(sol.support.atoms, [math.exp(-0.5)])
        self.assertEqual(sol.support.density_intervals, ())
        self.assertAlmostEqual(sol.measure.total_mass, 2 * math.pi)

    def test_diagnostics(self):
        sol = solve(Problem(1, RadialSet.ball(1.0), RadialWeight.constant(0.0)), GRID)
        self.assertTrue(sol.diagnostics['domination']['dominated'])
        self.assertLessEqual(sol.diagnostics['max_violation'], 1e-12)
        report = sol.as_dict()
        self.assertEqual(report['mode'], 'global')
        self.assertTrue(report['class']['in_L_plus'])

    def test_contact_set_contains_support(self):
        problem = Problem(1, RadialSet.ball(1.0), RadialWeight.constant(0.0))
        sol = solve(problem, GRID)
        contact = contact_set(sol, problem)
        self.assertEqual(contact.components(), [(0.0, 1.0)])
        self.assertTrue(sol.support.covered_by(contact))

    def test_solve_global_refuses_relative(self):
        problem = Problem(1, RadialSet.ball(1.0), RadialWeight.constant(-1.0), 'relative', 2.0)
        with self.assertRaises(DomainError):
            solve_global(problem, GRID)

    def test_larger_weight_gives_larger_extremal_function(self):
        rng = np.random.default_rng(7)
        s = np.linspace(-12.0, 8.0, 401)
        for _ in range(5):
            n = int(rng.integers(1, 4))
            domain = RadialSet(((0.0, 1.0), (1.5, 2.5)))
            small = RadialWeight.sum(RadialWeight.power(rng.uniform(0.1, 1.0), 2.0),
                                     RadialWeight.constant(rng.uniform(-1.0, 0.0)))
            bump = RadialWeight.power(rng.uniform(0.0, 0.5), rng.uniform(0.5, 2.0),
                                      rng.uniform(0.0, 0.3))
            large = RadialWeight.sum(small, bump)
            low = solve(Problem(n, domain, small), GRID).profile
            high = solve(Problem(n, domain, large), GRID).profile
            self.assertTrue(np.all(np.asarray(low.tilde(s)) <= np.asarray(high.tilde(s)) + 1e-10))

    def test_domination_grid_reaches_past_the_set(self):
        problem = Problem(1, RadialSet.ball(1.0), RadialWeight.constant(0.0))
        sol = solve(problem, GRID)
        self.assertEqual(sol.check_s.min(), GRID.s_min)
        self.assertAlmostEqual(sol.check_s.max(), GRID.margin)
        wide = solve(problem, GridSpec(points=512, s_min=-30.0, s_max=9.0, tolerance=None))
        self.assertEqual(wide.check_s.max(), 9.0)
        self.assertTrue(np.all(np.isin(wide.grid.s, wide.check_s)))

    def test_domination_grid_catches_violations_off_the_set(self):
        # the reference agrees with log+ at r = 1 but turns up only at r = e^2
        reference = RadialProfile.from_lines([0.0, 0.5], [0.0, -2.0])
        candidate = RadialProfile.from_lines([0.0, 0.5], [0.0, 0.0])
        measure = sphere_measure(1.0, 1)
        on_set = verify_domination(candidate, reference, measure, np.array([0.0]))
        self.assertTrue(on_set.dominated)
        sol = solve(Problem(1, RadialSet.sphere(1.0), RadialWeight.constant(0.0)), GRID)
        swept = verify_domination(candidate, reference, measure, sol.check_s)
        self.assertTrue(swept.support_ok)
        self.assertFalse(swept.dominated)
        self.assertAlmostEqual(swept.max_violation, 1.0)


class RelativeSolveTests(SimpleTestCase):
    """U_{K,Q,Ω} with Ω = B(0, R)."""

    def test_ball_in_larger_ball(self):
        problem = Problem(1, RadialSet.ball(1.0), RadialWeight.constant(-1.0), 'relative', math.e)
        sol = solve_relative(problem, GRID)
        self.assertAlmostEqual(sol.profile.value(0.5), -1.0)
        self.assertAlmostEqual(sol.profile.value(math.sqrt(math.e)), -0.5)
        self.assertAlmostEqual(sol.diagnostics['boundary_value'], 0.0)
        self.assertEqual(sol.support.atoms, (1.0,))

    def test_positive_weight_rejected(self):
        problem = Problem(1, RadialSet.ball(1.0), RadialWeight.constant(1.0), 'relative', 2.0)
        with self.assertRaises(DomainError):
            solve(problem, GRID)


class DominationTests(SimpleTestCase):

    def test_dominated_candidate(self):
        reference = RadialProfile.from_lines([0.0, 0.5], [0.0, 0.0])
        candidate = RadialProfile.from_lines([0.0, 0.5], [-0.1, -0.1])
        measure = sphere_measure(1.0, 1)
        report = verify_domination(candidate, reference, measure, np.linspace(-5, 5, 101))
        self.assertTrue(report.support_ok)
        self.assertTrue(report.dominated)
        self.assertTrue(report.consistent)

    def test_violation_on_support(self):
        reference = RadialProfile.from_lines([0.0, 0.5], [0.0, 0.0])
        candidate = RadialProfile.constant(0.5)
        report = verify_domination(candidate, reference, sphere_measure(1.0, 1),
                                   np.linspace(-5, 5, 101))
        self.assertFalse(report.support_ok)
        self.assertAlmostEqual(report.support_violation, 0.5)

    def test_candidate_outside_L(self):
        reference = RadialProfile.from_lines([0.0, 0.5], [0.0, 0.0])
        with self.assertRaises(DomainError):
            verify_domination(RadialProfile([0.0], [0.0], 0.0, 1.0), reference,
                              sphere_measure(1.0, 1), np.zeros(1))

    def test_random_competitors_stay_below(self):
        problem = Problem(2, RadialSet.ball(1.0), RadialWeight.constant(0.0))
        sol = solve(problem, GRID)
        rng = np.random.default_rng(7)
        s = np.linspace(-20.0, 20.0, 401)
        for competitor in random_competitors(sol, problem, 25, rng):
            self.assertTrue(check_class(competitor).in_L)
            self.assertTrue(np.all(competitor.tilde(s) <= sol.profile.tilde(s) + 1e-10))


class AbsoluteContinuityTests(SimpleTestCase):

    def test_atom_versus_density(self):
        verdict = compare_abs_continuity(sphere_measure(1.0, 1), shell_measure(0.0, 1.0, 1))
        self.assertFalse(verdict.m1_ll_m2)
        self.assertFalse(verdict.m2_ll_m1)
        self.assertEqual(len(verdict.reasons), 2)

    def test_nested_supports(self):
        verdict = compare_abs_continuity(shell_measure(1.0, 2.0, 1), shell_measure(0.5, 3.0, 1))
        self.assertTrue(verdict.m1_ll_m2)
        self.assertFalse(verdict.m2_ll_m1)

    def test_same_measure(self):
        verdict = compare_abs_continuity(sphere_measure(2.0, 2), sphere_measure(2.0, 2, mass=1.0))
        self.assertTrue(verdict.m1_ll_m2)
        self.assertTrue(verdict.m2_ll_m1)


class ClassificationTests(SimpleTestCase):
    """Laplacian sign of Q and the support-on-boundary check."""

    def test_classify(self):
        ball = RadialSet.ball(2.0)
        cases = {
            'superharmonic': RadialWeight.power(-0.1, 2.0),
            'harmonic': RadialWeight.constant(0.0),
            'subharmonic': RadialWeight.power(0.1, 2.0),
        }
        for expected, weight in cases.items():
            self.assertEqual(classify_weight(Problem(2, ball, weight)), expected)

    def test_log_weight_harmonic_only_in_one_variable(self):
        shell = RadialSet.shell(1.0, 2.0)
        self.assertEqual(classify_weight(Problem(1, shell, RadialWeight.scaled_log(1.0))),
                         'harmonic')
        self.assertEqual(classify_weight(Problem(2, shell, RadialWeight.scaled_log(1.0))),
                         'subharmonic')

    def test_table_weight_unsupported(self):
        weight = RadialWeight.table([-1.0, 0.0], [0.0, 1.0])
        with self.assertRaises(UnsupportedWeight):
            classify_weight(Problem(1, RadialSet.ball(1.0), weight))

    def test_sphere_has_no_interior(self):
        with self.assertRaises(DomainError):
            classify_weight(Problem(1, RadialSet.sphere(1.0), RadialWeight.constant(0.0)))

    def test_harmonic_weight_lives_on_boundary(self):
        problem = Problem(2, RadialSet.ball(1.0), RadialWeight.constant(0.0))
        report = boundary_support_check(problem, grid=GRID)
        self.assertTrue(report.applicable)
        self.assertTrue(report.support_on_boundary)

    def test_subharmonic_not_applicable(self):
        problem = quadratic_ball_problem(0.3, 1.0, 2)
        report = boundary_support_check(problem)
        self.assertFalse(report.applicable)
        self.assertIsNone(report.support_on_boundary)


class ThresholdTests(SimpleTestCase):

    def test_quadratic_threshold_radius_two(self):
        report = quadratic_ball_threshold(2.0, 1, tol=1e-8, points=1024)
        self.assertAlmostEqual(report.threshold, 0.125, delta=1e-6)
        self.assertEqual(report.matches, '2AR^2 <= 1')
        self.assertAlmostEqual(report.as_dict()['2AR^2'], 1.0, delta=1e-5)


class RandomProblemTests(SimpleTestCase):
    """Support inside the contact set and full mass on random radial problems."""

    def random_problem(self, rng):
        n = int(rng.integers(1, 4))
        r = np.sort(rng.uniform(0.3, 4.0, size=4))
        ball = rng.random() < 0.5
        first = (0.0, r[1]) if ball else (r[0], r[1])
        second = (r[2], r[2]) if rng.random() < 0.5 else (r[2], r[3])
        terms = [
            RadialWeight.power(rng.uniform(0.0, 1.0), rng.uniform(0.5, 3.0)),
            RadialWeight.constant(rng.uniform(-1.0, 1.0)),
        ]
        if not ball:
            terms.append(RadialWeight.scaled_log(rng.uniform(-1.0, 1.0)))
        return Problem(n, RadialSet((first, second)), RadialWeight.sum(*terms))

    def test_random_problems(self):
        rng = np.random.default_rng(42)
        for _ in range(100):
            problem = self.random_problem(rng)
            with self.subTest(problem=problem.as_dict()):
                sol = solve(problem, GRID)
                self.assertTrue(sol.support.covered_by(sol.contact, abs_slack=1e-12))
                self.assertTrue(check_class(sol.profile).in_L_plus)
                mass = lelong_mass(problem.dimension)
                self.assertLessEqual(abs(sol.measure.total_mass - mass), 1e-8 * mass)
