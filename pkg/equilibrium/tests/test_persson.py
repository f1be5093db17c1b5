"""Tests for reconstructing radial psh functions from their measures."""
import math

import numpy as np
from django.test import SimpleTestCase

from equilibrium.exceptions import DomainError
from equilibrium.monge_ampere import Atom, PowerSegment, RadialMeasure, lelong_mass, ma_cdf
from equilibrium.persson import (
    admissible, mixture, reconstruct, shell_measure, sphere_measure, table_measure,
    truncated_union,
)
from equilibrium.radial_core import RadialProfile, check_class


class AdmissibilityTests(SimpleTestCase):

    def test_sphere_is_admissible(self):
        self.assertTrue(admissible(sphere_measure(1.0, 2), 2))

    def test_origin_atom_diverges(self):
        verdict = admissible(RadialMeasure(1, (Atom(0.0, 1.0),)), 1)
        self.assertFalse(verdict)
        self.assertIn('origin', verdict.diagnostic)
        with self.assertRaises(DomainError):
            reconstruct(RadialMeasure(1, (Atom(0.0, 1.0),)), 1)

    def test_dimension_mismatch(self):
        self.assertFalse(admissible(sphere_measure(1.0, 2), 3))


class ReconstructTests(SimpleTestCase):
    """u(z) = u0 + ∫ (2/t) (f/(4π)^n)^{1/n} dt."""

    def test_sphere_gives_log_plus(self):
        for n in (1, 2, 3):
            profile = reconstruct(sphere_measure(1.0, n), n)
            radii = np.array([0.25, 1.0, math.e, 10.0])
            np.testing.assert_allclose(profile.value(radii), np.maximum(np.log(radii), 0.0),
                                       atol=1e-12)
            self.assertTrue(check_class(profile).in_L_plus)

    def test_u0_shifts(self):
        profile = reconstruct(sphere_measure(2.0, 1), 1, u0=-3.0)
        self.assertAlmostEqual(profile.value(1.0), -3.0)
        self.assertAlmostEqual(profile.value(2.0 * math.e), -2.0)

    def test_uniform_ball_density(self):
        # f(t) = 2π t on [0, 1] in C: u = r inside the unit disc, 1 + log r outside
        profile = reconstruct(shell_measure(0.0, 1.0, 1), 1)
        for r in (0.1, 0.5, 0.9):
            self.assertAlmostEqual(profile.value(r), r, places=7)
        self.assertAlmostEqual(profile.value(math.e), 2.0, places=7)
        self.assertTrue(check_class(profile).in_L_plus)

    def test_round_trip_through_ma_cdf(self):
        original = RadialProfile.from_lines([0.0, 0.25, 0.5], [0.0, 0.0, -0.5])
        measure = ma_cdf(original, 2)
        rebuilt = reconstruct(measure, 2)
        s = np.linspace(-4.0, 6.0, 41)
        np.testing.assert_allclose(rebuilt.tilde(s), original.tilde(s), atol=1e-9)

    def test_zero_measure_gives_constant(self):
        profile = reconstruct(RadialMeasure(2), 2, u0=1.5)
        self.assertEqual(profile.value(7.0), 1.5)
        self.assertEqual(profile.right_slope, 0.0)

    def test_partial_mass_is_in_L_only(self):
        profile = reconstruct(sphere_measure(1.0, 1, mass=math.pi), 1)
        flags = check_class(profile)
        self.assertTrue(flags.in_L)
        self.assertFalse(flags.in_L_plus)
        self.assertAlmostEqual(profile.right_slope, 0.25)

    def test_table_measure(self):
        measure = table_measure(1, [1.0, 2.0], [0.0, 2 * math.pi])
        profile = reconstruct(measure, 1)
        self.assertAlmostEqual(profile.right_slope, 0.5)
        self.assertEqual(profile.value(1.0), 0.0)


class ConstructionTests(SimpleTestCase):
    """Sphere, shell, mixture and union measures."""

    def test_shell_total_mass(self):
        measure = shell_measure(1.0, 2.0, 3)
        self.assertAlmostEqual(measure.total_mass, lelong_mass(3))
        self.assertEqual(measure.cdf(1.0), 0.0)

    def test_bad_shell(self):
        with self.assertRaises(DomainError):
            shell_measure(2.0, 1.0, 1)

    def test_mixture(self):
        measure = mixture([sphere_measure(1.0, 1), sphere_measure(2.0, 1)], [0.25, 0.75])
        self.assertAlmostEqual(measure.total_mass, 2 * math.pi)
        self.assertAlmostEqual(measure.atoms[0].mass, 0.5 * math.pi)

    def test_mixture_weights_above_one(self):
        with self.assertRaises(DomainError):
            mixture([sphere_measure(1.0, 1)] * 2, [0.5, 0.6])

    def test_mixture_dimensions_must_agree(self):
        with self.assertRaises(DomainError):
            mixture([sphere_measure(1.0, 1), sphere_measure(1.0, 2)], [0.5, 0.5])

    def test_truncated_union_deficit(self):
        spheres = (sphere_measure(2.0 ** i, 2) for i in range(100))
        measure, deficit = truncated_union(spheres, depth=10)
        self.assertEqual(len(measure.atoms), 10)
        self.assertAlmostEqual(deficit, 2.0 ** -10 * lelong_mass(2))
        self.assertAlmostEqual(measure.total_mass + deficit, lelong_mass(2))

    def test_truncated_union_fold_tail(self):
        spheres = [sphere_measure(2.0 ** i, 1) for i in range(5)]
        measure, deficit = truncated_union(spheres, depth=5, fold_tail=True)
        self.assertEqual(deficit, 0.0)
        self.assertAlmostEqual(measure.total_mass, lelong_mass(1))
        self.assertTrue(check_class(reconstruct(measure, 1)).in_L_plus)


class RoundTripTests(SimpleTestCase):
    """ma_cdf(reconstruct(μ)) = μ on random piecewise-power measures."""

    def random_measure(self, rng):
        n = int(rng.integers(1, 3))
        budget = lelong_mass(n) * rng.uniform(0.3, 1.0)
        shares = rng.dirichlet(np.ones(3)) * budget
        atoms = (Atom(float(rng.uniform(0.2, 3.0)), float(shares[0])),)
        segments = []
        for share in shares[1:]:
            start = float(rng.choice([0.0, rng.uniform(0.1, 2.0)]))
            end = start + float(rng.uniform(0.2, 1.5))
            exponent = float(rng.uniform(1.0, 3.0))
            segments.append(PowerSegment(start, end, share / (end - start) ** exponent,
                                         exponent))
        return RadialMeasure(n, atoms, tuple(segments))

    def test_random_measures(self):
        rng = np.random.default_rng(20260117)
        for _ in range(200):
            measure = self.random_measure(rng)
            radii = [a.radius for a in measure.atoms]
            t = np.union1d(np.linspace(0.0, 5.0, 10_000), radii)
            with self.subTest(measure=measure.as_dict()):
                profile = reconstruct(measure, measure.dimension)
                self.assertTrue(check_class(profile).is_psh_radial)
                rebuilt = ma_cdf(profile, measure.dimension)
                distance = np.max(np.abs(np.asarray(rebuilt.cdf(t)) - measure.cdf(t)))
                self.assertLessEqual(distance, 1e-8)

    def test_atom_radius_survives(self):
        profile = reconstruct(sphere_measure(3.0, 1), 1)
        rebuilt = ma_cdf(profile, 1)
        self.assertEqual([a.radius for a in rebuilt.atoms], [3.0])
        self.assertAlmostEqual(rebuilt.cdf(3.0), 2 * math.pi, places=12)
        self.assertEqual(rebuilt.left_limit(3.0), 0.0)

    def test_two_powers_from_the_origin_stay_convex(self):
        segments = (PowerSegment(0.0, 0.7, 5.0, 1.3), PowerSegment(0.0, 1.9, 3.0, 2.6))
        measure = RadialMeasure(2, (), segments)
        profile = reconstruct(measure, 2)
        self.assertTrue(check_class(profile).is_psh_radial)
        t = np.linspace(0.0, 2.5, 10_000)
        rebuilt = ma_cdf(profile, 2)
        self.assertLessEqual(np.max(np.abs(np.asarray(rebuilt.cdf(t)) - measure.cdf(t))), 1e-8)
