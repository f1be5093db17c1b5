"""Tests for Monge-Ampère measures of radial profiles."""
import math

import numpy as np
from django.test import SimpleTestCase

from equilibrium.exceptions import DomainError, StructuralError
from equilibrium.monge_ampere import (
    Atom, PowerSegment, RadialMeasure, SupportReport, TableSegment, lelong_mass, ma_cdf,
    mass_constant, support, total_mass,
)
from equilibrium.radial_core import RadialProfile, scale_profile


class ConstantTests(SimpleTestCase):

    def test_mass_constant_is_four_pi_to_the_n(self):
        for n in range(1, 6):
            self.assertAlmostEqual(mass_constant(n), (4 * math.pi) ** n, delta=1e-9 * 4 ** n)


class MaCdfTests(SimpleTestCase):
    """(dd^c u)^n of piecewise-linear and tangent-carrying profiles."""

    def test_log_plus_is_uniform_on_unit_sphere(self):
        for n in (1, 2, 3):
            measure = ma_cdf(RadialProfile.from_lines([0.0, 0.5], [0.0, 0.0]), n)
            self.assertEqual(len(measure.atoms), 1)
            self.assertEqual(measure.atoms[0].radius, 1.0)
            self.assertAlmostEqual(measure.total_mass, lelong_mass(n), delta=1e-9 * lelong_mass(n))

    def test_two_kinks(self):
        # slopes 0 -> 1/4 -> 1/2 with kinks at r = 1 and r = e
        profile = RadialProfile.from_lines([0.0, 0.25, 0.5], [0.0, 0.0, -0.5])
        measure = ma_cdf(profile, 2)
        radii = [a.radius for a in measure.atoms]
        np.testing.assert_allclose(radii, [1.0, math.e])
        np.testing.assert_allclose(measure.atoms[0].mass, math.pi ** 2)
        np.testing.assert_allclose(measure.total_mass, lelong_mass(2))

    def test_cdf_right_continuous(self):
        measure = ma_cdf(RadialProfile.from_lines([0.0, 0.5], [0.0, 0.0]), 1)
        self.assertEqual(measure.left_limit(1.0), 0.0)
        self.assertAlmostEqual(measure.cdf(1.0), 2 * math.pi)

    def test_tangent_data_gives_density(self):
        # sampled ũ = e^s/4 on [-2, 0] joined to s/2 + 1/4 after
        s = np.linspace(-2.0, 0.0, 201)
        below = np.concatenate(([0.0], np.exp(s[1:]) / 4))
        above = np.concatenate((np.exp(s[:-1]) / 4, [0.5]))
        profile = RadialProfile(s, np.exp(s) / 4, 0.0, 0.5, below, above)
        measure = ma_cdf(profile, 1)
        self.assertEqual(len(measure.segments), 1)
        report = support(measure)
        self.assertEqual(len(report.density_intervals), 1)
        lo, hi = report.density_intervals[0]
        self.assertAlmostEqual(lo, math.exp(-1.0))
        self.assertAlmostEqual(hi, 1.0)
        self.assertAlmostEqual(measure.total_mass, 2 * math.pi)

    def test_origin_atom_for_log_pole(self):
        measure = ma_cdf(RadialProfile([0.0], [0.0], 0.5, 0.5), 1)
        self.assertAlmostEqual(measure.origin_mass, 2 * math.pi)
        self.assertAlmostEqual(support(measure).origin_mass, 2 * math.pi)

    def test_non_convex_rejected(self):
        with self.assertRaises(DomainError):
            ma_cdf(RadialProfile([0.0, 1.0, 2.0], [0.0, 1.0, 1.2], 0.0, 0.5), 1)

    def test_constant_profile_has_zero_measure(self):
        measure = ma_cdf(RadialProfile.constant(3.0), 2)
        self.assertTrue(measure.is_zero)
        self.assertTrue(support(measure).is_empty)

    def test_scaling_multiplies_every_piece_by_lambda_to_the_n(self):
        s = np.linspace(-2.0, 0.0, 201)
        below = np.concatenate(([0.0], np.exp(s[1:]) / 4))
        above = np.concatenate((np.exp(s[:-1]) / 4, [0.5]))
        profile = RadialProfile(s, np.exp(s) / 4, 0.0, 0.5, below, above)
        for n in (1, 2, 3):
            base = ma_cdf(profile, n)
            scaled = ma_cdf(scale_profile(profile, 0.3), n)
            factor = 0.3 ** n
            np.testing.assert_allclose([a.radius for a in scaled.atoms],
                                       [a.radius for a in base.atoms])
            np.testing.assert_allclose([a.mass for a in scaled.atoms],
                                       [factor * a.mass for a in base.atoms])
            self.assertEqual(len(scaled.segments), len(base.segments))
            for mine, theirs in zip(scaled.segments, base.segments):
                np.testing.assert_allclose(mine.increments, factor * theirs.increments,
                                           atol=1e-15)
            t = np.linspace(0.0, 2.0, 1001)
            np.testing.assert_allclose(scaled.cdf(t), factor * np.asarray(base.cdf(t)),
                                       atol=1e-12)


class RadialMeasureTests(SimpleTestCase):
    """Atoms, segments and their CDF."""

    def test_atoms_merge_and_sort(self):
        measure = RadialMeasure(1, (Atom(2.0, 1.0), Atom(1.0, 1.0), Atom(2.0, 0.5)))
        self.assertEqual([a.radius for a in measure.atoms], [1.0, 2.0])
        self.assertEqual(measure.atoms[1].mass, 1.5)

    def test_negative_mass(self):
        with self.assertRaises(StructuralError):
            RadialMeasure(1, (Atom(1.0, -1.0),))
        with self.assertRaises(StructuralError):
            TableSegment([1.0, 2.0], [0.0, -1.0])

    def test_power_segment_cdf(self):
        measure = RadialMeasure(1, (), (PowerSegment(1.0, 3.0, 2.0, 1.0),))
        self.assertEqual(measure.cdf(0.5), 0.0)
        self.assertAlmostEqual(measure.cdf(2.0), 2.0)
        self.assertAlmostEqual(total_mass(measure), 4.0)

    def test_table_segment_interpolates(self):
        seg = TableSegment([1.0, 2.0, 3.0], [5.0, 6.0, 8.0])
        self.assertEqual(seg.total, 3.0)
        self.assertAlmostEqual(float(seg.increment(2.5)), 2.0)
        self.assertEqual(seg.increasing_intervals(0.0), [(1.0, 3.0)])

    def test_truncated_open_ball(self):
        measure = RadialMeasure(
            1, (Atom(1.0, 1.0), Atom(2.0, 1.0)), (PowerSegment(0.0, 4.0, 1.0, 1.0),))
        cut = measure.truncated(2.0)
        self.assertEqual([a.radius for a in cut.atoms], [1.0])
        self.assertAlmostEqual(cut.total_mass, 3.0)

    def test_support_ignores_noise(self):
        measure = RadialMeasure(1, (Atom(1.0, 1e-14), Atom(2.0, 1.0)))
        self.assertEqual(support(measure).atoms, (2.0,))


class SupportReportTests(SimpleTestCase):

    def test_components_merge_touching_pieces(self):
        report = SupportReport(atoms=(1.0,), density_intervals=((1.0, 2.0), (3.0, 4.0)))
        self.assertEqual(report.components(), [(1.0, 2.0), (3.0, 4.0)])

    def test_covered_by(self):
        inner = SupportReport(atoms=(1.5,))
        outer = SupportReport(density_intervals=((1.0, 2.0),))
        self.assertTrue(inner.covered_by(outer))
        self.assertFalse(outer.covered_by(inner))
