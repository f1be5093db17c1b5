"""Tests for gluing across spheres and the sub-mean-value sampler."""
import math

import numpy as np
from django.test import SimpleTestCase

from equilibrium.exceptions import GlueRejected, StructuralError
from equilibrium.glue import (
    GluedFunction, HarmonicPolynomial, disc_reflection_glue, radial_glue, radial_glue_check,
    submean_check,
)
from equilibrium.radial_core import RadialWeight


class RadialGlueCheckTests(SimpleTestCase):
    """du/dr(R-) <= dv/dr(R+) on |z| = R."""

    def test_matching_derivatives(self):
        check = radial_glue_check(RadialWeight.power(1.0, 2.0, -1.0),
                                  RadialWeight.scaled_log(2.0), 1.0)
        self.assertTrue(check.continuous)
        self.assertTrue(check.accepted)
        self.assertAlmostEqual(check.margin, 0.0)

    def test_outer_too_flat(self):
        check = radial_glue_check(RadialWeight.power(1.0, 2.0, -1.0),
                                  RadialWeight.scaled_log(1.0), 1.0)
        self.assertTrue(check.continuous)
        self.assertFalse(check.derivative_ok)
        self.assertAlmostEqual(check.margin, -1.0)

    def test_discontinuous(self):
        check = radial_glue_check(RadialWeight.constant(0.0),
                                  RadialWeight.scaled_log(1.0, 1.0), 1.0)
        self.assertFalse(check.continuous)
        self.assertIsNone(check.derivative_ok)
        self.assertFalse(check.accepted)
        self.assertAlmostEqual(check.jump, 1.0)


class HarmonicPolynomialTests(SimpleTestCase):

    def test_values(self):
        h = HarmonicPolynomial(1.0, (0.5,), (0.0, 0.25))
        self.assertAlmostEqual(float(h(np.array(1.0 + 0j))), 1.5)
        # Im(w^2) = 2xy
        self.assertAlmostEqual(float(h(np.array(1.0 + 1.0j))), 1.0 + 0.5 + 0.25 * 2.0)
        self.assertEqual(h.degree, 2)

    def test_normal_derivative(self):
        h = HarmonicPolynomial(0.0, (0.3,))
        np.testing.assert_allclose(h.normal_derivative(np.array([0.0, math.pi])), [0.3, -0.3])


class DiscReflectionTests(SimpleTestCase):

    def test_reflection_is_continuous(self):
        g = disc_reflection_glue(HarmonicPolynomial(0.2, (0.3,), (0.1,)))
        self.assertLess(g.interface_gap(seed=3), 1e-12)

    def test_steep_boundary_data_rejected(self):
        with self.assertRaises(GlueRejected) as caught:
            disc_reflection_glue(HarmonicPolynomial(0.0, (0.6,)))
        self.assertAlmostEqual(abs(caught.exception.worst_value), 0.6)

    def test_outer_piece_grows_like_log(self):
        g = disc_reflection_glue(HarmonicPolynomial(0.0, (0.3,)))
        z = np.array([[100.0 + 0j]])
        self.assertAlmostEqual(float(g(z)[0]), 0.003 + math.log(100.0))


class SubmeanTests(SimpleTestCase):
    """Monte Carlo sub-mean-value inequality on complex lines."""

    def test_reflection_passes(self):
        g = disc_reflection_glue(HarmonicPolynomial(0.0, (0.3,), (0.2,)))
        report = submean_check(g, 2000, seed=11)
        self.assertEqual(report.samples, 2000)
        self.assertEqual(report.violations, 0)

    def test_concave_kink_is_caught(self):
        # r^2 - 1 inside, log r outside: the derivative drops from 2 to 1 at r = 1
        g = radial_glue(RadialWeight.power(1.0, 2.0, -1.0), RadialWeight.scaled_log(1.0),
                        1.0, 2)
        report = submean_check(g, 2000, seed=11)
        self.assertGreater(report.violations, 0)
        self.assertGreater(report.worst_excess, 0.0)
        self.assertEqual(len(report.worst_center), 2)

    def test_report_depends_only_on_seed(self):
        g = radial_glue(RadialWeight.power(1.0, 2.0, -1.0), RadialWeight.scaled_log(2.0),
                        1.0, 2)
        serial = submean_check(g, 3000, seed=5, batch_size=500)
        threaded = submean_check(g, 3000, seed=5, batch_size=500, workers=3)
        self.assertEqual(serial, threaded)

    def test_needs_samples(self):
        g = disc_reflection_glue(HarmonicPolynomial())
        with self.assertRaises(StructuralError):
            submean_check(g, 0)

    def test_point_dimension_checked(self):
        g = GluedFunction(lambda z: np.zeros(z.shape[:-1]), lambda z: np.zeros(z.shape[:-1]),
                          1.0, 2)
        with self.assertRaises(StructuralError):
            g(np.zeros((3, 1), dtype=complex))
