"""Tests for the run archive."""
from django.test import TestCase

from equilibrium.admin import SolutionRecordAdminForm, support_to_readable
from equilibrium.models import SolutionRecord

SUPPORT = {'atoms': [1.0], 'density_intervals': [[0.5, 0.75]], 'origin_mass': 0.0}


class SolutionRecordTests(TestCase):

    def test_record_and_str(self):
        record = SolutionRecord.record('ball', 'solve', {'support': SUPPORT}, 2, 'global')
        self.assertEqual(str(record), 'solve ball (n=2) PASS')
        self.assertEqual(record.get_support(), SUPPORT)

    def test_support_inside_solution(self):
        record = SolutionRecord.record('ball', 'gallery', {'solution': {'support': SUPPORT}}, 1,
                                       passed=False)
        self.assertEqual(record.get_support()['atoms'], [1.0])
        self.assertIn('FAIL', str(record))

    def test_missing_support(self):
        record = SolutionRecord.record('x', 'gallery', {}, 1)
        self.assertEqual(record.get_support(), {})


class AdminTests(TestCase):

    def test_readable_support(self):
        text = support_to_readable(SUPPORT)
        self.assertEqual(text.splitlines(), [
            'Sphere: |z| = 1',
            'Shell:  0.5 <= |z| <= 0.75',
        ])
        self.assertEqual(support_to_readable({}), '')

    def test_form_shows_support(self):
        record = SolutionRecord.record('ball', 'solve', {'support': SUPPORT}, 2, 'global')
        form = SolutionRecordAdminForm(instance=record)
        self.assertIn('Sphere', form.initial['support_text'])
