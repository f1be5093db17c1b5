"""Django models for the equilibrium app."""
from django.db import models


class SolutionRecord(models.Model):
    """Archived report of a solver or gallery run."""
    label = models.CharField(max_length=200)
    command = models.CharField(max_length=50)  # 'solve' or 'gallery'
    spec_sha256 = models.CharField(max_length=64, blank=True)
    dimension = models.PositiveSmallIntegerField()
    mode = models.CharField(max_length=20, blank=True)  # 'global', 'relative' or ''
    report = models.JSONField(
        default=dict, blank=True,
        help_text="Full JSON report as written by the command"
    )
    passed = models.BooleanField(default=True)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:  # pylint: disable=too-few-public-methods
        """Meta options for SolutionRecord model."""
        ordering = ['-created_at']

    def __str__(self):
        verdict = 'PASS' if self.passed else 'FAIL'
        return f"{self.command} {self.label} (n={self.dimension}) {verdict}"

    @classmethod
    def record(cls, label, command, report, dimension, mode='', passed=True, spec_sha256=''):
        """Store one report; the only write path used by the commands."""
        # pylint: disable=no-member
        return cls.objects.create(
            label=label,
            command=command,
            report=report,
            dimension=dimension,
            mode=mode,
            passed=passed,
            spec_sha256=spec_sha256 or '',
        )

    def get_support(self):
        """Support section of the report, or an empty dict."""
        report = self.report or {}
        if 'support' in report:
            return report['support']
        solution = report.get('solution') or {}
        return solution.get('support', {})
