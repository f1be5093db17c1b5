"""Django admin configuration for SolutionRecord model."""
import json

from django import forms
from django.contrib import admin
from .models import SolutionRecord


class SolutionRecordAdminForm(forms.ModelForm):
    """Form showing the stored support in readable form next to the raw report"""
    support_text = forms.CharField(
        widget=forms.Textarea(attrs={
            'rows': 12,
            'cols': 100,
            'style': 'font-family: monospace; font-size: 13px; width: 100%; padding: 10px;',
            'class': 'vLargeTextField',
            'readonly': 'readonly',
        }),
        required=False,
        disabled=True,
        label='Support',
        help_text='Spheres and radius intervals carrying Monge-Ampère mass'
    )

    class Meta:
        """Meta options for SolutionRecordAdminForm."""
        model = SolutionRecord
        fields = '__all__'

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        if self.instance and self.instance.pk:
            self.initial['support_text'] = support_to_readable(self.instance.get_support())
        else:
            self.initial['support_text'] = ''


def support_to_readable(support):
    """Convert a JSON support section to readable lines"""
    if not support:
        return ''
    lines = []
    for radius in support.get('atoms', []):
        lines.append(f"Sphere: |z| = {radius:.12g}")
    for lo, hi in support.get('density_intervals', []):
        lines.append(f"Shell:  {lo:.12g} <= |z| <= {hi:.12g}")
    origin = support.get('origin_mass', 0.0)
    if origin:
        lines.append(f"Origin: mass {origin:.12g}")
    return '\n'.join(lines)


@admin.register(SolutionRecord)
class SolutionRecordAdmin(admin.ModelAdmin):
    """Admin interface for SolutionRecord model."""
    form = SolutionRecordAdminForm
    list_display = ('label', 'command', 'dimension', 'mode', 'passed', 'support_size',
                    'created_at')
    list_filter = ('command', 'passed', 'dimension', 'created_at')
    search_fields = ('label', 'spec_sha256')
    readonly_fields = ('spec_sha256', 'created_at', 'report_json')
    fieldsets = (
        ('Run', {
            'fields': ('label', 'command', 'dimension', 'mode', 'passed', 'spec_sha256')
        }),
        ('Support', {
            'fields': ('support_text',),
            'classes': ('wide',),
        }),
        ('Report', {
            'fields': ('report_json',),
            'classes': ('collapse',),
        }),
        ('Timestamps', {
            'fields': ('created_at',)
        }),
    )

    def support_size(self, obj):
        """Number of support components (spheres plus intervals)"""
        support = obj.get_support()
        return len(support.get('atoms', [])) + len(support.get('density_intervals', []))
    support_size.short_description = 'Components'

    def report_json(self, obj):
        """Pretty-printed report"""
        return json.dumps(obj.report, sort_keys=True, indent=2)
    report_json.short_description = 'Report'
