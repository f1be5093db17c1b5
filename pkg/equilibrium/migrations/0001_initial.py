# Generated by Django 6.0.1 on 2026-01-17 10:00
# pylint: disable=invalid-name,missing-module-docstring
"""Initial migration for the SolutionRecord model."""
from django.db import migrations, models


class Migration(migrations.Migration):
    """Initial migration creating the SolutionRecord model."""

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name='SolutionRecord',
            fields=[
                ('id', models.BigAutoField(
                    auto_created=True, primary_key=True,
                    serialize=False, verbose_name='ID'
                )),
                ('label', models.CharField(max_length=200)),
                ('command', models.CharField(max_length=50)),
                ('spec_sha256', models.CharField(blank=True, max_length=64)),
                ('dimension', models.PositiveSmallIntegerField()),
                ('mode', models.CharField(blank=True, max_length=20)),
                ('report', models.JSONField(
                    blank=True, default=dict,
                    help_text='Full JSON report as written by the command'
                )),
                ('passed', models.BooleanField(default=True)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'ordering': ['-created_at'],
            },
        ),
    ]
