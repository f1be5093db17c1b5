"""Django app configuration for the equilibrium application."""
from django.apps import AppConfig


class EquilibriumConfig(AppConfig):
    """Configuration for equilibrium app."""
    name = 'equilibrium'
    verbose_name = 'Radial equilibrium measures'
