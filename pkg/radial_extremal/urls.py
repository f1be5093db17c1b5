"""
URL configuration for the radial_extremal project.

Only the admin is served: it is the browser for archived solver reports
(equilibrium.SolutionRecord). Everything else runs as management commands.
"""
from django.contrib import admin
from django.urls import path

urlpatterns = [
    path('admin/', admin.site.urls),
]
