"""
WSGI config for the radial_extremal project.

Used by ``runserver`` to browse the report archive in the admin.
"""

import os

from django.core.wsgi import get_wsgi_application

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'radial_extremal.settings')

application = get_wsgi_application()
