"""
Django settings for the radial_extremal project.

Numerical defaults for the equilibrium app live in ``RADIAL_EQUILIBRIUM`` and can
be overridden from the environment (or a ``.env`` file) with ``RADIAL_*`` names.
"""

from pathlib import Path
import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.getenv(
    'SECRET_KEY', 'django-insecure-radial-extremal-local-only'
)

DEBUG = os.getenv('DEBUG', 'False').lower() in ('1', 'true', 'yes')

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'django.contrib.admin',
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'django.contrib.sessions',
    'django.contrib.messages',
    'django.contrib.staticfiles',
    'equilibrium',
]

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'django.contrib.sessions.middleware.SessionMiddleware',
    'django.middleware.common.CommonMiddleware',
    'django.middleware.csrf.CsrfViewMiddleware',
    'django.contrib.auth.middleware.AuthenticationMiddleware',
    'django.contrib.messages.middleware.MessageMiddleware',
    'django.middleware.clickjacking.XFrameOptionsMiddleware',
]

ROOT_URLCONF = 'radial_extremal.urls'

TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {
            'context_processors': [
                'django.template.context_processors.request',
                'django.contrib.auth.context_processors.auth',
                'django.contrib.messages.context_processors.messages',
            ],
        },
    },
]

WSGI_APPLICATION = 'radial_extremal.wsgi.application'


# Database: only the run archive (equilibrium.SolutionRecord) is stored here.

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
}

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = True

USE_TZ = True


# Static files (admin only)

STATIC_URL = 'static/'


# Logging

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '%(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'equilibrium': {
            'handlers': ['console'],
            'level': os.getenv('RADIAL_LOG_LEVEL', 'INFO'),
            'propagate': False,
        },
    },
}


# Solver and command defaults

RADIAL_EQUILIBRIUM = {
    # uniform samples per ball/shell component before refinement
    'GRID_POINTS': int(os.getenv('RADIAL_GRID_POINTS', '1024')),
    # log|z|^2 cut-off standing in for the origin of a ball
    'S_MIN': float(os.getenv('RADIAL_S_MIN', '-50.0')),
    'S_MARGIN': float(os.getenv('RADIAL_S_MARGIN', '2.0')),
    'REFINE_TOLERANCE': float(os.getenv('RADIAL_REFINE_TOLERANCE', '1e-10')),
    'MAX_GRID_POINTS': int(os.getenv('RADIAL_MAX_GRID_POINTS', '2000000')),
    'ATOM_TOLERANCE_FACTOR': float(
        os.getenv('RADIAL_ATOM_TOLERANCE_FACTOR', '1e-9')
    ),
    'SEED': int(os.getenv('RADIAL_SEED', '20260117')),
    'GLUE_SAMPLES': int(os.getenv('RADIAL_GLUE_SAMPLES', '100000')),
    'GALLERY_SAMPLES': int(os.getenv('RADIAL_GALLERY_SAMPLES', '100000')),
    # terms kept in the countable-union fixture
    'GALLERY_TRUNCATION': int(os.getenv('RADIAL_GALLERY_TRUNCATION', '8')),
    'GALLERY_WORKERS': int(os.getenv('RADIAL_GALLERY_WORKERS', '4')),
    'GALLERY_DIMENSION': int(os.getenv('RADIAL_GALLERY_DIMENSION', '2')),
    'OUTPUT_DIR': Path(os.getenv('RADIAL_OUTPUT_DIR', str(BASE_DIR / 'reports'))),
}
