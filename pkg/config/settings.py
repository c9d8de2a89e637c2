"""
Django settings for the competition-number witness toolkit.

The project has no web surface: Django hosts the management commands, the
settings layer and the test runner, and DRF provides the JSON serializers.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/4.2/ref/settings/
"""

import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = os.environ.get('DJANGO_SECRET_KEY', 'witnesses-local-only')

DEBUG = os.environ.get('DJANGO_DEBUG', '') == '1'

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'rest_framework',
    'witnesses',
]

# No models are stored anywhere.
DATABASES = {}


# Internationalization
# https://docs.djangoproject.com/en/4.2/topics/i18n/

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


REST_FRAMEWORK = {
    'UNAUTHENTICATED_USER': None,
    'DEFAULT_AUTHENTICATION_CLASSES': [],
    'DEFAULT_PERMISSION_CLASSES': [],
    'DEFAULT_RENDERER_CLASSES': [
        'rest_framework.renderers.JSONRenderer',
    ],
    'DEFAULT_PARSER_CLASSES': [
        'rest_framework.parsers.JSONParser',
    ],
}

WITNESSES = {
    'HOLE_SEARCH_NODES': 1_000_000,
    'HOLE_LIMIT': 100_000,
    'CLIQUE_LIMIT': 100_000,
    'ORACLE_MAX_VERTICES': 10,
    'ORACLE_BUDGET': 1_000_000,
    'ORACLE_MAX_K': None,
    'VERIFY_EACH_STEP': True,
    'ELIMINATION_ORDER': 'mcs',
    'ORDER_RESTARTS': 32,
    'GENERATOR_ATTEMPTS': 200,
    'SEED': 0,
}

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {name} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'witnesses': {
            'handlers': ['console'],
            'level': os.environ.get('WITNESSES_LOG_LEVEL', 'INFO'),
            'propagate': False,
        },
    },
}
