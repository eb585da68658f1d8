"""
Django settings for quadtower project.

The project has no database and serves no requests: Django provides the
management-command CLI, the settings layer, the cache framework and the test
runner around the ``classgroups`` app.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.2/ref/settings/
"""

import os
from pathlib import Path

import logfire
from dotenv import load_dotenv

# Load environment variables from a `.env` file located in the project root.
# This must be done **before** we reference any env vars.
load_dotenv()

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = os.getenv('SECRET_KEY', 'quadtower-has-no-secrets')

DEBUG = os.getenv('DEBUG', 'False').lower() == 'true'

ALLOWED_HOSTS: list[str] = []


# Application definition

INSTALLED_APPS = [
    # Third-party apps
    'django_extensions',
    # Local apps
    'classgroups',
]

MIDDLEWARE: list[str] = []

# Every result is computed; nothing is persisted.
DATABASES: dict[str, dict[str, str]] = {}

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True


# --------------------------------------------------------------------------- #
# Computation limits                                                          #
# --------------------------------------------------------------------------- #


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == '':
        return default
    try:
        return int(raw.replace('_', ''))
    except ValueError as exc:
        raise RuntimeError(f"{name} must be an integer, got {raw!r}") from exc


# Decimal digits allowed in the coefficients of a fundamental unit. The units
# of some Q(sqrt(qrs)) are astronomically large; past the cap a triple is
# reported as "unit-too-large" instead of hanging the search.
UNIT_DIGIT_CAP: int = _env_int('UNIT_DIGIT_CAP', 1_000_000)

if UNIT_DIGIT_CAP < 1000:
    raise RuntimeError(
        "UNIT_DIGIT_CAP must be at least 1000.\n"
        "Set it in your `.env` file, e.g.\n"
        "UNIT_DIGIT_CAP=1000000"
    )

PELL_PERIOD_LIMIT: int = _env_int('PELL_PERIOD_LIMIT', 10_000_000)

SEARCH_WORKERS: int = _env_int('SEARCH_WORKERS', 1)

GROUP_ORDER_LIMIT: int = _env_int('GROUP_ORDER_LIMIT', 2**12)

SUBGROUP_ENUMERATION_LIMIT: int = _env_int('SUBGROUP_ENUMERATION_LIMIT', 2**10)

AXIOM_CHECK_FULL_LIMIT: int = _env_int('AXIOM_CHECK_FULL_LIMIT', 2**8)

QUADFIELD_CACHE_ENABLED: bool = (
    os.getenv('QUADFIELD_CACHE_ENABLED', 'True').lower() == 'true'
)

# --------------------------------------------------------------------------- #
# Cache configuration                                                         #
# --------------------------------------------------------------------------- #

# Units and class groups are memoised per process. The backend computes each
# key at most once even with concurrent readers.
CACHES = {
    'default': {
        'BACKEND': 'django.core.cache.backends.locmem.LocMemCache',
    },
    'quadfield': {
        'BACKEND': 'quadtower.cache_backends.ComputationCache',
        'LOCATION': 'quadfield',
        'TIMEOUT': None,
        'OPTIONS': {'MAX_ENTRIES': 100_000},
    },
}

# --------------------------------------------------------------------------- #
# Logfire configuration                                                       #
# --------------------------------------------------------------------------- #

LOGFIRE_TOKEN: str | None = os.getenv('LOGFIRE_TOKEN')

logfire.configure(
    token=LOGFIRE_TOKEN,
    send_to_logfire='if-token-present',
    console=False,
    service_name='quadtower',
    service_version='0.1.0',
    environment=os.getenv('QUADTOWER_ENVIRONMENT', 'development'),
)

# --------------------------------------------------------------------------- #
# Logging                                                                     #
# --------------------------------------------------------------------------- #

# stdout carries CSV/JSON data, so console logging goes to stderr.
LOG_LEVEL: str = os.getenv('LOG_LEVEL', 'WARNING').upper()

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {'format': '%(levelname)s %(name)s: %(message)s'},
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'plain',
            'level': LOG_LEVEL,
        },
        'logfire': {
            'class': 'logfire.LogfireLoggingHandler',
            'level': 'INFO',
        },
    },
    'loggers': {
        'classgroups': {
            'handlers': ['console', 'logfire'],
            'level': 'DEBUG' if DEBUG else 'INFO',
            'propagate': False,
        },
    },
}

# --------------------------------------------------------------------------- #
# Django-Extensions configuration                                             #
# --------------------------------------------------------------------------- #

# shell_plus with IPython is the easiest way to poke at units and groups.
SHELL_PLUS = 'ipython'
SHELL_PLUS_PRE_IMPORTS = [
    ('classgroups.quadfield', ('class_group', 'fundamental_unit', 'h2')),
    ('classgroups.family', ('FamilyParams', 'check_hypotheses')),
    ('classgroups.groups', ('MetacyclicParams', 'build_metacyclic')),
]
