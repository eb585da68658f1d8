"""
Test-specific Django settings that extend the main settings.

Tests run with small computation limits and quiet logging; nothing is sent to
logfire.
"""

import os

os.environ.setdefault('SECRET_KEY', 'test-secret-key-django-testing-only')
os.environ.setdefault('PELL_PERIOD_LIMIT', '1000000')
os.environ.setdefault('UNIT_DIGIT_CAP', '20000')
os.environ.setdefault('QUADFIELD_CACHE_ENABLED', 'True')
os.environ.setdefault('LOG_LEVEL', 'ERROR')
os.environ.pop('LOGFIRE_TOKEN', None)

# Import all settings from the main settings module
from .settings import *  # noqa: F403, F401, E402

LOGGING['loggers']['classgroups']['level'] = 'WARNING'  # type: ignore[index] # noqa: F405

from .settings import _env_int  # noqa: E402

# Upper bounds of the range tests; raise them through the environment for a
# longer run, e.g. SWEEP_FAMILY_MAX_PRIME=500.
PROPERTY_SWEEPS: dict[str, int] = {
    'family_max_prime': _env_int('SWEEP_FAMILY_MAX_PRIME', 150),
    'identity_max_qrs': _env_int('SWEEP_IDENTITY_MAX_QRS', 20_000),
    'small_field_max_prime': _env_int('SWEEP_SMALL_FIELD_MAX_PRIME', 1000),
    'rs_max': _env_int('SWEEP_RS_MAX', 10_000),
    'pell_max_d': _env_int('SWEEP_PELL_MAX_D', 10_000),
    'forms_max_discriminant': _env_int('SWEEP_FORMS_MAX_DISCRIMINANT', 2000),
    'legendre_max_prime': _env_int('SWEEP_LEGENDRE_MAX_PRIME', 500),
    'square_max': _env_int('SWEEP_SQUARE_MAX', 10**6),
    'random_seed': _env_int('SWEEP_RANDOM_SEED', 20240611),
}
