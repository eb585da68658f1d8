"""classgroups.apps module.

Django application configuration for the *classgroups* app used by the
**quadtower** project.
"""

from django.apps import AppConfig


class ClassgroupsConfig(AppConfig):
    """Django ``AppConfig`` for the **classgroups** application."""

    name = 'classgroups'
    verbose_name = 'Class groups of quadratic towers'
