"""Options shared by the classgroups management commands."""

from django.conf import settings
from django.core.management.base import CommandError, CommandParser


def add_output_arguments(
    parser: CommandParser, default_format: str = 'csv', digit_cap: bool = True
) -> None:
    """--out, --format and --workers; --digit-cap only for commands that compute units."""
    parser.add_argument(
        '--out',
        type=str,
        default=None,
        help='Write data to this file instead of stdout',
    )
    parser.add_argument(
        '--format',
        type=str,
        choices=['csv', 'json'],
        default=default_format,
        help=f'Output format (default: {default_format})',
    )
    parser.add_argument(
        '--workers',
        type=int,
        default=getattr(settings, 'SEARCH_WORKERS', 1),
        help='Worker processes (default: SEARCH_WORKERS)',
    )
    if not digit_cap:
        return
    parser.add_argument(
        '--digit-cap',
        type=int,
        default=getattr(settings, 'UNIT_DIGIT_CAP', 1_000_000),
        help='Decimal-digit cap for fundamental units (default: UNIT_DIGIT_CAP)',
    )


def check_common(options: dict) -> None:
    """Usage errors for the shared options exit with code 2."""
    if options['workers'] < 1:
        raise CommandError('--workers must be at least 1', returncode=2)
    if options.get('digit_cap', 1000) < 1000:
        raise CommandError('--digit-cap must be at least 1000', returncode=2)
