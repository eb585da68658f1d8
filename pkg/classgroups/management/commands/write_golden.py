"""
Management command to regenerate the computed golden files.

Writes the search output for --max-prime 100 --eta 1 and the verify report of
the smallest eta = 1 triple satisfying every theorem hypothesis. The
hand-checked fixtures next to them are left alone.
"""

from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from classgroups.golden import (
    FIXTURES_DIR,
    GOLDEN_DIGIT_CAP,
    SEARCH_GOLDEN,
    SMALLEST_TRIPLE_BOUND,
    SMALLEST_TRIPLE_GOLDEN,
    golden_search_config,
    smallest_theorem_triple,
)
from classgroups.reporting import open_output, write_records, write_verification
from classgroups.search_service import search_service


class Command(BaseCommand):
    help = "Regenerate the golden search and verify outputs under classgroups/fixtures"

    def add_arguments(self, parser):
        parser.add_argument(
            '--dir',
            type=str,
            default=str(FIXTURES_DIR),
            help='Directory to write into (default: classgroups/fixtures)',
        )
        parser.add_argument(
            '--bound',
            type=int,
            default=SMALLEST_TRIPLE_BOUND,
            help=f'Prime bound for the smallest theorem triple (default: {SMALLEST_TRIPLE_BOUND})',
        )

    def handle(self, *args, **options):
        directory = Path(options['dir'])
        directory.mkdir(parents=True, exist_ok=True)

        self.stdout.write('Running search --max-prime 100 --eta 1...')
        records = search_service.search(golden_search_config())
        with open_output(str(directory / SEARCH_GOLDEN), self.stdout) as stream:
            write_records(records, 'csv', stream)
        self.stdout.write(f'Wrote {len(records)} records to {SEARCH_GOLDEN}')

        params = smallest_theorem_triple(options['bound'])
        if params is None:
            raise CommandError(f"No eta = 1 theorem triple below {options['bound']}")
        report = search_service.verify(params, GOLDEN_DIGIT_CAP)
        with open_output(str(directory / SMALLEST_TRIPLE_GOLDEN), self.stdout) as stream:
            write_verification(report, 'json', stream)
        self.stdout.write(f'Smallest theorem triple: {params.label()}')

        if not report.coherent:
            failed = [check.name for check in report.coherence if not check.holds]
            self.stderr.write(self.style.WARNING(f'Coherence failures: {failed}'))
        self.stdout.write(self.style.SUCCESS(f'Golden files written to {directory}'))
