"""
Management command to search (q, r, s, eta) triples below a prime bound.

Every candidate with q = 3 mod 4 and r = s = 5 mod 8 gets one record with its
hypothesis flags, status and predicted 2-class-group structures.
"""

from django.core.management.base import BaseCommand, CommandError
from pydantic import ValidationError

from classgroups.report_models import SearchConfig
from classgroups.reporting import open_output, write_records
from classgroups.search_service import search_service

from ._options import add_output_arguments, check_common


class Command(BaseCommand):
    help = "Search prime triples satisfying the family hypotheses and predict their class groups"

    def add_arguments(self, parser):
        parser.add_argument(
            '--max-prime',
            type=int,
            default=100,
            help='Exclusive bound on q, r and s (default: 100)',
        )
        parser.add_argument(
            '--eta',
            type=str,
            choices=['1', '2', 'both'],
            default='both',
            help='Which eta to search (default: both)',
        )
        parser.add_argument(
            '--require',
            type=str,
            choices=['full-theorem', 'corollary-only'],
            default='full-theorem',
            help='Hypotheses a record needs for status ok (default: full-theorem)',
        )
        add_output_arguments(parser)

    def handle(self, *args, **options):
        check_common(options)
        try:
            config = SearchConfig(
                max_prime=options['max_prime'],
                eta=options['eta'],
                require=options['require'],
                unit_digit_cap=options['digit_cap'],
                workers=options['workers'],
            )
        except ValidationError as exc:
            raise CommandError(f'Invalid search configuration: {exc}', returncode=2)

        records = search_service.search(config)
        with open_output(options['out'], self.stdout) as stream:
            write_records(records, options['format'], stream)

        ok = sum(1 for record in records if record.status == 'ok')
        too_large = sum(1 for record in records if record.status == 'unit-too-large')
        errors = [record for record in records if record.status == 'error']
        self.stderr.write(
            self.style.SUCCESS(f'Searched {len(records)} triples: {ok} ok')
        )
        if too_large:
            self.stderr.write(
                self.style.WARNING(f'{too_large} triples exceeded the unit digit cap')
            )
        for record in errors:
            self.stderr.write(
                self.style.ERROR(f'  ({record.q}, {record.r}, {record.s}, {record.eta}): {record.reason}')
            )
