"""
Management command to check the index-2 and index-4 subgroup tables.

Each parameter tuple is built as a concrete group and every applicable row is
compared with |H'| and H^ab computed from it.
"""

from django.core.management.base import BaseCommand, CommandError

from classgroups.exceptions import CapacityError
from classgroups.reporting import open_output, write_sweep
from classgroups.search_service import search_service

from ._options import add_output_arguments, check_common


class Command(BaseCommand):
    help = "Verify the subgroup tables against brute-force subgroup computations"

    def add_arguments(self, parser):
        parser.add_argument(
            '--alpha',
            type=int,
            nargs='*',
            default=[2, 3, 4],
            help='Values of alpha (default: 2 3 4)',
        )
        parser.add_argument(
            '--n',
            type=int,
            nargs='*',
            default=[2, 3, 4],
            help='Values of n (default: 2 3 4)',
        )
        parser.add_argument(
            '--types',
            type=int,
            nargs='*',
            choices=[1, 2, 3, 4],
            default=[1, 2, 3, 4],
            help='Presentation types (default: all)',
        )
        parser.add_argument(
            '--s',
            type=int,
            nargs='*',
            default=None,
            help='Values of s for types 3 and 4 (default: every s with alpha > s > 1)',
        )
        parser.add_argument(
            '--k',
            type=int,
            nargs='*',
            default=[1, 3],
            help='Odd values of k for types 3 and 4 (default: 1 3)',
        )
        add_output_arguments(parser, digit_cap=False)

    def handle(self, *args, **options):
        check_common(options)
        try:
            report = search_service.sweep(
                options['alpha'],
                options['n'],
                options['types'],
                options['s'],
                options['k'],
                workers=options['workers'],
            )
        except CapacityError as exc:
            raise CommandError(str(exc), returncode=2)

        with open_output(options['out'], self.stdout) as stream:
            write_sweep(report, options['format'], stream)

        counts = report.counts
        summary = ', '.join(f'{counts[key]} {key}' for key in counts)
        self.stderr.write(self.style.SUCCESS(f'Checked {len(report.rows)} rows: {summary}'))
        for row in report.rows:
            if row.status == 'mismatch' and row.result is not None:
                result = row.result
                self.stderr.write(
                    self.style.WARNING(
                        f'  H{row.i}{row.level} {row.params.label()}: table '
                        f'{result.expected_abelianization} |H\'|={result.expected_derived_order}, '
                        f'computed {result.computed_abelianization} '
                        f'|H\'|={result.computed_derived_order}'
                    )
                )
