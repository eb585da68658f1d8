"""
Management command to run the full pipeline on a single (q, r, s, eta) triple.

The JSON report goes to stdout (or --out); a per-condition trace and the
coherence checks are printed to stderr.
"""

from django.core.management.base import BaseCommand, CommandError
from pydantic import ValidationError

from classgroups.exceptions import DomainError
from classgroups.family import FamilyParams
from classgroups.report_models import VerificationReport
from classgroups.reporting import open_output, write_verification
from classgroups.search_service import search_service

from ._options import add_output_arguments, check_common


class Command(BaseCommand):
    help = "Verify one triple: hypotheses, unit sizes, predictions and cross-checks"

    def add_arguments(self, parser):
        parser.add_argument('q', type=int, help='Prime q = 3 mod 4')
        parser.add_argument('r', type=int, help='Prime r = 5 mod 8')
        parser.add_argument('s', type=int, help='Prime s = 5 mod 8')
        parser.add_argument('eta', type=int, help='1 or 2')
        add_output_arguments(parser, default_format='json')

    def handle(self, *args, **options):
        check_common(options)
        try:
            params = FamilyParams(
                q=options['q'], r=options['r'], s=options['s'], eta=options['eta']
            )
            report = search_service.verify(params, options['digit_cap'])
        except (ValidationError, DomainError) as exc:
            raise CommandError(f'Invalid triple: {exc}', returncode=2)

        with open_output(options['out'], self.stdout) as stream:
            write_verification(report, options['format'], stream)
        self._write_trace(report)

    def _write_trace(self, report: VerificationReport) -> None:
        """Human-readable trace on stderr."""
        hypotheses = report.hypotheses
        self.stderr.write(f'Triple {hypotheses.params.label()}')
        for name in ('congruences', 'legendre_pattern', 'rs_residue', 'quartic_unequal',
                     'norm_rs', 'square_condition'):
            self.stderr.write(f'  {name}: {getattr(hypotheses, name)}')
        for unit in report.units:
            size = 'too large' if unit.too_large else f'{unit.x_digits} digits, norm {unit.norm}'
            self.stderr.write(f'  eps_{unit.d}: {size}')
        record = report.record
        self.stderr.write(f'  status: {record.status} {record.reason}'.rstrip())
        for check in report.coherence:
            style = self.style.SUCCESS if check.holds else self.style.WARNING
            self.stderr.write(
                style(f'  {check.name}: expected {check.expected}, computed {check.computed}')
            )
        if record.status == 'ok':
            self.stderr.write(self.style.SUCCESS(f'galois: {record.galois}'))
