"""
Tests for the search, verify and group_tables management commands and their
output formats.
"""

import csv
import json
import tempfile
from io import StringIO
from pathlib import Path
from unittest import mock

from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase
from jsonschema import Draft202012Validator

from .exceptions import InvariantViolation
from .family import Condition, FamilyParams
from .golden import (
    GOLDEN_DIGIT_CAP,
    SEARCH_GOLDEN,
    SMALLEST_TRIPLE_GOLDEN,
    fixture_path,
    golden_search_config,
    load_json,
)
from .quadfield import AbelianType
from .report_models import CSV_COLUMNS, SearchConfig, TripleRecord
from .reporting import SWEEP_COLUMNS, read_records_csv, read_records_json, write_records
from .search_service import candidate_triples, evaluate_triple, search_service


def run(*args: str, **options: object) -> tuple[str, str]:
    """Run a command and return (stdout, stderr)."""
    stdout, stderr = StringIO(), StringIO()
    call_command(*args, stdout=stdout, stderr=stderr, **options)
    return stdout.getvalue(), stderr.getvalue()


class SearchCommandTest(SimpleTestCase):
    """The search command."""

    def test_no_candidates_below_12(self) -> None:
        """Only r = 5 lies below 12, so no (r, s) pair exists."""
        stdout, stderr = run('search', max_prime=12)
        self.assertEqual(stdout, ','.join(CSV_COLUMNS) + '\n')
        self.assertIn('Searched 0 triples', stderr)

    def test_json_records(self) -> None:
        """Every record is sorted, has r < s, and ok rows carry A(F) = (2, 2^m)."""
        stdout, _ = run('search', max_prime=30, eta='1', format='json')
        records = read_records_json(stdout)
        # q in {3, 7, 11, 19, 23}, (r, s) in {(5, 13), (5, 29), (13, 29)}
        self.assertEqual(len(records), 15)
        self.assertEqual(records, sorted(records, key=lambda record: record.sort_key))
        failed_names = {condition.value for condition in Condition}
        for record in records:
            with self.subTest(triple=record.sort_key):
                self.assertEqual(record.eta, 1)
                self.assertLess(record.r, record.s)
                self.assertTrue(record.cong_ok)
                if record.status == 'ok':
                    assert record.A_F is not None and record.m is not None
                    self.assertEqual(AbelianType.parse(record.A_F).order, 2 ** (record.m + 1))
                    self.assertIn(record.galois, ('Type1-α2', 'not-type1'))
                elif record.status == 'hypothesis-failed':
                    self.assertIn(record.reason, failed_names)

    def test_rs_residue_failures(self) -> None:
        """(5/13) = -1, so (r, s) = (5, 13) never passes."""
        stdout, _ = run('search', max_prime=30, eta='2', format='json')
        for record in read_records_json(stdout):
            if (record.r, record.s) == (5, 13):
                self.assertFalse(record.rs_ok)
                self.assertEqual(record.status, 'hypothesis-failed')

    def test_csv_matches_json(self) -> None:
        """Both formats describe the same records."""
        csv_out, _ = run('search', max_prime=30, eta='both')
        json_out, _ = run('search', max_prime=30, eta='both', format='json')
        self.assertEqual(read_records_csv(StringIO(csv_out)), read_records_json(json_out))

    def test_worker_count_does_not_change_output(self) -> None:
        """Records are identical with one or two worker processes."""
        single, _ = run('search', max_prime=30, eta='1', workers=1)
        parallel, _ = run('search', max_prime=30, eta='1', workers=2)
        self.assertEqual(single, parallel)

    def test_out_file(self) -> None:
        """--out writes the data to a file and leaves stdout empty."""
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'triples.csv'
            stdout, _ = run('search', max_prime=12, out=str(path))
            self.assertEqual(stdout, '')
            self.assertEqual(path.read_text(encoding='utf-8'), ','.join(CSV_COLUMNS) + '\n')

    def test_usage_errors(self) -> None:
        """Bad options exit with code 2."""
        for options in ({'max_prime': 1}, {'workers': 0}, {'digit_cap': 10}):
            with self.subTest(options=options):
                with self.assertRaises(CommandError) as cm:
                    run('search', **options)
                self.assertEqual(cm.exception.returncode, 2)


class VerifyCommandTest(SimpleTestCase):
    """The verify command."""

    def test_not_type1_triple(self) -> None:
        """(3, 13, 61, 1) passes every hypothesis but has equal quartic symbols."""
        stdout, stderr = run('verify', '3', '13', '61', '1')
        payload = json.loads(stdout)
        record = payload['record']
        self.assertEqual(record['status'], 'ok')
        self.assertEqual(record['galois'], 'not-type1')
        self.assertEqual(record['branch'], 'S')
        self.assertFalse(record['quartic_neq'])
        self.assertEqual(record['norm_rs'], 1)
        self.assertEqual(payload['trichotomy_flags'], [False, False, True])
        self.assertEqual([unit['d'] for unit in payload['units']], [793, 2379, 4758])
        self.assertEqual(payload['units'][1]['x_digits'], 4)
        self.assertIn('coherent', payload)
        self.assertIn('galois: not-type1', stderr)

    def test_square_condition_failure(self) -> None:
        """(19, 5, 61, 1) stops at the square condition."""
        stdout, stderr = run('verify', '19', '5', '61', '1')
        payload = json.loads(stdout)
        self.assertEqual(payload['record']['status'], 'hypothesis-failed')
        self.assertEqual(payload['record']['reason'], 'square_condition')
        self.assertEqual(payload['record']['branch'], 'Q')
        self.assertIsNone(payload['prediction'])
        self.assertEqual(payload['coherence'], [])
        self.assertIn('square_condition: False', stderr)

    def test_csv_format(self) -> None:
        """CSV output is a single record row."""
        stdout, _ = run('verify', '3', '13', '61', '1', format='csv')
        rows = list(csv.DictReader(StringIO(stdout)))
        self.assertEqual(len(rows), 1)
        self.assertEqual(rows[0]['branch'], 'S')

    def test_invalid_triple(self) -> None:
        """q = 4 is not prime: usage error with exit code 2."""
        with self.assertRaises(CommandError) as cm:
            run('verify', '4', '13', '61', '1')
        self.assertEqual(cm.exception.returncode, 2)
        with self.assertRaises(CommandError) as cm:
            run('verify', '3', '13', '61', '3')
        self.assertEqual(cm.exception.returncode, 2)


class GroupTablesCommandTest(SimpleTestCase):
    """The group_tables command."""

    def test_empty_alpha(self) -> None:
        """No alpha values means an empty sweep, not an error."""
        stdout, stderr = run('group_tables', '--alpha')
        self.assertEqual(stdout, ','.join(SWEEP_COLUMNS) + '\n')
        self.assertIn('Checked 0 rows', stderr)

    def test_type1_alpha2(self) -> None:
        """Every row matches for type 1 with alpha = 2."""
        stdout, stderr = run(
            'group_tables', '--alpha', '2', '--n', '2', '3', '--types', '1', '--format', 'json'
        )
        payload = json.loads(stdout)
        self.assertEqual(payload['counts']['match'], 12)
        self.assertEqual(payload['counts']['mismatch'], 0)
        self.assertEqual(len(payload['rows']), 12)
        self.assertIn('12 match', stderr)

    def test_uncovered_rows(self) -> None:
        """Type 2 with alpha = 2 is reported as uncovered in CSV."""
        stdout, _ = run('group_tables', '--alpha', '2', '--n', '2', '--types', '2')
        rows = list(csv.DictReader(StringIO(stdout)))
        self.assertEqual(len(rows), 6)
        self.assertEqual({row['status'] for row in rows}, {'uncovered'})

    def test_no_digit_cap_option(self) -> None:
        """The group engine computes no units, so --digit-cap is not accepted."""
        with self.assertRaises(CommandError):
            run('group_tables', '--alpha', '2', '--digit-cap', '5000')

    def test_capacity_is_a_usage_error(self) -> None:
        """Groups above GROUP_ORDER_LIMIT exit with code 2."""
        with self.settings(GROUP_ORDER_LIMIT=16):
            with self.assertRaises(CommandError) as cm:
                run('group_tables', '--alpha', '4', '--n', '4', '--types', '1')
        self.assertEqual(cm.exception.returncode, 2)


class RecordFormatTest(SimpleTestCase):
    """TripleRecord serialisation and the published schema."""

    def test_csv_round_trip(self) -> None:
        """Empty cells read back as None and booleans as bools."""
        record = TripleRecord(
            eta=2, q=23, r=5, s=61, cong_ok=True, leg_ok=True, rs_ok=True,
            quartic_neq=True, norm_rs=1, square_cond=True, branch='R', m=2,
            A_F='2x4', A_K='2x4', A_Kp='2x4', A_FF='2', galois='Type1-α2', status='ok',
        )
        partial = TripleRecord(
            eta=1, q=3, r=5, s=13, cong_ok=True, leg_ok=False, rs_ok=False,
            status='hypothesis-failed', reason='legendre_pattern',
        )
        stream = StringIO()
        self.assertEqual(write_records([record, partial], 'csv', stream), 2)
        stream.seek(0)
        self.assertEqual(read_records_csv(stream), [record, partial])

    def test_csv_cells(self) -> None:
        row = TripleRecord(
            eta=1, q=3, r=5, s=13, cong_ok=True, leg_ok=False, rs_ok=False,
            status='hypothesis-failed',
        ).to_csv_row()
        self.assertEqual(row['leg_ok'], 'false')
        self.assertEqual(row['m'], '')
        self.assertEqual(list(row), list(CSV_COLUMNS))

    def _schema(self) -> dict:
        path = Path(settings.BASE_DIR) / 'docs' / 'triple_record.schema.json'
        return json.loads(path.read_text(encoding='utf-8'))

    def test_schema_matches_model(self) -> None:
        """docs/triple_record.schema.json describes TripleRecord."""
        schema = self._schema()
        generated = TripleRecord.model_json_schema()
        self.assertEqual(set(schema['properties']), set(generated['properties']))
        self.assertEqual(sorted(schema['required']), sorted(generated['required']))
        self.assertEqual(
            schema['properties']['status']['enum'],
            ['ok', 'unit-too-large', 'hypothesis-failed', 'error'],
        )

    def test_search_output_validates(self) -> None:
        """Every record printed by search --format json satisfies the schema."""
        validator = Draft202012Validator(self._schema())
        stdout, _ = run('search', max_prime=60, eta='both', format='json')
        records = json.loads(stdout)
        verified, _ = run('verify', '3', '13', '61', '1')
        records.append(json.loads(verified)['record'])
        self.assertEqual(records[-1]['status'], 'ok')
        for record in records:
            with self.subTest(triple=(record['q'], record['r'], record['s'], record['eta'])):
                self.assertEqual([error.message for error in validator.iter_errors(record)], [])

    def test_schema_rejects_malformed_records(self) -> None:
        """Unknown keys, bad enums and malformed structures are rejected."""
        validator = Draft202012Validator(self._schema())
        good = TripleRecord(
            eta=2, q=23, r=5, s=61, cong_ok=True, leg_ok=True, rs_ok=True,
            A_F='2x4', status='ok',
        ).model_dump(mode='json')
        self.assertTrue(validator.is_valid(good))
        changes = ({'extra': 1}, {'status': 'done'}, {'A_F': '2*4'}, {'eta': 3}, {'cong_ok': 'true'})
        for change in changes:
            with self.subTest(change=change):
                self.assertFalse(validator.is_valid({**good, **change}))
        missing = dict(good)
        del missing['status']
        self.assertFalse(validator.is_valid(missing))


class SearchServiceTest(SimpleTestCase):
    """Candidate generation and configuration."""

    def test_candidates(self) -> None:
        """q = 3 mod 4, r < s with r = s = 5 mod 8, below the bound."""
        candidates = candidate_triples(30, (1, 2))
        self.assertEqual(len(candidates), 30)
        self.assertTrue(all(p.q % 4 == 3 and p.r % 8 == 5 and p.s % 8 == 5 for p in candidates))
        self.assertEqual(candidate_triples(12, (1, 2)), [])

    def test_config(self) -> None:
        self.assertEqual(SearchConfig(max_prime=30).etas, (1, 2))
        self.assertEqual(SearchConfig(max_prime=30, eta='2').etas, (2,))

    def test_search_matches_command(self) -> None:
        """The service returns the records the command prints."""
        records = search_service.search(SearchConfig(max_prime=30, eta='1'))
        stdout, _ = run('search', max_prime=30, eta='1', format='json')
        self.assertEqual(records, read_records_json(stdout))

    def test_failing_triple_becomes_error_row(self) -> None:
        """An internal error is recorded on its row and the search carries on."""
        broken = InvariantViolation('trichotomy broke')
        with mock.patch('classgroups.search_service.unit_trichotomy', side_effect=broken):
            records = search_service.search(SearchConfig(max_prime=30, eta='1'))
        self.assertEqual(len(records), 15)
        # (23, 13, 29) is the only family triple below 30 with eta = 1
        errors = [record for record in records if record.status == 'error']
        self.assertEqual([(record.q, record.r, record.s) for record in errors], [(23, 13, 29)])
        self.assertEqual(errors[0].reason, 'InvariantViolation: trichotomy broke')
        self.assertTrue(errors[0].cong_ok and errors[0].leg_ok and errors[0].rs_ok)
        self.assertIsNone(errors[0].A_F)

    def test_oversized_rs_unit_is_recorded(self) -> None:
        """A cap below the size of eps_793 gives unit-too-large instead of an exception."""
        record = evaluate_triple(FamilyParams(q=3, r=13, s=61, eta=1), digit_cap=2)
        self.assertEqual(record.status, 'unit-too-large')
        self.assertEqual(record.reason, 'eps_793, eps_2379 exceeds 2 digits')
        self.assertIsNone(record.norm_rs)
        self.assertIsNone(record.branch)


GOLDEN_SWEEP_COLUMNS = (
    'type', 'alpha', 'n', 's', 'k', 'level', 'i', 'status',
    'expected_ab', 'computed_ab', 'expected_derived_order', 'computed_derived_order',
)


class GoldenFileTest(SimpleTestCase):
    """Command output against the files in classgroups/fixtures."""

    def test_group_tables_types34(self) -> None:
        """group_tables for types 3 and 4, alpha in {3, 4}, matches the hand-worked rows."""
        stdout, _ = run(
            'group_tables', '--alpha', '3', '4', '--n', '2', '3', '4', '--types', '3', '4'
        )
        computed = [
            {column: row[column] for column in GOLDEN_SWEEP_COLUMNS}
            for row in csv.DictReader(StringIO(stdout))
        ]
        with fixture_path('group_tables_types34.csv').open(encoding='utf-8', newline='') as handle:
            golden = list(csv.DictReader(handle))
        self.assertEqual(len(computed), 216)
        for index, (row, expected) in enumerate(zip(computed, golden)):
            with self.subTest(row=index + 2):
                self.assertEqual(row, expected)
        self.assertEqual(len(computed), len(golden))

    def test_worked_triples(self) -> None:
        """verify on the hand-worked triples of worked_triples.json."""
        for entry in load_json('worked_triples.json'):
            with self.subTest(triple=entry['triple']):
                stdout, _ = run('verify', *(str(v) for v in entry['triple']))
                payload = json.loads(stdout)
                record = payload['record']
                for key in ('status', 'reason', 'branch', 'galois'):
                    self.assertEqual(record[key], entry[key])
                self.assertEqual(payload['trichotomy_flags'], entry['trichotomy_flags'])
                if 'dichotomy_sign' in entry:
                    self.assertEqual(payload['dichotomy_sign'], entry['dichotomy_sign'])
                self.assertEqual(payload['units'][1], entry['eta_qrs_unit'])
                if record['galois'] == 'Type1-α2':
                    self.assertTrue(payload['coherent'])

    def test_search_golden(self) -> None:
        """search --max-prime 100 --eta 1 reproduces search_max100_eta1.csv byte for byte."""
        path = fixture_path(SEARCH_GOLDEN)
        if not path.exists():
            self.skipTest(f"{SEARCH_GOLDEN} not generated; run manage.py write_golden")
        stdout, _ = run('search', max_prime=100, eta='1', digit_cap=GOLDEN_DIGIT_CAP)
        self.assertEqual(stdout, path.read_text(encoding='utf-8'))

    def test_smallest_theorem_triple(self) -> None:
        """verify reproduces smallest_theorem_triple.json and every coherence check holds."""
        path = fixture_path(SMALLEST_TRIPLE_GOLDEN)
        if not path.exists():
            self.skipTest(f"{SMALLEST_TRIPLE_GOLDEN} not generated; run manage.py write_golden")
        golden = load_json(SMALLEST_TRIPLE_GOLDEN)
        record = golden['record']
        triple = (record['q'], record['r'], record['s'], record['eta'])
        stdout, _ = run('verify', *(str(v) for v in triple), digit_cap=GOLDEN_DIGIT_CAP)
        self.assertEqual(json.loads(stdout), golden)
        self.assertEqual(record['eta'], 1)
        self.assertEqual(record['galois'], 'Type1-α2')
        self.assertTrue(golden['coherent'])

    def test_theorem_triples_are_coherent(self) -> None:
        """Every Type1-α2 triple of the golden search passes its coherence checks."""
        records = search_service.search(golden_search_config())
        theorem = [
            record for record in records
            if record.status == 'ok' and record.galois == 'Type1-α2'
        ]
        for record in theorem:
            params = FamilyParams(
                q=record.q, r=record.r, s=record.s, eta=record.eta  # type: ignore[arg-type]
            )
            with self.subTest(params=params.label()):
                report = search_service.verify(params, GOLDEN_DIGIT_CAP)
                failed = [check.name for check in report.coherence if not check.holds]
                self.assertEqual(failed, [])
                assert report.prediction is not None and record.A_F is not None
                m = report.prediction.m
                self.assertEqual(AbelianType.parse(record.A_F).order, 2 ** (m + 1))
                names = {check.name for check in report.coherence}
                if report.hypotheses.h2_eta_qrs == 8:
                    self.assertIn('minimal case: G is minimal', names)
                    self.assertIn('minimal case: H12^ab = (2, 4)', names)

    def test_write_golden_matches_commands(self) -> None:
        """write_golden writes exactly what search and verify print."""
        with tempfile.TemporaryDirectory() as directory:
            stdout, _ = run('write_golden', dir=directory)
            self.assertIn('Smallest theorem triple', stdout)
            written = Path(directory) / SEARCH_GOLDEN
            searched, _ = run('search', max_prime=100, eta='1', digit_cap=GOLDEN_DIGIT_CAP)
            self.assertEqual(written.read_text(encoding='utf-8'), searched)
            smallest = Path(directory) / SMALLEST_TRIPLE_GOLDEN
            report = json.loads(smallest.read_text(encoding='utf-8'))
            record = report['record']
            self.assertEqual((record['status'], record['galois']), ('ok', 'Type1-α2'))
            for candidate in candidate_triples(100, (1,)):
                if candidate.qrs < record['q'] * record['r'] * record['s']:
                    self.assertNotEqual(
                        evaluate_triple(candidate, digit_cap=GOLDEN_DIGIT_CAP).galois, 'Type1-α2'
                    )
