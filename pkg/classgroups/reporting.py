"""CSV and JSON writers and readers for command output."""

import csv
import json
from collections.abc import Iterable, Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Literal, TextIO

from .report_models import CSV_COLUMNS, TableSweepReport, TripleRecord, VerificationReport
from .subgroup_tables import SweepRow

OutputFormat = Literal['csv', 'json']

SWEEP_COLUMNS = (
    'type',
    'alpha',
    'n',
    's',
    'k',
    'level',
    'i',
    'status',
    'block',
    'generators',
    'expected_derived_order',
    'computed_derived_order',
    'expected_ab',
    'computed_ab',
    'generators_match',
    'detail',
)


@contextmanager
def open_output(path: str | None, fallback: TextIO) -> Iterator[TextIO]:
    """``path`` opened for writing, or ``fallback`` (left open) when no path is given."""
    if path is None:
        yield fallback
        return
    with Path(path).open('w', encoding='utf-8', newline='') as handle:
        yield handle


def _dump_json(payload: Any, stream: TextIO) -> None:
    stream.write(json.dumps(payload, indent=2, ensure_ascii=False) + '\n')


def write_records(records: Iterable[TripleRecord], fmt: OutputFormat, stream: TextIO) -> int:
    """Write records in order; returns how many were written."""
    rows = list(records)
    if fmt == 'json':
        _dump_json([record.model_dump(mode='json') for record in rows], stream)
    else:
        writer = csv.DictWriter(stream, fieldnames=CSV_COLUMNS, lineterminator='\n')
        writer.writeheader()
        for record in rows:
            writer.writerow(record.to_csv_row())
    return len(rows)


def read_records_csv(stream: TextIO) -> list[TripleRecord]:
    return [TripleRecord.from_csv_row(row) for row in csv.DictReader(stream)]


def read_records_json(text: str) -> list[TripleRecord]:
    return [TripleRecord.model_validate(item) for item in json.loads(text)]


def write_verification(report: VerificationReport, fmt: OutputFormat, stream: TextIO) -> None:
    """The full report as JSON; CSV carries only the record row."""
    if fmt == 'csv':
        write_records([report.record], 'csv', stream)
        return
    payload = report.model_dump(mode='json')
    payload['coherent'] = report.coherent
    _dump_json(payload, stream)


def _sweep_row(row: SweepRow) -> dict[str, str]:
    params = row.params
    result = row.result
    cells: dict[str, object] = {
        'type': params.type,
        'alpha': params.alpha,
        'n': params.n,
        's': params.s,
        'k': params.k,
        'level': row.level,
        'i': row.i,
        'status': row.status,
        'detail': row.detail,
    }
    if result is not None:
        cells.update(
            block=result.block,
            generators=result.generators,
            expected_derived_order=result.expected_derived_order,
            computed_derived_order=result.computed_derived_order,
            expected_ab=result.expected_abelianization,
            computed_ab=result.computed_abelianization,
            generators_match='true' if result.generators_match else 'false',
        )
    return {column: '' if cells.get(column) is None else str(cells[column]) for column in SWEEP_COLUMNS}


def write_sweep(report: TableSweepReport, fmt: OutputFormat, stream: TextIO) -> None:
    if fmt == 'json':
        payload = report.model_dump(mode='json')
        payload['counts'] = report.counts
        _dump_json(payload, stream)
        return
    writer = csv.DictWriter(stream, fieldnames=SWEEP_COLUMNS, lineterminator='\n')
    writer.writeheader()
    for row in report.rows:
        writer.writerow(_sweep_row(row))
