"""
Pydantic records written by the management commands.

TripleRecord is the unit of search output; its CSV form uses the column order
in CSV_COLUMNS, structures as '2x4' strings, booleans as 'true'/'false' and
empty cells for undecided values.
"""

from typing import Any, Literal

from pydantic import BaseModel, Field

from .family import HypothesisReport
from .predict import CoherenceCheck, Prediction
from .subgroup_tables import SweepRow

RecordStatus = Literal['ok', 'unit-too-large', 'hypothesis-failed', 'error']
EtaChoice = Literal['1', '2', 'both']
RequireChoice = Literal['full-theorem', 'corollary-only']

CSV_COLUMNS = (
    'eta',
    'q',
    'r',
    's',
    'cong_ok',
    'leg_ok',
    'rs_ok',
    'quartic_neq',
    'norm_rs',
    'square_cond',
    'branch',
    'm',
    'A_F',
    'A_K',
    'A_Kp',
    'A_FF',
    'galois',
    'status',
    'reason',
)


class SearchConfig(BaseModel):
    """Parameters of one ``search`` run."""

    max_prime: int = Field(..., ge=2, description="Exclusive bound on q, r and s")
    eta: EtaChoice = 'both'
    require: RequireChoice = Field(
        'full-theorem',
        description="full-theorem adds N(eps_rs) = 1 to the corollary hypotheses",
    )
    unit_digit_cap: int = Field(1_000_000, ge=1000)
    workers: int = Field(1, ge=1)

    @property
    def etas(self) -> tuple[int, ...]:
        return (1, 2) if self.eta == 'both' else (int(self.eta),)


class TripleRecord(BaseModel):
    """One candidate triple with its hypothesis flags and predicted structures."""

    eta: int
    q: int
    r: int
    s: int
    cong_ok: bool
    leg_ok: bool
    rs_ok: bool
    quartic_neq: bool | None = None
    norm_rs: int | None = None
    square_cond: bool | None = None
    branch: str | None = Field(None, description="Which unit-square branch holds: Q, R or S")
    m: int | None = None
    A_F: str | None = None
    A_K: str | None = None
    A_Kp: str | None = None
    A_FF: str | None = None
    galois: str | None = None
    status: RecordStatus
    reason: str = Field('', description="Failed hypothesis or cap that decided the status")

    @property
    def sort_key(self) -> tuple[int, int, int, int]:
        return (self.eta, self.q, self.r, self.s)

    def to_csv_row(self) -> dict[str, str]:
        row: dict[str, str] = {}
        for column in CSV_COLUMNS:
            value = getattr(self, column)
            if value is None:
                row[column] = ''
            elif isinstance(value, bool):
                row[column] = 'true' if value else 'false'
            else:
                row[column] = str(value)
        return row

    @classmethod
    def from_csv_row(cls, row: dict[str, str]) -> 'TripleRecord':
        """Inverse of ``to_csv_row``; empty cells become None."""
        data: dict[str, Any] = {}
        for column in CSV_COLUMNS:
            cell = row.get(column, '')
            if column == 'reason':
                data[column] = cell
            elif cell == '':
                data[column] = None
            elif cell in ('true', 'false'):
                data[column] = cell == 'true'
            else:
                data[column] = cell
        return cls.model_validate(data)


class UnitSummary(BaseModel):
    """Size of a fundamental unit; huge coefficients are never stringified."""

    d: int
    norm: int | None = None
    x_digits: int | None = None
    y_digits: int | None = None
    too_large: bool = False


class VerificationReport(BaseModel):
    record: TripleRecord
    hypotheses: HypothesisReport
    units: list[UnitSummary]
    trichotomy_flags: tuple[bool, bool, bool] | None = None
    dichotomy_sign: int | None = None
    prediction: Prediction | None = None
    coherence: list[CoherenceCheck] = Field(default_factory=list)

    @property
    def coherent(self) -> bool:
        return all(check.holds for check in self.coherence)


class TableSweepReport(BaseModel):
    """Outcome of a ``group_tables`` run."""

    alphas: list[int]
    ns: list[int]
    types: list[int]
    s_values: list[int] | None = None
    k_values: list[int]
    rows: list[SweepRow]

    @property
    def counts(self) -> dict[str, int]:
        counts = {'match': 0, 'mismatch': 0, 'uncovered': 0, 'construction-failed': 0}
        for row in self.rows:
            counts[row.status] += 1
        return counts
