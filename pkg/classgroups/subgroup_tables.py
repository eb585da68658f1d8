"""
Published structure tables for the subgroups H_{i,2} and H_{i,4}.

Each row states, for a block of metacyclic parameters, a generator list for
H, the order of H' (always a subgroup <a^(2^e)> of <a>) and the structure of
H^ab as a pair of 2-exponents. ``verify_table_row`` checks a resolved row
against the groups engine; the abelianization is the claim under test and a
generator list that does not span the standard subgroup is recorded
separately.
"""

import logging
from collections.abc import Callable, Iterable
from dataclasses import dataclass
from typing import Literal

from pydantic import BaseModel, Field

from .exceptions import ConstructionError, CoverageError, DomainError
from .groups import (
    FiniteGroup,
    MetacyclicParams,
    abelianization,
    build_metacyclic,
    closure,
    derived_subgroup,
    standard_subgroups,
)
from .quadfield import AbelianType

logger = logging.getLogger(__name__)

Word = tuple[int, int]
SweepStatus = Literal['match', 'mismatch', 'uncovered', 'construction-failed']


class AuxiliaryParameters(BaseModel):
    """epsilon, epsilon', delta, omega, omega', xi as functions of alpha and n."""

    alpha: int
    n: int

    @property
    def epsilon(self) -> int:
        return 0 if self.n <= self.alpha else 1

    @property
    def epsilon_prime(self) -> int:
        return 1 if self.n <= self.alpha else 0

    @property
    def delta(self) -> int:
        return 1 if self.n <= self.alpha else 0

    @property
    def omega(self) -> int:
        if self.n == self.alpha:
            return 0
        return 1 if self.n < self.alpha else -1

    @property
    def omega_prime(self) -> int:
        return 0 if self.n == self.alpha else 1

    @property
    def xi(self) -> int:
        """Only defined for n != alpha."""
        if self.n == self.alpha:
            raise CoverageError(f"xi is undefined for n = alpha = {self.n}")
        return 0 if self.n < self.alpha else 1


class TableEntry(BaseModel):
    """One table row resolved for concrete parameters."""

    level: int
    i: int
    block: str = Field(..., description="Row condition as printed, e.g. 'type 1, alpha = 2'")
    generators: str = Field(..., description="Generator list as printed, e.g. '<a^2, b>'")
    words: tuple[Word, ...] = Field(..., description="Generators as exponent pairs (i, j) for a^i b^j")
    derived_exponent: int | None = Field(
        None, description="H' = <a^(2^e)>; None when the row states H' = 1"
    )
    abelianization_exponents: tuple[int, int]

    def expected_derived_order(self, alpha: int) -> int:
        if self.derived_exponent is None:
            return 1
        if self.derived_exponent < 0:
            raise CoverageError(f"negative exponent in <a^(2^{self.derived_exponent})>")
        return 2 ** max(alpha - self.derived_exponent, 0)

    def expected_abelianization(self) -> AbelianType:
        try:
            return AbelianType.from_two_exponents(*self.abelianization_exponents)
        except DomainError as exc:
            raise CoverageError(str(exc)) from exc


class TableMatch(BaseModel):
    """Outcome of checking one resolved row against the groups engine."""

    params: MetacyclicParams
    i: int
    level: int
    block: str
    generators: str
    expected_derived_order: int
    computed_derived_order: int
    expected_abelianization: str
    computed_abelianization: str
    generators_match: bool

    @property
    def matches(self) -> bool:
        return (
            self.expected_derived_order == self.computed_derived_order
            and self.expected_abelianization == self.computed_abelianization
        )


class SweepRow(BaseModel):
    params: MetacyclicParams
    i: int
    level: int
    status: SweepStatus
    detail: str = ''
    result: TableMatch | None = None


# --------------------------------------------------------------------------- #
# Row resolution                                                              #
# --------------------------------------------------------------------------- #


@dataclass(frozen=True)
class _Row:
    block: str
    applies: Callable[[MetacyclicParams], bool]
    generators: str
    words: Callable[[MetacyclicParams], tuple[Word, ...]]
    derived: Callable[[MetacyclicParams], int | None]
    exponents: Callable[[MetacyclicParams, AuxiliaryParameters], tuple[int, int]]


def _s(p: MetacyclicParams) -> int:
    # t = -1 for types 1 and 2, i.e. -1 + 2^alpha, so s reads as alpha.
    return p.s if p.s is not None else p.alpha


def _alpha2(p: MetacyclicParams) -> bool:
    return p.type == 1 and p.alpha == 2


def _level2_row3_first(p: MetacyclicParams) -> bool:
    return p.alpha >= 3 and (p.type == 1 or (p.type == 3 and p.s == p.alpha - 1))


def _level2_row3_second(p: MetacyclicParams) -> bool:
    return p.alpha >= 3 and (p.type == 2 or (p.type == 4 and p.s == p.alpha - 1))


def _level2_row3_third(p: MetacyclicParams) -> bool:
    return p.alpha >= 4 and p.type in (3, 4) and _s(p) < p.alpha - 1


def _c1(p: MetacyclicParams) -> bool:
    return p.alpha >= 3 and (p.type == 1 or (p.type == 3 and p.s in (p.alpha - 1, p.alpha - 2)))


def _c2(p: MetacyclicParams) -> bool:
    return p.alpha >= 3 and (p.type == 2 or (p.type == 4 and p.s == p.alpha - 2))


def _c3(p: MetacyclicParams) -> bool:
    return p.alpha >= 5 and p.type in (3, 4) and _s(p) < p.alpha - 2


def _none(p: MetacyclicParams) -> None:
    return None


ALPHA2 = 'type 1, alpha = 2'
ALPHA3 = 'alpha >= 3'
T1_C1 = 'type 1, or type 3 with s = alpha - 1'
T1_C2 = 'type 2, or type 4 with s = alpha - 1'
T1_C3 = 'types 3, 4 with s < alpha - 1, alpha >= 4'
T2_C1 = 'type 1, or type 3 with s in {alpha - 1, alpha - 2}'
T2_C2 = 'type 2, or type 4 with s = alpha - 2'
T2_C3 = 'types 3, 4 with s < alpha - 2, alpha >= 5'

_INDEX_2: dict[int, list[_Row]] = {
    1: [
        _Row(ALPHA2, _alpha2, '<a^2, b>', lambda p: ((2, 0), (0, 1)), _none,
             lambda p, x: (1, p.n)),
        _Row(ALPHA3, lambda p: p.alpha >= 3, '<a^2, b>', lambda p: ((2, 0), (0, 1)),
             lambda p: 2, lambda p, x: (1, p.n)),
    ],
    2: [
        _Row(ALPHA2, _alpha2, '<a^2, ab>', lambda p: ((2, 0), (1, 1)), _none,
             lambda p, x: (1, p.n)),
        _Row(ALPHA3, lambda p: p.alpha >= 3, '<a^2, ab>', lambda p: ((2, 0), (1, 1)),
             lambda p: 2, lambda p, x: (1, p.n)),
    ],
    3: [
        _Row(ALPHA2, _alpha2, '<a, b^2>', lambda p: ((1, 0), (0, 2)), _none,
             lambda p, x: (2, p.n - 1)),
        _Row(T1_C1, _level2_row3_first, '<a, b^2>', lambda p: ((1, 0), (0, 2)), _none,
             lambda p, x: (p.alpha, p.n - 1)),
        _Row(T1_C2, _level2_row3_second, '<a, b^2>', lambda p: ((1, 0), (0, 2)), _none,
             lambda p, x: (p.alpha - x.epsilon, p.n - x.epsilon_prime)),
        _Row(T1_C3, _level2_row3_third, '<a, b^2>', lambda p: ((1, 0), (0, 2)),
             lambda p: _s(p) + 1, lambda p, x: (_s(p) + 1, p.n - 1)),
    ],
}

_INDEX_4: dict[int, list[_Row]] = {
    1: [
        _Row(ALPHA2, _alpha2, '<a, b^4>', lambda p: ((1, 0), (0, 4)), _none,
             lambda p, x: (2, p.n - 2)),
        _Row(T2_C1, _c1, '<a, b^4>', lambda p: ((1, 0), (0, 4)), _none,
             lambda p, x: (p.alpha, p.n - 2)),
        _Row(T2_C2, _c2, '<a, b^4>', lambda p: ((1, 0), (0, 4)), _none,
             lambda p, x: (p.alpha - x.epsilon, p.n - 1 - x.epsilon_prime)),
        _Row(T2_C3, _c3, '<a, b^4>', lambda p: ((1, 0), (0, 4)),
             lambda p: _s(p) + 2, lambda p, x: (_s(p) + 2, p.n - 2)),
    ],
    2: [
        _Row(ALPHA2, _alpha2, '<a^2, ab^2>', lambda p: ((2, 0), (1, 2)), _none,
             lambda p, x: (2, 0) if p.n == 2 else (1, p.n - 1)),
        _Row(T2_C1, _c1, '<a^2, ab^2>', lambda p: ((2, 0), (1, 2)), _none,
             lambda p, x: (p.alpha - x.epsilon, p.n - 1 - x.epsilon_prime)),
        _Row(T2_C2, _c2, '<a^2, ab^2>', lambda p: ((2, 0), (1, 2)), _none,
             lambda p, x: (p.alpha - 1 + x.omega, p.n - 1 + x.omega_prime)),
        _Row(T2_C3, _c3, '<a^2, ab^2>', lambda p: ((2, 0), (1, 2)),
             lambda p: _s(p) + 2, lambda p, x: (_s(p) + 1 + x.delta, p.n - 1 - x.delta)),
    ],
    3: [
        _Row(ALPHA2, _alpha2, '<a^2, b^2>', lambda p: ((2, 0), (0, 2)), _none,
             lambda p, x: (1, p.n - 1)),
        _Row(T2_C1, _c1, '<a^2, b^2>', lambda p: ((2, 0), (0, 2)), _none,
             lambda p, x: (p.alpha - 1, p.n - 1)),
        _Row(T2_C2, _c2, '<a^2, ab^2>', lambda p: ((2, 0), (1, 2)),
             lambda p: _s(p) + 2, lambda p, x: (p.alpha - 1 - x.xi, p.n - 1 + x.xi)),
        _Row(T2_C3, _c3, '<a^(2^(s+2)), b^2>', lambda p: ((2 ** (_s(p) + 2), 0), (0, 2)),
             lambda p: _s(p) + 2, lambda p, x: (_s(p) + 1, p.n - 1)),
    ],
}

TABLES: dict[int, dict[int, list[_Row]]] = {2: _INDEX_2, 4: _INDEX_4}


def table_entry(params: MetacyclicParams, i: int, level: int) -> TableEntry:
    """
    Resolve the row of the index-``level`` table that covers ``params``.

    Raises:
        DomainError: if ``i`` or ``level`` is out of range.
        CoverageError: if no row applies or an auxiliary parameter is undefined.
    """
    if level not in TABLES or i not in (1, 2, 3):
        raise DomainError(f"no table row H_{i}{level}; need i in 1..3 and level in (2, 4)")
    rows = [row for row in TABLES[level][i] if row.applies(params)]
    if not rows:
        raise CoverageError(f"no row of the index-{level} table covers {params.label()}")
    row = rows[0]
    aux = AuxiliaryParameters(alpha=params.alpha, n=params.n)
    return TableEntry(
        level=level,
        i=i,
        block=row.block,
        generators=row.generators,
        words=row.words(params),
        derived_exponent=row.derived(params),
        abelianization_exponents=row.exponents(params, aux),
    )


def verify_table_row(
    params: MetacyclicParams, i: int, level: int, group: FiniteGroup | None = None
) -> TableMatch:
    """Compare a table row with |H'| and H^ab computed from the built group."""
    entry = table_entry(params, i, level)
    expected_ab = entry.expected_abelianization()
    expected_derived = entry.expected_derived_order(params.alpha)
    if group is None:
        group = build_metacyclic(params)
    subgroup = standard_subgroups(group)[f"H{i}{level}"]
    listed = closure(group, [group.word(x, y) for x, y in entry.words])
    result = TableMatch(
        params=params,
        i=i,
        level=level,
        block=entry.block,
        generators=entry.generators,
        expected_derived_order=expected_derived,
        computed_derived_order=derived_subgroup(subgroup).order,
        expected_abelianization=str(expected_ab),
        computed_abelianization=str(abelianization(subgroup)),
        generators_match=listed == subgroup,
    )
    if not result.matches:
        logger.info(
            f"H_{i}{level} for {params.label()}: table {result.expected_abelianization} "
            f"|H'|={expected_derived}, computed {result.computed_abelianization} "
            f"|H'|={result.computed_derived_order}"
        )
    return result


def sweep_parameters(
    alphas: Iterable[int],
    ns: Iterable[int],
    types: Iterable[int],
    s_values: Iterable[int] | None = None,
    k_values: Iterable[int] = (1, 3),
) -> list[MetacyclicParams]:
    """Parameter tuples of a sweep; ``s_values=None`` means every s with alpha > s > 1."""
    ks = sorted(set(k_values))
    explicit_s = None if s_values is None else sorted(set(s_values))
    result: list[MetacyclicParams] = []
    for alpha in sorted(set(alphas)):
        for n in sorted(set(ns)):
            for group_type in sorted(set(types)):
                if group_type in (1, 2):
                    result.append(MetacyclicParams(type=group_type, alpha=alpha, n=n))  # type: ignore[arg-type]
                    continue
                s_range = explicit_s if explicit_s is not None else range(2, alpha)
                for s in s_range:
                    for k in ks:
                        result.append(
                            MetacyclicParams(type=group_type, alpha=alpha, n=n, s=s, k=k)  # type: ignore[arg-type]
                        )
    return result


def sweep_rows(params: MetacyclicParams) -> list[SweepRow]:
    """The six table checks for one parameter tuple, level 2 first."""
    try:
        group = build_metacyclic(params)
    except ConstructionError as exc:
        return [
            SweepRow(params=params, i=i, level=level, status='construction-failed', detail=str(exc))
            for level in (2, 4)
            for i in (1, 2, 3)
        ]
    rows: list[SweepRow] = []
    for level in (2, 4):
        for i in (1, 2, 3):
            try:
                match = verify_table_row(params, i, level, group)
            except CoverageError as exc:
                rows.append(
                    SweepRow(params=params, i=i, level=level, status='uncovered', detail=str(exc))
                )
                continue
            rows.append(
                SweepRow(
                    params=params,
                    i=i,
                    level=level,
                    status='match' if match.matches else 'mismatch',
                    detail='' if match.generators_match else 'generator list spans a different subgroup',
                    result=match,
                )
            )
    return rows


def sweep_tables(
    alphas: Iterable[int],
    ns: Iterable[int],
    types: Iterable[int],
    s_values: Iterable[int] | None = None,
    k_values: Iterable[int] = (1, 3),
) -> list[SweepRow]:
    """
    Check every row H_{i,2}, H_{i,4} for every parameter tuple.

    Rows come out in parameter order, then level, then i.

    Raises:
        CapacityError: if a group exceeds GROUP_ORDER_LIMIT.
    """
    rows: list[SweepRow] = []
    for params in sweep_parameters(alphas, ns, types, s_values, k_values):
        rows.extend(sweep_rows(params))
    logger.info(f"Table sweep checked {len(rows)} rows")
    return rows
