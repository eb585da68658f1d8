"""
Search service for candidate (q, r, s, eta) triples.

Candidates come from a prime sieve already filtered by the congruence classes;
each one is then checked symbol conditions first and unit conditions last, so
the Pell computation only runs for triples that can still pass.
"""

import asyncio
import logging
from concurrent.futures import ProcessPoolExecutor
from itertools import combinations

import django
import logfire
from django.conf import settings
from sympy import primerange

from .arith import decimal_digits
from .exceptions import HypothesisGateError, QuadTowerError, UnitTooLargeError
from .family import (
    FAMILY_CHAIN,
    Condition,
    FamilyParams,
    HypothesisReport,
    check_hypotheses,
    rho_dichotomy,
    symbol_report,
    unit_trichotomy,
)
from .groups import MetacyclicParams
from .predict import THEOREM_CHAIN, Prediction, coherence_checks, predict, predict_biquadratic
from .quadfield import fundamental_unit
from .report_models import (
    RequireChoice,
    SearchConfig,
    TableSweepReport,
    TripleRecord,
    UnitSummary,
    VerificationReport,
)
from .subgroup_tables import SweepRow, sweep_parameters, sweep_rows, sweep_tables

logger = logging.getLogger(__name__)

REQUIRED_CONDITIONS: dict[str, tuple[Condition, ...]] = {
    'full-theorem': THEOREM_CHAIN,
    'corollary-only': (*FAMILY_CHAIN, Condition.SQUARE_CONDITION),
}


def candidate_triples(max_prime: int, etas: tuple[int, ...]) -> list[FamilyParams]:
    """Triples with q = 3 mod 4, r < s and r = s = 5 mod 8, all below ``max_prime``."""
    primes = [int(p) for p in primerange(3, max_prime)]
    qs = [p for p in primes if p % 4 == 3]
    pairs = list(combinations([p for p in primes if p % 8 == 5], 2))
    candidates = [
        FamilyParams(q=q, r=r, s=s, eta=eta)  # type: ignore[arg-type]
        for eta in etas
        for q in qs
        for r, s in pairs
    ]
    return sorted(candidates, key=lambda p: (p.eta, p.q, p.r, p.s))


def _base_record(params: FamilyParams, report: HypothesisReport) -> TripleRecord:
    return TripleRecord(
        eta=params.eta,
        q=params.q,
        r=params.r,
        s=params.s,
        cong_ok=report.congruences,
        leg_ok=report.legendre_pattern,
        rs_ok=report.rs_residue,
        quartic_neq=report.quartic_unequal,
        norm_rs=report.norm_rs,
        square_cond=report.square_condition,
        m=report.m,
        status='ok',
    )


def _fill_prediction(record: TripleRecord, prediction: Prediction) -> None:
    record.A_F = str(prediction.A_F)
    record.A_K = None if prediction.A_K is None else str(prediction.A_K)
    record.A_Kp = None if prediction.A_Kp is None else str(prediction.A_Kp)
    record.A_FF = None if prediction.A_FF is None else str(prediction.A_FF)
    record.galois = None if prediction.galois is None else prediction.galois.value


def evaluate_triple(
    params: FamilyParams,
    require: RequireChoice = 'full-theorem',
    digit_cap: int | None = None,
) -> TripleRecord:
    """
    One search row: hypothesis flags, unit branch, status and predictions.

    A unit over the digit cap is recorded as ``unit-too-large``; a failed
    hypothesis as ``hypothesis-failed`` with the condition in ``reason``. Any
    other QuadTowerError becomes an ``error`` row carrying the message, so one
    bad triple never aborts a search.

    Raises:
        DomainError: if q, r or s is not an odd prime or r == s.
    """
    try:
        return _evaluate_checked(params, require, digit_cap)
    except UnitTooLargeError as exc:
        record = _base_record(params, symbol_report(params))
        record.status = 'unit-too-large'
        record.reason = f"eps_{exc.d} exceeds {exc.digit_cap} digits"
        return record
    except QuadTowerError as exc:
        # symbol_report re-raises DomainError for inputs outside the family
        record = _base_record(params, symbol_report(params))
        logger.warning(f"Triple {params.label()} failed: {exc}")
        record.status = 'error'
        record.reason = f"{type(exc).__name__}: {exc}"
        return record


def _evaluate_checked(
    params: FamilyParams, require: RequireChoice, digit_cap: int | None
) -> TripleRecord:
    report = check_hypotheses(params, digit_cap)
    record = _base_record(params, report)
    if report.unit_too_large:
        cap = digit_cap if digit_cap is not None else settings.UNIT_DIGIT_CAP
        record.status = 'unit-too-large'
        units = ', '.join(f'eps_{d}' for d in report.oversized_units)
        record.reason = f"{units} exceeds {cap} digits"
        return record
    if report.family_ok:
        record.branch = unit_trichotomy(params, digit_cap).which.value
    try:
        report.require(*REQUIRED_CONDITIONS[require])
    except HypothesisGateError as exc:
        record.status = 'hypothesis-failed'
        record.reason = exc.condition
        return record

    try:
        _fill_prediction(record, predict(params, digit_cap))
    except HypothesisGateError:
        # corollary-only rows with N(eps_rs) = -1 only carry the K' prediction
        a_kp, a_k = predict_biquadratic(params, report=report)
        record.A_Kp = str(a_kp)
        record.A_K = None if a_k is None else str(a_k)
    return record


def _unit_summary(d: int, digit_cap: int | None) -> UnitSummary:
    try:
        unit = fundamental_unit(d, digit_cap)
    except UnitTooLargeError:
        return UnitSummary(d=d, too_large=True)
    return UnitSummary(
        d=d,
        norm=unit.norm,
        x_digits=decimal_digits(unit.x_num),
        y_digits=decimal_digits(unit.y_num),
    )


class SearchService:
    """Service for searching, verifying and sweeping."""

    def __init__(self) -> None:
        self.default_workers = getattr(settings, 'SEARCH_WORKERS', 1)

    def search(self, config: SearchConfig) -> list[TripleRecord]:
        """
        Evaluate every candidate triple of ``config``.

        Args:
            config: Bound, eta choice, required hypotheses, digit cap and worker count

        Returns:
            Records sorted by (eta, q, r, s), identical for any worker count
        """
        candidates = candidate_triples(config.max_prime, config.etas)
        with logfire.span(
            'search max_prime={max_prime} eta={eta}',
            max_prime=config.max_prime,
            eta=config.eta,
            candidates=len(candidates),
            workers=config.workers,
        ):
            if config.workers == 1 or len(candidates) < 2:
                records = [
                    evaluate_triple(params, config.require, config.unit_digit_cap)
                    for params in candidates
                ]
            else:
                records = asyncio.run(self._search_parallel(candidates, config))
        statuses = [record.status for record in records]
        logger.info(
            f"Search up to {config.max_prime}: {len(records)} records, "
            f"{statuses.count('ok')} ok, {statuses.count('unit-too-large')} unit-too-large, "
            f"{statuses.count('error')} error"
        )
        return sorted(records, key=lambda record: record.sort_key)

    async def _search_parallel(
        self, candidates: list[FamilyParams], config: SearchConfig
    ) -> list[TripleRecord]:
        loop = asyncio.get_running_loop()
        with ProcessPoolExecutor(max_workers=config.workers, initializer=django.setup) as pool:
            tasks = [
                loop.run_in_executor(
                    pool, evaluate_triple, params, config.require, config.unit_digit_cap
                )
                for params in candidates
            ]
            return list(await asyncio.gather(*tasks))

    def verify(self, params: FamilyParams, digit_cap: int | None = None) -> VerificationReport:
        """Full single-triple pipeline with unit sizes, prediction and coherence checks."""
        with logfire.span('verify {label}', label=params.label()):
            report = check_hypotheses(params, digit_cap)
            record = evaluate_triple(params, 'full-theorem', digit_cap)
            units = [_unit_summary(d, digit_cap) for d in (params.rs, params.eta_qrs, params.rho_qrs)]
            result = VerificationReport(record=record, hypotheses=report, units=units)
            if report.family_ok and not any(u.too_large for u in units):
                result.trichotomy_flags = unit_trichotomy(params, digit_cap).flags
                result.dichotomy_sign = rho_dichotomy(params, digit_cap).sign
            if record.status == 'ok':
                prediction = predict(params, digit_cap)
                result.prediction = prediction
                result.coherence = coherence_checks(params, prediction, digit_cap)
        return result

    def sweep(
        self,
        alphas: list[int],
        ns: list[int],
        types: list[int],
        s_values: list[int] | None,
        k_values: list[int],
        workers: int = 1,
    ) -> TableSweepReport:
        """Table sweep; parameter tuples are spread over ``workers`` processes."""
        with logfire.span('group tables sweep', workers=workers):
            if workers == 1:
                rows = sweep_tables(alphas, ns, types, s_values, k_values)
            else:
                tuples = sweep_parameters(alphas, ns, types, s_values, k_values)
                rows = asyncio.run(self._sweep_parallel(tuples, workers))
        return TableSweepReport(
            alphas=sorted(set(alphas)),
            ns=sorted(set(ns)),
            types=sorted(set(types)),
            s_values=None if s_values is None else sorted(set(s_values)),
            k_values=sorted(set(k_values)),
            rows=rows,
        )

    async def _sweep_parallel(
        self, tuples: list[MetacyclicParams], workers: int
    ) -> list[SweepRow]:
        loop = asyncio.get_running_loop()
        with ProcessPoolExecutor(max_workers=workers, initializer=django.setup) as pool:
            chunks = await asyncio.gather(
                *(loop.run_in_executor(pool, sweep_rows, params) for params in tuples)
            )
        return [row for chunk in chunks for row in chunk]


# Global instance
search_service = SearchService()
