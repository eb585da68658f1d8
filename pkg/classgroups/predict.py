"""
Predicted 2-class-group structures and Galois classification for a triple.

Given FamilyParams whose hypothesis chain holds, the functions here emit the
structures of A(F), A(K), A(K'), A(K''), A(FF) and the presentation of the
Galois group of the maximal unramified pro-2-extension. Every predict_*
function gates on exactly the hypotheses its statement needs and names the
first one that fails.

``coherence_checks`` re-derives the same numbers along independent paths
(form engine, Kuroda/Wada, groups engine) so that a report can show whether
they agree.
"""

import logging
from enum import Enum

from django.conf import settings
from pydantic import BaseModel, Field

from .exceptions import DomainError, HypothesisGateError, InvariantViolation
from .family import (
    FAMILY_CHAIN,
    Condition,
    FamilyParams,
    HypothesisReport,
    biquadratic_h2,
    check_hypotheses,
    conjugate_ambiguous_ranks,
    h2_F1,
    h2_K,
    h2_K1,
    h2_product_identity,
)
from .groups import (
    FiniteGroup,
    MetacyclicParams,
    abelianization,
    build_metacyclic,
    is_minimal,
    standard_subgroups,
)
from .quadfield import AbelianType, class_group, h2

logger = logging.getLogger(__name__)

THEOREM_CHAIN = (*FAMILY_CHAIN, Condition.SQUARE_CONDITION, Condition.NORM_RS)


class GaloisTag(str, Enum):
    """Classification of Gal(L(F_inf)/F_inf) and its refinements."""

    TYPE1_ALPHA2 = 'Type1-α2'
    MINIMAL_ORDER_16 = 'minimal-order-16'
    NOT_TYPE1 = 'not-type1'
    ABELIAN_TRIQUADRATIC = 'abelian-triquadratic'


class Prediction(BaseModel):
    params: FamilyParams
    m: int = Field(..., description="h2(eta*q*r*s) = 2^(m+1)")
    A_F: AbelianType
    A_K: AbelianType | None = None
    A_Kp: AbelianType | None = None
    A_Kpp: AbelianType | None = None
    A_FF: AbelianType | None = None
    galois: GaloisTag | None = None
    refinements: list[GaloisTag] = Field(default_factory=list)
    presentation: MetacyclicParams | None = None
    h2_rs: int | None = Field(None, description="Witness h2(rs) for not-type1 triples")


class CoherenceCheck(BaseModel):
    """One recomputation: what the prediction says against what was computed."""

    name: str
    expected: str
    computed: str
    holds: bool


def _report(
    params: FamilyParams, digit_cap: int | None, report: HypothesisReport | None
) -> HypothesisReport:
    if report is None:
        return check_hypotheses(params, digit_cap)
    if report.params != params:
        raise DomainError(f"hypothesis report is for {report.params.label()}, not {params.label()}")
    return report


def _m(report: HypothesisReport, at_least: int) -> int:
    if report.m is None or report.m < at_least:
        raise InvariantViolation(
            f"h2(eta*q*r*s) = {report.h2_eta_qrs} is too small for {report.params.label()}"
        )
    return report.m


def predict_quadratic(
    params: FamilyParams,
    digit_cap: int | None = None,
    *,
    report: HypothesisReport | None = None,
) -> Prediction:
    """
    A(F) = (2, 2^m) for F = Q(sqrt(eta*q*r*s)); Type1-α2 iff (r/s)_4 != (s/r)_4.

    Raises:
        HypothesisGateError: naming the first failed condition of the chain
            congruences, Legendre pattern, (r/s) = 1, square condition, N(eps_rs) = 1.
    """
    report = _report(params, digit_cap, report)
    report.require(*THEOREM_CHAIN)
    m = _m(report, 1)
    prediction = Prediction(params=params, m=m, A_F=AbelianType.from_two_exponents(1, m))
    if report.quartic_unequal:
        # A(K) = (4, 2^(m-1)) is malformed below m = 2
        _m(report, 2)
        prediction.galois = GaloisTag.TYPE1_ALPHA2
    else:
        prediction.galois = GaloisTag.NOT_TYPE1
        prediction.h2_rs = h2(params.rs)
    return prediction


def predict_presentation(
    params: FamilyParams,
    digit_cap: int | None = None,
    *,
    report: HypothesisReport | None = None,
) -> MetacyclicParams:
    """<a, b | a^4 = 1, b^(2^m) = 1, b^-1 a b = a^-1> as type 1, alpha = 2, n = m."""
    prediction = predict_quadratic(params, digit_cap, report=report)
    if prediction.galois != GaloisTag.TYPE1_ALPHA2:
        raise HypothesisGateError(
            Condition.QUARTIC_UNEQUAL.value,
            f"no Type1-α2 classification for {params.label()}",
        )
    return MetacyclicParams(type=1, alpha=2, n=prediction.m)


def presentation_group(presentation: MetacyclicParams) -> FiniteGroup:
    """The predicted group itself; orders above GROUP_ORDER_LIMIT raise CapacityError."""
    return build_metacyclic(presentation)


def predict_biquadratic(
    params: FamilyParams,
    digit_cap: int | None = None,
    *,
    report: HypothesisReport | None = None,
) -> tuple[AbelianType, AbelianType | None]:
    """
    (A(K'), A(K)) for K' = Q(sqrt(r), sqrt(eta*q*s)) and K = Q(sqrt(eta*q), sqrt(r*s)).

    A(K') = (2, 2^m) needs the square condition only. A(K) = (4, 2^(m-1))
    additionally needs unequal quartic symbols and is None otherwise.
    """
    report = _report(params, digit_cap, report)
    report.require(*FAMILY_CHAIN, Condition.SQUARE_CONDITION)
    m = _m(report, 1)
    a_kp = AbelianType.from_two_exponents(1, m)
    if report.quartic_unequal is not True:
        return a_kp, None
    return a_kp, AbelianType.from_two_exponents(2, _m(report, 2) - 1)


def predict_triquadratic(
    params: FamilyParams,
    digit_cap: int | None = None,
    *,
    report: HypothesisReport | None = None,
) -> AbelianType:
    """A(FF) = (2, 2^(m-1)) for FF = Q(sqrt(eta*q), sqrt(r), sqrt(s))."""
    report = _report(params, digit_cap, report)
    report.require(*THEOREM_CHAIN, Condition.QUARTIC_UNEQUAL)
    return AbelianType.from_two_exponents(1, _m(report, 2) - 1)


def predict_minimal16(
    params: FamilyParams,
    digit_cap: int | None = None,
    *,
    report: HypothesisReport | None = None,
) -> bool:
    report = _report(params, digit_cap, report)
    report.require(*THEOREM_CHAIN)
    return report.h2_eta_qrs == 8


def predict(params: FamilyParams, digit_cap: int | None = None) -> Prediction:
    """
    Every prediction whose gate passes, bundled.

    The primary tag stays in ``galois``; minimal-order-16 and
    abelian-triquadratic are listed in ``refinements``.
    """
    report = check_hypotheses(params, digit_cap)
    prediction = predict_quadratic(params, report=report)
    a_kp, a_k = predict_biquadratic(params, report=report)
    prediction.A_Kp = prediction.A_Kpp = a_kp
    prediction.A_K = a_k
    if prediction.galois == GaloisTag.TYPE1_ALPHA2:
        prediction.presentation = predict_presentation(params, report=report)
        prediction.A_FF = predict_triquadratic(params, report=report)
        if predict_minimal16(params, report=report):
            prediction.refinements.append(GaloisTag.MINIMAL_ORDER_16)
        prediction.refinements.append(GaloisTag.ABELIAN_TRIQUADRATIC)
    logger.info(f"Prediction for {params.label()}: m={prediction.m}, galois={prediction.galois}")
    return prediction


# --------------------------------------------------------------------------- #
# Coherence                                                                   #
# --------------------------------------------------------------------------- #


def _check(name: str, expected: object, computed: object) -> CoherenceCheck:
    return CoherenceCheck(
        name=name, expected=str(expected), computed=str(computed), holds=str(expected) == str(computed)
    )


def _table_checks(prediction: Prediction) -> list[CoherenceCheck]:
    presentation = prediction.presentation
    assert presentation is not None
    group = presentation_group(presentation)
    subs = standard_subgroups(group)
    checks = [
        _check('A(K) = H32^ab', prediction.A_K, abelianization(subs['H32'])),
        _check("A(K') = H12^ab", prediction.A_Kp, abelianization(subs['H12'])),
        _check("A(K'') = H22^ab", prediction.A_Kpp, abelianization(subs['H22'])),
        _check('A(FF) = H34^ab', prediction.A_FF, abelianization(subs['H34'])),
        _check('G^ab = (2, 2^m)', prediction.A_F, abelianization(group)),
    ]
    if GaloisTag.MINIMAL_ORDER_16 in prediction.refinements:
        target = AbelianType(divisors=(2, 4))
        checks += [
            _check('minimal case: |G| = 16', 16, group.order),
            _check('minimal case: G is minimal', True, is_minimal(group)),
            _check('minimal case: H12^ab = (2, 4)', target, abelianization(subs['H12'])),
            _check('minimal case: H22^ab = (2, 4)', target, abelianization(subs['H22'])),
        ]
    return checks


def coherence_checks(
    params: FamilyParams, prediction: Prediction, digit_cap: int | None = None
) -> list[CoherenceCheck]:
    """
    Independent recomputations of a prediction.

    Covers the order and form-engine structure of A(F), the Kuroda and Wada
    paths for h2(K), h2(F1) and h2(K1), the product identity, the K'/K''
    ambiguous-class bounds and, when the predicted group fits
    GROUP_ORDER_LIMIT, the structures read off its standard subgroups.
    """
    eta_qrs = params.eta_qrs
    h_f = h2(eta_qrs)
    checks = [
        _check('|A(F)| = h2(eta*qrs)', prediction.A_F.order, h_f),
        _check('A(F) from reduced forms', prediction.A_F, class_group(eta_qrs).two_sylow),
        _check('h2(F1) = h2(F)', h_f, h2_F1(params, digit_cap)),
    ]
    identity = h2_product_identity(params)
    checks.append(_check(identity.name, identity.rhs, identity.lhs))

    h_k, q_k = h2_K(params)
    checks.append(_check('q(K) = 2', 2, q_k))
    checks.append(
        _check('h2(K) by Wada unit index', h_k, biquadratic_h2(params.eta * params.q, params.rs, digit_cap))
    )
    if prediction.A_K is not None:
        checks.append(_check('|A(K)| = h2(K)', prediction.A_K.order, h_k))
    checks.append(_check('h2(K1) = h2(rs)*h2(eta*qrs)/2', h2(params.rs) * h_f // 2, h2_K1(params, digit_cap)))

    ranks = conjugate_ambiguous_ranks(params)
    checks.append(
        _check("K'/K'' ambiguous bounds", ranks.k_prime.t, ranks.k_double_prime.t)
    )
    # 2 and s ramify in K'/Q(sqrt(r)); q splits there iff eta = 1, so the lower
    # bound is 2 for eta = 1 and only 1 for eta = 2.
    checks.append(
        _check("ramified primes of K'/Q(sqrt(r))", 5 if params.eta == 1 else 4, ranks.k_prime.t)
    )
    if prediction.A_Kp is not None:
        rank = prediction.A_Kp.two_rank
        k_prime = ranks.k_prime
        checks.append(
            CoherenceCheck(
                name="2-rank of A(K') within ambiguous bounds",
                expected=f"[{k_prime.lower}, {k_prime.upper}]",
                computed=str(rank),
                holds=k_prime.lower <= rank <= k_prime.upper,
            )
        )

    order_limit = getattr(settings, 'GROUP_ORDER_LIMIT', 2**12)
    if prediction.presentation is not None and prediction.presentation.order <= order_limit:
        checks += _table_checks(prediction)

    failed = [c.name for c in checks if not c.holds]
    if failed:
        logger.warning(f"Coherence failures for {params.label()}: {failed}")
    return checks
