"""
Arithmetic of the (q, r, s, eta) field family.

Given primes q = 3 mod 4 and r = s = 5 mod 8 with the Legendre pattern
(q/r) = (q/s) = (-1)^[eta = 2] and (r/s) = 1, this module checks the
hypotheses, decides which of the unit-square conditions holds for the
fundamental units of Q(sqrt(eta*q*r*s)) and Q(sqrt(rho*q*r*s)), and evaluates
the class-number formulas (Kuroda, the ambiguous class number formula and
Fukuda stability) for the fields built from them:

    F   = Q(sqrt(eta*q*r*s))           F1 = Q(sqrt(2), sqrt(q*r*s))
    K   = Q(sqrt(eta*q), sqrt(r*s))    K1 = Q(sqrt(2), sqrt(q), sqrt(r*s))
    K'  = Q(sqrt(r), sqrt(eta*q*s))    K'' = Q(sqrt(s), sqrt(eta*q*r))
"""

import logging
from enum import Enum
from itertools import combinations
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from .arith import (
    integer_sqrt_exact,
    is_perfect_square,
    is_prime,
    kronecker_delta,
    legendre_symbol,
    prime_factors,
    quartic_symbol,
    squarefree_part,
    two_adic_valuation,
)
from .exceptions import (
    DomainError,
    HypothesisGateError,
    InvariantViolation,
    UnitTooLargeError,
)
from .quadfield import (
    BiquadraticNumber,
    QuadUnit,
    Splitting,
    class_group,
    fundamental_unit,
    h2,
    prime_splitting,
)

logger = logging.getLogger(__name__)


class Condition(str, Enum):
    """Named hypotheses, in the order they are checked."""

    CONGRUENCES = 'congruences'
    LEGENDRE_PATTERN = 'legendre_pattern'
    RS_RESIDUE = 'rs_residue'
    NORM_RS = 'norm_rs'
    SQUARE_CONDITION = 'square_condition'
    QUARTIC_UNEQUAL = 'quartic_unequal'


class Branch(str, Enum):
    """Which unit-square condition holds for eps_{eta*q*r*s}."""

    Q = 'Q'
    R = 'R'
    S = 'S'


class FamilyParams(BaseModel):
    """A triple of primes with the parameter eta; rho is the other element of {1, 2}."""

    model_config = ConfigDict(frozen=True)

    q: int = Field(..., description="Prime, expected 3 mod 4")
    r: int = Field(..., description="Prime, expected 5 mod 8")
    s: int = Field(..., description="Prime, expected 5 mod 8")
    eta: Literal[1, 2] = Field(..., description="Selects F = Q(sqrt(eta*q*r*s))")

    @property
    def rho(self) -> Literal[1, 2]:
        return 2 if self.eta == 1 else 1

    @property
    def sigma(self) -> int:
        """(-1)^[eta = 2]."""
        return 1 if self.eta == 1 else -1

    @property
    def eta_qrs(self) -> int:
        return self.eta * self.q * self.r * self.s

    @property
    def rho_qrs(self) -> int:
        return self.rho * self.q * self.r * self.s

    @property
    def rs(self) -> int:
        return self.r * self.s

    @property
    def qrs(self) -> int:
        return self.q * self.r * self.s

    def label(self) -> str:
        return f"(q={self.q}, r={self.r}, s={self.s}, eta={self.eta})"


class HypothesisReport(BaseModel):
    """Per-condition outcome of the hypothesis chain for one FamilyParams."""

    params: FamilyParams
    congruences: bool
    legendre_pattern: bool
    rs_residue: bool
    quartic_rs: int | None = Field(None, description="(r/s)_4 when defined")
    quartic_sr: int | None = Field(None, description="(s/r)_4 when defined")
    quartic_unequal: bool | None = None
    norm_rs: int | None = Field(None, description="N(eps_rs)")
    square_condition: bool | None = Field(
        None, description="True when 2^[eta=1]*q*(gamma-1) is NOT a square"
    )
    unit_too_large: bool = False
    oversized_units: list[int] = Field(
        default_factory=list, description="Radicands whose unit exceeded the digit cap"
    )
    h2_eta_qrs: int | None = None
    m: int | None = Field(None, description="h2(eta*q*r*s) = 2^(m+1)")
    failed_conditions: list[Condition] = Field(default_factory=list)

    @property
    def family_ok(self) -> bool:
        return self.congruences and self.legendre_pattern and self.rs_residue

    @property
    def corollary_ok(self) -> bool:
        """Hypotheses shared by the biquadratic corollaries."""
        return self.family_ok and self.square_condition is True

    @property
    def theorem_ok(self) -> bool:
        """Every hypothesis of the main theorem, unequal quartic symbols included."""
        return (
            self.corollary_ok
            and self.norm_rs == 1
            and self.quartic_unequal is True
        )

    def require(self, *conditions: Condition) -> None:
        """Raise HypothesisGateError naming the first condition in ``conditions`` that fails."""
        values = {
            Condition.CONGRUENCES: self.congruences,
            Condition.LEGENDRE_PATTERN: self.legendre_pattern,
            Condition.RS_RESIDUE: self.rs_residue,
            Condition.NORM_RS: self.norm_rs == 1,
            Condition.SQUARE_CONDITION: self.square_condition is True,
            Condition.QUARTIC_UNEQUAL: self.quartic_unequal is True,
        }
        for condition in conditions:
            if values[condition]:
                continue
            if condition in (Condition.SQUARE_CONDITION, Condition.NORM_RS) and self.unit_too_large:
                raise HypothesisGateError(
                    condition.value,
                    f"{condition.value} undecided for {self.params.label()}: unit too large",
                )
            raise HypothesisGateError(
                condition.value, f"{condition.value} fails for {self.params.label()}"
            )


FAMILY_CHAIN = (Condition.CONGRUENCES, Condition.LEGENDRE_PATTERN, Condition.RS_RESIDUE)


class TrichotomyResult(BaseModel):
    """
    Outcome of the three-way square test on eps_{eta*q*r*s} = gamma + gamma'*sqrt(eta*q*r*s).

    sqrt(eta * eps) = gamma1*sqrt(f1) + gamma2*sqrt(f2) for the branch factors
    (f1, f2) = (q, eta*r*s), (eta*r, q*s) or (eta*s, q*r).
    """

    which: Branch
    gamma: int
    gamma_prime: int
    gamma1: int
    gamma2: int
    flags: tuple[bool, bool, bool] = Field(..., description="Square flags for Q, R, S")


class DichotomyResult(BaseModel):
    """Outcome of the two-way square test on eps_{rho*q*r*s} = x + y*sqrt(rho*q*r*s)."""

    sign: Literal[1, -1]
    x: int
    y: int
    y1: int
    y2: int
    flags: tuple[bool, bool] = Field(..., description="Square flags for x+1, x-1")


class UnitIndexReport(BaseModel):
    """Unit index q(k) = [E_k : prod E_{k_i}] with a generating-system descriptor."""

    field: str
    q_index: int
    basis: list[str]
    case: int | None = Field(None, description="Case of the K1 unit lemma, when relevant")


class AmbiguousRank(BaseModel):
    """Bounds on the 2-rank of Q(sqrt(base_d), sqrt(ext_d)) over Q(sqrt(base_d))."""

    base_d: int
    ext_d: int
    t: int = Field(..., description="Number of ramified places, finite and infinite")
    lower: int
    upper: int


class IdentityCheck(BaseModel):
    name: str
    lhs: int
    rhs: int

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


class ConjugateRanks(BaseModel):
    k_prime: AmbiguousRank
    k_double_prime: AmbiguousRank


# --------------------------------------------------------------------------- #
# Hypotheses                                                                  #
# --------------------------------------------------------------------------- #


def _require_primes(params: FamilyParams) -> None:
    for name in ('q', 'r', 's'):
        value = getattr(params, name)
        if not is_prime(value) or value == 2:
            raise DomainError(f"{name} = {value} is not an odd prime")
    if params.r == params.s:
        raise DomainError(f"r and s must differ, both are {params.r}")


def _congruences(params: FamilyParams) -> bool:
    return params.q % 4 == 3 and params.r % 8 == 5 and params.s % 8 == 5


def _legendre_pattern(params: FamilyParams) -> bool:
    target = params.sigma
    return (
        legendre_symbol(params.q, params.r) == target
        and legendre_symbol(params.q, params.s) == target
    )


def _rs_residue(params: FamilyParams) -> bool:
    return legendre_symbol(params.r, params.s) == 1


def _gate_family(params: FamilyParams) -> None:
    _require_primes(params)
    checks = (
        (Condition.CONGRUENCES, _congruences),
        (Condition.LEGENDRE_PATTERN, _legendre_pattern),
        (Condition.RS_RESIDUE, _rs_residue),
    )
    for condition, check in checks:
        if not check(params):
            raise HypothesisGateError(
                condition.value, f"{condition.value} fails for {params.label()}"
            )


def _integral_unit(d: int, digit_cap: int | None) -> QuadUnit:
    unit = fundamental_unit(d, digit_cap)
    if not unit.is_integral:
        raise InvariantViolation(f"eps_{d} has half-integral coefficients")
    return unit


def _q_flag(params: FamilyParams, gamma: int) -> int:
    return 2 ** kronecker_delta(params.eta, 1) * params.q * (gamma - 1)


def _mark_oversized(report: HypothesisReport, d: int) -> None:
    logger.warning(f"Unit of Q(sqrt({d})) too large for {report.params.label()}")
    report.unit_too_large = True
    report.oversized_units.append(d)


def symbol_report(params: FamilyParams) -> HypothesisReport:
    """The hypotheses decided by residue symbols alone; no unit is computed."""
    _require_primes(params)
    report = HypothesisReport(
        params=params,
        congruences=_congruences(params),
        legendre_pattern=_legendre_pattern(params),
        rs_residue=_rs_residue(params),
    )
    if report.rs_residue and params.r % 4 == 1 and params.s % 4 == 1:
        report.quartic_rs = quartic_symbol(params.r, params.s)
        report.quartic_sr = quartic_symbol(params.s, params.r)
        report.quartic_unequal = report.quartic_rs != report.quartic_sr
    return report


def check_hypotheses(params: FamilyParams, digit_cap: int | None = None) -> HypothesisReport:
    """
    Evaluate every hypothesis of the family, cheapest first.

    Unit-dependent conditions are only evaluated once the congruence, Legendre
    and (r/s) conditions hold; a unit over the digit cap is recorded in
    ``oversized_units`` and leaves ``norm_rs`` or ``square_condition`` undecided.

    Raises:
        DomainError: if q, r or s is not an odd prime or r == s.
    """
    report = symbol_report(params)

    if report.family_ok:
        try:
            report.norm_rs = fundamental_unit(params.rs, digit_cap).norm
        except UnitTooLargeError:
            _mark_oversized(report, params.rs)
        try:
            gamma = _integral_unit(params.eta_qrs, digit_cap).x_num
        except UnitTooLargeError:
            _mark_oversized(report, params.eta_qrs)
        else:
            report.square_condition = not is_perfect_square(_q_flag(params, gamma))
        report.h2_eta_qrs = h2(params.eta_qrs)
        if report.h2_eta_qrs >= 2:
            report.m = two_adic_valuation(report.h2_eta_qrs) - 1

    failed: list[Condition] = []
    for condition, value in (
        (Condition.CONGRUENCES, report.congruences),
        (Condition.LEGENDRE_PATTERN, report.legendre_pattern),
        (Condition.RS_RESIDUE, report.rs_residue),
        (Condition.NORM_RS, None if report.norm_rs is None else report.norm_rs == 1),
        (Condition.SQUARE_CONDITION, report.square_condition),
        (Condition.QUARTIC_UNEQUAL, report.quartic_unequal),
    ):
        if value is False:
            failed.append(condition)
    report.failed_conditions = failed
    logger.info(f"Hypotheses for {params.label()}: failed={[c.value for c in failed]}")
    return report


# --------------------------------------------------------------------------- #
# Unit square conditions                                                      #
# --------------------------------------------------------------------------- #


def _branch_factors(params: FamilyParams, branch: Branch) -> tuple[int, int, int]:
    """(f1, f2, s_b) with f1*gamma1^2 = eta*(gamma + s_b)/2 and f2*gamma2^2 = eta*(gamma - s_b)/2."""
    q, r, s, eta = params.q, params.r, params.s, params.eta
    if branch == Branch.Q:
        return q, eta * r * s, -1
    if branch == Branch.R:
        return eta * r, q * s, params.sigma
    return eta * s, q * r, params.sigma


def _exact_root(numerator: int, denominator: int, what: str) -> int:
    if numerator % denominator:
        raise InvariantViolation(f"{what}: {denominator} does not divide {numerator}")
    root = integer_sqrt_exact(numerator // denominator)
    if root is None:
        raise InvariantViolation(f"{what}: quotient is not a square")
    return root


def unit_trichotomy(params: FamilyParams, digit_cap: int | None = None) -> TrichotomyResult:
    """
    Decide which of 2^[eta=1]*q*(gamma-1), 2r*(gamma+sigma), 2s*(gamma+sigma) is a square.

    Exactly one of them is; the coefficients gamma1, gamma2 of sqrt(eta*eps)
    are recovered and the branch identity f1*gamma1^2 - f2*gamma2^2 = s_b*eta
    is checked as an integer equation.
    """
    _gate_family(params)
    unit = _integral_unit(params.eta_qrs, digit_cap)
    if unit.norm != 1:
        raise InvariantViolation(f"N(eps_{params.eta_qrs}) = -1 although q = 3 mod 4")
    gamma, gamma_prime = unit.x_num, unit.y_num
    sigma = params.sigma

    flags = (
        is_perfect_square(_q_flag(params, gamma)),
        is_perfect_square(2 * params.r * (gamma + sigma)),
        is_perfect_square(2 * params.s * (gamma + sigma)),
    )
    if sum(flags) != 1:
        raise InvariantViolation(f"square flags {flags} for {params.label()}; expected one")
    which = (Branch.Q, Branch.R, Branch.S)[flags.index(True)]

    f1, f2, s_b = _branch_factors(params, which)
    eta = params.eta
    gamma1 = _exact_root(eta * (gamma + s_b), 2 * f1, f"gamma1 in branch {which.value}")
    gamma2 = _exact_root(eta * (gamma - s_b), 2 * f2, f"gamma2 in branch {which.value}")
    if f1 * gamma1**2 - f2 * gamma2**2 != s_b * eta or eta * gamma_prime != 2 * gamma1 * gamma2:
        raise InvariantViolation(f"branch identity fails for {params.label()}")
    logger.debug(f"Trichotomy for {params.label()}: branch {which.value}")
    return TrichotomyResult(
        which=which,
        gamma=gamma,
        gamma_prime=gamma_prime,
        gamma1=gamma1,
        gamma2=gamma2,
        flags=flags,
    )


def rho_dichotomy(params: FamilyParams, digit_cap: int | None = None) -> DichotomyResult:
    """
    Decide which of 2^[rho=2]*q*(x+1), 2^[rho=2]*q*(x-1) is a square.

    sqrt(2*eps_{rho*q*r*s}) = y1*sqrt(rho*q) + y2*sqrt(r*s) with
    2 = sign*(rho*q*y1^2 - r*s*y2^2) and y = y1*y2.
    """
    _gate_family(params)
    unit = _integral_unit(params.rho_qrs, digit_cap)
    if unit.norm != 1:
        raise InvariantViolation(f"N(eps_{params.rho_qrs}) = -1 although q = 3 mod 4")
    x, y = unit.x_num, unit.y_num
    weight = 2 ** kronecker_delta(params.rho, 2) * params.q
    flags = (is_perfect_square(weight * (x + 1)), is_perfect_square(weight * (x - 1)))
    if sum(flags) != 1:
        raise InvariantViolation(f"square flags {flags} for {params.label()}; expected one")
    sign: Literal[1, -1] = 1 if flags[0] else -1

    rho_q = params.rho * params.q
    y1 = _exact_root(x + sign, rho_q, "y1")
    y2 = _exact_root(x - sign, params.rs, "y2")
    if sign * (rho_q * y1**2 - params.rs * y2**2) != 2 or y != y1 * y2:
        raise InvariantViolation(f"dichotomy identity fails for {params.label()}")
    return DichotomyResult(sign=sign, x=x, y=y, y1=y1, y2=y2, flags=flags)


# --------------------------------------------------------------------------- #
# Unit indices                                                                #
# --------------------------------------------------------------------------- #


def q_index_F1(params: FamilyParams, digit_cap: int | None = None) -> int:
    """q(F1) for F1 = Q(sqrt(2), sqrt(q*r*s)): 2 exactly in the Q branch."""
    return 2 if unit_trichotomy(params, digit_cap).which == Branch.Q else 1


def _unit_in(a: int, b: int, d: int, digit_cap: int | None) -> BiquadraticNumber:
    return BiquadraticNumber.embed(a, b, fundamental_unit(d, digit_cap).as_number())


def _product(factors: list[BiquadraticNumber]) -> BiquadraticNumber:
    result = factors[0]
    for factor in factors[1:]:
        result = result * factor
    return result


def biquadratic_unit_index(d1: int, d2: int, digit_cap: int | None = None) -> UnitIndexReport:
    """
    Unit index of the real biquadratic field k = Q(sqrt(d1), sqrt(d2)).

    Every unit of k squares into E1*E2*E3, so q(k) counts the products of
    subfield units that are squares in k. Real fields have only totally
    positive squares, so -1 never enters.
    """
    if d1 <= 1 or d2 <= 1 or d1 == d2:
        raise DomainError(f"need distinct squarefree d1, d2 > 1, got {d1}, {d2}")
    d3 = squarefree_part(d1 * d2)
    radicands = (d1, d2, d3)
    units = [_unit_in(d1, d2, d, digit_cap) for d in radicands]
    basis = [f"eps_{d}" for d in radicands]
    square_classes = 1
    for size in (1, 2, 3):
        for subset in combinations(range(3), size):
            if _product([units[i] for i in subset]).is_square():
                square_classes += 1
                basis.append('sqrt(' + '*'.join(f"eps_{radicands[i]}" for i in subset) + ')')
    if square_classes not in (1, 2, 4):
        raise InvariantViolation(f"q(Q(sqrt({d1}), sqrt({d2}))) = {square_classes}")
    return UnitIndexReport(
        field=f"Q(sqrt({d1}), sqrt({d2}))", q_index=square_classes, basis=basis
    )


def unit_index_K1(params: FamilyParams, digit_cap: int | None = None) -> UnitIndexReport:
    """
    Unit index and fundamental system of K1 = Q(sqrt(2), sqrt(q), sqrt(r*s)).

    Requires the square condition. The three cases are N(eps_rs) = 1, and for
    N(eps_rs) = -1 whether eps_2*eps_rs*eps_2rs is a square in Q(sqrt(2), sqrt(rs)).
    """
    report = check_hypotheses(params, digit_cap)
    report.require(*FAMILY_CHAIN, Condition.SQUARE_CONDITION)
    head = ['-1', 'eps_2']
    tail = ['eps_etaqrs', 'sqrt(eps_q)', 'sqrt(eps_2q)', 'sqrt(eps_rhoqrs)']
    if report.norm_rs == 1:
        case = 1
        basis = head + ['eps_2rs'] + tail + ['sqrt(eps_rs*eps_etaqrs)']
    else:
        rs = params.rs
        triple = _product([_unit_in(2, rs, d, digit_cap) for d in (2, rs, 2 * rs)])
        if triple.is_square():
            case = 2
            basis = head + ['eps_rs'] + tail + ['sqrt(eps_2*eps_rs*eps_2rs)']
        else:
            case = 3
            basis = head + ['eps_rs'] + tail + ['sqrt(eps_2*eps_rs*eps_2rs*eps_etaqrs)']
    logger.debug(f"Unit lemma case {case} for {params.label()}")
    return UnitIndexReport(
        field=f"Q(sqrt(2), sqrt({params.q}), sqrt({params.rs}))",
        q_index=16,
        basis=basis,
        case=case,
    )


# --------------------------------------------------------------------------- #
# Class number formulas                                                       #
# --------------------------------------------------------------------------- #


def kuroda_class_number(subfield_h: list[int], q_index: int, n: int, real: bool = True) -> int:
    """
    Class number of a multiquadratic field of degree 2^n from its quadratic subfields.

    h = q * prod(h_i) / 2^v with v = n(2^(n-1) - 1) for real fields and
    (n-1)(2^(n-2) - 1) + 2^(n-1) - 1 otherwise. Works unchanged on 2-parts.
    """
    if n < 2:
        raise DomainError(f"n must be at least 2, got {n}")
    if len(subfield_h) != 2**n - 1:
        raise DomainError(f"expected {2**n - 1} subfield class numbers, got {len(subfield_h)}")
    if real:
        v = n * (2 ** (n - 1) - 1)
    else:
        v = (n - 1) * (2 ** (n - 2) - 1) + 2 ** (n - 1) - 1
    numerator = q_index
    for h in subfield_h:
        numerator *= h
    if numerator % 2**v:
        raise DomainError(f"q * prod(h) = {numerator} is not divisible by 2^{v}")
    return numerator // 2**v


def h2_F1(params: FamilyParams, digit_cap: int | None = None) -> int:
    """h2(F1) = q(F1) * h2(eta*q*r*s)."""
    return h2(params.eta_qrs) * q_index_F1(params, digit_cap)


def h2_K(params: FamilyParams) -> tuple[int, int]:
    """(h2(K), q(K)) for K = Q(sqrt(eta*q), sqrt(r*s)); q(K) = 2 iff N(eps_rs) = 1."""
    _gate_family(params)
    q_k = 2 if fundamental_unit(params.rs).norm == 1 else 1
    subfields = [h2(params.eta * params.q), h2(params.rs), h2(params.eta_qrs)]
    return kuroda_class_number(subfields, q_k, 2), q_k


def biquadratic_h2(d1: int, d2: int, digit_cap: int | None = None) -> int:
    """2-class number of Q(sqrt(d1), sqrt(d2)) with q(k) from the unit search."""
    d3 = squarefree_part(d1 * d2)
    q_k = biquadratic_unit_index(d1, d2, digit_cap).q_index
    return kuroda_class_number([h2(d1), h2(d2), h2(d3)], q_k, 2)


def h2_K1(params: FamilyParams, digit_cap: int | None = None) -> int:
    """2-class number of K1 from its seven quadratic subfields and q(K1) = 16."""
    q_k1 = unit_index_K1(params, digit_cap).q_index
    q, rs = params.q, params.rs
    radicands = [2, q, 2 * q, rs, 2 * rs, q * rs, 2 * q * rs]
    return kuroda_class_number([h2(d) for d in radicands], q_k1, 3)


def h2_product_identity(params: FamilyParams) -> IdentityCheck:
    """h2(qrs) * h2(2qrs) against 4 * h2(eta*q*r*s), both recomputed."""
    _gate_family(params)
    return IdentityCheck(
        name='h2(qrs)*h2(2qrs) = 4*h2(eta*qrs)',
        lhs=h2(params.qrs) * h2(2 * params.qrs),
        rhs=4 * h2(params.eta_qrs),
    )


def _ramification_index(p: int | Literal['inf'], base_d: int, ext_d: int) -> int:
    radicands = (base_d, ext_d, squarefree_part(base_d * ext_d))
    ramified = sum(1 for d in radicands if prime_splitting(p, d) == Splitting.RAMIFIED)
    if ramified == 3:
        return 4
    return 2 if ramified else 1


def ambiguous_rank_interval(base_d: int, ext_d: int) -> AmbiguousRank:
    """
    Ambiguous class number formula for k = Q(sqrt(base_d), sqrt(ext_d)) over k' = Q(sqrt(base_d)).

    The 2-rank of A(k) is t - 1 - e with e in {0, 1, 2}; only t is computed,
    so the result is the interval [max(t - 3, 0), t - 1].

    Raises:
        DomainError: if the class number of k' is even.
    """
    if base_d > 1 and class_group(base_d).h % 2 == 0:
        raise DomainError(f"class number of Q(sqrt({base_d})) is even")
    candidates = {2} | {int(p) for p in prime_factors(base_d * ext_d)}
    t = 0
    for p in sorted(candidates):
        if _ramification_index(p, base_d, ext_d) > (
            2 if prime_splitting(p, base_d) == Splitting.RAMIFIED else 1
        ):
            t += 2 if prime_splitting(p, base_d) == Splitting.SPLIT else 1
    if base_d > 0 and ext_d < 0:
        t += 2  # both real places of k' become complex
    logger.debug(f"Ambiguous formula for Q(sqrt({base_d}), sqrt({ext_d})): t={t}")
    return AmbiguousRank(base_d=base_d, ext_d=ext_d, t=t, lower=max(t - 3, 0), upper=t - 1)


def fukuda_stable(h_layer0: int, h_layer1: int) -> bool:
    """Equal 2-class numbers in two consecutive layers stay equal all the way up."""
    return h_layer0 == h_layer1


def fukuda_rank_stable(rank_layer0: int, rank_layer1: int) -> bool:
    return rank_layer0 == rank_layer1


def layer_stability(params: FamilyParams, digit_cap: int | None = None) -> bool:
    """Fukuda stability between F0 = Q(sqrt(eta*q*r*s)) and the first layer F1."""
    return fukuda_stable(h2(params.eta_qrs), h2_F1(params, digit_cap))


def conjugate_ambiguous_ranks(params: FamilyParams) -> ConjugateRanks:
    """Ambiguous-formula bounds for K'/Q(sqrt(r)) and K''/Q(sqrt(s)); r and s are symmetric."""
    _gate_family(params)
    eta, q, r, s = params.eta, params.q, params.r, params.s
    k_prime = ambiguous_rank_interval(r, eta * q * s)
    k_double_prime = ambiguous_rank_interval(s, eta * q * r)
    if (k_prime.t, k_prime.lower) != (k_double_prime.t, k_double_prime.lower):
        raise InvariantViolation(f"K' and K'' disagree for {params.label()}")
    return ConjugateRanks(k_prime=k_prime, k_double_prime=k_double_prime)
