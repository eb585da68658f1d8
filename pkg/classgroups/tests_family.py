"""
Tests for the (q, r, s, eta) hypotheses and the unit-square conditions.

The three triples below are worked by hand:

    (3, 13, 61, 1)   eps_2379 = 1951 + 40*sqrt(2379), branch S, equal quartic symbols
    (19, 5, 61, 1)   eps_5795 = 609 + 8*sqrt(5795), branch Q (square condition fails)
    (23, 5, 61, 2)   eps_14030 = 4719691 + 39846*sqrt(14030), branch R, unequal symbols
"""

from collections.abc import Iterator
from itertools import combinations

from django.conf import settings
from django.test import SimpleTestCase
from sympy import primerange

from .arith import legendre_symbol, quartic_symbol
from .exceptions import DomainError, HypothesisGateError, UnitTooLargeError
from .family import (
    Branch,
    Condition,
    FamilyParams,
    ambiguous_rank_interval,
    biquadratic_h2,
    biquadratic_unit_index,
    check_hypotheses,
    conjugate_ambiguous_ranks,
    fukuda_rank_stable,
    fukuda_stable,
    h2_K1,
    h2_product_identity,
    kuroda_class_number,
    layer_stability,
    q_index_F1,
    rho_dichotomy,
    symbol_report,
    unit_trichotomy,
)
from .quadfield import h2, unit_norm
from .search_service import candidate_triples

EQUAL_SYMBOLS = FamilyParams(q=3, r=13, s=61, eta=1)
SQUARE_FAILS = FamilyParams(q=19, r=5, s=61, eta=1)
UNEQUAL_SYMBOLS = FamilyParams(q=23, r=5, s=61, eta=2)


class FamilyParamsTest(SimpleTestCase):
    """Derived radicands."""

    def test_radicands(self) -> None:
        """eta*q*r*s and rho*q*r*s swap with eta."""
        self.assertEqual(EQUAL_SYMBOLS.eta_qrs, 2379)
        self.assertEqual(EQUAL_SYMBOLS.rho_qrs, 4758)
        self.assertEqual(UNEQUAL_SYMBOLS.eta_qrs, 14030)
        self.assertEqual(UNEQUAL_SYMBOLS.rho, 1)
        self.assertEqual(UNEQUAL_SYMBOLS.sigma, -1)
        self.assertEqual(EQUAL_SYMBOLS.rs, 793)


class HypothesisTest(SimpleTestCase):
    """check_hypotheses flags and the require gate."""

    def test_equal_quartic_symbols(self) -> None:
        """Every theorem hypothesis except unequal quartic symbols holds."""
        report = check_hypotheses(EQUAL_SYMBOLS)
        self.assertTrue(report.family_ok)
        self.assertEqual((report.quartic_rs, report.quartic_sr), (1, 1))
        self.assertFalse(report.quartic_unequal)
        self.assertEqual(report.norm_rs, 1)
        self.assertTrue(report.square_condition)
        self.assertTrue(report.corollary_ok)
        self.assertFalse(report.theorem_ok)
        self.assertEqual(report.failed_conditions, [Condition.QUARTIC_UNEQUAL])

    def test_unequal_quartic_symbols(self) -> None:
        """(5/61)_4 = -1 and (61/5)_4 = 1; the full theorem applies."""
        report = check_hypotheses(UNEQUAL_SYMBOLS)
        self.assertEqual((report.quartic_rs, report.quartic_sr), (-1, 1))
        self.assertTrue(report.quartic_unequal)
        self.assertEqual(report.norm_rs, 1)
        self.assertTrue(report.square_condition)
        self.assertTrue(report.theorem_ok)
        self.assertEqual(report.failed_conditions, [])
        self.assertIsNotNone(report.m)

    def test_square_condition_fails(self) -> None:
        """2*19*(609 - 1) = 152^2."""
        report = check_hypotheses(SQUARE_FAILS)
        self.assertTrue(report.family_ok)
        self.assertFalse(report.square_condition)
        with self.assertRaises(HypothesisGateError) as cm:
            report.require(Condition.CONGRUENCES, Condition.SQUARE_CONDITION)
        self.assertEqual(cm.exception.condition, 'square_condition')

    def test_units_over_digit_cap(self) -> None:
        """With a two-digit cap neither eps_793 nor eps_2379 fits; both stay undecided."""
        report = check_hypotheses(EQUAL_SYMBOLS, digit_cap=2)
        self.assertTrue(report.family_ok)
        self.assertTrue(report.unit_too_large)
        self.assertEqual(report.oversized_units, [793, 2379])
        self.assertIsNone(report.norm_rs)
        self.assertIsNone(report.square_condition)
        self.assertNotIn(Condition.NORM_RS, report.failed_conditions)
        with self.assertRaises(HypothesisGateError) as cm:
            report.require(Condition.NORM_RS)
        self.assertEqual(cm.exception.condition, 'norm_rs')
        self.assertIn('unit too large', str(cm.exception))

    def test_rs_residue_fails(self) -> None:
        """(5/13) = -1 stops the chain before any unit is computed."""
        report = check_hypotheses(FamilyParams(q=3, r=5, s=13, eta=2))
        self.assertFalse(report.rs_residue)
        self.assertIsNone(report.norm_rs)
        self.assertIsNone(report.square_condition)
        self.assertIn(Condition.RS_RESIDUE, report.failed_conditions)

    def test_congruences_fail(self) -> None:
        """q = 1 mod 4 is flagged, not rejected."""
        report = check_hypotheses(FamilyParams(q=17, r=13, s=61, eta=1))
        self.assertFalse(report.congruences)
        with self.assertRaises(HypothesisGateError) as cm:
            report.require(Condition.CONGRUENCES)
        self.assertEqual(cm.exception.condition, 'congruences')

    def test_non_prime_rejected(self) -> None:
        """q = 4 is outside the domain."""
        with self.assertRaises(DomainError):
            check_hypotheses(FamilyParams(q=4, r=13, s=61, eta=1))
        with self.assertRaises(DomainError):
            check_hypotheses(FamilyParams(q=3, r=13, s=13, eta=1))


class UnitTrichotomyTest(SimpleTestCase):
    """Exactly one of the three square flags holds."""

    def test_branch_s(self) -> None:
        """2*61*(1951 + 1) = 488^2; (1952, 1950)/2 = (61*4^2, 39*5^2)."""
        result = unit_trichotomy(EQUAL_SYMBOLS)
        self.assertEqual(result.which, Branch.S)
        self.assertEqual(result.flags, (False, False, True))
        self.assertEqual((result.gamma, result.gamma_prime), (1951, 40))
        self.assertEqual((result.gamma1, result.gamma2), (4, 5))

    def test_branch_q(self) -> None:
        """(609 - 1)/2 = 19*4^2 and (609 + 1)/2 = 305*1^2."""
        result = unit_trichotomy(SQUARE_FAILS)
        self.assertEqual(result.which, Branch.Q)
        self.assertEqual((result.gamma1, result.gamma2), (4, 1))
        self.assertEqual(q_index_F1(SQUARE_FAILS), 2)

    def test_branch_r(self) -> None:
        """10*687^2 = 4719691 - 1 and 1403*58^2 = 4719691 + 1."""
        result = unit_trichotomy(UNEQUAL_SYMBOLS)
        self.assertEqual(result.which, Branch.R)
        self.assertEqual(result.gamma, 4719691)
        self.assertEqual((result.gamma1, result.gamma2), (687, 58))
        self.assertEqual(q_index_F1(UNEQUAL_SYMBOLS), 1)

    def test_rho_dichotomy(self) -> None:
        """sqrt(2*eps) = y1*sqrt(rho*q) + y2*sqrt(r*s) with a single square flag."""
        for params in (EQUAL_SYMBOLS, UNEQUAL_SYMBOLS):
            with self.subTest(params=params.label()):
                result = rho_dichotomy(params)
                rho_q = params.rho * params.q
                self.assertEqual(sum(result.flags), 1)
                self.assertEqual(result.sign * (rho_q * result.y1**2 - params.rs * result.y2**2), 2)
                self.assertEqual(result.y, result.y1 * result.y2)

    def test_gate(self) -> None:
        """(79/5) = (79/13) = 1 but (5/13) = -1."""
        with self.assertRaises(HypothesisGateError) as cm:
            unit_trichotomy(FamilyParams(q=79, r=5, s=13, eta=1))
        self.assertEqual(cm.exception.condition, 'rs_residue')


class ClassNumberFormulaTest(SimpleTestCase):
    """Kuroda, the product identity, the ambiguous formula and Fukuda stability."""

    def test_kuroda_biquadratic(self) -> None:
        """h = q * h1 * h2 * h3 / 4 for a real biquadratic field."""
        self.assertEqual(kuroda_class_number([2, 4, 8], 2, 2), 32)
        self.assertEqual(kuroda_class_number([1, 1, 4], 1, 2), 1)

    def test_product_identity(self) -> None:
        """h2(qrs) * h2(2qrs) = 4 * h2(eta*qrs) on the worked triples."""
        for params in (EQUAL_SYMBOLS, UNEQUAL_SYMBOLS):
            with self.subTest(params=params.label()):
                self.assertTrue(h2_product_identity(params).holds)

    def test_ambiguous_interval(self) -> None:
        """Q(sqrt(5), sqrt(-1)) over Q(sqrt(5)): 2 and both infinite places ramify."""
        rank = ambiguous_rank_interval(5, -1)
        self.assertEqual(rank.t, 3)
        self.assertEqual((rank.lower, rank.upper), (0, 2))

    def test_ambiguous_needs_odd_base(self) -> None:
        """The base field must have odd class number."""
        with self.assertRaises(DomainError):
            ambiguous_rank_interval(10, 3)

    def test_conjugate_fields_agree(self) -> None:
        """K' and K'' have the same number of ramified places."""
        ranks = conjugate_ambiguous_ranks(UNEQUAL_SYMBOLS)
        self.assertEqual(ranks.k_prime.t, ranks.k_double_prime.t)

    def test_ambiguous_interval_q_sqrt_13(self) -> None:
        """Q(sqrt(13), sqrt(183)): 2 inert, 3 and 61 split, so t = 5."""
        rank = ambiguous_rank_interval(13, 3 * 61)
        self.assertEqual((rank.t, rank.lower, rank.upper), (5, 2, 4))
        self.assertEqual(conjugate_ambiguous_ranks(EQUAL_SYMBOLS).k_prime, rank)

    def test_ambiguous_t_by_eta(self) -> None:
        """q splits in Q(sqrt(r)) only for eta = 1, so eta = 2 loses one place."""
        rank = conjugate_ambiguous_ranks(EQUAL_SYMBOLS).k_double_prime
        self.assertEqual((rank.base_d, rank.ext_d), (61, 39))
        self.assertEqual((rank.t, rank.lower, rank.upper), (5, 2, 4))
        rank = conjugate_ambiguous_ranks(UNEQUAL_SYMBOLS).k_prime
        self.assertEqual((rank.base_d, rank.ext_d), (5, 2 * 23 * 61))
        self.assertEqual((rank.t, rank.lower, rank.upper), (4, 1, 3))

    def test_fukuda(self) -> None:
        self.assertTrue(fukuda_stable(8, 8))
        self.assertFalse(fukuda_stable(8, 16))
        self.assertTrue(fukuda_rank_stable(2, 2))

    def test_layer_stability(self) -> None:
        """h2(F1) = q(F1) * h2(F0), so the layer is stable iff q(F1) = 1."""
        self.assertTrue(layer_stability(UNEQUAL_SYMBOLS))
        self.assertFalse(layer_stability(SQUARE_FAILS))


class UnitIndexTest(SimpleTestCase):
    """Wada's unit index for real biquadratic fields and Kuroda's formula on top of it."""

    def test_q_sqrt2_sqrt5(self) -> None:
        """Q(sqrt(2), sqrt(5)) has class number 1, forcing q = 2 against h2(10) = 2."""
        report = biquadratic_unit_index(2, 5)
        self.assertEqual(report.q_index, 2)
        self.assertEqual(len(report.basis), 4)
        self.assertEqual(biquadratic_h2(2, 5), 1)

    def test_rejects_equal_radicands(self) -> None:
        with self.assertRaises(DomainError):
            biquadratic_unit_index(5, 5)

    def test_h2_K1(self) -> None:
        """With q(K1) = 16, Kuroda gives h2(K1) = h2(rs) * h2(eta*qrs) / 2."""
        for params in (EQUAL_SYMBOLS, UNEQUAL_SYMBOLS):
            with self.subTest(params=params.label()):
                self.assertEqual(h2_K1(params), h2(params.rs) * h2(params.eta_qrs) // 2)


def valid_pairs(max_rs: int) -> Iterator[tuple[int, int]]:
    """r < s with r = s = 5 mod 8, (r/s) = 1 and r*s below ``max_rs``."""
    fives = [int(p) for p in primerange(5, max_rs // 5 + 1) if p % 8 == 5]
    for r, s in combinations(fives, 2):
        if r * s < max_rs and legendre_symbol(r, s) == 1:
            yield r, s


def family_triples_below(max_qrs: int) -> Iterator[FamilyParams]:
    """Triples passing the symbol hypotheses with q*r*s below ``max_qrs``."""
    for r, s in valid_pairs(max_qrs // 3 + 1):
        for q in primerange(3, max_qrs // (r * s) + 1):
            if q % 4 != 3 or q * r * s >= max_qrs:
                continue
            for eta in (1, 2):
                params = FamilyParams(q=int(q), r=r, s=s, eta=eta)
                if symbol_report(params).family_ok:
                    yield params


class FamilySweepTest(SimpleTestCase):
    """Exact identities over ranges from settings.PROPERTY_SWEEPS."""

    def setUp(self) -> None:
        self.bounds = settings.PROPERTY_SWEEPS

    def family_triples(self) -> list[FamilyParams]:
        return [
            params
            for params in candidate_triples(self.bounds['family_max_prime'], (1, 2))
            if symbol_report(params).family_ok
        ]

    def test_trichotomy_and_dichotomy(self) -> None:
        """Exactly one square flag in each test, with the branch and +-2 identities."""
        checked = 0
        for params in self.family_triples():
            with self.subTest(params=params.label()):
                try:
                    result = unit_trichotomy(params)
                    dichotomy = rho_dichotomy(params)
                except UnitTooLargeError:
                    continue
                checked += 1
                self.assertEqual(sum(result.flags), 1)
                branches = (Branch.Q, Branch.R, Branch.S)
                self.assertEqual(result.which, branches[result.flags.index(True)])
                self.assertEqual(params.eta * result.gamma_prime, 2 * result.gamma1 * result.gamma2)

                rho_q = params.rho * params.q
                self.assertEqual(sum(dichotomy.flags), 1)
                self.assertEqual(
                    dichotomy.sign * (rho_q * dichotomy.y1**2 - params.rs * dichotomy.y2**2), 2
                )
                self.assertEqual(dichotomy.y, dichotomy.y1 * dichotomy.y2)
        self.assertGreater(checked, 0)

    def test_product_identity_below_bound(self) -> None:
        """h2(qrs) * h2(2qrs) = 4 * h2(eta*qrs) for every family triple with small qrs."""
        checked = 0
        for params in family_triples_below(self.bounds['identity_max_qrs']):
            with self.subTest(params=params.label()):
                identity = h2_product_identity(params)
                self.assertEqual(identity.lhs, identity.rhs)
                checked += 1
        self.assertGreater(checked, 0)

    def test_small_fields_have_odd_class_number(self) -> None:
        """h2(q) = h2(2q) = 1 for every prime q = 3 mod 4 below the bound."""
        for q in primerange(3, self.bounds['small_field_max_prime']):
            if q % 4 != 3:
                continue
            with self.subTest(q=int(q)):
                self.assertEqual(h2(int(q)), 1)
                self.assertEqual(h2(2 * int(q)), 1)

    def test_rs_fields(self) -> None:
        """
        h2(2rs) = 4 for every valid pair.

        N(eps_rs) = 1 forces unequal or trivial quartic symbols, and unequal
        symbols give h2(rs) = 2.
        """
        for r, s in valid_pairs(self.bounds['rs_max']):
            with self.subTest(r=r, s=s):
                self.assertEqual(h2(2 * r * s), 4)
                rs_symbol, sr_symbol = quartic_symbol(r, s), quartic_symbol(s, r)
                if unit_norm(r * s) == 1:
                    self.assertTrue(rs_symbol != sr_symbol or rs_symbol == sr_symbol == 1)
                if rs_symbol != sr_symbol:
                    self.assertEqual(h2(r * s), 2)
