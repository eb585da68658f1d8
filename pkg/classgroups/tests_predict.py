"""
Tests for the predicted 2-class-group structures and the coherence checks.
"""

from django.test import SimpleTestCase

from .exceptions import HypothesisGateError
from .family import FamilyParams, check_hypotheses
from .groups import MetacyclicParams, abelianization
from .predict import (
    GaloisTag,
    coherence_checks,
    predict,
    predict_biquadratic,
    predict_minimal16,
    predict_presentation,
    predict_quadratic,
    predict_triquadratic,
    presentation_group,
)
from .quadfield import AbelianType, class_group, h2

EQUAL_SYMBOLS = FamilyParams(q=3, r=13, s=61, eta=1)
SQUARE_FAILS = FamilyParams(q=19, r=5, s=61, eta=1)
UNEQUAL_SYMBOLS = FamilyParams(q=23, r=5, s=61, eta=2)


class QuadraticPredictionTest(SimpleTestCase):
    """A(F) and the Galois classification."""

    def test_type1_alpha2(self) -> None:
        """Unequal quartic symbols give Type1-α2 with A(F) = (2, 2^m)."""
        prediction = predict_quadratic(UNEQUAL_SYMBOLS)
        self.assertEqual(prediction.galois, GaloisTag.TYPE1_ALPHA2)
        self.assertGreaterEqual(prediction.m, 2)
        self.assertEqual(prediction.A_F, AbelianType.from_two_exponents(1, prediction.m))
        self.assertEqual(prediction.A_F.order, h2(14030))
        self.assertIsNone(prediction.h2_rs)

    def test_not_type1(self) -> None:
        """Equal quartic symbols with N(eps_rs) = 1 force 4 | h2(rs)."""
        prediction = predict_quadratic(EQUAL_SYMBOLS)
        self.assertEqual(prediction.galois, GaloisTag.NOT_TYPE1)
        self.assertEqual(prediction.h2_rs, h2(793))
        assert prediction.h2_rs is not None
        self.assertEqual(prediction.h2_rs % 4, 0)

    def test_gate_names_first_failure(self) -> None:
        """Each predict_* function reports the first failed hypothesis."""
        for function in (predict_quadratic, predict_biquadratic, predict_triquadratic, predict_minimal16):
            with self.subTest(function=function.__name__):
                with self.assertRaises(HypothesisGateError) as cm:
                    function(SQUARE_FAILS)
                self.assertEqual(cm.exception.condition, 'square_condition')

    def test_shared_report(self) -> None:
        """A precomputed hypothesis report is reused when passed in."""
        report = check_hypotheses(UNEQUAL_SYMBOLS)
        self.assertEqual(
            predict_quadratic(UNEQUAL_SYMBOLS, report=report).m,
            predict_quadratic(UNEQUAL_SYMBOLS).m,
        )


class PresentationTest(SimpleTestCase):
    """The predicted Galois group."""

    def test_presentation(self) -> None:
        """<a, b | a^4 = b^(2^m) = 1, b^-1 a b = a^-1>."""
        presentation = predict_presentation(UNEQUAL_SYMBOLS)
        m = predict_quadratic(UNEQUAL_SYMBOLS).m
        self.assertEqual(presentation, MetacyclicParams(type=1, alpha=2, n=m))
        self.assertEqual(presentation.order, 2 ** (m + 2))

    def test_no_presentation_for_equal_symbols(self) -> None:
        with self.assertRaises(HypothesisGateError) as cm:
            predict_presentation(EQUAL_SYMBOLS)
        self.assertEqual(cm.exception.condition, 'quartic_unequal')

    def test_presentation_group_matches_class_group(self) -> None:
        """G^ab of the predicted group is A(F) computed from reduced forms."""
        presentation = predict_presentation(UNEQUAL_SYMBOLS)
        if presentation.order > 2**12:
            self.skipTest("predicted group above the default GROUP_ORDER_LIMIT")
        group = presentation_group(presentation)
        self.assertEqual(abelianization(group), class_group(14030).two_sylow)


class FieldPredictionTest(SimpleTestCase):
    """A(K'), A(K) and A(FF)."""

    def test_biquadratic(self) -> None:
        """A(K) is only predicted when the quartic symbols differ."""
        a_kp, a_k = predict_biquadratic(UNEQUAL_SYMBOLS)
        m = predict_quadratic(UNEQUAL_SYMBOLS).m
        self.assertEqual(a_kp, AbelianType.from_two_exponents(1, m))
        self.assertEqual(a_k, AbelianType.from_two_exponents(2, m - 1))

        a_kp, a_k = predict_biquadratic(EQUAL_SYMBOLS)
        self.assertIsNone(a_k)
        self.assertEqual(a_kp.two_rank, 2)

    def test_triquadratic(self) -> None:
        m = predict_quadratic(UNEQUAL_SYMBOLS).m
        self.assertEqual(predict_triquadratic(UNEQUAL_SYMBOLS), AbelianType.from_two_exponents(1, m - 1))
        with self.assertRaises(HypothesisGateError) as cm:
            predict_triquadratic(EQUAL_SYMBOLS)
        self.assertEqual(cm.exception.condition, 'quartic_unequal')

    def test_minimal16(self) -> None:
        """Minimal order 16 exactly when h2(eta*q*r*s) = 8."""
        self.assertEqual(predict_minimal16(UNEQUAL_SYMBOLS), h2(14030) == 8)


class BundleTest(SimpleTestCase):
    """predict() and coherence_checks()."""

    def test_bundle_for_type1(self) -> None:
        """All structures are filled and the triquadratic refinement is listed."""
        prediction = predict(UNEQUAL_SYMBOLS)
        self.assertEqual(prediction.galois, GaloisTag.TYPE1_ALPHA2)
        self.assertEqual(prediction.A_Kp, prediction.A_Kpp)
        self.assertIsNotNone(prediction.A_K)
        self.assertIsNotNone(prediction.A_FF)
        self.assertIsNotNone(prediction.presentation)
        self.assertIn(GaloisTag.ABELIAN_TRIQUADRATIC, prediction.refinements)
        self.assertEqual(
            GaloisTag.MINIMAL_ORDER_16 in prediction.refinements, prediction.m == 2
        )

    def test_bundle_for_not_type1(self) -> None:
        """No presentation and no refinements without unequal quartic symbols."""
        prediction = predict(EQUAL_SYMBOLS)
        self.assertEqual(prediction.galois, GaloisTag.NOT_TYPE1)
        self.assertIsNone(prediction.presentation)
        self.assertIsNone(prediction.A_K)
        self.assertIsNone(prediction.A_FF)
        self.assertEqual(prediction.refinements, [])

    def test_coherence_checks(self) -> None:
        """The class-group side agrees with the prediction."""
        prediction = predict(UNEQUAL_SYMBOLS)
        checks = {check.name: check for check in coherence_checks(UNEQUAL_SYMBOLS, prediction)}
        self.assertTrue(checks['|A(F)| = h2(eta*qrs)'].holds)
        self.assertTrue(checks['A(F) from reduced forms'].holds)
        self.assertTrue(checks['h2(F1) = h2(F)'].holds)
        self.assertTrue(checks['q(K) = 2'].holds)
        if prediction.presentation is not None and prediction.presentation.order <= 2**12:
            self.assertTrue(checks['G^ab = (2, 2^m)'].holds)
            self.assertTrue(checks['A(K) = H32^ab'].holds)

    def test_ambiguous_checks(self) -> None:
        """t = 5 with rank >= 2 for eta = 1; t = 4 with lower bound 1 for eta = 2."""
        cases = ((EQUAL_SYMBOLS, '5', '[2, 4]'), (UNEQUAL_SYMBOLS, '4', '[1, 3]'))
        for params, t, bounds in cases:
            with self.subTest(params=params.label()):
                checks = {check.name: check for check in coherence_checks(params, predict(params))}
                ramified = checks["ramified primes of K'/Q(sqrt(r))"]
                self.assertEqual(ramified.computed, t)
                self.assertTrue(ramified.holds)
                within = checks["2-rank of A(K') within ambiguous bounds"]
                self.assertEqual(within.expected, bounds)
                self.assertTrue(within.holds)
