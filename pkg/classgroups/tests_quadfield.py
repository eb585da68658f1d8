"""
Tests for real quadratic field invariants: units, class groups and exact arithmetic.
"""

from fractions import Fraction

from django.conf import settings
from django.core.cache import caches
from django.test import SimpleTestCase

from .arith import RelationLattice, is_squarefree, prime_factors, squarefree_part
from .exceptions import DomainError, UnitTooLargeError
from .quadfield import (
    AbelianType,
    BiquadraticNumber,
    QuadraticNumber,
    Splitting,
    class_group,
    compose_forms,
    composition_table,
    form_cycles,
    fundamental_discriminant,
    fundamental_unit,
    h2,
    is_fundamental_discriminant,
    is_reduced,
    narrow_class_group,
    prime_splitting,
    reduce_form,
    reduced_forms,
    unit_norm,
)


class AbelianTypeTest(SimpleTestCase):
    """Normal form of finite abelian groups."""

    def test_from_cyclic_orders(self) -> None:
        """Z/2 x Z/4 x Z/3 = Z/2 x Z/12."""
        structure = AbelianType.from_cyclic_orders([2, 4, 3])
        self.assertEqual(structure.divisors, (2, 12))
        self.assertEqual(str(structure), '2x12')
        self.assertEqual(structure.order, 24)
        self.assertEqual(structure.two_rank, 2)
        self.assertEqual(str(structure.two_sylow()), '2x4')

    def test_from_two_exponents(self) -> None:
        """Exponent 0 contributes nothing; negative exponents are malformed."""
        self.assertEqual(str(AbelianType.from_two_exponents(1, 0)), '2')
        self.assertEqual(str(AbelianType.from_two_exponents(3, 1)), '2x8')
        with self.assertRaises(DomainError):
            AbelianType.from_two_exponents(2, -1)

    def test_parse(self) -> None:
        """'1' is the trivial group and parse inverts str."""
        self.assertEqual(AbelianType.parse('1'), AbelianType())
        self.assertEqual(AbelianType.parse('2x4').divisors, (2, 4))
        self.assertEqual(str(AbelianType()), '1')

    def test_rejects_non_chain(self) -> None:
        """Invariant factors must divide each other."""
        with self.assertRaises(ValueError):
            AbelianType(divisors=(4, 2))


class FundamentalUnitTest(SimpleTestCase):
    """Continued-fraction units."""

    def test_small_units(self) -> None:
        """1 + sqrt(2), (1 + sqrt(5))/2 and 2 + sqrt(3)."""
        unit = fundamental_unit(2)
        self.assertEqual((unit.x_num, unit.y_num, unit.denominator, unit.norm), (1, 1, 1, -1))
        unit = fundamental_unit(5)
        self.assertEqual((unit.x_num, unit.y_num, unit.denominator, unit.norm), (1, 1, 2, -1))
        self.assertFalse(unit.is_integral)
        unit = fundamental_unit(3)
        self.assertEqual((unit.x_num, unit.y_num, unit.denominator, unit.norm), (2, 1, 1, 1))

    def test_unit_of_2379(self) -> None:
        """1951^2 - 2379 * 40^2 = 1."""
        unit = fundamental_unit(2379)
        self.assertEqual((unit.x_num, unit.y_num, unit.norm), (1951, 40, 1))
        self.assertEqual(unit.as_number().norm(), 1)

    def test_unit_of_4270(self) -> None:
        """Period of length six for sqrt(4270)."""
        unit = fundamental_unit(4270)
        self.assertEqual((unit.x_num, unit.y_num, unit.norm), (5489, 84, 1))

    def test_unit_norms(self) -> None:
        """sqrt(145) has an odd period, sqrt(305) and sqrt(34) an even one."""
        self.assertEqual(unit_norm(145), -1)
        self.assertEqual(unit_norm(305), 1)
        self.assertEqual(unit_norm(34), 1)

    def test_digit_cap(self) -> None:
        """A four-digit unit fails a three-digit cap."""
        with self.assertRaises(UnitTooLargeError) as cm:
            fundamental_unit(2379, digit_cap=3)
        self.assertEqual(cm.exception.d, 2379)
        self.assertEqual(fundamental_unit(2379, digit_cap=4).x_num, 1951)

    def test_rejects_non_squarefree(self) -> None:
        with self.assertRaises(DomainError):
            fundamental_unit(12)
        with self.assertRaises(DomainError):
            fundamental_unit(1)


class ClassGroupTest(SimpleTestCase):
    """Narrow and ordinary class groups from reduced forms."""

    def test_discriminants(self) -> None:
        """d = 1 mod 4 keeps d, otherwise 4d."""
        self.assertEqual(fundamental_discriminant(5), 5)
        self.assertEqual(fundamental_discriminant(3), 12)
        self.assertTrue(is_fundamental_discriminant(8))
        self.assertTrue(is_fundamental_discriminant(12))
        self.assertFalse(is_fundamental_discriminant(9))
        self.assertFalse(is_fundamental_discriminant(1))

    def test_reduced_forms_are_reduced(self) -> None:
        """Every listed form passes is_reduced and has the right discriminant."""
        for form in reduced_forms(136):
            a, b, c = form
            self.assertTrue(is_reduced(form, 136))
            self.assertEqual(b * b - 4 * a * c, 136)

    def test_class_numbers(self) -> None:
        """Known class numbers of small real quadratic fields."""
        self.assertEqual((class_group(5).h, class_group(5).h_plus), (1, 1))
        self.assertEqual((class_group(3).h, class_group(3).h_plus), (1, 2))
        self.assertEqual((class_group(10).h, class_group(10).h_plus), (2, 2))
        self.assertEqual(class_group(79).h, 3)
        self.assertEqual(h2(79), 1)
        self.assertEqual(str(class_group(79).two_sylow), '1')

    def test_q_sqrt_34(self) -> None:
        """N(eps_34) = 1 doubles h; the narrow group is cyclic of order 4."""
        data = class_group(34)
        self.assertEqual(data.h, 2)
        self.assertEqual(data.h_plus, 4)
        self.assertEqual(str(data.narrow_structure), '4')
        self.assertEqual(len(form_cycles(136)), 4)

    def test_q_sqrt_105(self) -> None:
        """Three ramified primes give narrow 2-rank 2."""
        data = class_group(105)
        self.assertEqual(data.h, 2)
        self.assertEqual(str(data.narrow_structure), '2x2')
        self.assertEqual(narrow_class_group(105).order, 4)

    def test_composition_in_q_sqrt_10(self) -> None:
        """Cl+(40) has order 2: (3, 2, -3) is the non-principal class."""
        principal_cycle = [cycle for cycle in form_cycles(40) if (1, 6, -1) in cycle][0]
        other = (3, 2, -3)
        self.assertNotIn(other, principal_cycle)
        self.assertEqual(reduce_form(other, 40), other)
        self.assertEqual(compose_forms((1, 6, -1), other, 40), other)
        self.assertIn(reduce_form(compose_forms(other, other, 40), 40), principal_cycle)

    def test_composition_table_is_a_group_table(self) -> None:
        """Each row of the composition table is a permutation."""
        classes, table = composition_table(136)
        self.assertEqual(len(classes), 4)
        for row in table:
            self.assertEqual(sorted(row), list(range(4)))

    def test_prime_splitting(self) -> None:
        """Decomposition of 2, 5, 11 and infinity in Q(sqrt(5))."""
        self.assertEqual(prime_splitting(2, 5), Splitting.INERT)
        self.assertEqual(prime_splitting(5, 5), Splitting.RAMIFIED)
        self.assertEqual(prime_splitting(11, 5), Splitting.SPLIT)
        self.assertEqual(prime_splitting('inf', 5), Splitting.SPLIT)
        self.assertEqual(prime_splitting(2, 3), Splitting.RAMIFIED)


class ExactArithmeticTest(SimpleTestCase):
    """Square roots in Q(sqrt(d)) and Q(sqrt(a), sqrt(b))."""

    def test_quadratic_sqrt(self) -> None:
        """4 + 2*sqrt(3) = (1 + sqrt(3))^2 while 2 + sqrt(3) is no square in Q(sqrt(3))."""
        number = QuadraticNumber(Fraction(4), Fraction(2), 3)
        root = number.sqrt()
        self.assertIsNotNone(root)
        assert root is not None
        self.assertEqual(root * root, number)
        self.assertIsNone(QuadraticNumber(Fraction(2), Fraction(1), 3).sqrt())

    def test_biquadratic_sqrt(self) -> None:
        """sqrt(2 + sqrt(3)) = (sqrt(2) + sqrt(6))/2 in Q(sqrt(2), sqrt(3))."""
        number = BiquadraticNumber.embed(2, 3, QuadraticNumber(Fraction(2), Fraction(1), 3))
        root = number.sqrt()
        self.assertIsNotNone(root)
        assert root is not None
        self.assertEqual(root * root, number)
        self.assertEqual(
            [abs(c) for c in root.coordinates()],
            [Fraction(0), Fraction(1, 2), Fraction(0), Fraction(1, 2)],
        )

    def test_mixing_fields(self) -> None:
        with self.assertRaises(DomainError):
            QuadraticNumber(Fraction(1), Fraction(1), 2) + QuadraticNumber(Fraction(1), Fraction(1), 3)


class ComputationCacheTest(SimpleTestCase):
    """The quadfield memo cache."""

    def test_get_or_set_computes_once(self) -> None:
        """A second lookup does not call the factory again."""
        cache = caches['quadfield']
        calls: list[int] = []

        def compute() -> int:
            calls.append(1)
            return 42

        cache.delete('test:compute-once')
        self.assertEqual(cache.get_or_set('test:compute-once', compute, timeout=None), 42)
        self.assertEqual(cache.get_or_set('test:compute-once', compute, timeout=None), 42)
        self.assertEqual(len(calls), 1)

    def test_key_locks_are_released(self) -> None:
        """No per-key lock outlives the computation, even a failed one."""
        cache = caches['quadfield']

        def fail() -> int:
            raise DomainError("boom")

        cache.delete('test:lock-released')
        cache.get_or_set('test:lock-released', lambda: 7, timeout=None)
        self.assertNotIn('test:lock-released', cache._key_locks)
        with self.assertRaises(DomainError):
            cache.get_or_set('test:lock-failed', fail, timeout=None)
        self.assertEqual(cache._key_locks, {})

    def test_class_group_is_memoised(self) -> None:
        """Repeated class_group calls return equal data."""
        self.assertEqual(class_group(2379), class_group(2379))


class FieldSweepTest(SimpleTestCase):
    """Units and narrow class groups over ranges from settings.PROPERTY_SWEEPS."""

    def test_pell_identity(self) -> None:
        """x^2 - d*y^2 = N(eps)*den^2 for every squarefree d below the bound."""
        for d in range(2, settings.PROPERTY_SWEEPS['pell_max_d']):
            if not is_squarefree(d):
                continue
            unit = fundamental_unit(d)
            with self.subTest(d=d):
                self.assertEqual(
                    unit.x_num**2 - d * unit.y_num**2, unit.norm * unit.denominator**2
                )
                if unit.denominator == 2:
                    self.assertEqual(d % 4, 1)
                if unit.norm == -1:
                    self.assertTrue(all(p % 4 != 3 for p in prime_factors(d)))

    def test_narrow_group_against_composition_table(self) -> None:
        """Cl+(D) read from the Cayley table of composition agrees with narrow_class_group."""
        for D in range(5, settings.PROPERTY_SWEEPS['forms_max_discriminant']):
            if not is_fundamental_discriminant(D):
                continue
            with self.subTest(D=D):
                classes, table = composition_table(D)
                h = len(classes)
                identity = next(e for e in range(h) if table[e] == list(range(h)))
                for x in range(h):
                    self.assertIn(identity, table[x])
                    for y in range(h):
                        self.assertEqual(table[x][y], table[y][x])
                        for z in range(h):
                            self.assertEqual(table[table[x][y]][z], table[x][table[y][z]])

                lattice = RelationLattice(h)
                for x in range(h):
                    for y in range(h):
                        relation = [0] * h
                        relation[x] += 1
                        relation[y] += 1
                        relation[table[x][y]] -= 1
                        lattice.add(relation)
                narrow = narrow_class_group(D)
                self.assertEqual(tuple(lattice.invariants()), narrow.structure.divisors)

                d = squarefree_part(D)
                data = class_group(d)
                self.assertEqual(data.h_plus, h)
                self.assertEqual(h, data.h * (1 if unit_norm(d) == -1 else 2))
