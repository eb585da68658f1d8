"""
Tests for the number-theoretic primitives in classgroups.arith.
"""

import random
from math import gcd, isqrt

from django.conf import settings
from django.test import SimpleTestCase
from sympy import Matrix, primerange

from .arith import (
    RelationLattice,
    decimal_digits,
    integer_sqrt_exact,
    is_perfect_square,
    is_prime,
    is_squarefree,
    kronecker_delta,
    legendre_symbol,
    prime_factors,
    quartic_symbol,
    smith_normal_form,
    squarefree_part,
    two_adic_valuation,
    two_part,
)
from .exceptions import DomainError


class SymbolTest(SimpleTestCase):
    """Legendre and quartic residue symbols."""

    def test_legendre_symbol_values(self) -> None:
        """Euler's criterion on small cases."""
        self.assertEqual(legendre_symbol(2, 7), 1)
        self.assertEqual(legendre_symbol(3, 7), -1)
        self.assertEqual(legendre_symbol(14, 7), 0)
        self.assertEqual(legendre_symbol(-1, 13), 1)

    def test_legendre_symbol_rejects_bad_modulus(self) -> None:
        """The modulus must be an odd prime."""
        with self.assertRaises(DomainError):
            legendre_symbol(3, 2)
        with self.assertRaises(DomainError):
            legendre_symbol(3, 9)

    def test_quartic_symbol_values(self) -> None:
        """13^15 = 1 mod 61 while 5^15 = -1 mod 61."""
        self.assertEqual(quartic_symbol(13, 61), 1)
        self.assertEqual(quartic_symbol(61, 13), 1)
        self.assertEqual(quartic_symbol(5, 61), -1)
        self.assertEqual(quartic_symbol(61, 5), 1)

    def test_quartic_symbol_undefined(self) -> None:
        """p must be 1 mod 4 and a must be a quadratic residue."""
        with self.assertRaises(DomainError):
            quartic_symbol(2, 7)
        with self.assertRaises(DomainError):
            quartic_symbol(2, 13)


class IntegerHelpersTest(SimpleTestCase):
    """Square roots, squarefree kernels, 2-parts and digit counts."""

    def test_kronecker_delta(self) -> None:
        self.assertEqual(kronecker_delta(2, 2), 1)
        self.assertEqual(kronecker_delta(1, 2), 0)

    def test_primes(self) -> None:
        """Small primes and non-primes."""
        self.assertTrue(is_prime(61))
        self.assertFalse(is_prime(1))
        self.assertFalse(is_prime(91))

    def test_integer_sqrt_exact(self) -> None:
        """Perfect squares only."""
        self.assertEqual(integer_sqrt_exact(23104), 152)
        self.assertIsNone(integer_sqrt_exact(23105))
        self.assertIsNone(integer_sqrt_exact(-4))

    def test_squarefree(self) -> None:
        """Sign is kept by squarefree_part; zero is rejected."""
        self.assertTrue(is_squarefree(30))
        self.assertFalse(is_squarefree(12))
        self.assertFalse(is_squarefree(0))
        self.assertEqual(squarefree_part(-12), -3)
        self.assertEqual(squarefree_part(72), 2)
        with self.assertRaises(DomainError):
            squarefree_part(0)

    def test_two_part(self) -> None:
        """Largest power of two dividing n."""
        self.assertEqual(two_part(48), 16)
        self.assertEqual(two_part(-12), 4)
        self.assertEqual(two_adic_valuation(48), 4)
        with self.assertRaises(DomainError):
            two_part(0)

    def test_prime_factors(self) -> None:
        self.assertEqual(prime_factors(360), [2, 3, 5])
        self.assertEqual(prime_factors(-91), [7, 13])

    def test_decimal_digits(self) -> None:
        """Exact at powers of ten."""
        self.assertEqual(decimal_digits(0), 1)
        self.assertEqual(decimal_digits(9), 1)
        self.assertEqual(decimal_digits(10), 2)
        self.assertEqual(decimal_digits(-999), 3)
        self.assertEqual(decimal_digits(10**50 - 1), 50)
        self.assertEqual(decimal_digits(10**50), 51)


class SmithNormalFormTest(SimpleTestCase):
    """Invariant factors and the incremental relation lattice."""

    def test_diagonal_matrix(self) -> None:
        """diag(2, 3) has invariant factors 1 | 6."""
        self.assertEqual(smith_normal_form([[2, 0], [0, 3]]), [1, 6])

    def test_zero_rows_dropped(self) -> None:
        """Zero invariant factors are not reported."""
        self.assertEqual(smith_normal_form([[2, 4], [4, 8]]), [2])
        self.assertEqual(smith_normal_form([]), [])

    def test_relation_lattice_invariants(self) -> None:
        """Z^2 modulo 4e1, 2e2 and a redundant relation is Z/2 x Z/4."""
        lattice = RelationLattice(2)
        lattice.add([4, 0])
        lattice.add([0, 2])
        lattice.add([4, 2])
        self.assertTrue(lattice.is_full_rank())
        self.assertEqual(lattice.invariants(), [2, 4])

    def test_relation_lattice_mixed_relations(self) -> None:
        """Z/2 x Z/3 collapses to a single factor 6."""
        lattice = RelationLattice(2)
        lattice.add([2, 0])
        lattice.add([0, 3])
        self.assertEqual(lattice.invariants(), [6])

    def test_relation_lattice_needs_full_rank(self) -> None:
        """A free part means the quotient is infinite."""
        lattice = RelationLattice(2)
        lattice.add([2, 0])
        self.assertFalse(lattice.is_full_rank())
        with self.assertRaises(DomainError):
            lattice.invariants()
        with self.assertRaises(DomainError):
            lattice.add([1, 2, 3])


class ArithmeticSweepTest(SimpleTestCase):
    """Identities checked over ranges; bounds come from settings.PROPERTY_SWEEPS."""

    def setUp(self) -> None:
        self.bounds = settings.PROPERTY_SWEEPS
        self.rng = random.Random(self.bounds['random_seed'])

    def test_legendre_multiplicative(self) -> None:
        """(ab/p) = (a/p)(b/p) and Euler's criterion for every odd prime in range."""
        for p in primerange(3, self.bounds['legendre_max_prime']):
            p = int(p)
            with self.subTest(p=p):
                for _ in range(20):
                    a = self.rng.randint(-10 * p, 10 * p)
                    b = self.rng.randint(-10 * p, 10 * p)
                    self.assertEqual(
                        legendre_symbol(a * b, p), legendre_symbol(a, p) * legendre_symbol(b, p)
                    )
                    euler = pow(a % p, (p - 1) // 2, p)
                    self.assertEqual(legendre_symbol(a, p) % p, euler)

    def test_quartic_symbol_squares_to_legendre(self) -> None:
        """(a^2/p)_4 = (a/p) for p = 1 mod 4 and a prime to p."""
        for p in primerange(5, self.bounds['legendre_max_prime']):
            p = int(p)
            if p % 4 != 1:
                continue
            with self.subTest(p=p):
                for a in range(1, min(p, 40)):
                    self.assertEqual(quartic_symbol(a * a, p), legendre_symbol(a, p))

    def test_perfect_squares_below_bound(self) -> None:
        """is_perfect_square agrees with math.isqrt on every n below the bound."""
        for n in range(self.bounds['square_max']):
            root = isqrt(n)
            if is_perfect_square(n) != (root * root == n):
                self.fail(f"is_perfect_square({n}) disagrees with isqrt")

    def test_perfect_squares_large(self) -> None:
        """k^2 is a square and k^2 + j is not for 0 < j <= 2k."""
        for _ in range(500):
            k = self.rng.randrange(10**20, 10**40)
            j = self.rng.randint(1, 2 * k)
            self.assertEqual(integer_sqrt_exact(k * k), k)
            self.assertFalse(is_perfect_square(k * k + j))

    def test_smith_chain_on_random_matrices(self) -> None:
        """Divisor chain, d1 = gcd of the entries, rank many factors and prod = |det|."""
        for trial in range(200):
            rows = self.rng.randint(1, 4)
            cols = self.rng.randint(1, 4)
            matrix = [[self.rng.randint(-12, 12) for _ in range(cols)] for _ in range(rows)]
            with self.subTest(trial=trial, matrix=matrix):
                factors = smith_normal_form(matrix)
                for left, right in zip(factors, factors[1:]):
                    self.assertEqual(right % left, 0)
                self.assertEqual(len(factors), Matrix(matrix).rank())
                content = 0
                for row in matrix:
                    for entry in row:
                        content = gcd(content, entry)
                if content:
                    self.assertEqual(factors[0], content)
                if rows == cols:
                    det = abs(int(Matrix(matrix).det()))
                    if det:
                        product = 1
                        for factor in factors:
                            product *= factor
                        self.assertEqual(product, det)

    def test_relation_lattice_matches_smith_form(self) -> None:
        """Adding rows one at a time gives the same quotient as the whole matrix."""
        for trial in range(100):
            size = self.rng.randint(1, 4)
            matrix = [[self.rng.randint(-9, 9) for _ in range(size)] for _ in range(size + 2)]
            if Matrix(matrix).rank() < size:
                continue
            with self.subTest(trial=trial, matrix=matrix):
                lattice = RelationLattice(size)
                for row in matrix:
                    lattice.add(row)
                self.assertEqual(
                    lattice.invariants(), [d for d in smith_normal_form(matrix) if d != 1]
                )
