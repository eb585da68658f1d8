"""
Exact integer arithmetic primitives.

Everything here works on Python integers (and sympy integers where sympy does
the heavy lifting). No floating point is used anywhere in the package; the
helpers below are the only place where sizes of huge integers are estimated.
"""

import logging
from collections.abc import Iterable, Sequence
from functools import lru_cache

from sympy import Matrix, factorint, integer_nthroot, isprime, primefactors
from sympy.core.intfunc import igcdex
from sympy.matrices.normalforms import invariant_factors
from sympy.ntheory import legendre_symbol as _sympy_legendre
from sympy.polys.domains import ZZ

from .exceptions import DomainError, InvariantViolation

logger = logging.getLogger(__name__)


def is_prime(n: int) -> bool:
    """Primality test; BPSW via sympy, deterministic below 2**64."""
    if n < 2:
        return False
    return bool(isprime(n))


def legendre_symbol(a: int, p: int) -> int:
    """
    Legendre symbol (a/p) for an odd prime p.

    Args:
        a: Any integer.
        p: An odd prime.

    Returns:
        -1, 0 or +1 according to Euler's criterion.
    """
    if p == 2 or not is_prime(p):
        raise DomainError(f"legendre_symbol needs an odd prime modulus, got {p}")
    return int(_sympy_legendre(a % p, p))


def quartic_symbol(a: int, p: int) -> int:
    """
    Rational quartic residue symbol (a/p)_4 = a^((p-1)/4) mod p.

    Defined only when p = 1 mod 4 and a is a nonzero quadratic residue mod p;
    the value is then a square root of 1 mod p, i.e. +1 or -1.
    """
    if p % 4 != 1 or not is_prime(p):
        raise DomainError(f"quartic symbol needs a prime p = 1 mod 4, got {p}")
    if legendre_symbol(a, p) != 1:
        raise DomainError(f"quartic symbol ({a}/{p})_4 undefined: not a residue")
    value = pow(a % p, (p - 1) // 4, p)
    if value == 1:
        return 1
    if value == p - 1:
        return -1
    raise DomainError(f"({a}/{p})_4 is not +-1; modulus is not prime")


def integer_sqrt_exact(n: int) -> int | None:
    """Return t >= 0 with t*t == n, or None when n is not a perfect square."""
    if n < 0:
        return None
    root, exact = integer_nthroot(n, 2)
    return int(root) if exact else None


def is_perfect_square(n: int) -> bool:
    return integer_sqrt_exact(n) is not None


def kronecker_delta(a: object, b: object) -> int:
    return 1 if a == b else 0


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(exponent == 1 for exponent in factorint(abs(n)).values())


def squarefree_part(n: int) -> int:
    """Squarefree kernel with sign: squarefree_part(-12) == -3."""
    if n == 0:
        raise DomainError("0 has no squarefree part")
    core = 1
    for prime, exponent in factorint(abs(n)).items():
        if exponent % 2:
            core *= prime
    return core if n > 0 else -core


def prime_factors(n: int) -> list[int]:
    """Distinct primes dividing n, ascending."""
    return [int(p) for p in primefactors(abs(n))]


def two_part(n: int) -> int:
    """Largest power of 2 dividing n (n != 0)."""
    if n == 0:
        raise DomainError("two_part(0) is undefined")
    n = abs(n)
    return n & -n


def two_adic_valuation(n: int) -> int:
    return two_part(n).bit_length() - 1


def decimal_digits(n: int) -> int:
    """Exact number of decimal digits of |n| without converting to str."""
    n = abs(n)
    if n == 0:
        return 1
    # 30102/100000 < log10(2), so the estimate never overshoots.
    estimate = (n.bit_length() * 30102) // 100000
    while 10**estimate <= n:
        estimate += 1
    return max(estimate, 1)


@lru_cache(maxsize=8)
def digit_limit(digit_cap: int) -> int:
    """Smallest integer with ``digit_cap + 1`` decimal digits."""
    return 10**digit_cap


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> list[int]:
    """
    Nonzero invariant factors d1 | d2 | ... of an integer matrix.

    Args:
        matrix: Rectangular integer matrix given as a sequence of rows.

    Returns:
        The nonzero diagonal entries of the Smith normal form, in divisibility
        order. Unit factors are kept so the rank stays visible.
    """
    rows = [list(row) for row in matrix]
    if not rows or not rows[0]:
        return []
    factors = invariant_factors(Matrix(rows), domain=ZZ)
    result = [abs(int(f)) for f in factors if int(f) != 0]
    for left, right in zip(result, result[1:]):
        if right % left:
            raise InvariantViolation(f"invariant factors {result} do not form a chain")
    return result


class RelationLattice:
    """
    Integer row lattice kept in echelon (Hermite-like) form.

    Used to accumulate the relations of a finitely generated abelian group one
    by one without ever materialising a tall relation matrix.
    """

    def __init__(self, rank: int) -> None:
        self.rank = rank
        self._pivots: dict[int, list[int]] = {}

    def add(self, relation: Iterable[int]) -> None:
        row = list(relation)
        if len(row) != self.rank:
            raise DomainError(f"relation of length {len(row)}, expected {self.rank}")
        for col in range(self.rank):
            if row[col] == 0:
                continue
            pivot = self._pivots.get(col)
            if pivot is None:
                if row[col] < 0:
                    row = [-entry for entry in row]
                self._pivots[col] = row
                self._reduce_above(col)
                return
            x, y, g = (int(v) for v in igcdex(pivot[col], row[col]))
            p_mult, r_mult = pivot[col] // g, row[col] // g
            new_pivot = [x * pe + y * re for pe, re in zip(pivot, row)]
            row = [r_mult * pe - p_mult * re for pe, re in zip(pivot, row)]
            if new_pivot[col] < 0:
                new_pivot = [-entry for entry in new_pivot]
            self._pivots[col] = new_pivot
            self._reduce_above(col)

    def _reduce_above(self, col: int) -> None:
        pivot = self._pivots[col]
        for other_col, other in self._pivots.items():
            if other_col < col and other[col]:
                factor = other[col] // pivot[col]
                if factor:
                    self._pivots[other_col] = [
                        oe - factor * pe for oe, pe in zip(other, pivot)
                    ]

    def basis(self) -> list[list[int]]:
        return [self._pivots[col] for col in sorted(self._pivots)]

    def is_full_rank(self) -> bool:
        return len(self._pivots) == self.rank

    def invariants(self) -> list[int]:
        """Invariant factors of Z^rank / lattice; requires a full-rank lattice."""
        if not self.is_full_rank():
            raise DomainError("relation lattice has free part; group is infinite")
        return [d for d in smith_normal_form(self.basis()) if d != 1]
