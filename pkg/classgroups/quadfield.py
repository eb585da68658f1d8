"""
Real quadratic field invariants.

Fundamental units come from the continued fraction of the ring generator
(sqrt(d) or (1 + sqrt(d))/2). Narrow class groups come from cycles of reduced
indefinite binary quadratic forms with Gauss composition; the ordinary class
group is the quotient by the class of the form representing -1.

Results for a given d are memoised in the ``quadfield`` cache alias when
``QUADFIELD_CACHE_ENABLED`` is on.
"""

import logging
from collections.abc import Callable, Iterator
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd, isqrt
from typing import Literal, TypeVar

from django.conf import settings
from django.core.cache import BaseCache, caches
from pydantic import BaseModel, ConfigDict, Field, field_validator
from sympy import divisors, factorint
from sympy.core.intfunc import igcdex

from .arith import (
    digit_limit,
    integer_sqrt_exact,
    is_squarefree,
    legendre_symbol,
    squarefree_part,
    two_part,
)
from .exceptions import DomainError, InvariantViolation, UnitTooLargeError

logger = logging.getLogger(__name__)

Form = tuple[int, int, int]
INFINITE_PLACE: Literal['inf'] = 'inf'

T = TypeVar('T')


# --------------------------------------------------------------------------- #
# Result types                                                                #
# --------------------------------------------------------------------------- #


class AbelianType(BaseModel):
    """A finite abelian group given by its invariant factors d1 | d2 | ..."""

    model_config = ConfigDict(frozen=True)

    divisors: tuple[int, ...] = Field(
        default=(), description="Invariant factors, each >= 2 and dividing the next"
    )

    @field_validator('divisors')
    @classmethod
    def _check_chain(cls, value: tuple[int, ...]) -> tuple[int, ...]:
        if any(d < 2 for d in value):
            raise ValueError(f"invariant factors must be >= 2: {value}")
        for left, right in zip(value, value[1:]):
            if right % left:
                raise ValueError(f"{value} is not a divisibility chain")
        return value

    @classmethod
    def from_cyclic_orders(cls, orders: list[int]) -> 'AbelianType':
        """Normalise a direct product of cyclic groups of the given orders."""
        by_prime: dict[int, list[int]] = {}
        for order in orders:
            if order < 1:
                raise DomainError(f"cyclic order must be positive, got {order}")
            for prime, exponent in factorint(order).items():
                by_prime.setdefault(int(prime), []).append(int(prime) ** exponent)
        width = max((len(powers) for powers in by_prime.values()), default=0)
        factors = [1] * width
        for powers in by_prime.values():
            for slot, power in enumerate(sorted(powers, reverse=True)):
                factors[width - 1 - slot] *= power
        return cls(divisors=tuple(f for f in factors if f > 1))

    @classmethod
    def from_two_exponents(cls, *exponents: int) -> 'AbelianType':
        """Product of cyclic 2-groups of orders 2**e; negative e is malformed."""
        if any(e < 0 for e in exponents):
            raise DomainError(f"negative 2-exponent in {exponents}")
        return cls.from_cyclic_orders([2**e for e in exponents])

    @classmethod
    def parse(cls, text: str) -> 'AbelianType':
        """Inverse of ``str``: '2x4' -> (2, 4); '1' -> trivial group."""
        text = text.strip()
        if text in ('', '1'):
            return cls()
        return cls(divisors=tuple(int(part) for part in text.split('x')))

    @property
    def order(self) -> int:
        result = 1
        for d in self.divisors:
            result *= d
        return result

    @property
    def rank(self) -> int:
        return len(self.divisors)

    @property
    def two_rank(self) -> int:
        return sum(1 for d in self.divisors if d % 2 == 0)

    def two_sylow(self) -> 'AbelianType':
        return AbelianType.from_cyclic_orders(
            [two_part(d) for d in self.divisors if d % 2 == 0]
        )

    def __str__(self) -> str:
        return 'x'.join(str(d) for d in self.divisors) if self.divisors else '1'


class QuadUnit(BaseModel):
    """Fundamental unit (x_num + y_num*sqrt(d)) / denominator of Q(sqrt(d))."""

    model_config = ConfigDict(frozen=True)

    d: int = Field(..., gt=1, description="Squarefree radicand")
    x_num: int = Field(..., gt=0, description="Numerator of the rational part")
    y_num: int = Field(..., gt=0, description="Numerator of the sqrt(d) coefficient")
    denominator: Literal[1, 2] = Field(..., description="Common denominator")
    norm: Literal[1, -1] = Field(..., description="Norm to Q")

    @property
    def x(self) -> Fraction:
        return Fraction(self.x_num, self.denominator)

    @property
    def y(self) -> Fraction:
        return Fraction(self.y_num, self.denominator)

    @property
    def is_integral(self) -> bool:
        return self.denominator == 1

    def as_number(self) -> 'QuadraticNumber':
        return QuadraticNumber(self.x, self.y, self.d)


class FormClass(BaseModel):
    """Primitive indefinite form a*x^2 + b*x*y + c*y^2, canonical in its cycle."""

    model_config = ConfigDict(frozen=True)

    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def as_tuple(self) -> Form:
        return (self.a, self.b, self.c)


class NarrowClassGroup(BaseModel):
    """Cl+(D) as computed from reduced-form cycles."""

    discriminant: int
    structure: AbelianType
    classes: list[FormClass] = Field(..., description="Canonical class representatives")
    generators: list[FormClass] = Field(..., description="A generating set")

    @property
    def order(self) -> int:
        return self.structure.order


class ClassData(BaseModel):
    """Class numbers and 2-class group of Q(sqrt(d))."""

    d: int
    discriminant: int
    h: int = Field(..., ge=1, description="Ordinary class number")
    h_plus: int = Field(..., ge=1, description="Narrow class number")
    structure: AbelianType = Field(..., description="Ordinary class group")
    narrow_structure: AbelianType
    two_sylow: AbelianType
    h2: int = Field(..., ge=1, description="2-part of h")


class Splitting(str, Enum):
    """Decomposition type of a place of Q in a quadratic field."""

    SPLIT = 'split'
    INERT = 'inert'
    RAMIFIED = 'ramified'


# --------------------------------------------------------------------------- #
# Memo cache                                                                  #
# --------------------------------------------------------------------------- #


def _cache() -> BaseCache | None:
    if not getattr(settings, 'QUADFIELD_CACHE_ENABLED', False):
        return None
    return caches['quadfield']


def _memoised(key: str, compute: Callable[[], T]) -> T:
    cache = _cache()
    if cache is None:
        return compute()
    return cache.get_or_set(key, compute, timeout=None)  # type: ignore[no-any-return]


# --------------------------------------------------------------------------- #
# Fundamental units                                                           #
# --------------------------------------------------------------------------- #


def _check_radicand(d: int) -> None:
    if d <= 1 or not is_squarefree(d):
        raise DomainError(f"d must be a squarefree integer > 1, got {d}")


def fundamental_unit(d: int, digit_cap: int | None = None) -> QuadUnit:
    """
    Fundamental unit of the ring of integers of Q(sqrt(d)).

    Args:
        d: Squarefree integer > 1.
        digit_cap: Maximum number of decimal digits of the coefficients;
            defaults to ``settings.UNIT_DIGIT_CAP``.

    Returns:
        The smallest unit > 1 with its exact norm.

    Raises:
        UnitTooLargeError: if the unit exceeds the digit cap or the expansion
            runs past ``settings.PELL_PERIOD_LIMIT`` steps.
    """
    _check_radicand(d)
    cap = digit_cap if digit_cap is not None else settings.UNIT_DIGIT_CAP
    unit = _memoised(f'unit:{d}', lambda: _continued_fraction_unit(d, cap))
    if unit.x_num >= digit_limit(cap) * unit.denominator:
        raise UnitTooLargeError(d, cap)
    return unit


def unit_norm(d: int, digit_cap: int | None = None) -> int:
    return fundamental_unit(d, digit_cap).norm


def _continued_fraction_unit(d: int, digit_cap: int) -> QuadUnit:
    # omega = (P0 + sqrt(d)) / Q0 generates the ring of integers.
    p0, q0 = (1, 2) if d % 4 == 1 else (0, 1)
    trace = 2 * p0 // q0
    omega_norm = (p0 * p0 - d) // (q0 * q0)
    root = isqrt(d)
    limit = digit_limit(digit_cap)
    period_limit = getattr(settings, 'PELL_PERIOD_LIMIT', 10_000_000)

    big_p, big_q = p0, q0
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    for step in range(period_limit):
        partial = (big_p + root) // big_q
        h_prev, h = h, partial * h + h_prev
        k_prev, k = k, partial * k + k_prev
        # Norm of h - k*omega; a convergent with norm +-1 gives the unit.
        norm = h * h - h * k * trace + k * k * omega_norm
        if norm in (1, -1):
            return _normalise_unit(d, q0 * h - k * p0, k, q0, norm)
        if h >= limit:
            raise UnitTooLargeError(d, digit_cap)
        big_p = partial * big_q - big_p
        big_q = (d - big_p * big_p) // big_q
    raise UnitTooLargeError(
        d, digit_cap, f"continued fraction of sqrt({d}) exceeded {period_limit} steps"
    )


def _normalise_unit(d: int, x_num: int, y_num: int, denominator: int, norm: int) -> QuadUnit:
    if denominator == 2 and x_num % 2 == 0 and y_num % 2 == 0:
        x_num, y_num, denominator = x_num // 2, y_num // 2, 1
    if denominator == 2 and d % 8 != 5:
        raise InvariantViolation(f"half-integral unit for d = {d} not 5 mod 8")
    if x_num * x_num - d * y_num * y_num != norm * denominator * denominator:
        raise InvariantViolation(f"Pell identity fails for d = {d}")
    return QuadUnit(d=d, x_num=x_num, y_num=y_num, denominator=denominator, norm=norm)


# --------------------------------------------------------------------------- #
# Binary quadratic forms                                                      #
# --------------------------------------------------------------------------- #


def fundamental_discriminant(d: int) -> int:
    if d in (0, 1) or not is_squarefree(d):
        raise DomainError(f"{d} is not a squarefree integer != 0, 1")
    return d if d % 4 == 1 else 4 * d


def is_fundamental_discriminant(D: int) -> bool:
    if D % 4 == 1:
        return D != 1 and is_squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def _check_discriminant(D: int) -> None:
    if D <= 0 or integer_sqrt_exact(D) is not None or not is_fundamental_discriminant(D):
        raise DomainError(f"{D} is not a positive non-square fundamental discriminant")


def _reduced_width(a_abs: int, b: int, D: int) -> bool:
    # sqrt(D) - b < 2|a| < sqrt(D) + b, decided with integers only.
    twice = 2 * a_abs
    lower_ok = (twice + b) ** 2 > D
    upper_ok = twice <= b or (twice - b) ** 2 < D
    return lower_ok and upper_ok


def is_reduced(form: Form, D: int) -> bool:
    a, b, _ = form
    return 0 < b and b * b < D and _reduced_width(abs(a), b, D)


def rho(form: Form, D: int) -> Form:
    """One reduction step (a, b, c) -> (c, b', c') with b' = -b mod 2c normalised."""
    _, b, c = form
    root = isqrt(D)
    modulus = 2 * abs(c)
    if c * c > D:
        b_next = (-b) % modulus
        if b_next > abs(c):
            b_next -= modulus
    else:
        b_next = root - ((root + b) % modulus)
    return (c, b_next, (b_next * b_next - D) // (4 * c))


def reduce_form(form: Form, D: int) -> Form:
    steps = 0
    bound = 64 + 4 * D.bit_length() + max(abs(x) for x in form).bit_length() * 4
    while not is_reduced(form, D):
        form = rho(form, D)
        steps += 1
        if steps > bound:
            raise InvariantViolation(f"form reduction did not terminate for {form}")
    return form


def compose_forms(f1: Form, f2: Form, D: int) -> Form:
    """Dirichlet composition of two forms with positive leading coefficients."""
    a1, b1, _ = f1
    a2, b2, _ = f2
    if a1 <= 0 or a2 <= 0:
        raise DomainError("composition expects forms with a > 0")
    half_sum = (b1 + b2) // 2
    u1, v1, d1 = (int(v) for v in igcdex(a1, a2))
    u2, v2, d = (int(v) for v in igcdex(d1, half_sum))
    a3 = a1 * a2 // (d * d)
    b3 = (u2 * u1 * a1 * b2 + u2 * v1 * a2 * b1 + v2 * (b1 * b2 + D) // 2) // d
    b3 %= 2 * a3
    c3 = (b3 * b3 - D) // (4 * a3)
    if b3 * b3 - 4 * a3 * c3 != D:
        raise InvariantViolation(f"composition of {f1} and {f2} left discriminant {D}")
    return (a3, b3, c3)


def reduced_forms(D: int) -> list[Form]:
    """All primitive reduced forms of discriminant D, sorted."""
    root = isqrt(D)
    forms: list[Form] = []
    for b in range(1 if D % 2 else 2, root + 1, 2):
        product = (D - b * b) // 4
        for a_abs in divisors(product):
            a_abs = int(a_abs)
            if not _reduced_width(a_abs, b, D):
                continue
            c_abs = product // a_abs
            if gcd(a_abs, b, c_abs) != 1:
                continue
            forms.append((a_abs, b, -c_abs))
            forms.append((-a_abs, b, c_abs))
    return sorted(forms)


def form_cycles(D: int) -> list[list[Form]]:
    """Partition of the reduced forms into rho-cycles, each starting at its minimum."""
    seen: set[Form] = set()
    cycles: list[list[Form]] = []
    for start in reduced_forms(D):
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        current = rho(start, D)
        while current != start:
            if current in seen:
                raise InvariantViolation(f"rho is not a permutation at {current}")
            cycle.append(current)
            seen.add(current)
            current = rho(current, D)
        lowest = cycle.index(min(cycle))
        cycles.append(cycle[lowest:] + cycle[:lowest])
    return sorted(cycles)


class FormClassGroup:
    """Narrow form class group of a fundamental discriminant, elements by index."""

    def __init__(self, D: int) -> None:
        _check_discriminant(D)
        self.D = D
        cycles = form_cycles(D)
        self.representatives: list[Form] = [cycle[0] for cycle in cycles]
        self._class_of: dict[Form, int] = {}
        self._positive: list[Form] = []
        for index, cycle in enumerate(cycles):
            for form in cycle:
                self._class_of[form] = index
            self._positive.append(next(f for f in cycle if f[0] > 0))
        self._products: dict[tuple[int, int], int] = {}

        b0 = D % 2
        self.identity = self.class_of((1, b0, (b0 * b0 - D) // 4))
        self.minus_one = self.class_of((-1, b0, (D - b0 * b0) // 4))
        logger.debug(f"Built form class group for D={D} with {len(cycles)} classes")

    @property
    def order(self) -> int:
        return len(self.representatives)

    def class_of(self, form: Form) -> int:
        return self._class_of[reduce_form(form, self.D)]

    def multiply(self, i: int, j: int) -> int:
        key = (i, j) if i <= j else (j, i)
        product = self._products.get(key)
        if product is None:
            composed = compose_forms(self._positive[i], self._positive[j], self.D)
            product = self.class_of(composed)
            self._products[key] = product
        return product

    def powers(self, i: int) -> Iterator[int]:
        """x, x^2, ... up to and including the identity."""
        current = i
        yield current
        while current != self.identity:
            current = self.multiply(current, i)
            yield current

    def element_order(self, i: int) -> int:
        return sum(1 for _ in self.powers(i))

    def table(self) -> list[list[int]]:
        return [[self.multiply(i, j) for j in range(self.order)] for i in range(self.order)]

    def closure(self, generators: list[int]) -> set[int]:
        reached = {self.identity}
        frontier = [self.identity]
        while frontier:
            current = frontier.pop()
            for g in generators:
                nxt = self.multiply(current, g)
                if nxt not in reached:
                    reached.add(nxt)
                    frontier.append(nxt)
        return reached

    def generating_set(self) -> list[int]:
        by_order = sorted(
            range(self.order), key=lambda i: (-self.element_order(i), i)
        )
        generators: list[int] = []
        span = {self.identity}
        for candidate in by_order:
            if candidate not in span:
                generators.append(candidate)
                span = self.closure(generators)
        return generators

    def structure(self) -> AbelianType:
        return abelian_type_from_orders(
            [self.element_order(i) for i in range(self.order)]
        )

    def quotient_by_minus_one(self) -> AbelianType:
        """Structure of Cl+ / <[-1]>, the ordinary class group."""
        subgroup = {self.identity, self.minus_one}
        orders: list[int] = []
        visited: set[int] = set()
        for i in range(self.order):
            if i in visited:
                continue
            visited.update({i, self.multiply(i, self.minus_one)})
            orders.append(
                next(k for k, p in enumerate(self.powers(i), start=1) if p in subgroup)
            )
        return abelian_type_from_orders(orders)


def abelian_type_from_orders(orders: list[int]) -> AbelianType:
    """
    Structure of a finite abelian group from the multiset of its element orders.

    For each prime p the number of elements killed by p**j determines how many
    cyclic factors have order at least p**j.
    """
    size = len(orders)
    cyclic_orders: list[int] = []
    for prime, exponent in factorint(size).items():
        prime = int(prime)
        killed = [sum(1 for o in orders if prime**j % o == 0) for j in range(exponent + 2)]
        at_least = []
        for j in range(1, exponent + 1):
            ratio = killed[j] // killed[j - 1]
            count = 0
            while ratio > 1:
                ratio //= prime
                count += 1
            at_least.append(count)
        at_least.append(0)
        for j in range(exponent):
            cyclic_orders.extend([prime ** (j + 1)] * (at_least[j] - at_least[j + 1]))
    result = AbelianType.from_cyclic_orders(cyclic_orders)
    if result.order != size:
        raise InvariantViolation(f"orders {sorted(orders)} do not describe an abelian group")
    return result


def _form_model(form: Form) -> FormClass:
    return FormClass(a=form[0], b=form[1], c=form[2])


def narrow_class_group(D: int) -> NarrowClassGroup:
    """
    Narrow class group Cl+(D) of a positive fundamental discriminant.

    Args:
        D: Positive, non-square, fundamental discriminant.

    Returns:
        The structure together with canonical class representatives and a
        generating set.
    """
    _check_discriminant(D)

    def compute() -> NarrowClassGroup:
        group = FormClassGroup(D)
        return NarrowClassGroup(
            discriminant=D,
            structure=group.structure(),
            classes=[_form_model(f) for f in group.representatives],
            generators=[_form_model(group.representatives[g]) for g in group.generating_set()],
        )

    return _memoised(f'narrow:{D}', compute)


def composition_table(D: int) -> tuple[list[FormClass], list[list[int]]]:
    """Full composition table on canonical representatives (oracle use)."""
    group = FormClassGroup(D)
    return [_form_model(f) for f in group.representatives], group.table()


def class_group(d: int) -> ClassData:
    """Ordinary class group data of Q(sqrt(d)) for squarefree d > 1."""
    _check_radicand(d)

    def compute() -> ClassData:
        D = fundamental_discriminant(d)
        group = FormClassGroup(D)
        narrow = group.structure()
        if group.minus_one == group.identity:
            ordinary = narrow
        else:
            ordinary = group.quotient_by_minus_one()
        h = ordinary.order
        if group.order not in (h, 2 * h):
            raise InvariantViolation(f"h+ = {group.order} but h = {h} for d = {d}")
        two_sylow = ordinary.two_sylow()
        logger.info(f"Class group of Q(sqrt({d})): h={h}, h+={group.order}, A={two_sylow}")
        return ClassData(
            d=d,
            discriminant=D,
            h=h,
            h_plus=group.order,
            structure=ordinary,
            narrow_structure=narrow,
            two_sylow=two_sylow,
            h2=two_sylow.order,
        )

    return _memoised(f'class:{d}', compute)


def h2(d: int) -> int:
    return class_group(d).h2


def prime_splitting(p: int | Literal['inf'], d: int) -> Splitting:
    """Decomposition of a prime (or the infinite place) of Q in Q(sqrt(d))."""
    if p == INFINITE_PLACE:
        return Splitting.SPLIT if d > 0 else Splitting.RAMIFIED
    D = fundamental_discriminant(d)
    if D % p == 0:
        return Splitting.RAMIFIED
    if p == 2:
        return Splitting.SPLIT if D % 8 == 1 else Splitting.INERT
    return Splitting.SPLIT if legendre_symbol(D, p) == 1 else Splitting.INERT


# --------------------------------------------------------------------------- #
# Exact arithmetic in Q(sqrt(d)) and Q(sqrt(a), sqrt(b))                      #
# --------------------------------------------------------------------------- #


def _rational_sqrt(value: Fraction) -> Fraction | None:
    if value < 0:
        return None
    top = integer_sqrt_exact(value.numerator)
    bottom = integer_sqrt_exact(value.denominator)
    if top is None or bottom is None:
        return None
    return Fraction(top, bottom)


@dataclass(frozen=True)
class QuadraticNumber:
    """x + y*sqrt(d) with rational x, y and d not a square."""

    x: Fraction
    y: Fraction
    d: int

    @classmethod
    def rational(cls, value: Fraction | int, d: int) -> 'QuadraticNumber':
        return cls(Fraction(value), Fraction(0), d)

    def _check(self, other: 'QuadraticNumber') -> None:
        if other.d != self.d:
            raise DomainError(f"mixing Q(sqrt({self.d})) and Q(sqrt({other.d}))")

    def __add__(self, other: 'QuadraticNumber') -> 'QuadraticNumber':
        self._check(other)
        return QuadraticNumber(self.x + other.x, self.y + other.y, self.d)

    def __sub__(self, other: 'QuadraticNumber') -> 'QuadraticNumber':
        self._check(other)
        return QuadraticNumber(self.x - other.x, self.y - other.y, self.d)

    def __neg__(self) -> 'QuadraticNumber':
        return QuadraticNumber(-self.x, -self.y, self.d)

    def __mul__(self, other: 'QuadraticNumber') -> 'QuadraticNumber':
        self._check(other)
        return QuadraticNumber(
            self.x * other.x + self.d * self.y * other.y,
            self.x * other.y + self.y * other.x,
            self.d,
        )

    def scale(self, factor: Fraction) -> 'QuadraticNumber':
        return QuadraticNumber(self.x * factor, self.y * factor, self.d)

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def norm(self) -> Fraction:
        return self.x * self.x - self.d * self.y * self.y

    def inverse(self) -> 'QuadraticNumber':
        n = self.norm()
        if n == 0:
            raise DomainError("zero has no inverse")
        return QuadraticNumber(self.x / n, -self.y / n, self.d)

    def sqrt(self) -> 'QuadraticNumber | None':
        """A square root inside Q(sqrt(d)), or None if there is none."""
        if self.y == 0:
            root = _rational_sqrt(self.x)
            if root is not None:
                return QuadraticNumber(root, Fraction(0), self.d)
            root = _rational_sqrt(self.x / self.d)
            if root is not None:
                return QuadraticNumber(Fraction(0), root, self.d)
            return None
        norm_root = _rational_sqrt(self.norm())
        if norm_root is None:
            return None
        for signed in (norm_root, -norm_root):
            u = _rational_sqrt((self.x + signed) / 2)
            if not u:
                continue
            candidate = QuadraticNumber(u, self.y / (2 * u), self.d)
            if candidate * candidate == self:
                return candidate
        return None


@dataclass(frozen=True)
class BiquadraticNumber:
    """
    Element A + B*sqrt(a) of Q(sqrt(a), sqrt(b)) with A, B in Q(sqrt(b)).

    In the basis {1, sqrt(a), sqrt(b), sqrt(ab)} the coordinates are
    (A.x, B.x, A.y, B.y).
    """

    a: int
    low: QuadraticNumber
    high: QuadraticNumber

    @property
    def b(self) -> int:
        return self.low.d

    @classmethod
    def from_coordinates(
        cls, a: int, b: int, coords: tuple[Fraction | int, ...]
    ) -> 'BiquadraticNumber':
        c0, c1, c2, c3 = (Fraction(c) for c in coords)
        return cls(a, QuadraticNumber(c0, c2, b), QuadraticNumber(c1, c3, b))

    @classmethod
    def embed(cls, a: int, b: int, number: QuadraticNumber) -> 'BiquadraticNumber':
        """Image of an element of one of the three quadratic subfields."""
        d = number.d
        if d == a:
            return cls.from_coordinates(a, b, (number.x, number.y, 0, 0))
        if d == b:
            return cls.from_coordinates(a, b, (number.x, 0, number.y, 0))
        if d == squarefree_part(a * b):
            # sqrt(d) = sqrt(ab) / k with ab = k^2 d
            k = integer_sqrt_exact(a * b // d)
            if k is None:
                raise InvariantViolation(f"{a * b} / {d} is not a square")
            return cls.from_coordinates(a, b, (number.x, 0, 0, number.y / k))
        raise DomainError(f"Q(sqrt({d})) is not a subfield of Q(sqrt({a}), sqrt({b}))")

    def coordinates(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.low.x, self.high.x, self.low.y, self.high.y)

    def __mul__(self, other: 'BiquadraticNumber') -> 'BiquadraticNumber':
        if (other.a, other.b) != (self.a, self.b):
            raise DomainError("mixing different biquadratic fields")
        a_scalar = QuadraticNumber.rational(self.a, self.b)
        return BiquadraticNumber(
            self.a,
            self.low * other.low + a_scalar * self.high * other.high,
            self.low * other.high + self.high * other.low,
        )

    def sqrt(self) -> 'BiquadraticNumber | None':
        """A square root inside the field, found down the tower Q(sqrt(b))."""
        a_scalar = QuadraticNumber.rational(self.a, self.b)
        zero = QuadraticNumber.rational(0, self.b)
        half = Fraction(1, 2)
        if self.high.is_zero():
            root = self.low.sqrt()
            if root is not None:
                return BiquadraticNumber(self.a, root, zero)
            root = (self.low * a_scalar.inverse()).sqrt()
            if root is not None:
                return BiquadraticNumber(self.a, zero, root)
            return None
        relative_norm = self.low * self.low - a_scalar * self.high * self.high
        norm_root = relative_norm.sqrt()
        if norm_root is None:
            return None
        for signed in (norm_root, -norm_root):
            u = (self.low + signed).scale(half).sqrt()
            if u is None or u.is_zero():
                continue
            v = self.high * u.scale(Fraction(2)).inverse()
            candidate = BiquadraticNumber(self.a, u, v)
            if candidate * candidate == self:
                return candidate
        return None

    def is_square(self) -> bool:
        return self.sqrt() is not None
