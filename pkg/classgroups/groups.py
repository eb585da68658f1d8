"""
Finite metacyclic and modular 2-groups.

Every group here has a normal form X^i * Y^j with i mod 2^A and j mod 2^B,
governed by Y X Y^-1 = X^u and Y^(2^B) = X^c. Metacyclic groups of types 1-4
take X = a, Y = b; the modular group takes X = b, Y = a. Subgroups are sets of
normal-form pairs, which keeps every predicate a plain enumeration.
"""

import logging
import random
from collections import deque
from collections.abc import Callable, Hashable, Iterable, Iterator
from dataclasses import dataclass, field
from enum import Enum
from typing import Literal, TypeVar

from django.conf import settings
from pydantic import BaseModel, ConfigDict, Field

from .arith import RelationLattice
from .exceptions import CapacityError, ConstructionError, DomainError, InvariantViolation
from .quadfield import AbelianType

logger = logging.getLogger(__name__)

Element = tuple[int, int]
E = TypeVar('E')


class MetacyclicParams(BaseModel):
    """Parameters of a metacyclic-nonmodular 2-group of type 1, 2, 3 or 4."""

    model_config = ConfigDict(frozen=True)

    type: Literal[1, 2, 3, 4]
    alpha: int = Field(..., description="a has order 2^alpha")
    n: int = Field(..., description="G^ab = Z/2 x Z/2^n")
    s: int | None = Field(None, description="Types 3 and 4 only: alpha > s > 1")
    k: int | None = Field(None, description="Types 3 and 4 only: odd")

    @property
    def order(self) -> int:
        return 2 ** (self.alpha + self.n)

    @property
    def conjugation_exponent(self) -> int:
        """t with b^-1 a b = a^t, reduced mod 2^alpha."""
        modulus = 2**self.alpha
        if self.type in (1, 2):
            return -1 % modulus
        assert self.k is not None and self.s is not None
        return (-1 + self.k * 2**self.s) % modulus

    @property
    def folded_power(self) -> int:
        """c with b^(2^n) = a^c."""
        return 2 ** (self.alpha - 1) if self.type in (2, 4) else 0

    def label(self) -> str:
        extra = f", s={self.s}, k={self.k}" if self.type in (3, 4) else ''
        return f"type {self.type}, alpha={self.alpha}, n={self.n}{extra}"


class GroupClass(str, Enum):
    """Outcome of the rank criterion on the maximal subgroups."""

    METACYCLIC_NONMODULAR = 'metacyclic-nonmodular'
    MODULAR_OR_ABELIAN = 'modular-or-abelian'
    OTHER = 'other'


@dataclass(frozen=True)
class NormalFormLaw:
    """Multiplication of X^i Y^j with Y X Y^-1 = X^u and Y^(2^B) = X^c."""

    x_exp: int
    y_exp: int
    u: int
    c: int

    @property
    def x_mod(self) -> int:
        return 2**self.x_exp

    @property
    def y_mod(self) -> int:
        return 2**self.y_exp

    @property
    def order(self) -> int:
        return self.x_mod * self.y_mod

    def is_consistent(self) -> bool:
        modulus = self.x_mod
        return (
            self.u % 2 == 1
            and pow(self.u, self.y_mod, modulus) == 1 % modulus
            and (self.c * (self.u - 1)) % modulus == 0
        )

    def multiply(self, g: Element, h: Element) -> Element:
        i1, j1 = g
        i2, j2 = h
        carry, j = divmod(j1 + j2, self.y_mod)
        i = i1 + i2 * pow(self.u, j1, self.x_mod) + self.c * carry
        return (i % self.x_mod, j)

    def inverse(self, g: Element) -> Element:
        i, j = g
        if j == 0:
            return (-i % self.x_mod, 0)
        twist = pow(self.u, -j, self.x_mod) if self.x_mod > 1 else 0
        return (-(i + self.c) * twist % self.x_mod, self.y_mod - j)

    def elements(self) -> Iterator[Element]:
        for i in range(self.x_mod):
            for j in range(self.y_mod):
                yield (i, j)


class FiniteGroup:
    """
    A concrete finite group on normal-form pairs.

    ``a`` and ``b`` are the designated generators of the standard subgroups;
    they are only set for metacyclic and modular groups.
    """

    identity: Element = (0, 0)

    def __init__(
        self,
        law: NormalFormLaw,
        name: str,
        *,
        params: MetacyclicParams | None = None,
        modular_m: int | None = None,
        a: Element | None = None,
        b: Element | None = None,
    ) -> None:
        self.law = law
        self.name = name
        self.params = params
        self.modular_m = modular_m
        self.a = a
        self.b = b
        gens = []
        if law.x_exp > 0:
            gens.append((1, 0))
        if law.y_exp > 0:
            gens.append((0, 1))
        self.generators: tuple[Element, ...] = tuple(gens)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"

    @property
    def order(self) -> int:
        return self.law.order

    def multiply(self, g: Element, h: Element) -> Element:
        return self.law.multiply(g, h)

    def inverse(self, g: Element) -> Element:
        return self.law.inverse(g)

    def power(self, g: Element, k: int) -> Element:
        if k < 0:
            return self.power(self.inverse(g), -k)
        result, base = self.identity, g
        while k:
            if k & 1:
                result = self.multiply(result, base)
            base = self.multiply(base, base)
            k >>= 1
        return result

    def word(self, a_exp: int, b_exp: int) -> Element:
        """a^a_exp * b^b_exp in terms of the designated generators."""
        if self.a is None or self.b is None:
            raise DomainError(f"{self.name} has no designated generators a, b")
        return self.multiply(self.power(self.a, a_exp), self.power(self.b, b_exp))

    def commutator(self, g: Element, h: Element) -> Element:
        """[g, h] = g^-1 h^-1 g h."""
        return self.multiply(
            self.multiply(self.inverse(g), self.inverse(h)), self.multiply(g, h)
        )

    def conjugate(self, g: Element, h: Element) -> Element:
        """g h g^-1."""
        return self.multiply(self.multiply(g, h), self.inverse(g))

    def elements(self) -> list[Element]:
        return list(self.law.elements())

    def element_order(self, g: Element) -> int:
        k, current = 1, g
        while current != self.identity:
            current = self.multiply(current, g)
            k += 1
        return k

    def is_abelian(self) -> bool:
        return all(
            self.multiply(g, h) == self.multiply(h, g)
            for g in self.generators
            for h in self.generators
        )

    def as_subgroup(self) -> 'Subgroup':
        return Subgroup(tuple(sorted(self.elements())), self.generators, self)

    def check_axioms(self) -> None:
        """Identity, inverses and associativity; exhaustive up to AXIOM_CHECK_FULL_LIMIT."""
        elements = self.elements()
        for x in elements:
            if self.multiply(self.identity, x) != x or self.multiply(x, self.identity) != x:
                raise ConstructionError(f"{self.name}: identity fails at {x}")
            if self.multiply(x, self.inverse(x)) != self.identity:
                raise ConstructionError(f"{self.name}: inverse fails at {x}")
        full_limit = getattr(settings, 'AXIOM_CHECK_FULL_LIMIT', 2**8)
        if self.order <= full_limit:
            # Light's test: checking (xg)y = x(gy) for generators g suffices.
            for g in self.generators:
                for x in elements:
                    xg = self.multiply(x, g)
                    for y in elements:
                        if self.multiply(xg, y) != self.multiply(x, self.multiply(g, y)):
                            raise ConstructionError(f"{self.name}: not associative")
        else:
            rng = random.Random(self.order)
            for _ in range(4096):
                x, y, z = (rng.choice(elements) for _ in range(3))
                if self.multiply(self.multiply(x, y), z) != self.multiply(
                    x, self.multiply(y, z)
                ):
                    raise ConstructionError(f"{self.name}: not associative")


@dataclass(frozen=True)
class Subgroup:
    """A subgroup as its sorted element list; equality ignores the generators."""

    elements: tuple[Element, ...]
    generators: tuple[Element, ...] = field(compare=False)
    group: FiniteGroup = field(compare=False, repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g: object) -> bool:
        return g in self._members

    @property
    def _members(self) -> frozenset[Element]:
        return frozenset(self.elements)

    def index(self) -> int:
        return self.group.order // self.order

    def is_abelian(self) -> bool:
        multiply = self.group.multiply
        return all(
            multiply(g, h) == multiply(h, g) for g in self.generators for h in self.generators
        )


# --------------------------------------------------------------------------- #
# Construction                                                                #
# --------------------------------------------------------------------------- #


def _order_limit() -> int:
    return getattr(settings, 'GROUP_ORDER_LIMIT', 2**12)


def _check_capacity(order: int, limit: int, what: str) -> None:
    if order > limit:
        raise CapacityError(f"{what} needs order <= {limit}, got {order}")


def build_metacyclic(params: MetacyclicParams) -> FiniteGroup:
    """
    <a, b | a^(2^alpha) = 1, b^(2^n) = a^c, b^-1 a b = a^t> on pairs a^i b^j.

    Raises:
        ConstructionError: if the parameters violate the type constraints or
            the relations fail in the constructed table.
        CapacityError: if 2^(alpha + n) exceeds GROUP_ORDER_LIMIT.
    """
    if params.alpha < 2 or params.n < 2:
        raise ConstructionError(f"need alpha > 1 and n > 1: {params.label()}")
    if params.type in (3, 4):
        if params.s is None or params.k is None:
            raise ConstructionError(f"type {params.type} needs s and k")
        if not params.alpha > params.s > 1:
            raise ConstructionError(f"need alpha > s > 1: {params.label()}")
        if params.k % 2 == 0:
            raise ConstructionError(f"k must be odd: {params.label()}")
    _check_capacity(params.order, _order_limit(), 'build_metacyclic')

    modulus = 2**params.alpha
    t = params.conjugation_exponent
    law = NormalFormLaw(
        x_exp=params.alpha, y_exp=params.n, u=pow(t, -1, modulus), c=params.folded_power
    )
    if not law.is_consistent():
        raise ConstructionError(f"inconsistent presentation: {params.label()}")
    group = FiniteGroup(
        law, f"metacyclic({params.label()})", params=params, a=(1, 0), b=(0, 1)
    )
    a, b = group.a, group.b
    assert a is not None and b is not None
    if group.power(a, modulus) != group.identity:
        raise ConstructionError(f"a^(2^alpha) != 1 for {params.label()}")
    if group.power(b, 2**params.n) != group.power(a, params.folded_power):
        raise ConstructionError(f"b^(2^n) relation fails for {params.label()}")
    if group.multiply(group.multiply(group.inverse(b), a), b) != group.power(a, t):
        raise ConstructionError(f"b^-1 a b != a^t for {params.label()}")
    group.check_axioms()
    logger.debug(f"Built {group!r}")
    return group


def build_modular(m: int) -> FiniteGroup:
    """<a, b | a^2 = b^(2^(m-1)) = 1, [a, b] = b^(2^(m-2))> of order 2^m, m > 3."""
    if m <= 3:
        raise DomainError(f"modular groups need m > 3, got {m}")
    _check_capacity(2**m, _order_limit(), 'build_modular')
    law = NormalFormLaw(x_exp=m - 1, y_exp=1, u=1 + 2 ** (m - 2), c=0)
    group = FiniteGroup(law, f"modular(m={m})", modular_m=m, a=(0, 1), b=(1, 0))
    a, b = group.a, group.b
    assert a is not None and b is not None
    if group.commutator(a, b) != group.power(b, 2 ** (m - 2)):
        raise InvariantViolation(f"[a, b] relation fails in modular(m={m})")
    group.check_axioms()
    return group


def cyclic_group(order: int) -> FiniteGroup:
    exponent = order.bit_length() - 1
    if order < 1 or 2**exponent != order:
        raise DomainError(f"cyclic groups here have 2-power order, got {order}")
    return FiniteGroup(NormalFormLaw(x_exp=exponent, y_exp=0, u=1, c=0), f"C{order}")


def klein_four_group() -> FiniteGroup:
    return FiniteGroup(NormalFormLaw(x_exp=1, y_exp=1, u=1, c=0), 'V4')


def quaternion_group() -> FiniteGroup:
    # Y X Y^-1 = X^-1 and Y^2 = X^2
    return FiniteGroup(NormalFormLaw(x_exp=2, y_exp=1, u=3, c=2), 'Q8')


# --------------------------------------------------------------------------- #
# Subgroups                                                                   #
# --------------------------------------------------------------------------- #


def closure(group: FiniteGroup, generators: Iterable[Element]) -> Subgroup:
    """Smallest subgroup containing ``generators``."""
    gens = tuple(dict.fromkeys(g for g in generators if g != group.identity))
    reached = {group.identity}
    queue = deque([group.identity])
    while queue:
        current = queue.popleft()
        for g in gens:
            nxt = group.multiply(current, g)
            if nxt not in reached:
                reached.add(nxt)
                queue.append(nxt)
    return Subgroup(tuple(sorted(reached)), gens, group)


def _normal_closure(group: FiniteGroup, within: Subgroup, seeds: list[Element]) -> Subgroup:
    """Normal closure of ``seeds`` inside ``within``."""
    current = closure(group, seeds)
    while True:
        extra = [
            group.conjugate(g, h)
            for g in within.generators
            for h in current.generators
            if group.conjugate(g, h) not in current
        ]
        if not extra:
            return current
        current = closure(group, current.generators + tuple(extra))


def derived_subgroup(target: 'Subgroup | FiniteGroup') -> Subgroup:
    """Commutator subgroup, as the normal closure of commutators of generators."""
    subgroup = target.as_subgroup() if isinstance(target, FiniteGroup) else target
    group = subgroup.group
    _check_capacity(group.order, _order_limit(), 'derived_subgroup')
    gens = subgroup.generators
    commutators = [group.commutator(g, h) for g in gens for h in gens]
    return _normal_closure(group, subgroup, commutators)


def abelian_invariants(
    identity: E,
    multiply: Callable[[E, E], E],
    generators: list[E],
    key: Callable[[E], Hashable] = lambda x: x,
) -> AbelianType:
    """
    Structure of a finite abelian group (or quotient) from its Cayley graph.

    ``key`` maps an element to its class, so passing a coset key turns this
    into the abelianization of a quotient. Each non-tree edge of a breadth
    first spanning tree contributes one relation; the Smith normal form of
    the relation lattice gives the invariant factors.
    """
    rank = len(generators)
    lattice = RelationLattice(rank)
    start = key(identity)
    vectors: dict[Hashable, list[int]] = {start: [0] * rank}
    queue: deque[E] = deque([identity])
    while queue:
        current = queue.popleft()
        base = vectors[key(current)]
        for index, g in enumerate(generators):
            nxt = multiply(current, g)
            target = key(nxt)
            moved = list(base)
            moved[index] += 1
            known = vectors.get(target)
            if known is None:
                vectors[target] = moved
                queue.append(nxt)
            else:
                relation = [x - y for x, y in zip(moved, known)]
                if any(relation):
                    lattice.add(relation)
    result = AbelianType(divisors=tuple(lattice.invariants()))
    if result.order != len(vectors):
        raise InvariantViolation(f"relation lattice gives order {result.order}, expected {len(vectors)}")
    return result


def abelianization(target: 'Subgroup | FiniteGroup') -> AbelianType:
    """H / H' via the coset Cayley graph of H over its derived subgroup."""
    subgroup = target.as_subgroup() if isinstance(target, FiniteGroup) else target
    group = subgroup.group
    derived = derived_subgroup(subgroup)

    def coset(x: Element) -> Element:
        return min(group.multiply(x, h) for h in derived.elements)

    return abelian_invariants(group.identity, group.multiply, list(subgroup.generators), coset)


def enumerate_subgroups(group: FiniteGroup) -> list[Subgroup]:
    """All subgroups, as joins of cyclic subgroups, sorted by (order, elements)."""
    limit = getattr(settings, 'SUBGROUP_ENUMERATION_LIMIT', 2**10)
    _check_capacity(group.order, limit, 'enumerate_subgroups')
    cyclic: dict[tuple[Element, ...], Subgroup] = {}
    for g in group.elements():
        sub = closure(group, [g])
        cyclic.setdefault(sub.elements, sub)
    found: dict[tuple[Element, ...], Subgroup] = dict(cyclic)
    frontier = list(found.values())
    while frontier:
        fresh: list[Subgroup] = []
        for sub in frontier:
            for cyc in cyclic.values():
                if cyc.generators and cyc.generators[0] not in sub:
                    joined = closure(group, sub.generators + cyc.generators)
                    if joined.elements not in found:
                        found[joined.elements] = joined
                        fresh.append(joined)
        frontier = fresh
    return sorted(found.values(), key=lambda h: (h.order, h.elements))


def is_minimal(group: FiniteGroup) -> bool:
    """A non-abelian group is minimal when all its proper subgroups are abelian."""
    if group.is_abelian():
        raise DomainError(f"{group.name} is abelian; minimality is for non-abelian groups")
    return all(
        sub.is_abelian() for sub in enumerate_subgroups(group) if sub.order < group.order
    )


STANDARD_INDICES = {'H12': 2, 'H22': 2, 'H32': 2, 'H14': 4, 'H24': 4, 'H34': 4}


def standard_subgroups(group: FiniteGroup) -> dict[str, Subgroup]:
    """
    The three maximal subgroups H_i2 and the index-4 subgroups H_i4.

    H12 = <b, G'>, H22 = <ab, G'>, H32 = <a, b^2, G'>,
    H14 = <a, b^4, G'>, H24 = <ab^2, G'>, H34 = <b^2, G'>.
    """
    derived = derived_subgroup(group)
    extra = derived.generators
    words = {
        'H12': [(0, 1)],
        'H22': [(1, 1)],
        'H32': [(1, 0), (0, 2)],
        'H14': [(1, 0), (0, 4)],
        'H24': [(1, 2)],
        'H34': [(0, 2)],
    }
    result: dict[str, Subgroup] = {}
    for name, word_list in words.items():
        sub = closure(group, [group.word(i, j) for i, j in word_list] + list(extra))
        if sub.index() != STANDARD_INDICES[name]:
            raise InvariantViolation(
                f"[G : {name}] = {sub.index()} in {group.name}, expected {STANDARD_INDICES[name]}"
            )
        result[name] = sub
    frattini = set(result['H12'].elements) & set(result['H22'].elements) & set(result['H32'].elements)
    if frattini != set(result['H34'].elements):
        raise InvariantViolation(f"H34 is not the intersection of the maximal subgroups in {group.name}")
    return result


# --------------------------------------------------------------------------- #
# Classification                                                              #
# --------------------------------------------------------------------------- #


def classify_from_ranks(rank_12: int, rank_22: int, rank_32: int) -> GroupClass:
    """Rank criterion on the 2-ranks of the three maximal subgroups' abelianizations."""
    for rank in (rank_12, rank_22, rank_32):
        if rank not in (1, 2):
            raise DomainError(f"2-ranks of maximal subgroups lie in {{1, 2}}, got {rank}")
    if rank_12 == rank_22 == rank_32 == 2:
        return GroupClass.METACYCLIC_NONMODULAR
    if rank_32 == 2 and 1 in (rank_12, rank_22):
        return GroupClass.MODULAR_OR_ABELIAN
    return GroupClass.OTHER


def maximal_subgroup_ranks(group: FiniteGroup) -> tuple[int, int, int]:
    subs = standard_subgroups(group)
    ranks = (abelianization(subs[name]).two_rank for name in ('H12', 'H22', 'H32'))
    r12, r22, r32 = ranks
    return r12, r22, r32


def classify_group(group: FiniteGroup) -> GroupClass:
    return classify_from_ranks(*maximal_subgroup_ranks(group))


class MinimalityReport(BaseModel):
    """The three statements whose equivalence holds when H32^ab = (2, 4)."""

    group: str
    minimal_type1_order16: bool
    ab_2x4_for_some_i: bool
    rank2_for_some_i: bool

    @property
    def equivalent(self) -> bool:
        return self.minimal_type1_order16 == self.ab_2x4_for_some_i == self.rank2_for_some_i


def minimal_order16_equivalence(group: FiniteGroup) -> MinimalityReport:
    target = AbelianType(divisors=(2, 4))
    subs = standard_subgroups(group)
    if abelianization(subs['H32']) != target:
        raise DomainError(f"H32^ab of {group.name} is not (2, 4)")
    ab = [abelianization(subs[name]) for name in ('H12', 'H22')]
    params = group.params
    statement_1 = (
        params is not None
        and params.type == 1
        and group.order == 16
        and not group.is_abelian()
        and is_minimal(group)
    )
    return MinimalityReport(
        group=group.name,
        minimal_type1_order16=statement_1,
        ab_2x4_for_some_i=any(x == target for x in ab),
        rank2_for_some_i=any(x.two_rank == 2 for x in ab),
    )
