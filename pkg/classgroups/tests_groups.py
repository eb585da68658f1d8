"""
Tests for the finite 2-group engine and the subgroup tables.
"""

from collections import Counter

from django.test import SimpleTestCase, override_settings

from .exceptions import CapacityError, ConstructionError, CoverageError, DomainError
from .groups import (
    GroupClass,
    MetacyclicParams,
    NormalFormLaw,
    abelianization,
    build_metacyclic,
    build_modular,
    classify_from_ranks,
    classify_group,
    closure,
    cyclic_group,
    derived_subgroup,
    enumerate_subgroups,
    is_minimal,
    klein_four_group,
    maximal_subgroup_ranks,
    minimal_order16_equivalence,
    quaternion_group,
    standard_subgroups,
)
from .golden import load_json
from .subgroup_tables import (
    AuxiliaryParameters,
    sweep_parameters,
    sweep_rows,
    sweep_tables,
    table_entry,
    verify_table_row,
)


def type1(alpha: int, n: int) -> MetacyclicParams:
    return MetacyclicParams(type=1, alpha=alpha, n=n)


class ConstructionTest(SimpleTestCase):
    """Presentations become consistent multiplication laws."""

    def test_type1_relations(self) -> None:
        """b^-1 a b = a^-1 and (ab)^2 = b^2 in type 1 with alpha = 2."""
        group = build_metacyclic(type1(2, 2))
        self.assertEqual(group.order, 16)
        a, b = group.a, group.b
        assert a is not None and b is not None
        self.assertEqual(
            group.multiply(group.multiply(group.inverse(b), a), b), group.inverse(a)
        )
        ab = group.multiply(a, b)
        self.assertEqual(group.power(ab, 2), group.power(b, 2))
        self.assertEqual(group.element_order(a), 4)
        self.assertFalse(group.is_abelian())

    def test_type2_folds_b_power(self) -> None:
        """b^(2^n) = a^(2^(alpha-1)) in type 2."""
        params = MetacyclicParams(type=2, alpha=3, n=2)
        group = build_metacyclic(params)
        self.assertEqual(group.power(group.b, 4), group.power(group.a, 4))
        self.assertEqual(params.folded_power, 4)

    def test_type3_conjugation(self) -> None:
        """t = -1 + k*2^s."""
        params = MetacyclicParams(type=3, alpha=4, n=2, s=2, k=1)
        self.assertEqual(params.conjugation_exponent, 3)
        group = build_metacyclic(params)
        a, b = group.a, group.b
        assert a is not None and b is not None
        self.assertEqual(group.multiply(group.multiply(group.inverse(b), a), b), group.power(a, 3))

    def test_bad_parameters(self) -> None:
        """alpha > s > 1, odd k and alpha, n > 1 are enforced."""
        bad = [
            MetacyclicParams(type=1, alpha=1, n=2),
            MetacyclicParams(type=3, alpha=3, n=2),
            MetacyclicParams(type=3, alpha=3, n=2, s=3, k=1),
            MetacyclicParams(type=4, alpha=4, n=2, s=2, k=2),
        ]
        for params in bad:
            with self.subTest(params=params.label()):
                with self.assertRaises(ConstructionError):
                    build_metacyclic(params)

    @override_settings(GROUP_ORDER_LIMIT=64)
    def test_capacity(self) -> None:
        """Groups above GROUP_ORDER_LIMIT are refused."""
        with self.assertRaises(CapacityError):
            build_metacyclic(type1(4, 4))
        with self.assertRaises(CapacityError):
            build_modular(7)

    def test_modular_group(self) -> None:
        """[a, b] = b^4 in the modular group of order 16."""
        group = build_modular(4)
        self.assertEqual(group.order, 16)
        a, b = group.a, group.b
        assert a is not None and b is not None
        self.assertEqual(group.element_order(b), 8)
        self.assertEqual(group.element_order(a), 2)
        self.assertEqual(group.commutator(a, b), group.power(b, 4))
        with self.assertRaises(DomainError):
            build_modular(3)

    def test_normal_form_law_consistency(self) -> None:
        """u must be odd with u^(2^B) = 1 and c*(u - 1) = 0."""
        self.assertTrue(NormalFormLaw(x_exp=2, y_exp=1, u=3, c=2).is_consistent())
        self.assertFalse(NormalFormLaw(x_exp=2, y_exp=1, u=2, c=0).is_consistent())
        self.assertFalse(NormalFormLaw(x_exp=3, y_exp=1, u=5, c=1).is_consistent())

    def test_word_needs_designated_generators(self) -> None:
        with self.assertRaises(DomainError):
            klein_four_group().word(1, 0)


class SubgroupTest(SimpleTestCase):
    """Closures, derived subgroups, abelianizations and enumeration."""

    def test_small_subgroup_counts(self) -> None:
        """C4 has 3 subgroups, V4 has 5 and Q8 has 6."""
        self.assertEqual(len(enumerate_subgroups(cyclic_group(4))), 3)
        self.assertEqual(len(enumerate_subgroups(klein_four_group())), 5)
        self.assertEqual(len(enumerate_subgroups(quaternion_group())), 6)

    def test_derived_subgroup_of_type1(self) -> None:
        """G' = <a^(t-1)> = <a^2>."""
        self.assertEqual(derived_subgroup(build_metacyclic(type1(2, 2))).order, 2)
        self.assertEqual(derived_subgroup(build_metacyclic(type1(3, 2))).order, 4)

    def test_abelianizations(self) -> None:
        """G^ab = (2, 2^n) for type 1; Q8^ab = (2, 2); the modular group gives (2, 4)."""
        self.assertEqual(str(abelianization(build_metacyclic(type1(2, 3)))), '2x8')
        self.assertEqual(str(abelianization(quaternion_group())), '2x2')
        self.assertEqual(str(abelianization(build_modular(4))), '2x4')
        self.assertEqual(str(abelianization(cyclic_group(8))), '8')

    def test_standard_subgroups_of_type1(self) -> None:
        """Index-2 and index-4 subgroups for alpha = 2, n = 2."""
        subs = standard_subgroups(build_metacyclic(type1(2, 2)))
        structures = {name: str(abelianization(sub)) for name, sub in subs.items()}
        self.assertEqual(
            structures,
            {'H12': '2x4', 'H22': '2x4', 'H32': '2x4', 'H14': '4', 'H24': '4', 'H34': '2x2'},
        )
        self.assertEqual(subs['H14'].index(), 4)

    def test_minimality(self) -> None:
        """Q8 and type 1 with alpha = 2 are minimal non-abelian; abelian input is refused."""
        self.assertTrue(is_minimal(quaternion_group()))
        self.assertTrue(is_minimal(build_metacyclic(type1(2, 2))))
        self.assertTrue(is_minimal(build_metacyclic(type1(2, 4))))
        self.assertFalse(is_minimal(build_metacyclic(type1(3, 2))))
        with self.assertRaises(DomainError):
            is_minimal(klein_four_group())

    @override_settings(SUBGROUP_ENUMERATION_LIMIT=8)
    def test_enumeration_capacity(self) -> None:
        with self.assertRaises(CapacityError):
            enumerate_subgroups(build_metacyclic(type1(2, 2)))


class ClassificationTest(SimpleTestCase):
    """Rank criterion on the maximal subgroups."""

    def test_rank_criterion(self) -> None:
        self.assertEqual(classify_from_ranks(2, 2, 2), GroupClass.METACYCLIC_NONMODULAR)
        self.assertEqual(classify_from_ranks(1, 1, 2), GroupClass.MODULAR_OR_ABELIAN)
        self.assertEqual(classify_from_ranks(2, 2, 1), GroupClass.OTHER)
        with self.assertRaises(DomainError):
            classify_from_ranks(3, 2, 2)

    def test_metacyclic_group(self) -> None:
        group = build_metacyclic(type1(2, 3))
        self.assertEqual(maximal_subgroup_ranks(group), (2, 2, 2))
        self.assertEqual(classify_group(group), GroupClass.METACYCLIC_NONMODULAR)

    def test_modular_group(self) -> None:
        group = build_modular(4)
        self.assertEqual(maximal_subgroup_ranks(group), (1, 1, 2))
        self.assertEqual(classify_group(group), GroupClass.MODULAR_OR_ABELIAN)

    def test_minimal_order16_equivalence(self) -> None:
        """All three statements hold for type 1, alpha = n = 2."""
        report = minimal_order16_equivalence(build_metacyclic(type1(2, 2)))
        self.assertTrue(report.minimal_type1_order16)
        self.assertTrue(report.ab_2x4_for_some_i)
        self.assertTrue(report.rank2_for_some_i)
        self.assertTrue(report.equivalent)

    def test_minimal_order16_needs_h32(self) -> None:
        """H32^ab of type 1, alpha = 2, n = 3 is (4, 4)."""
        with self.assertRaises(DomainError):
            minimal_order16_equivalence(build_metacyclic(type1(2, 3)))


class AuxiliaryParametersTest(SimpleTestCase):
    """epsilon, delta, omega, xi on both sides of n = alpha."""

    def test_values(self) -> None:
        below = AuxiliaryParameters(alpha=4, n=2)
        self.assertEqual(
            (below.epsilon, below.epsilon_prime, below.delta, below.omega, below.omega_prime, below.xi),
            (0, 1, 1, 1, 1, 0),
        )
        above = AuxiliaryParameters(alpha=2, n=4)
        self.assertEqual(
            (above.epsilon, above.epsilon_prime, above.delta, above.omega, above.omega_prime, above.xi),
            (1, 0, 0, -1, 1, 1),
        )
        equal = AuxiliaryParameters(alpha=3, n=3)
        self.assertEqual((equal.omega, equal.omega_prime), (0, 0))
        with self.assertRaises(CoverageError):
            equal.xi


class SubgroupTablesTest(SimpleTestCase):
    """Table rows against the groups engine."""

    def test_table_entry_resolution(self) -> None:
        """Type 1 with alpha = 2 uses the alpha = 2 block."""
        entry = table_entry(type1(2, 3), 3, 2)
        self.assertEqual(entry.generators, '<a, b^2>')
        self.assertEqual(str(entry.expected_abelianization()), '4x4')
        self.assertEqual(entry.expected_derived_order(2), 1)

    def test_table_entry_errors(self) -> None:
        with self.assertRaises(DomainError):
            table_entry(type1(2, 2), 4, 2)
        with self.assertRaises(DomainError):
            table_entry(type1(2, 2), 1, 3)
        with self.assertRaises(CoverageError):
            table_entry(MetacyclicParams(type=2, alpha=2, n=2), 1, 2)

    def test_verify_row(self) -> None:
        """H12 = <a^2, b> with H12^ab = (2, 2^n)."""
        result = verify_table_row(type1(2, 3), 1, 2)
        self.assertTrue(result.matches)
        self.assertTrue(result.generators_match)
        self.assertEqual(result.computed_abelianization, '2x8')

    def test_type1_alpha2_sweep(self) -> None:
        """Every row matches for type 1, alpha = 2, n = 2..4."""
        rows = sweep_tables([2], [2, 3, 4], [1])
        self.assertEqual(len(rows), 18)
        self.assertEqual({row.status for row in rows}, {'match'})
        self.assertEqual([(row.level, row.i) for row in rows[:6]], [(2, 1), (2, 2), (2, 3), (4, 1), (4, 2), (4, 3)])

    def test_type2_alpha2_uncovered(self) -> None:
        """No block of either table covers type 2 with alpha = 2."""
        rows = sweep_rows(MetacyclicParams(type=2, alpha=2, n=2))
        self.assertEqual({row.status for row in rows}, {'uncovered'})

    def test_construction_failure_rows(self) -> None:
        """alpha = 1 cannot be built; all six rows say so."""
        rows = sweep_rows(type1(1, 2))
        self.assertEqual(len(rows), 6)
        self.assertEqual({row.status for row in rows}, {'construction-failed'})

    def test_sweep_parameters(self) -> None:
        """s defaults to every value with alpha > s > 1; empty inputs give nothing."""
        tuples = sweep_parameters([4], [2], [3], k_values=[1, 3])
        self.assertEqual([(p.s, p.k) for p in tuples], [(2, 1), (2, 3), (3, 1), (3, 3)])
        self.assertEqual(sweep_parameters([], [2], [1]), [])
        self.assertEqual(sweep_parameters([2], [2], [3]), [])


class SweepTest(SimpleTestCase):
    """Every type over alpha, n in {2, 3, 4}, checked against the hand-worked fixtures."""

    def test_derived_subgroup_and_abelianization(self) -> None:
        """G' = <a^(t-1)> of order 2^(alpha-1) and G^ab = (2, 2^n) for every presentation."""
        for params in sweep_parameters([2, 3, 4], [2, 3, 4], [1, 2, 3, 4]):
            with self.subTest(params=params.label()):
                group = build_metacyclic(params)
                assert group.a is not None
                twisted = group.power(group.a, params.conjugation_exponent - 1)
                derived = derived_subgroup(group)
                self.assertEqual(derived, closure(group, [twisted]))
                self.assertEqual(derived.order, 2 ** (params.alpha - 1))
                self.assertEqual(str(abelianization(group)), f'2x{2**params.n}')

    def test_full_table_sweep(self) -> None:
        """Status counts and the mismatching rows are exactly those in table_discrepancies.json."""
        golden = load_json('table_discrepancies.json')
        rows = sweep_tables(
            golden['alphas'], golden['ns'], golden['types'], k_values=golden['k_values']
        )
        counts = Counter(row.status for row in rows)
        self.assertEqual({status: counts[status] for status in golden['counts']}, golden['counts'])
        mismatches = [
            {
                'params': row.params.label(),
                'level': row.level,
                'i': row.i,
                'expected_ab': row.result.expected_abelianization,
                'computed_ab': row.result.computed_abelianization,
                'expected_derived_order': row.result.expected_derived_order,
                'computed_derived_order': row.result.computed_derived_order,
            }
            for row in rows
            if row.status == 'mismatch' and row.result is not None
        ]
        self.assertEqual(mismatches, golden['mismatches'])

    def test_subgroup_counts(self) -> None:
        """Subgroup counts from subgroup_counts.json."""
        golden = load_json('subgroup_counts.json')
        groups = {
            'C4': cyclic_group(4),
            'V4': klein_four_group(),
            'Q8': quaternion_group(),
            'type 1, alpha=2, n=2': build_metacyclic(type1(2, 2)),
        }
        counts = {name: len(enumerate_subgroups(group)) for name, group in groups.items()}
        self.assertEqual(counts, golden)
