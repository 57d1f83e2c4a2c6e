# lch_app/tests/test_augment.py
import sympy
from django.test import SimpleTestCase, tag

from lch_app.utils.augment import (DISTINGUISHED, INCONCLUSIVE, CoefficientRing, augmentation,
                                   augmentation_counts, distinguish_by_cycle, e_invariant,
                                   enumerate_augmentations, equivalent_systems, is_restricted,
                                   lambda1_inverse_check, lift_restricted, local_systems, loop_monodromy_lambda1,
                                   matrix_identity_check, orbit, orbit_family, orbit_recurrence_check,
                                   reparametrize)
from lch_app.utils.coeffalg import parse_laurent
from lch_app.utils.corpus import load_diagram, load_expected, sigma0_system
from lch_app.utils.errors import AugmentationError, SearchCapExceeded
from lch_app.utils.lchdga import differential, presentation_dga


class RingTests(SimpleTestCase):

    def test_parse(self):
        self.assertEqual(CoefficientRing.parse('Z/2').chord_values(), (0, 1))
        self.assertEqual(CoefficientRing.parse('Z:2').chord_values(), (-2, -1, 0, 1, 2))
        self.assertEqual(CoefficientRing.parse('Z:2').unit_values(), (-1, 1))
        self.assertEqual(CoefficientRing.parse('Z/5').inverse(2), 3)

    def test_rejects_non_fields(self):
        for text in ('Z/4', 'Z/x', 'Q', 'Z:-1'):
            with self.subTest(ring=text), self.assertRaises(AugmentationError):
                CoefficientRing.parse(text)


class EnumerationTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.unknot = differential(load_diagram('unknot'))
        cls.trefoil = differential(load_diagram('trefoil'))

    def test_trefoil_has_five_over_z2(self):
        found = enumerate_augmentations(self.trefoil, 'Z/2')
        self.assertEqual(len(found), 5)
        self.assertEqual(len({tuple(sorted(s.values.items())) for s in found}), 5)
        for system in found:
            self.assertEqual(system.failures(), {})

    def test_unknot_forces_t_to_minus_one(self):
        found = enumerate_augmentations(self.unknot, 'Z:2')
        self.assertEqual(len(found), 1)
        self.assertEqual(found[0]('t'), -1)

    def test_counts(self):
        self.assertEqual(augmentation_counts(self.unknot, primes=(2, 3)), {'Z/2': 1, 'Z/3': 1})

    def test_search_cap(self):
        with self.assertRaises(SearchCapExceeded):
            enumerate_augmentations(self.trefoil, 'Z/2', cap=1)

    def test_verification(self):
        with self.assertRaises(AugmentationError):
            augmentation(self.unknot, {}, {'t': 1})
        self.assertEqual(augmentation(self.unknot, {}, {'t': 1}, modulus=2)('t'), 1)

    def test_only_degree_zero_chords_take_values(self):
        with self.assertRaises(AugmentationError):
            augmentation(self.unknot, {'a1': 1}, {'t': -1})


class RestrictionTests(SimpleTestCase):

    def two_symbol_dga(self, components):
        return presentation_dga({'generators': {'x': 0}, 'symbols': ['t1', 't2'],
                                 'symbol_components': components})

    def test_unknot_system_is_restricted(self):
        system = augmentation(differential(load_diagram('unknot')), {}, {'t': -1})
        self.assertTrue(is_restricted(system).restricted)
        self.assertEqual(is_restricted(system).relations, ())

    def test_relation_text(self):
        system = augmentation(self.two_symbol_dga({'t1': 1, 't2': 1}), {'x': 's1'}, {'t1': 's1', 't2': 's2'})
        restriction = is_restricted(system)
        self.assertTrue(restriction.restricted)
        self.assertEqual(restriction.relations, ('s1*s2 = -1',))
        admitted = [eta.values for eta in local_systems(('s1', 's2')) if restriction.admits(eta)]
        self.assertEqual(admitted, [{'s1': 1, 's2': -1}, {'s1': -1, 's2': 1}])

    def test_wrong_constant_product(self):
        system = augmentation(self.two_symbol_dga({'t1': 1, 't2': 1}), {}, {'t1': 1, 't2': 1})
        self.assertFalse(is_restricted(system).restricted)

    def test_lift_across_a_split(self):
        system = augmentation(self.two_symbol_dga({'t1': 1, 't2': 1}), {}, {'t1': 1, 't2': -1})
        lifted, eta = lift_restricted(system, 't1', 't2')
        self.assertEqual(lifted('t1'), parse_laurent('s'))
        self.assertEqual(lifted('t2'), parse_laurent('s^-1'))
        self.assertEqual(eta.values, {'s': -1})
        self.assertIn('s', lifted.target_symbols)

    def test_lift_across_a_merge(self):
        system = augmentation(self.two_symbol_dga({'t1': 1, 't2': 2}), {}, {'t1': -1, 't2': -1})
        lifted, eta = lift_restricted(system, 't1', 't2')
        self.assertEqual(eta.values, {'s': 1})
        self.assertEqual(sympy.expand(lifted('t1') * lifted('t2')), -1)


class ReparametrizationTests(SimpleTestCase):

    def setUp(self):
        g = presentation_dga({'generators': {'x': 0, 'y': 0}, 'symbols': ['t1']})
        self.first = augmentation(g, {'x': 's1 + s2', 'y': '1 - s1*s2^-1'}, {'t1': 's1'},
                                  target_symbols=('s1', 's2'))

    def test_relabeling_is_found(self):
        second = reparametrize(self.first, (-1, 1), [[0, 1], [1, 0]])
        change = equivalent_systems(self.first, second)
        self.assertIsNotNone(change)
        signs, matrix = change
        again = reparametrize(self.first, signs, matrix)
        for chord in ('x', 'y'):
            self.assertEqual(sympy.expand(again(chord) - second(chord)), 0)

    def test_identity(self):
        self.assertEqual(equivalent_systems(self.first, self.first), ((1, 1), [[1, 0], [0, 1]]))

    def test_singular_matrix(self):
        with self.assertRaises(AugmentationError):
            reparametrize(self.first, (1, 1), [[1, 1], [1, 1]])


class FillingOrbitTests(SimpleTestCase):
    """The degree-0 filling table of lambda_1 and its orbit under the loop."""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.expected = load_expected()
        cls.system = sigma0_system(cls.expected)
        cls.phi = loop_monodromy_lambda1(cls.system.dga)

    def test_basepoint_product(self):
        product = sympy.expand(sympy.Mul(*[self.system(t) for t in ('t1', 't2', 't3', 't4')]))
        self.assertEqual(product, -1)

    def test_restricted_relations(self):
        restriction = is_restricted(self.system)
        self.assertTrue(restriction.restricted)
        self.assertEqual(set(restriction.relations), {'s1*s2*s3*s4 = 1', 's3*s4 = 1', 's1*s2 = 1'})
        self.assertEqual(set(restriction.relations), set(self.expected['restricted_relations']))

    def test_orbit_values_grow(self):
        family = orbit_family(self.system, self.phi, 3)
        self.assertEqual(e_invariant(family, 'g2'), [1, 3, 5, 7])
        self.assertEqual(e_invariant(family[1:], 'g4'), [1, 3, 5])
        self.assertEqual(e_invariant(family, 'g2', restricted=True), [1, 3, 5, 7])

    def test_e_is_invariant_under_reparametrization(self):
        family = orbit_family(self.system, self.phi, 3)
        signs = (1, -1, 1, 1, -1)
        shuffle = [[int(j == (i + 2) % 5) for j in range(5)] for i in range(5)]
        shear = [[int(i == j or (i, j) == (0, 1)) for j in range(5)] for i in range(5)]
        for matrix in (shuffle, shear):
            with self.subTest(matrix=matrix):
                moved = [reparametrize(system, signs, matrix) for system in family]
                self.assertEqual(e_invariant(moved, 'g2'), [1, 3, 5, 7])
                self.assertEqual(e_invariant(moved[1:], 'g4'), [1, 3, 5])
                self.assertEqual(e_invariant(moved, 'g2', restricted=True), [1, 3, 5, 7])

    def test_loop_matrices_are_inverse(self):
        self.assertTrue(lambda1_inverse_check(self.system.dga.table))

    def test_orbit_matches_matrix_powers(self):
        self.assertTrue(all(ok for _, ok in orbit_recurrence_check(self.system, self.phi, 3)))

    def test_closed_forms(self):
        rows = matrix_identity_check(12)
        self.assertEqual(len(rows), 4 * 13)
        self.assertTrue(all(ok for _, _, ok in rows))

    def test_distinguish(self):
        first, second = orbit(self.system, self.phi, 0), orbit(self.system, self.phi, 1)
        verdict = distinguish_by_cycle(first, second, 'g2')
        self.assertEqual(verdict.verdict, DISTINGUISHED)
        self.assertEqual(verdict.values, (1, 3))
        self.assertEqual(distinguish_by_cycle(first, first, 'g2').verdict, INCONCLUSIVE)

    def test_bad_inputs(self):
        with self.assertRaises(AugmentationError):
            orbit(self.system, self.phi, -1)
        with self.assertRaises(AugmentationError):
            e_invariant([self.system], 'zz')

    @tag('slow')
    def test_bundled_table_to_k_10(self):
        family = orbit_family(self.system, self.phi, 10)
        table = self.expected['e_invariant']
        self.assertEqual(e_invariant(family, 'g2'), table['g2']['values'])
        self.assertEqual(e_invariant(family[1:], 'g4'), table['g4']['values'])
        self.assertEqual(e_invariant(family, 'g2', restricted=True), table['g2_restricted']['values'])
