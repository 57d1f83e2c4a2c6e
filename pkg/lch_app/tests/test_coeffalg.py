# lch_app/tests/test_coeffalg.py
import random

import sympy
from django.test import SimpleTestCase, tag

from lch_app.utils.coeffalg import (MIXED, AlgebraElement, GeneratorTable, eval_hom, is_unit_monomial,
                                    leibniz_extend, mul, natural_key, parse_element, parse_laurent, power,
                                    render_laurent, specialize, substitute, symbol)
from lch_app.utils.errors import AlgebraError


class LaurentTests(SimpleTestCase):

    def test_natural_order(self):
        self.assertEqual(sorted(['s10', 's2', 's1'], key=natural_key), ['s1', 's2', 's10'])

    def test_parse_and_render(self):
        p = parse_laurent('s2*s1^-1 - 1')
        self.assertEqual(p, symbol('s2') / symbol('s1') - 1)
        self.assertEqual(render_laurent(p), '-1 + s1^-1*s2')
        self.assertEqual(parse_laurent(render_laurent(p)), p)

    def test_rejects_non_laurent_input(self):
        with self.assertRaises(AlgebraError):
            parse_laurent('s1^(1/2)')
        with self.assertRaises(AlgebraError):
            parse_laurent('')

    def test_units(self):
        self.assertTrue(is_unit_monomial(parse_laurent('-s1^-1*s2')))
        self.assertFalse(is_unit_monomial(parse_laurent('1 + s1')))
        self.assertFalse(is_unit_monomial(parse_laurent('2*s1')))

    def test_specialize(self):
        self.assertEqual(specialize({'s1': -1}, parse_laurent('s1^-1 + 2')), 1)
        with self.assertRaises(AlgebraError):
            specialize({'s1': 1}, parse_laurent('s1 + s2'))


class AlgebraElementTests(SimpleTestCase):

    def setUp(self):
        self.table = GeneratorTable({'a': 1, 'b': 0, 'c': 0})
        self.a = AlgebraElement.generator(self.table, 'a')
        self.b = AlgebraElement.generator(self.table, 'b')
        self.c = AlgebraElement.generator(self.table, 'c')

    def test_words_do_not_commute(self):
        self.assertNotEqual(self.b * self.c, self.c * self.b)
        self.assertTrue((self.b * self.c - self.b * self.c).is_zero())

    def test_coefficients_are_central(self):
        t = AlgebraElement.constant(self.table, 't')
        self.assertEqual(t * self.b, self.b * t)
        self.assertEqual((t * self.b).coefficient(('b',)), symbol('t'))

    def test_grading(self):
        self.assertEqual((self.b * self.c).grading(), 0)
        self.assertEqual((self.a * self.b).grading(), 1)
        self.assertEqual((self.a + self.b).grading(), MIXED)
        self.assertIsNone(AlgebraElement.zero(self.table).grading())

    def test_unknown_generator(self):
        with self.assertRaises(AlgebraError):
            AlgebraElement.generator(self.table, 'z')

    def test_power(self):
        self.assertEqual(power(self.b, 3), AlgebraElement.monomial(self.table, ('b', 'b', 'b')))
        self.assertEqual(power(self.b, 0), AlgebraElement.unit(self.table))

    def test_leibniz_sign(self):
        images = {'a': self.b * self.c, 'b': AlgebraElement.zero(self.table),
                  'c': AlgebraElement.zero(self.table)}
        # d(aa) = d(a) a - a d(a) since |a| = 1
        expected = self.b * self.c * self.a - self.a * self.b * self.c
        self.assertEqual(leibniz_extend(images, self.a * self.a), expected)

    def test_leibniz_kills_constants(self):
        images = {g: self.b for g in self.table}
        self.assertTrue(leibniz_extend(images, AlgebraElement.constant(self.table, '1 + t')).is_zero())

    def test_parse_element_round_trip(self):
        x = parse_element(self.table, '1 + t - s1 * a b')
        self.assertEqual(x.coefficient(()), parse_laurent('1 + t'))
        self.assertEqual(x.coefficient(('a', 'b')), -symbol('s1'))
        self.assertEqual(parse_element(self.table, x.render()), x)

    def test_parse_element_refuses_generator_coefficients(self):
        with self.assertRaises(AlgebraError):
            parse_element(self.table, 'a^2 * b')

    def test_eval_hom(self):
        x = parse_element(self.table, '2 * b c - t')
        value = eval_hom({'b': 's1', 'c': 's1^-1', 'a': 0}, x, {'t': -1})
        self.assertEqual(value, sympy.Integer(3))

    def test_substitute_falls_back_to_identity(self):
        images = {'b': self.c + 1}
        result = substitute(images, self.a * self.b, self.table)
        self.assertEqual(result, self.a * self.c + self.a)

    def test_substitute_without_image_in_target(self):
        small = self.table.restricted(['a'])
        with self.assertRaises(AlgebraError):
            substitute({}, self.b, small)


class RandomizedPropertyTests(SimpleTestCase):
    TABLE = GeneratorTable({'a': 1, 'b': 0, 'c': 0, 'e': 2})
    COEFFICIENTS = ('1', '-1', '2', 't', '-t^-1', 's1*t')

    def setUp(self):
        self.rng = random.Random(20240518)

    def random_word(self, longest=2):
        return tuple(self.rng.choice(list(self.TABLE)) for _ in range(self.rng.randint(0, longest)))

    def random_monomial(self):
        coeff = parse_laurent(self.rng.choice(self.COEFFICIENTS))
        return AlgebraElement.monomial(self.TABLE, self.random_word(), coeff)

    def random_element(self, terms=3):
        total = AlgebraElement.zero(self.TABLE)
        for _ in range(self.rng.randint(1, terms)):
            total = total + self.random_monomial()
        return total

    @tag('slow')
    def test_mul_is_associative(self):
        for _ in range(1000):
            x, y, z = self.random_element(), self.random_element(), self.random_element()
            self.assertEqual(mul(mul(x, y), z), mul(x, mul(y, z)))

    def test_unit_is_neutral(self):
        one = AlgebraElement.unit(self.TABLE)
        for _ in range(100):
            x = self.random_element()
            self.assertEqual(mul(one, x), x)
            self.assertEqual(mul(x, one), x)

    def test_derivation_rule(self):
        for _ in range(200):
            images = {g: self.random_element(2) for g in self.TABLE}
            x, y = self.random_monomial(), self.random_element()
            degree = x.grading() or 0
            expected = (mul(leibniz_extend(images, x), y)
                        + mul(x, leibniz_extend(images, y)).scale((-1) ** degree))
            self.assertEqual(leibniz_extend(images, mul(x, y)), expected)

    def test_derivation_is_additive(self):
        for _ in range(100):
            images = {g: self.random_element(2) for g in self.TABLE}
            x, y = self.random_element(), self.random_element()
            self.assertEqual(leibniz_extend(images, x + y),
                             leibniz_extend(images, x) + leibniz_extend(images, y))
