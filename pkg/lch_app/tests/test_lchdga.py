# lch_app/tests/test_lchdga.py
import json
from collections import Counter

from django.test import SimpleTestCase, override_settings, tag

from lch_app.tests.oracle import embedded_disks, search_embedded
from lch_app.utils.coeffalg import parse_laurent, symbol
from lch_app.utils.corpus import load_diagram
from lch_app.utils.diagram import beta_ab, build_diagram, diagram_to_dict, minus_one_closure
from lch_app.utils.errors import DGAError, DiagramError
from lch_app.utils.lchdga import (NULL_COBORDANT, _search, check_d_squared, composability_check,
                                  differential, enumerate_disks, load_presentation, presentation_dga)

SMALL_CLOSURES = [
    ((), 1),
    ((1, 1), 2),
    ((1, 1, 1), 2),
    ((1, 2), 3),
    ((1, 1, 1, 1), 2),
]


class UnknotDGATests(SimpleTestCase):

    def setUp(self):
        self.d = load_diagram('unknot')
        self.g = differential(self.d)

    def test_two_monogons(self):
        disks = enumerate_disks(self.d, 'a1')
        self.assertEqual(len(disks), 2)
        self.assertEqual({disk.quadrant for disk in disks}, {1, 3})
        self.assertTrue(all(disk.word == () for disk in disks))

    def test_boundary_of_the_kink(self):
        image = self.g.boundary('a1')
        self.assertEqual(list(image.words()), [()])
        t = symbol('t')
        self.assertIn(image.coefficient(()), (1 + t, 1 + 1 / t))

    def test_d_squared(self):
        self.assertTrue(check_d_squared(self.g).passed)

    def test_convention_switch_flips_t(self):
        flipped = self.g.with_convention(NULL_COBORDANT)
        t = symbol('t')
        self.assertIn(flipped.boundary('a1').coefficient(()), (1 - t, 1 - 1 / t))
        self.assertIs(flipped.with_convention(NULL_COBORDANT), flipped)
        with self.assertRaises(DGAError):
            self.g.with_convention('spin')

    def test_unknown_chord(self):
        with self.assertRaises(DiagramError):
            enumerate_disks(self.d, 'z9')


class ClosureDGATests(SimpleTestCase):

    def test_trefoil_d_squared_and_degrees(self):
        g = differential(load_diagram('trefoil'))
        report = check_d_squared(g)
        self.assertTrue(report.passed, report.as_dict())
        for chord in ('b1', 'b2', 'b3'):
            self.assertTrue(g.boundary(chord).is_zero())
        self.assertEqual(composability_check(g), [])

    def test_trefoil_kinks_see_the_braid(self):
        g = differential(load_diagram('trefoil'))
        letters = set(g.boundary('a1').letters()) | set(g.boundary('a2').letters())
        self.assertTrue(letters)
        self.assertTrue(letters <= {'b1', 'b2', 'b3'})

    def test_worker_pool_gives_the_same_differential(self):
        d = load_diagram('trefoil')
        serial = differential(d, workers=1)
        pooled = differential(d, workers=3)
        self.assertEqual(serial.render(), pooled.render())

    @override_settings(LCH_DISK_WORKERS=2)
    def test_worker_setting(self):
        g = differential(minus_one_closure((1, 1), 2))
        self.assertTrue(check_d_squared(g).passed)
        self.assertEqual(set(g.symbols), {'t1', 't2'})

    @tag('slow')
    def test_four_strand_closure(self):
        g = differential(beta_ab(1, 1))
        report = check_d_squared(g)
        self.assertTrue(report.passed, report.as_dict())
        self.assertEqual(composability_check(g), [])

    @tag('slow')
    def test_four_strand_disks_do_not_grow_with_multiplicity(self):
        d = beta_ab(1, 1)
        limit = 2_000_000
        for chord in ('a1', 'a4'):
            stable = [disk.darts for disk in enumerate_disks(d, chord)]
            for multiplicity in (3, 4, 5):
                with self.subTest(chord=chord, multiplicity=multiplicity):
                    self.assertEqual([disk.darts for disk in _search(d, chord, multiplicity, limit)], stable)


class EnergyTests(SimpleTestCase):
    """Every disk encloses the height of its positive corner minus those of its negative corners."""

    def assertEnergy(self, d):
        lift = d.realization
        self.assertIsNotNone(lift)
        for c in d.crossings:
            for disk in enumerate_disks(d, c.id):
                area = sum(lift.areas[face] * mult for face, mult in disk.faces)
                self.assertEqual(area, lift.heights[c.id] - sum(lift.heights[b] for b in disk.word), disk.itinerary)
                self.assertGreater(area, 0)

    def test_unknot_lobes(self):
        lift = load_diagram('unknot').realization
        self.assertEqual(lift.heights, {'a1': 1})
        self.assertEqual(sorted(lift.areas.values()), [1, 1])

    def test_four_strand_lift(self):
        lift = beta_ab(1, 1).realization
        self.assertIsNotNone(lift)
        self.assertTrue(all(h >= 1 for h in lift.heights.values()))
        self.assertTrue(all(a >= 1 for a in lift.areas.values()))

    def test_listed_areas_without_a_lift(self):
        raw = diagram_to_dict(load_diagram('unknot'))
        raw['face_areas'] = [{'arc': 'e1', 'side': 'left', 'area': '2'},
                             {'arc': 'e2', 'side': 'right', 'area': '3'}]
        d = build_diagram(raw)
        with self.assertLogs('lch_app.utils.diagram', 'WARNING'):
            self.assertIsNone(d.realization)
        self.assertEqual(len(enumerate_disks(d, 'a1')), 2)

    def test_trefoil(self):
        self.assertEnergy(load_diagram('trefoil'))

    def test_small_closures(self):
        for word, strands in SMALL_CLOSURES:
            with self.subTest(word=word, strands=strands):
                self.assertEnergy(minus_one_closure(word, strands))


class DiskOracleTests(SimpleTestCase):
    """Embedded disks found by the search agree with a brute-force face-subset count."""

    def test_small_closures(self):
        for word, strands in SMALL_CLOSURES:
            d = minus_one_closure(word, strands)
            expected = embedded_disks(d)
            found = sum((search_embedded(enumerate_disks(d, c.id)) for c in d.crossings), Counter())
            with self.subTest(word=word, strands=strands):
                self.assertEqual(found, expected)

    def test_unknot_oracle_sees_both_lobes(self):
        found = embedded_disks(load_diagram('unknot'))
        self.assertEqual(sum(found.values()), 2)
        self.assertEqual({key[1] for key in found}, {1, 3})


class PresentationTests(SimpleTestCase):

    def test_valid_listing(self):
        g = presentation_dga({
            'name': 'toy',
            'generators': {'a': 1, 'b': 0, 'c': 0},
            'differential': {'a': 'b c - c b'},
        })
        self.assertEqual(g.generators, ('a', 'b', 'c'))
        self.assertTrue(g.boundary('b').is_zero())
        self.assertEqual(g.provenance, 'presentation')

    def test_coefficient_symbols_are_collected(self):
        g = presentation_dga({
            'generators': [{'id': 'a', 'grading': 1}, {'id': 'b', 'grading': 0}],
            'differential': {'a': '1 + s1*b'},
        })
        self.assertEqual(g.symbols, ('s1',))
        self.assertEqual(g.boundary('a').coefficient(('b',)), parse_laurent('s1'))

    def test_degree_drop_enforced(self):
        with self.assertRaises(DGAError):
            presentation_dga({'generators': {'a': 1, 'b': 0}, 'differential': {'a': 'a'}})

    def test_d_squared_enforced(self):
        with self.assertRaises(DGAError) as ctx:
            presentation_dga({'generators': {'x': 2, 'y': 1, 'z': 0},
                              'differential': {'x': 'y', 'y': '1'}})
        self.assertIn('d^2', str(ctx.exception))

    def test_unknown_generator(self):
        with self.assertRaises(DGAError):
            presentation_dga({'generators': {'a': 1}, 'differential': {'q': '1'}})

    def test_restricted_sub_dga(self):
        g = presentation_dga({'generators': {'a': 1, 'b': 0, 'c': 0},
                              'differential': {'a': 'b c - c b'}})
        self.assertEqual(g.restricted(['b', 'c']).generators, ('b', 'c'))
        with self.assertRaises(DGAError):
            g.restricted(['a', 'b'])

    def test_json_text(self):
        text = json.dumps({'generators': {'a': 1}, 'differential': {'a': '0'}})
        self.assertTrue(load_presentation(text).boundary('a').is_zero())
        with self.assertRaises(DGAError):
            load_presentation('{')
