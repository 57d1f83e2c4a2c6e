# lch_app/tests/test_shcert.py
import json

import sympy
from django.test import SimpleTestCase, tag

from lch_app.utils.augment import LocalSystem, augmentation, is_restricted, local_systems
from lch_app.utils.corpus import load_diagram, load_expected, sigma0_system
from lch_app.utils.diagram import minus_one_closure
from lch_app.utils.errors import RepresentationError
from lch_app.utils.lchdga import differential, presentation_dga
from lch_app.utils.shcert import (NO_CONCLUSION, NOT_FLEXIBLE, Representation, certificate_from_json,
                                  certificate_to_json, cyclic_words, flexibility_flag, rank1_certificate,
                                  rank1_from_augmentation, representation_search, reverify_certificate,
                                  rho_tilde_check, verify_representation)


def load_diagram_dga(name):
    return differential(load_diagram(name))


class UnknotCertificateTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.g = differential(load_diagram('unknot'))
        cls.cert = rank1_certificate(cls.g)

    def test_rank_one_certificate(self):
        self.assertIsNotNone(self.cert)
        self.assertEqual(self.cert.rank, 1)
        self.assertEqual(self.cert.sublink, (1,))
        self.assertTrue(self.cert.transcript.passed)
        self.assertEqual(self.cert.representation.matrix('t'), sympy.Matrix([[-1]]))
        self.assertEqual(flexibility_flag(self.cert), NOT_FLEXIBLE)

    def test_certificate_json(self):
        data = self.cert.as_dict()
        self.assertEqual(data['search'], 'exhaustive')
        self.assertEqual(data['matrices'], {'t': [['-1']]})
        self.assertEqual(data['transcript_sha256'], self.cert.transcript.digest())
        relations = [entry['relation'] for entry in data['transcript']]
        self.assertEqual(relations, ['rho(t_k) = -Id', 'rho(d a1) = 0'])

    def test_reverify(self):
        text = certificate_to_json(self.cert)
        ok, fresh = reverify_certificate(text, self.g)
        self.assertTrue(ok)
        self.assertEqual(fresh.digest(), self.cert.transcript.digest())

        tampered = json.loads(text)
        tampered['matrices']['t'] = [['1']]
        self.assertFalse(reverify_certificate(tampered, self.g)[0])

        stale = json.loads(text)
        stale['transcript_sha256'] = '0' * 64
        self.assertFalse(reverify_certificate(stale, self.g)[0])

    def test_malformed_certificate(self):
        with self.assertRaises(RepresentationError):
            certificate_from_json({'rank': 1}, self.g)
        with self.assertRaises(RepresentationError):
            certificate_from_json({'rank': 1, 'sublink': [1], 'matrices': {'t': [['x']]},
                                   'transcript': []}, self.g)

    def test_plus_identity_is_rejected(self):
        rho = Representation(self.g, (1,), 1, {'t': sympy.Matrix([[1]])})
        transcript = verify_representation(self.g, rho)
        self.assertFalse(transcript.passed)
        failed = {entry.relation for entry in transcript.failures}
        self.assertEqual(failed, {'rho(t_k) = -Id', 'rho(d a1) = 0'})

    def test_non_degree_zero_chords_vanish(self):
        rho = Representation(self.g, (1,), 1, {'t': sympy.Matrix([[-1]]), 'a1': sympy.Matrix([[1]])})
        transcript = verify_representation(self.g, rho)
        self.assertEqual([e.relation for e in transcript.failures], ['rho(x) = 0 for |x| != 0'])

    def test_higher_rank_search(self):
        cert = representation_search(self.g, 2)
        self.assertIsNotNone(cert)
        self.assertEqual(cert.rank, 2)
        self.assertFalse(cert.complete)
        self.assertEqual(cert.representation.matrix('t'), -sympy.eye(2))
        with self.assertRaises(RepresentationError):
            representation_search(self.g, 4)
        with self.assertRaises(RepresentationError):
            representation_search(self.g, 2, bound=3)

    def test_rho_tilde_slice(self):
        report = rho_tilde_check(self.g, self.cert.representation, 3)
        self.assertTrue(report.passed, report.as_dict())
        self.assertEqual(report.checked, 7)
        self.assertEqual(report.skipped, ())
        self.assertEqual(report.taus[1], {'cycle': True, 'nonzero': True, 'rho_t_minus_id': True})

    def test_cyclic_words(self):
        self.assertEqual(cyclic_words(self.g, 3), [('a1',), ('a1', 'a1'), ('a1', 'a1', 'a1')])


class TrefoilCertificateTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.g = load_diagram_dga('trefoil')

    def test_rank_one_certificate(self):
        cert = rank1_certificate(self.g)
        self.assertIsNotNone(cert)
        self.assertTrue(cert.transcript.passed)
        self.assertEqual(flexibility_flag(cert), NOT_FLEXIBLE)
        self.assertTrue(reverify_certificate(certificate_to_json(cert), self.g)[0])

    @tag('slow')
    def test_rho_tilde_slice(self):
        cert = rank1_certificate(self.g)
        report = rho_tilde_check(self.g, cert.representation, 2)
        self.assertTrue(report.passed, report.as_dict())


class NoCertificateTests(SimpleTestCase):

    def test_unit_differential(self):
        g = presentation_dga({'generators': {'a': 1}, 'differential': {'a': '1'}, 'symbols': ['t']})
        cert = rank1_certificate(g)
        self.assertIsNone(cert)
        self.assertEqual(flexibility_flag(cert), NO_CONCLUSION)

    def test_sublink_must_exist(self):
        g = differential(minus_one_closure((1, 1), 2))
        with self.assertRaises(RepresentationError):
            rank1_certificate(g, sublink=[3])

    def test_one_t_per_component(self):
        g = presentation_dga({'generators': {'a': 1}, 'differential': {'a': '1 + t1*t2'}})
        with self.assertRaises(RepresentationError):
            rank1_certificate(g)


class AugmentationCertificateTests(SimpleTestCase):

    def test_trefoil_augmentation_gives_a_certificate(self):
        g = load_diagram_dga('trefoil')
        found = rank1_certificate(g)
        values = {c: found.representation.matrix(c)[0, 0] for c in g.generators_in_degree(0)}
        system = augmentation(g, values, {'t': -1})
        cert = rank1_from_augmentation(system, LocalSystem({}))
        self.assertTrue(cert.transcript.passed)
        self.assertEqual(flexibility_flag(cert), NOT_FLEXIBLE)
        self.assertEqual(cert.representation.matrices, found.representation.matrices)

    def test_values_that_are_not_an_augmentation(self):
        g = load_diagram_dga('trefoil')
        system = augmentation(g, {c: 0 for c in g.generators_in_degree(0)}, {'t': -1}, check=False)
        with self.assertRaises(RepresentationError):
            rank1_from_augmentation(system, LocalSystem({}))

    def test_several_basepoints_on_one_component(self):
        system = sigma0_system(load_expected())
        restriction = is_restricted(system)
        admitted = [eta for eta in local_systems(system.target_symbols) if restriction.admits(eta)]
        self.assertTrue(admitted)
        cert = rank1_from_augmentation(system, admitted[0])
        relations = [entry.relation for entry in cert.transcript.entries]
        self.assertIn('rho(t1 t2) = -Id', relations)
        self.assertIn('rho(t_k) = -Id', relations)
        self.assertEqual(flexibility_flag(cert), NOT_FLEXIBLE)

        rejected = next(eta for eta in local_systems(system.target_symbols) if not restriction.admits(eta))
        with self.assertRaises(RepresentationError):
            rank1_from_augmentation(system, rejected)
