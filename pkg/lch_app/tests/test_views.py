# lch_app/tests/test_views.py
from django.test import TestCase
from django.urls import reverse

from lch_app.models import Certificate, DiagramRecord


class ModelTests(TestCase):

    def test_rendering_lines(self):
        record = DiagramRecord.objects.create(name='unknot', lagjson='{}', crossing_count=1,
                                              dga_rendering='# unknot\n\nd(a1) = 1 + t\n')
        self.assertEqual(record.get_rendering_lines(), ['# unknot', 'd(a1) = 1 + t'])
        self.assertEqual(str(record), 'unknot (1 crossings)')

    def test_certificate_helpers(self):
        cert = Certificate.objects.create(diagram_name='hopf', sublink='1,2', verdict='no_conclusion')
        self.assertEqual(cert.get_sublink_list(), [1, 2])
        self.assertIsNone(cert.get_certificate())
        self.assertEqual(str(cert), 'hopf [1,2] rank 1: No conclusion')

    def test_record_deletion_keeps_certificates(self):
        record = DiagramRecord.objects.create(name='unknot', lagjson='{}')
        cert = Certificate.objects.create(diagram_name='unknot', diagram=record, sublink='1')
        self.assertEqual(list(record.certificates.all()), [cert])
        record.delete()
        cert.refresh_from_db()
        self.assertIsNone(cert.diagram)


class CorpusViewTests(TestCase):

    def test_corpus_list(self):
        DiagramRecord.objects.create(name='trefoil', lagjson='{}', crossing_count=5)
        response = self.client.get(reverse('corpus_list'))
        self.assertEqual(response.status_code, 200)
        rows = {row['name']: row for row in response.json()['diagrams']}
        self.assertIn('unknot', rows)
        self.assertFalse(rows['unknot']['stored'])
        self.assertEqual(rows['trefoil']['crossing_count'], 5)

    def test_dga_detail(self):
        response = self.client.get(reverse('dga_detail', args=['unknot']))
        self.assertEqual(response.status_code, 200)
        payload = response.json()
        self.assertTrue(payload['d_squared']['passed'])
        self.assertEqual([g['id'] for g in payload['generators']], ['a1'])

    def test_unknown_diagram(self):
        response = self.client.get(reverse('dga_detail', args=['no_such_knot']))
        self.assertEqual(response.status_code, 404)

    def test_get_only(self):
        response = self.client.post(reverse('corpus_list'))
        self.assertEqual(response.status_code, 405)


class CertificateViewTests(TestCase):

    def setUp(self):
        self.first = Certificate.objects.create(
            diagram_name='unknot', sublink='1', verdict='not_flexible',
            certificate_json='{"rank": 1, "transcript_sha256": "abc"}', transcript_sha256='abc')
        self.second = Certificate.objects.create(diagram_name='hopf', sublink='1,2')

    def test_list_and_filter(self):
        response = self.client.get(reverse('certificate_list'))
        self.assertEqual(len(response.json()['certificates']), 2)
        response = self.client.get(reverse('certificate_list'), {'diagram': 'unknot'})
        rows = response.json()['certificates']
        self.assertEqual([row['id'] for row in rows], [self.first.id])
        self.assertEqual(rows[0]['sublink'], [1])

    def test_detail(self):
        response = self.client.get(reverse('certificate_detail', args=[self.first.id]))
        self.assertEqual(response.status_code, 200)
        payload = response.json()
        self.assertEqual(payload['verdict'], 'not_flexible')
        self.assertEqual(payload['certificate'], {'rank': 1, 'transcript_sha256': 'abc'})

    def test_missing_certificate(self):
        response = self.client.get(reverse('certificate_detail', args=[9999]))
        self.assertEqual(response.status_code, 404)
