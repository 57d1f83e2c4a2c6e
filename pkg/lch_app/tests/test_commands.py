# lch_app/tests/test_commands.py
import json
import tempfile
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase, tag

from lch_app.management.commands.repro_prop31 import Command as ReproCommand
from lch_app.management.commands.repro_prop31 import compare_with_pipeline
from lch_app.models import Certificate, DiagramRecord
from lch_app.utils.augment import reparametrize
from lch_app.utils.cobord import MoveScript, filling_system
from lch_app.utils.corpus import data_dir, load_diagram
from lch_app.utils.shcert import NOT_FLEXIBLE


def run(*args):
    out = StringIO()
    call_command(*args, stdout=out, stderr=StringIO())
    return out.getvalue().rstrip('\n')


def run_json(*args):
    return json.loads(run(*args, '--json'))


class TempFileMixin:

    def setUp(self):
        super().setUp()
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)

    def write(self, name, content):
        path = Path(self.tmp.name) / name
        path.write_text(content if isinstance(content, str) else json.dumps(content), encoding='utf-8')
        return str(path)


class ValidateCommandTests(TempFileMixin, SimpleTestCase):

    def test_text_report(self):
        out = run('validate', '--in', 'unknot')
        self.assertIn('unknot: 1 crossings, 1 components', out)
        self.assertIn('PASS planar embedding (Euler)', out)
        self.assertIn('tb = -1', out)

    def test_json_report(self):
        payload = run_json('validate', '--in', 'trefoil')
        self.assertTrue(payload['ok'])
        self.assertEqual(payload['tb'], 1)
        self.assertEqual(payload['crossings'], 5)

    def test_failed_invariant_exits_with_one(self):
        raw = json.loads((data_dir() / 'unknot.lagjson').read_text(encoding='utf-8'))
        raw['crossings'][0]['reeb_signs'] = [1, 1, -1, -1]
        path = self.write('broken.lagjson', raw)
        out = StringIO()
        with self.assertRaises(CommandError) as ctx:
            call_command('validate', '--in', path, '--json', stdout=out)
        self.assertEqual(ctx.exception.returncode, 1)
        payload = json.loads(out.getvalue())
        self.assertFalse(payload['ok'])
        failed = [c['name'] for c in payload['checks'] if not c['passed']]
        self.assertIn('Reeb sign alternation', failed)

    def test_syntax_error_as_json(self):
        path = self.write('bad.lagjson', '{"crossings": [')
        out = StringIO()
        with self.assertRaises(CommandError) as ctx:
            call_command('validate', '--in', path, '--json', stdout=out)
        self.assertEqual(ctx.exception.returncode, 1)
        error = json.loads(out.getvalue())['error']
        self.assertEqual(error['type'], 'DiagramError')
        self.assertEqual(error['invariant'], 'syntax')

    def test_unknown_name(self):
        with self.assertRaises(CommandError):
            run('validate', '--in', 'no_such_knot')


class DGACommandTests(TestCase):

    def test_unknot(self):
        out = run('dga', '--in', 'unknot')
        self.assertTrue(out.startswith('# unknot (lie-group)'))
        self.assertIn('d(a1) = ', out)

    def test_json_and_convention(self):
        payload = run_json('dga', '--in', 'trefoil', '--convention', 'null-cobordant', '--workers', '2')
        self.assertTrue(payload['ok'])
        self.assertEqual(payload['convention'], 'null-cobordant')
        self.assertEqual([g['id'] for g in payload['generators']], ['a1', 'a2', 'b1', 'b2', 'b3'])
        self.assertEqual(payload['differential']['b1'], '0')

    def test_save(self):
        run('dga', '--in', 'trefoil', '--save')
        record = DiagramRecord.objects.get(name='trefoil')
        self.assertTrue(record.d_squared_ok)
        self.assertEqual(record.crossing_count, 5)
        self.assertEqual(record.get_rendering_lines()[0], '# trefoil (diagram:trefoil, lie-group)')
        run('dga', '--in', 'trefoil', '--save')
        self.assertEqual(DiagramRecord.objects.filter(name='trefoil').count(), 1)


class AugsCommandTests(SimpleTestCase):

    def test_trefoil_over_z2(self):
        out = run('augs', '--in', 'trefoil')
        self.assertTrue(out.startswith('5 augmentation(s) of trefoil over Z/2'))

    def test_counts(self):
        payload = run_json('augs', '--in', 'unknot', '--counts')
        self.assertEqual(payload['counts'], {'Z/2': 1, 'Z/3': 1, 'Z/5': 1})

    def test_bad_ring(self):
        with self.assertRaises(CommandError):
            run('augs', '--in', 'unknot', '--ring', 'Z/4')


class PinchCommandTests(TempFileMixin, SimpleTestCase):

    def test_cap_script(self):
        path = self.write('cap.json', [{'move': 'cap'}])
        out = run('pinch', '--in', 'unknot', '--script', path)
        self.assertIn('eps(t) = -1', out)
        self.assertIn('restricted', out)

    def test_kink_cannot_be_pinched(self):
        with self.assertRaises(CommandError) as ctx:
            run('pinch', '--in', 'trefoil', '--chord', 'a1')
        self.assertEqual(ctx.exception.returncode, 1)

    def test_unknown_chord(self):
        with self.assertRaises(CommandError) as ctx:
            run('pinch', '--in', 'unknot', '--chord', 'z9')
        self.assertEqual(ctx.exception.returncode, 2)


class OrbitCommandTests(TempFileMixin, SimpleTestCase):

    def test_orbit(self):
        payload = run_json('orbit', '--kmax', '1')
        self.assertEqual([row['k'] for row in payload['orbit']], [0, 1])
        self.assertEqual(payload['chords'], ['g2', 'g4'])
        self.assertEqual(payload['augmentation'], 'eps_Sigma0')

    def test_e_table(self):
        out = run('einv', '--kmin', '0', '--kmax', '3')
        self.assertIn('E(0, g2) = 1', out)
        self.assertIn('E(3, g2) = 7', out)
        self.assertTrue(out.endswith('strictly increasing'))

    def test_restricted_e_table(self):
        payload = run_json('einv', '--kmax', '3', '--restricted')
        self.assertEqual([row['E'] for row in payload['table']], [3, 5, 7])
        self.assertTrue(payload['strictly_increasing'])

    def test_distinguish(self):
        out = run('distinguish', '--kmax', '2')
        self.assertIn('k=0 vs k=1: DISTINGUISHED (1, 3)', out)
        self.assertIn('3 pairwise distinct augmentations at g2', out)

    def test_reproduction(self):
        out = run('repro_prop31', '--kmax', '3')
        self.assertNotIn('FAIL', out)
        self.assertIn('PASS restricted relations', out)
        self.assertIn('PASS M M^-1 = Id over the chord algebra', out)
        self.assertIn('PASS rank-1 certificate from the restricted table', out)
        self.assertIn('rank-1 certificate under s1=+1 s2=+1 s3=+1 s4=+1 s5=+1', out)
        self.assertTrue(out.endswith('13 ε values consistent; E(k,g2)=1+2k verified k≤3'))

    def test_reproduction_with_a_matching_filling(self):
        payload = run_json('repro_prop31', '--kmax', '2')
        self.assertTrue(payload['ok'])
        self.assertIsNotNone(payload['certificate'])
        payload['pipeline'] = {'diagram': 'lambda_1', 'values': payload['table'], 'match': True,
                               'reparametrization': None}
        out = ReproCommand().render(payload)
        self.assertTrue(out.endswith('ALL 13 ε values match; E(k,g2)=1+2k verified k≤2'))

    def test_unreadable_augmentation_file(self):
        path = self.write('eps.json', '{"values": ')
        with self.assertRaises(CommandError):
            run('orbit', '--aug', path)


class FillingComparisonTests(TempFileMixin, SimpleTestCase):
    MOVES = [{'move': 'pinch', 'chord': chord} for chord in ('b1', 'b2', 'b3')] + [{'move': 'cap'}] * 2

    @tag('slow')
    def test_filling_matches_a_relabelled_table(self):
        path = self.write('trefoil.json', self.MOVES)
        system = filling_system(load_diagram('trefoil'), MoveScript.from_records(self.MOVES))
        table = reparametrize(system, (1, -1, 1), [[0, 1, 0], [1, 0, 0], [0, 0, 1]])
        result = compare_with_pipeline(table, 'trefoil', path)
        self.assertEqual(result['diagram'], 'trefoil')
        self.assertTrue(result['match'])
        self.assertIsNotNone(result['reparametrization'])


class ShCertCommandTests(TestCase):

    def test_unknot_certificate_saved(self):
        out = run('sh_cert', '--in', 'unknot', '--save')
        self.assertTrue(out.endswith(NOT_FLEXIBLE))
        record = Certificate.objects.get(diagram_name='unknot')
        self.assertEqual(record.verdict, 'not_flexible')
        self.assertEqual(record.get_sublink_list(), [1])
        self.assertEqual(record.get_certificate()['transcript_sha256'], record.transcript_sha256)

    def test_slice_check(self):
        payload = run_json('sh_cert', '--in', 'unknot', '--slice', '2')
        self.assertTrue(payload['ok'])
        self.assertTrue(payload['rho_tilde']['passed'])
        self.assertEqual(payload['rho_tilde']['checked'], 5)

    def test_bad_sublink(self):
        with self.assertRaises(CommandError) as ctx:
            run('sh_cert', '--in', 'unknot', '--sublink', 'x')
        self.assertEqual(ctx.exception.returncode, 2)
