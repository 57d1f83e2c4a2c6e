# lch_app/management/commands/pinch.py
from pathlib import Path

from django.core.management.base import CommandError

from lch_app.management.base import LCHCommand
from lch_app.utils.augment import is_restricted
from lch_app.utils.cobord import MoveScript, filling_system, pinch_map, proper_check
from lch_app.utils.corpus import load_diagram, read_text
from lch_app.utils.errors import PinchError


class Command(LCHCommand):
    help = 'Pinch one chord, or run a decomposable filling script and print its augmentation'

    def add_command_arguments(self, parser):
        parser.add_argument('--in', dest='source', required=True,
                            help='LagJSON file or corpus name')
        group = parser.add_mutually_exclusive_group(required=True)
        group.add_argument('--chord', help='Pinch this chord only')
        group.add_argument('--script', help='JSON move script file')
        parser.add_argument('--label', default='s', help='Symbol of a single pinch')

    def compute(self, **options):
        d = load_diagram(options['source'])
        if options['chord']:
            return self.single(d, options['chord'], options['label'])
        script = MoveScript.parse(read_text(Path(options['script'])), name=Path(options['script']).stem)
        system = filling_system(d, script)
        restriction = is_restricted(system)
        payload = system.as_dict()
        payload.update({
            'name': d.name,
            'moves': script.as_list(),
            'target_symbols': list(system.target_symbols),
            'restricted': restriction.restricted,
            'relations': list(restriction.relations),
        })
        return payload

    def single(self, d, chord, label):
        if chord not in d.chord_ids:
            raise CommandError(f"no chord '{chord}' in {d.name}", returncode=2)
        report = proper_check(d, chord)
        if not report.proper:
            raise PinchError(f"{chord} is not a proper contractible chord: {report.reason}")
        pinched, phi = pinch_map(d, chord, label, check_proper=False)
        return {
            'name': d.name,
            'chord': chord,
            'proper': report.as_dict(),
            'pinched': pinched.name,
            'map': phi.as_dict(),
        }

    def render(self, payload):
        if 'map' in payload:
            lines = [f"pinch {payload['chord']} on {payload['name']} -> {payload['pinched']}"]
            for chord, image in payload['map']['images'].items():
                lines.append(f"  {chord} -> {image}")
            return '\n'.join(lines)
        lines = [f"filling of {payload['name']} over Z[{', '.join(payload['target_symbols'])}]"]
        for chord, value in payload['values'].items():
            lines.append(f"  eps({chord}) = {value}")
        for name, value in payload['symbols'].items():
            lines.append(f"  eps({name}) = {value}")
        state = 'restricted' if payload['restricted'] else 'not restricted'
        lines.append(f"{state}: {'; '.join(payload['relations']) or 'no relations'}")
        return '\n'.join(lines)
