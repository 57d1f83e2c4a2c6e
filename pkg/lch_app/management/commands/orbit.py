# lch_app/management/commands/orbit.py
from lch_app.management.base import LCHCommand, add_augmentation_argument, orbit_inputs
from lch_app.utils.augment import orbit_family


class Command(LCHCommand):
    help = 'Print eps o Phi^k on chosen chords for k = 0..kmax'

    def add_command_arguments(self, parser):
        add_augmentation_argument(parser)
        parser.add_argument('--kmax', type=int, default=5)
        parser.add_argument('--chords', default='g2,g4', help='Comma-separated degree-0 chords')

    def compute(self, **options):
        system, phi, _ = orbit_inputs(options['aug'])
        chords = [c.strip() for c in options['chords'].split(',') if c.strip()]
        family = orbit_family(system, phi, options['kmax'])
        return {
            'augmentation': system.label,
            'chords': chords,
            'orbit': [
                {'k': k, 'values': {c: member.as_dict()['values'].get(c, '0') for c in chords}}
                for k, member in enumerate(family)
            ],
        }

    def render(self, payload):
        lines = []
        for row in payload['orbit']:
            cells = '  '.join(f"{c} = {row['values'][c]}" for c in payload['chords'])
            lines.append(f"k={row['k']}: {cells}")
        return '\n'.join(lines)
