# lch_app/management/commands/augs.py
from lch_app.management.base import LCHCommand
from lch_app.utils.augment import CoefficientRing, augmentation_counts, enumerate_augmentations
from lch_app.utils.corpus import load_diagram
from lch_app.utils.lchdga import differential


class Command(LCHCommand):
    help = 'Enumerate augmentations of a diagram over Z/p or bounded integers'

    def add_command_arguments(self, parser):
        parser.add_argument('--in', dest='source', required=True,
                            help='LagJSON file or corpus name')
        parser.add_argument('--ring', default='Z/2', help="Z/p or Z:B (integers in [-B, B])")
        parser.add_argument('--cap', type=int, default=None,
                            help='Overflow guard on the number of search nodes')
        parser.add_argument('--counts', action='store_true',
                            help='Only count augmentations over Z/2, Z/3 and Z/5')

    def compute(self, **options):
        g = differential(load_diagram(options['source']))
        if options['counts']:
            return {'name': g.name, 'counts': augmentation_counts(g)}
        ring = CoefficientRing.parse(options['ring'])
        found = enumerate_augmentations(g, ring, options['cap'])
        return {
            'name': g.name,
            'ring': ring.name,
            'count': len(found),
            'augmentations': [system.as_dict() for system in found],
        }

    def render(self, payload):
        if 'counts' in payload:
            return '\n'.join(f"{ring}: {n}" for ring, n in payload['counts'].items())
        lines = [f"{payload['count']} augmentation(s) of {payload['name']} over {payload['ring']}"]
        for system in payload['augmentations']:
            parts = [f"{k}={v}" for k, v in system['values'].items()]
            parts += [f"{k}={v}" for k, v in system['symbols'].items()]
            lines.append('  ' + ' '.join(parts))
        return '\n'.join(lines)
