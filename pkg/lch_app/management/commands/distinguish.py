# lch_app/management/commands/distinguish.py
import itertools

from lch_app.management.base import LCHCommand, add_augmentation_argument, orbit_inputs
from lch_app.utils.augment import DISTINGUISHED, distinguish_by_cycle, orbit_family


class Command(LCHCommand):
    help = 'Compare orbit augmentations pairwise at a cycle of the DGA'

    def add_command_arguments(self, parser):
        add_augmentation_argument(parser)
        parser.add_argument('--chord', default='g2', help='A degree-0 cycle')
        parser.add_argument('--kmax', type=int, default=10)

    def compute(self, **options):
        system, phi, _ = orbit_inputs(options['aug'])
        family = orbit_family(system, phi, options['kmax'])
        pairs = []
        for i, j in itertools.combinations(range(len(family)), 2):
            verdict = distinguish_by_cycle(family[i], family[j], options['chord'])
            pairs.append({'k1': i, 'k2': j, **verdict.as_dict()})
        distinct = all(p['verdict'] == DISTINGUISHED for p in pairs)
        return {'chord': options['chord'], 'kmax': options['kmax'], 'pairs': pairs,
                'pairwise_distinct': distinct}

    def render(self, payload):
        lines = [f"k={p['k1']} vs k={p['k2']}: {p['verdict']} {tuple(p['values'])}" for p in payload['pairs']]
        count = payload['kmax'] + 1
        if payload['pairwise_distinct']:
            lines.append(f"{count} pairwise distinct augmentations at {payload['chord']}")
        else:
            lines.append(f"not all of the {count} augmentations are told apart at {payload['chord']}")
        return '\n'.join(lines)
