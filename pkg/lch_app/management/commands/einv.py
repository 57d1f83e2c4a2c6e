# lch_app/management/commands/einv.py
from lch_app.management.base import LCHCommand, add_augmentation_argument, orbit_inputs
from lch_app.utils.augment import e_invariant, orbit_family


class Command(LCHCommand):
    help = 'Tabulate E(k, a), or E_r(k, a) with --restricted, along the loop orbit'

    def add_command_arguments(self, parser):
        add_augmentation_argument(parser)
        parser.add_argument('--chord', default='g2')
        parser.add_argument('--kmin', type=int, default=1)
        parser.add_argument('--kmax', type=int, default=10)
        parser.add_argument('--restricted', action='store_true')

    def compute(self, **options):
        system, phi, _ = orbit_inputs(options['aug'])
        kmin, kmax = max(0, options['kmin']), options['kmax']
        family = orbit_family(system, phi, kmax)[kmin:]
        values = e_invariant(family, options['chord'], restricted=options['restricted'])
        return {
            'chord': options['chord'],
            'restricted': options['restricted'],
            'table': [{'k': k, 'E': e} for k, e in zip(range(kmin, kmax + 1), values)],
            'strictly_increasing': all(a < b for a, b in zip(values, values[1:])),
        }

    def render(self, payload):
        name = 'E_r' if payload['restricted'] else 'E'
        lines = [f"{name}({row['k']}, {payload['chord']}) = {row['E']}" for row in payload['table']]
        lines.append('strictly increasing' if payload['strictly_increasing'] else 'not strictly increasing')
        return '\n'.join(lines)
