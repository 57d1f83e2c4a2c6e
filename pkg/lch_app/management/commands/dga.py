# lch_app/management/commands/dga.py
import logging

from lch_app.management.base import LCHCommand
from lch_app.models import DiagramRecord
from lch_app.utils.corpus import load_diagram
from lch_app.utils.diagram import serialize_diagram
from lch_app.utils.lchdga import CONVENTIONS, LIE_GROUP, check_d_squared, differential

logger = logging.getLogger(__name__)


class Command(LCHCommand):
    help = 'Compute the Chekanov-Eliashberg DGA of a diagram'

    def add_command_arguments(self, parser):
        parser.add_argument('--in', dest='source', required=True,
                            help='LagJSON file or corpus name')
        parser.add_argument('--convention', choices=CONVENTIONS, default=LIE_GROUP)
        parser.add_argument('--workers', type=int, default=None,
                            help='Threads for the per-chord disk search')
        parser.add_argument('--save', action='store_true',
                            help='Store the diagram and its rendering')

    def compute(self, **options):
        d = load_diagram(options['source'])
        g = differential(d, workers=options['workers']).with_convention(options['convention'])
        report = check_d_squared(g)
        if options['save']:
            self.save(d, g, report.passed)
        payload = g.as_dict()
        payload['d_squared'] = report.as_dict()
        payload['ok'] = report.passed
        if not report.passed:
            payload['reason'] = f"d^2 != 0 on {sorted(report.residues)}"
        return payload

    def save(self, d, g, passed):
        record, created = DiagramRecord.objects.update_or_create(
            name=d.name or 'diagram',
            defaults={
                'lagjson': serialize_diagram(d),
                'crossing_count': len(d.crossings),
                'component_count': len(d.components),
                'convention': g.convention,
                'dga_rendering': g.render(),
                'd_squared_ok': passed,
            },
        )
        logger.info("%s diagram record %s", 'created' if created else 'updated', record.name)

    def render(self, payload):
        lines = [f"# {payload['name']} ({payload['convention']})"]
        lines += [f"d({g['id']}) = {payload['differential'][g['id']]}" for g in payload['generators']]
        if not payload['d_squared']['passed']:
            for chord, residue in payload['d_squared']['residues'].items():
                lines.append(f"d^2({chord}) = {residue}")
        return '\n'.join(lines)
