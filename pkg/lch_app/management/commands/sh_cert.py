# lch_app/management/commands/sh_cert.py
import logging

from lch_app.management.base import LCHCommand, parse_components
from lch_app.models import Certificate, DiagramRecord
from lch_app.utils.corpus import load_diagram
from lch_app.utils.lchdga import differential
from lch_app.utils.shcert import (NOT_FLEXIBLE, certificate_to_json, flexibility_flag, rank1_certificate,
                                  representation_search, rho_tilde_check)

logger = logging.getLogger(__name__)


class Command(LCHCommand):
    help = 'Search a representation of the attaching-link DGA with every t sent to -Id'

    def add_command_arguments(self, parser):
        parser.add_argument('--in', dest='source', required=True,
                            help='LagJSON file or corpus name')
        parser.add_argument('--sublink', default='', help="Component indices, e.g. '1,3'; default all")
        parser.add_argument('--rank', type=int, default=1)
        parser.add_argument('--bound', type=int, default=1, help='Integer entries in [-bound, bound]')
        parser.add_argument('--cap', type=int, default=None)
        parser.add_argument('--slice', type=int, default=0,
                            help='Also check rho-tilde on cyclic words up to this length')
        parser.add_argument('--save', action='store_true', help='Store the result')

    def compute(self, **options):
        d = load_diagram(options['source'])
        g = differential(d)
        sublink = parse_components(options['sublink'])
        if options['rank'] == 1:
            cert = rank1_certificate(g, sublink, bound=options['bound'], cap=options['cap'])
        else:
            cert = representation_search(g, options['rank'], sublink, bound=options['bound'], cap=options['cap'])
        flag = flexibility_flag(cert)
        payload = {
            'name': d.name,
            'sublink': list(sublink) if sublink else None,
            'verdict': flag,
            'certificate': cert.as_dict() if cert is not None else None,
        }
        if cert is not None and options['slice']:
            report = rho_tilde_check(cert.representation.dga, cert.representation, options['slice'])
            payload['rho_tilde'] = report.as_dict()
            payload['ok'] = report.passed
            if not report.passed:
                payload['reason'] = 'rho-tilde is not a chain map on the slice'
        if options['save']:
            self.save(d.name, cert, flag, sublink)
        return payload

    def save(self, name, cert, flag, sublink):
        record = Certificate.objects.create(
            diagram_name=name,
            diagram=DiagramRecord.objects.filter(name=name).first(),
            sublink=','.join(str(k) for k in (cert.sublink if cert else sublink or ())),
            rank=cert.rank if cert else 1,
            complete=cert.complete if cert else True,
            verdict='not_flexible' if flag == NOT_FLEXIBLE else 'no_conclusion',
            certificate_json=certificate_to_json(cert) if cert else '',
            transcript_sha256=cert.transcript.digest() if cert else '',
        )
        logger.info("stored certificate %s for %s", record.id, name)

    def render(self, payload):
        cert = payload['certificate']
        if cert is None:
            return f"{payload['name']}: no certificate found; {payload['verdict']}"
        lines = [f"{payload['name']} sublink {cert['sublink']}: rank {cert['rank']} ({cert['search']})"]
        for name, rows in cert['matrices'].items():
            lines.append(f"  rho({name}) = {rows}")
        for entry in cert['transcript']:
            lines.append(f"  {'ok ' if entry['passed'] else 'BAD'} {entry['relation']}")
        lines.append(f"transcript sha256 {cert['transcript_sha256']}")
        if 'rho_tilde' in payload:
            report = payload['rho_tilde']
            lines.append(f"rho-tilde up to length {report['bound']}: "
                         f"{'pass' if report['passed'] else 'FAIL'} ({report['checked']} basis elements)")
        lines.append(payload['verdict'])
        return '\n'.join(lines)
