# lch_app/management/commands/validate.py
from lch_app.management.base import LCHCommand
from lch_app.utils.corpus import load_diagram
from lch_app.utils.diagram import compute_tb, validate


class Command(LCHCommand):
    help = 'Check every invariant of a LagJSON diagram and report each one'

    def add_command_arguments(self, parser):
        parser.add_argument('--in', dest='source', required=True,
                            help='LagJSON file or corpus name')

    def compute(self, **options):
        d = load_diagram(options['source'], strict=False)
        report = validate(d)
        payload = report.as_dict()
        payload.update({
            'name': d.name,
            'crossings': len(d.crossings),
            'components': len(d.components),
            'ok': report.passed,
        })
        if report.passed:
            payload['tb'] = compute_tb(d)['total']
        else:
            payload['reason'] = f"{len(report.failures())} invariant(s) failed"
        return payload

    def render(self, payload):
        lines = [f"{payload['name']}: {payload['crossings']} crossings, {payload['components']} components"]
        for check in payload['checks']:
            mark = 'PASS' if check['passed'] else 'FAIL'
            detail = f"  ({check['detail']})" if check['detail'] else ''
            lines.append(f"  {mark} {check['name']}{detail}")
        if payload['passed']:
            lines.append(f"tb = {payload['tb']}")
        return '\n'.join(lines)
