# lch_app/management/base.py
import json
import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from lch_app.utils.augment import loop_monodromy_lambda1
from lch_app.utils.corpus import load_expected, read_text, sigma0_system
from lch_app.utils.errors import DiagramError, LCHError

logger = logging.getLogger(__name__)


def parse_components(text):
    """'1,3' -> (1, 3); empty text means every component"""
    if not text:
        return None
    try:
        return tuple(int(part) for part in text.split(',') if part.strip())
    except ValueError:
        raise CommandError(f"bad component list '{text}'", returncode=2) from None


class LCHCommand(BaseCommand):
    """
    Shared shape of the toolkit commands.

    Subclasses implement ``compute`` returning a JSON-ready payload and
    ``render`` turning the same payload into text, so both outputs carry the
    same data. A payload with ``ok`` set to False exits with status 1 after it
    is written.
    """
    requires_system_checks = []
    requires_migrations_checks = False

    def add_arguments(self, parser):
        parser.add_argument('--json', action='store_true', help='Write machine-readable JSON')
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def compute(self, **options) -> dict:
        raise NotImplementedError

    def render(self, payload: dict) -> str:
        raise NotImplementedError

    def handle(self, *args, **options):
        as_json = options.get('json', False)
        try:
            payload = self.compute(**options)
        except LCHError as exc:
            logger.warning("%s failed: %s", self.__module__.rsplit('.', 1)[-1], exc)
            if as_json:
                error = {'type': type(exc).__name__, 'message': str(exc)}
                if isinstance(exc, DiagramError):
                    error['invariant'] = exc.invariant
                    error['field'] = exc.field
                self.stdout.write(json.dumps({'error': error}, sort_keys=True))
            raise CommandError(str(exc), returncode=1) from exc

        if as_json:
            self.stdout.write(json.dumps(payload, sort_keys=True, indent=2))
        else:
            self.stdout.write(self.render(payload).rstrip('\n'))
        if payload.get('ok') is False:
            raise CommandError(payload.get('reason') or 'check failed', returncode=1)


def add_augmentation_argument(parser):
    parser.add_argument('--aug', default=None,
                        help='Augmentation file in the lambda1_sigma0.json format; defaults to the bundled one')


def orbit_inputs(path=None):
    """(eps_Sigma0, Phi) on the degree-0 chords of lambda_1"""
    if path:
        try:
            expected = json.loads(read_text(Path(path)))
        except json.JSONDecodeError as exc:
            raise DiagramError(exc.msg, invariant='syntax', field=f"line {exc.lineno}") from exc
    else:
        expected = load_expected()
    system = sigma0_system(expected)
    return system, loop_monodromy_lambda1(system.dga), expected
