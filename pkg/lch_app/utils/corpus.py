# lch_app/utils/corpus.py
"""
Bundled diagrams and expected values.

Names resolve in this order: an existing file path, ``<name>.lagjson`` in
LCH_DATA_DIR, ``lambda<n>`` built from the lambda1 asset, then the braid
closures every install can build without data files.
"""
import json
import logging
import re
from pathlib import Path
from typing import Callable, Dict, List, Optional

from .augment import AugmentationSystem, augmentation, degree_zero_presentation
from .coeffalg import parse_laurent
from .conf import setting
from .diagram import Diagram, beta_ab, lambda_n, minus_one_closure, parse_diagram
from .errors import DiagramError, LCHError

logger = logging.getLogger(__name__)

SUFFIX = '.lagjson'
SIGMA0 = 'lambda1_sigma0'

BUILTINS: Dict[str, Callable[[], Diagram]] = {
    'unknot': lambda: minus_one_closure((), 1, name='unknot'),
    'trefoil': lambda: minus_one_closure((1, 1, 1), 2, name='trefoil'),
    'beta_11': lambda: beta_ab(1, 1),
    'beta_22': lambda: beta_ab(2, 2),
}

_LAMBDA_RE = re.compile(r'^lambda_?(\d+)$')


def data_dir() -> Path:
    return Path(setting('LCH_DATA_DIR'))


def list_corpus() -> List[str]:
    """Names load_diagram accepts without a path: bundled files plus built-in closures."""
    names = set(BUILTINS)
    directory = data_dir()
    if directory.is_dir():
        names.update(p.stem for p in directory.glob(f"*{SUFFIX}"))
    return sorted(names)


def read_text(path: Path) -> str:
    try:
        return path.read_text(encoding='utf-8')
    except OSError as exc:
        raise DiagramError(f"cannot read {path}: {exc.strerror}", invariant='syntax') from exc


def load_diagram(name: str, strict: bool = True) -> Diagram:
    """
    Load a diagram by file path or corpus name.

    Args:
        name: a path to a LagJSON file, or a corpus name such as 'trefoil'
        strict: raise on semantic failures instead of recording them on the diagram

    Returns:
        Validated Diagram

    Raises:
        DiagramError: nothing by that name exists
    """
    candidate = Path(name)
    if candidate.suffix == SUFFIX or candidate.is_file():
        if not candidate.is_file():
            candidate = data_dir() / candidate.name
        logger.debug("loading diagram from %s", candidate)
        return parse_diagram(read_text(candidate), strict=strict)

    bundled = data_dir() / f"{name}{SUFFIX}"
    if bundled.is_file():
        logger.debug("loading bundled diagram %s", bundled)
        return parse_diagram(read_text(bundled), strict=strict)

    match = _LAMBDA_RE.match(name)
    if match and int(match.group(1)) > 1:
        return lambda_n(int(match.group(1)))

    if name in BUILTINS:
        return BUILTINS[name]()

    raise DiagramError(f"no diagram named '{name}' (known: {', '.join(list_corpus())})")


def load_expected(name: str = SIGMA0) -> dict:
    path = data_dir() / f"{name}.json"
    try:
        return json.loads(read_text(path))
    except json.JSONDecodeError as exc:
        raise LCHError(f"{path.name}: {exc.msg} at line {exc.lineno}") from exc


def sigma0_system(expected: Optional[dict] = None) -> AugmentationSystem:
    """
    The filling augmentation eps_Sigma0 of lambda_1 on its degree-0 chords,
    read from the bundled expected-values file.
    """
    expected = expected or load_expected(SIGMA0)
    g = degree_zero_presentation(expected['symbol_components'])
    return augmentation(
        g,
        {chord: parse_laurent(text) for chord, text in expected['values'].items()},
        {name: parse_laurent(text) for name, text in expected['symbols'].items()},
        target_symbols=tuple(expected['target_symbols']),
        label='eps_Sigma0',
    )
