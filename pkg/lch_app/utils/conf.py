# lch_app/utils/conf.py
from pathlib import Path

from django.conf import settings

DEFAULTS = {
    'LCH_DATA_DIR': Path(__file__).resolve().parent.parent / 'data',
    'LCH_DISK_MAX_MULTIPLICITY': 16,
    'LCH_DISK_SEARCH_LIMIT': 2_000_000,
    'LCH_DISK_WORKERS': 1,
    'LCH_AUGMENTATION_SEARCH_CAP': 1_000_000,
    'LCH_LOCAL_SYSTEM_MAX_SYMBOLS': 20,
    'LCH_PINCH_MAX_DEPTH': 8,
}


def setting(name):
    """Read an LCH_* setting from Django settings, falling back to the built-in default."""
    if settings.configured:
        return getattr(settings, name, DEFAULTS.get(name))
    return DEFAULTS.get(name)
