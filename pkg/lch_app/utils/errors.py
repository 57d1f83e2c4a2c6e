# lch_app/utils/errors.py


class LCHError(Exception):
    """Base class for every failure raised by the computation modules."""


class AlgebraError(LCHError):
    pass


class DiagramError(LCHError):
    """
    Raised when a diagram cannot be parsed or violates an invariant.

    Args:
        message: Human readable description
        invariant: Name of the violated invariant, if any
        field: Path of the offending field for syntax errors (e.g. 'crossings[2].ends')
    """

    def __init__(self, message, invariant=None, field=None):
        self.invariant = invariant
        self.field = field
        prefix = ''
        if field:
            prefix = f"{field}: "
        if invariant:
            prefix = f"{prefix}[{invariant}] "
        super().__init__(f"{prefix}{message}")


class DiskEnumerationError(LCHError):
    pass


class DGAError(LCHError):
    pass


class ChainMapError(LCHError):
    pass


class MoveError(LCHError):
    pass


class PinchError(MoveError):
    pass


class AugmentationError(LCHError):
    pass


class SearchCapExceeded(LCHError):
    pass


class RepresentationError(LCHError):
    pass
