"""Exception hierarchy shared by the ZX engine, the GF(2)/Pauli helpers and the models."""


class ZxLatticeError(Exception):
    """Base class for every error raised by this package"""


class ArityMismatch(ZxLatticeError):
    pass


class GluingMismatch(ZxLatticeError):
    pass


class StaleMatch(ZxLatticeError):
    pass


class DimensionMismatch(ZxLatticeError):
    pass


class ZeroState(ZxLatticeError):
    pass


class ResourceCapExceeded(ZxLatticeError):
    """Raised when a configured size cap would be violated (CLI exit code 3)"""


class TooLarge(ResourceCapExceeded):
    pass


class KernelTooLarge(ResourceCapExceeded):
    pass


class SearchCapExceeded(ResourceCapExceeded):
    pass


class BadSize(ZxLatticeError):
    pass


class ParseError(ZxLatticeError):
    pass


class NonBinaryEntry(ParseError):
    pass


class NotASymmetry(ZxLatticeError):
    pass


class NotReversing(ZxLatticeError):
    pass


class BadSurface(ZxLatticeError):
    pass


class BadCurve(ZxLatticeError):
    pass
