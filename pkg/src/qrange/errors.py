"""Exception types raised by the toolkit."""


class QRangeError(Exception):
    """Base class for all toolkit errors."""


class NotHermitian(QRangeError, ValueError):
    pass


class NotPSD(QRangeError, ValueError):
    pass


class DimMismatch(QRangeError, ValueError):
    pass


class InfeasibleQ(QRangeError, ValueError):
    """No admissible pair exists for this q in the given dimension."""


class GridMismatch(QRangeError, ValueError):
    pass


class PremiseFailed(QRangeError):
    pass


class SingularX(QRangeError, ValueError):
    pass


class QZero(QRangeError, ValueError):
    pass


class ParseError(QRangeError, ValueError):
    pass
