"""Exception hierarchy shared by every module."""


class ZhError(Exception):
    """Base class for library errors."""


class InvalidModulus(ZhError, ValueError):
    pass


class ShapeError(ZhError, ValueError):
    pass


class NotInvertible(ZhError, ArithmeticError):
    pass


class NotASubspace(ZhError, ValueError):
    """Raised when a matrix does not have full McCoy rank in its rows."""


class PreconditionError(ZhError, ValueError):
    pass


class CapExceeded(ZhError, RuntimeError):
    """An enumeration or exact search would exceed its configured cap."""


class OracleTooLarge(CapExceeded):
    pass
