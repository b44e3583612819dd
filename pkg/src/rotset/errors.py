"""Exception types raised across the package."""


class RotsetError(Exception):
    """Base class for all package errors."""


class NotInvertible(RotsetError):
    pass


class UnknownMap(RotsetError, KeyError):
    pass


class NonFiniteImage(RotsetError, FloatingPointError):
    pass


class NonFiniteOrbit(RotsetError, FloatingPointError):
    pass


class EmptyInput(RotsetError, ValueError):
    pass


class UnknownFigure(RotsetError, KeyError):
    pass


class ConfigError(RotsetError, ValueError):
    pass
