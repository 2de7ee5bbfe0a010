"""Exception hierarchy; each class maps onto a CLI exit code."""


class AffectlexError(Exception):
    exit_code = 1


class ConfigurationError(AffectlexError):
    exit_code = 2


class DataError(AffectlexError):
    exit_code = 3


class NumericalError(AffectlexError):
    exit_code = 4
