"""Exception types shared across the package.

Every error raised on a user-facing path carries a message that names the
offending value, so CLI output and test assertions can point at the cause.
"""


class TsadaptError(Exception):
    """Base class for all package errors."""


class InvalidArgument(TsadaptError):
    """An argument violates a documented precondition."""


class FormatError(TsadaptError):
    """A file or text payload does not match its declared format."""


class ConfigError(TsadaptError):
    """A benchmark configuration is structurally invalid.

    The message starts with the dotted path of the bad field, e.g.
    ``adapters[1].d_prime: expected a positive integer``.
    """


class UnderdeterminedFit(TsadaptError):
    """Too few rows to fit the requested reducer."""


class DegenerateLabels(TsadaptError):
    """A training set contains fewer than two distinct classes."""
