from __future__ import annotations


class NafourierError(Exception):
    """Base class for errors raised by this package."""


class SizeLimitExceeded(NafourierError):
    pass


class InvalidAutomorphism(NafourierError):
    pass


class UnsupportedConstruction(NafourierError):
    pass


class NotASubgroup(NafourierError):
    pass


class DescriptorError(NafourierError, ValueError):
    pass


class InvalidParameters(NafourierError, ValueError):
    pass


class GoldenDataError(NafourierError):
    pass
