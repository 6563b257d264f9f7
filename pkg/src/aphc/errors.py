"""Exception hierarchy shared by every module."""


class AphcError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(AphcError, ValueError):
    """A caller violated an argument contract."""


class ConfigurationError(AphcError, ValueError):
    """An invalid codec config or traffic profile."""


class TruncationError(AphcError):
    """A bit reader ran out of input."""


class CorruptionError(AphcError):
    """A compressed block could not be decoded.

    ``bit_offset`` is the position inside the block where decoding failed.
    """

    def __init__(self, message, bit_offset=None):
        if bit_offset is not None:
            message = f"{message} (at bit {bit_offset}, byte {bit_offset // 8})"
        super().__init__(message)
        self.bit_offset = bit_offset


class OversizeError(AphcError):
    """A packet exceeds the encoder's size cap."""


class FormatError(AphcError):
    """A trace or container file is malformed; ``offset`` is the file offset."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)
        self.offset = offset


class UnknownCodecError(AphcError, KeyError):
    def __init__(self, name, available):
        self.name = name
        self.available = tuple(available)
        super().__init__(f"unknown codec {name!r}; available: {', '.join(self.available)}")

    def __str__(self):
        return self.args[0]


class AdapterError(AphcError):
    """An external compression library reported a failure."""

    def __init__(self, message, code=None):
        if code is not None:
            message = f"{message} (library code {code})"
        super().__init__(message)
        self.code = code


class VerificationError(AphcError):
    """Decompressed output did not match the original packet."""
