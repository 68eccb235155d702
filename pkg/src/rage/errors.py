"""Exception hierarchy shared by the codec modules."""


class RageError(Exception):
    """Base class for every error raised by this package."""


class ImageFormatError(RageError, ValueError):
    """An uncompressed image file could not be parsed."""


class MalformedHeaderError(ImageFormatError):
    pass


class TruncatedDataError(ImageFormatError):
    pass


class UnsupportedDepthError(ImageFormatError):
    pass


class RageFormatError(RageError, ValueError):
    """A compressed container is invalid or corrupt."""


class BadMagicError(RageFormatError):
    pass


class UnsupportedVersionError(RageFormatError):
    pass


class TruncatedStreamError(RageFormatError):
    """A read ran past the end of a bit stream or section."""


class CorruptStreamError(RageFormatError):
    """The data is structurally readable but inconsistent."""


class HeaderLimitError(RageError, ValueError):
    """An image cannot be represented within the container's header fields."""
