"""Exception hierarchy.

Every error raised by the library derives from :class:`AugmentError`, which is
itself a ``ValueError`` so callers that already catch bad-argument errors keep
working.
"""


class AugmentError(ValueError):
    pass


class InvalidRangeError(AugmentError):
    pass


class InvalidParameterError(AugmentError):
    pass


class InvalidCountError(AugmentError):
    pass


class InvalidLevelError(AugmentError):
    pass


class IncompatibleLabelsError(AugmentError):
    pass


class IncompatibleClipsError(AugmentError):
    pass


class WrongOpClassError(AugmentError):
    pass


class InvalidGeometryError(AugmentError):
    pass


class ConfigError(AugmentError):
    pass


class FormatError(AugmentError):
    """Malformed file. ``field`` names the offending field."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class ClipFormatError(FormatError):
    pass


class LabelFormatError(FormatError):
    pass


class ManifestFormatError(FormatError):
    pass


class FrameImportError(AugmentError):
    pass


class EmptyFramesError(FrameImportError):
    pass


class InconsistentFramesError(FrameImportError):
    def __init__(self, path, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
