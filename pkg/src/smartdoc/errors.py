"""Exception types shared across the toolchain."""


class SmartdocError(Exception):
    """Base class for all tool-specific failures."""


class ConfigError(SmartdocError):
    """Invalid or unparseable configuration."""


class UnknownMethodError(SmartdocError):
    """A method id does not exist in the project index."""


class ValidationError(SmartdocError):
    """A model response contains no structurally valid JavaDoc block."""


class StructuredOutputError(SmartdocError):
    """All retry attempts produced invalid output.

    Carries the raw text of the last attempt for inspection.
    """

    def __init__(self, message: str, last_response: str = ""):
        super().__init__(message)
        self.last_response = last_response


class BackendError(SmartdocError):
    """Transport-level failure talking to the model backend."""


class StalePatchError(SmartdocError):
    """The file changed between planning and applying a patch."""
