"""Exception hierarchy shared by all lucidbox modules.

Every error carries a machine-readable ``code`` so the HTTP layer can emit
``{"code", "message"}`` bodies without leaking tracebacks.
"""

from __future__ import annotations


class LucidboxError(Exception):
    """Base class; ``code`` is a stable machine-readable identifier."""

    code = "internal"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class ShapeError(LucidboxError):
    """Tensor/layer dimensions do not line up; message names the offender."""

    code = "shape_mismatch"


class ValidationError(LucidboxError):
    """A value violates a documented constraint."""

    code = "validation"


class SettingsError(ValidationError):
    """Invalid visualizer setting; ``key`` names the offending setting."""

    code = "settings"

    def __init__(self, key: str, message: str):
        super().__init__(f"setting '{key}': {message}")
        self.key = key


class FormatError(LucidboxError):
    """Checkpoint bytes are not in the expected container format."""

    code = "bad_format"


class IntegrityError(LucidboxError):
    """Checkpoint container parses but manifest and payload disagree."""

    code = "integrity"


class DecodeError(LucidboxError):
    """Input image bytes could not be decoded as PNG."""

    code = "bad_image"


class ConfigError(LucidboxError):
    """Application config file is missing or invalid."""

    code = "config"


class RegistrationError(LucidboxError):
    """Visualizer registration conflict."""

    code = "registration"


class NotFoundError(LucidboxError):
    """Unknown session, image, artifact or visualizer name."""

    code = "not_found"


class UploadTooLargeError(LucidboxError):
    """Uploaded file exceeds the configured cap."""

    code = "too_large"


class TraceMismatchError(LucidboxError):
    """A ForwardTrace was replayed against a different model."""

    code = "stale_trace"


class ServiceStartupError(LucidboxError):
    """The HTTP service could not start (bad checkpoint, busy port)."""

    code = "startup"
