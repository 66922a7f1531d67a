"""Domain error hierarchy.

Every error carries a machine-readable ``code`` and a default HTTP status so
the service layer can map exceptions to wire errors without a lookup table.
"""


class GridlockError(Exception):
    """Base class for all domain errors."""

    code = "VALIDATION"
    http_status = 400


class ValidationError(GridlockError):
    """Malformed or out-of-contract input."""


class CardinalityError(ValidationError):
    """Wrong number of elements where an exact count is required."""

    code = "CARDINALITY"


class DuplicateError(ValidationError):
    """Duplicate elements where distinctness is required."""

    code = "DUPLICATE"


class SecretError(ValidationError):
    """Secret is not an ordered 4-element subset of the account's images."""

    code = "SECRET_INVALID"


class UnknownImageError(ValidationError):
    """An image id referenced something outside the known set."""


class SessionStateError(GridlockError):
    """Operation not permitted in the session's current lifecycle state."""

    code = "SESSION_STATE"
    http_status = 409


class LockedError(GridlockError):
    """Account is locked out after too many consecutive failures."""

    code = "LOCKED"
    http_status = 423


class NotFoundError(GridlockError):
    """Referenced account, session, job, or resource does not exist."""

    code = "NOT_FOUND"
    http_status = 404


class IntegrityError(GridlockError):
    """Stored or supplied state is inconsistent with a replay of itself."""

    code = "INTEGRITY"
    http_status = 500


class IoError(GridlockError):
    """Filesystem-level failure (unreadable photo, missing manifest)."""

    code = "IO"
    http_status = 500


class FormatError(ValidationError):
    """File exists but does not parse (sidecar, manifest, PPM header)."""

    code = "FORMAT"


class NoFaceError(GridlockError):
    """Detector returned no faces for a photo; the friend is skipped."""

    code = "NO_FACE"
