"""Platform exception hierarchy.

Every error carries a short machine-readable ``code`` that the HTTP layer
maps onto the ``{"error": code, "detail": ...}`` response body.
"""


class AgrihubError(Exception):
    code = "error"

    @property
    def detail(self) -> str:
        return str(self)


class MalformedIriError(AgrihubError):
    code = "malformed-iri"


class ValidationError(AgrihubError):
    code = "validation"


class ConflictError(AgrihubError):
    code = "conflict"


class NotFoundError(AgrihubError):
    code = "not-found"


class PreconditionError(AgrihubError):
    code = "precondition"


class ParseError(AgrihubError):
    """Raised for malformed input files; carries a location when known."""

    code = "parse-error"

    def __init__(self, message, line=None, offset=None):
        super().__init__(message)
        self.line = line
        self.offset = offset


class UnknownFormatError(AgrihubError):
    code = "unknown-format"


class AmbiguousFormatError(AgrihubError):
    code = "ambiguous-format"

    def __init__(self, candidates):
        super().__init__(
            "input matches multiple formats: " + ", ".join(sorted(candidates))
        )
        self.candidates = sorted(candidates)


class AccessDeniedError(AgrihubError):
    code = "access-denied"


class BoundariesUnavailableError(AgrihubError):
    code = "boundaries-unavailable"


class JournalCorruptError(AgrihubError):
    code = "journal-corrupt"

    def __init__(self, path, line_no, message="corrupt journal line"):
        super().__init__(f"{message} at {path}:{line_no}")
        self.path = str(path)
        self.line_no = line_no
