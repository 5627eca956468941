"""Exception hierarchy shared across the package."""


class Adbl2Error(Exception):
    """Base class for all domain errors."""

    code = "error"


class EmptyTextError(Adbl2Error):
    """Argument text is empty after trimming."""

    code = "empty_text"


class UnknownArgumentError(Adbl2Error):
    """Referenced argument id does not exist in the tree."""

    code = "unknown_argument"


class UnknownParentError(Adbl2Error):
    """Referenced parent id does not exist in the tree."""

    code = "unknown_parent"


class CannotRemoveRootError(Adbl2Error):
    """The root argument cannot be removed."""

    code = "cannot_remove_root"


class NoParentEdgeError(Adbl2Error):
    """The root has no parent edge to read or relabel."""

    code = "no_parent_edge"


class TemplateError(Adbl2Error):
    """Prompt template is malformed (missing or duplicated placeholder)."""

    code = "template_error"


class BackendError(Adbl2Error):
    """Base class for scoring-backend failures."""

    code = "backend_error"


class BackendUnavailable(BackendError):
    """Backend endpoint unreachable or refused the connection."""

    code = "backend_unavailable"


class BackendProtocolError(BackendError):
    """Backend answered but violated the wire contract."""

    code = "backend_protocol_error"


class BackendTimeout(BackendError):
    """Backend did not answer within the configured timeout."""

    code = "backend_timeout"


class EmptyStratumError(Adbl2Error):
    """A split stratum contains no triples."""

    code = "empty_stratum"


class LengthMismatchError(Adbl2Error):
    """Gold and prediction sequences differ in length."""

    code = "length_mismatch"
