"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: :class:`InputError` subclasses become
exit 2, :class:`ServiceError` subclasses become exit 3.
"""
from __future__ import annotations


class AidaError(Exception):
    """Base class for every error raised by this package."""


class InputError(AidaError):
    """Malformed or inconsistent input file."""

    def __init__(self, message: str, *, line: int | None = None, path: str | None = None) -> None:
        self.message = message
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where = f"{where}{line}:" if where else f"line {line}:"
        super().__init__(f"{where} {message}" if where else message)


class CorpusFormatError(InputError):
    """A corpus JSON Lines record could not be parsed or resolved."""


class LexiconError(InputError):
    """A lexicon file could not be parsed."""


class GazetteerError(InputError):
    """A gazetteer file could not be parsed."""


class ServiceError(AidaError):
    """Failure talking to an external annotation service."""


class TransportError(ServiceError):
    """The service was unreachable or answered with an HTTP error status."""


class ProtocolError(ServiceError):
    """The service answered with a body that is not the documented JSON."""


class DataError(ServiceError):
    """A service response is well formed but inconsistent with the submitted text."""


class AnnotationError(AidaError):
    """Annotating one claim failed; the batch is aborted."""

    def __init__(self, claim_id: str, cause: Exception) -> None:
        self.claim_id = claim_id
        self.cause = cause
        super().__init__(f"annotation failed for claim {claim_id}: {cause}")
