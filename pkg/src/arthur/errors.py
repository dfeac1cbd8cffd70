"""Exception hierarchy shared across the engine."""


class ArthurError(Exception):
    """Base class for all engine errors."""


class ValidationError(ArthurError, ValueError):
    """Raised when an operation is called with inputs that violate its contract."""


class IntegrityError(ArthurError):
    """Raised when a memory store fails referential-integrity validation."""


class PersistenceError(ArthurError):
    """Raised when a store cannot be read or written; names the path and cause."""


class UnknownResourceError(ArthurError, LookupError):
    """Raised when a resource id is not present in memory."""


class UnknownSessionError(ArthurError, LookupError):
    """Raised when a session id is not registered with the engine."""


class ChatbotError(ArthurError):
    """Raised when the fallback chatbot cannot produce a reply."""
