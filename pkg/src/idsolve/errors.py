"""Exception types shared by the library and mapped to CLI exit codes."""


class IdsolveError(Exception):
    """Base class for all library errors."""


class InputError(IdsolveError, ValueError):
    """Malformed input: bad ids, bad file syntax, inconsistent arguments."""


class RefusalError(IdsolveError):
    """The instance is outside a configured cap or budget."""


class BudgetError(RefusalError):
    """An enumeration would exceed its work budget."""
