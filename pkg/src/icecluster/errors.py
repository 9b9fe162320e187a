"""Exception hierarchy shared by all modules.

DomainError maps to CLI exit code 2, GuardError to exit code 3.
"""


class DomainError(Exception):
    """Input is well-formed but violates a mathematical precondition."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class GuardError(Exception):
    """A size or depth guard was exceeded (work refused, not wrong)."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InexactDivision(DomainError):
    """Laurent division left a remainder.

    On exchange outputs this signals a Laurent-phenomenon violation,
    i.e. a bug upstream, so callers should not catch it casually.
    """
