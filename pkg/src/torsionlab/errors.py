"""Error taxonomy shared by the library and the CLI exit-code mapping."""


class TorsionLabError(Exception):
    """Base class for all library errors."""


class ValidationError(TorsionLabError):
    """Bad input: a precondition the caller is responsible for failed."""

    exit_code = 1


class CapExceededError(TorsionLabError):
    """An enumeration or big-integer budget would be exceeded.

    Carries ``required`` when the necessary cap value is known, so callers
    can retry with a bigger budget.
    """

    exit_code = 2

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class InternalCheckError(TorsionLabError):
    """A theorem-backed internal invariant failed; indicates a bug."""

    exit_code = 3
