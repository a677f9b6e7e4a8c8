class MutagenError(Exception):
    """Base class for every domain error raised by this project."""


class SyntaxUnsupported(MutagenError):
    """A construct outside the supported Lean 4 subset. Carries the offending span."""

    def __init__(self, message: str, span: tuple = None):
        super().__init__(message)
        self.span = span


class SyntaxMalformed(MutagenError):
    """Unbalanced delimiters or a declaration that does not have the expected shape."""

    def __init__(self, message: str, span: tuple = None):
        super().__init__(message)
        self.span = span


class DuplicateName(MutagenError):
    pass


class OracleUnavailable(MutagenError):
    pass


class NotDroppable(MutagenError):
    pass


class UnparseableProof(MutagenError):
    pass


class StatesMissing(MutagenError):
    pass


class ScopeError(MutagenError):
    pass


class OutsideFragment(MutagenError):
    pass


class EndpointUnavailable(MutagenError):
    pass


class ExtractionFailed(MutagenError):
    pass


class HoldoutTooLarge(MutagenError):
    pass


class HookFailed(MutagenError):
    pass


class ConfigError(MutagenError):
    pass
