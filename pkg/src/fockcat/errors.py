"""Exception hierarchy.

Every error carries a stable machine-readable ``code`` which the CLI
reports verbatim.
"""


class FockcatError(Exception):
    code = "ERROR"

    def __init__(self, message, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_json(self):
        out = {"code": self.code, "message": self.message}
        if self.details:
            out["details"] = self.details
        return out


class InputError(FockcatError, ValueError):
    code = "INPUT"


class ParseError(FockcatError, ValueError):
    code = "PARSE"

    def __init__(self, message, offset=None, expected=()):
        super().__init__(message, offset=offset, expected=sorted(expected))
        self.offset = offset
        self.expected = frozenset(expected)

    def __str__(self):
        msg = self.message
        if self.offset is not None:
            msg = f"{msg} at offset {self.offset}"
        if self.expected:
            msg = f"{msg} (expected one of: {', '.join(sorted(self.expected))})"
        return msg


class CompositionError(FockcatError, ValueError):
    code = "COMPOSE_CONST"


class CutoffError(FockcatError, ValueError):
    code = "CUTOFF"


class SizeError(FockcatError, ValueError):
    code = "SIZE"


class DivergenceError(FockcatError, ArithmeticError):
    code = "DIVERGED"


class TruncationError(FockcatError, ValueError):
    code = "TRUNCATION"
