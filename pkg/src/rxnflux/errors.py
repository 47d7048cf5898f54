"""Exception types shared across the package.

The CLI maps these onto exit codes (parse/match problems, I/O problems and
causality violations are distinguishable), so library code should raise the
most specific type that applies.
"""


class RxnFluxError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(RxnFluxError):
    """A model file violates the reaction DSL grammar or its invariants."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        at = ""
        if line is not None:
            at = f" (line {line}" + (f", column {column}" if column else "") + ")"
        super().__init__(message + at)


class TraceError(RxnFluxError):
    """A trace file is malformed or cannot be matched against the model."""

    def __init__(self, message, line=None):
        self.line = line
        super().__init__(message + (f" (line {line})" if line is not None else ""))


class AmbiguousReactionError(TraceError):
    """A trace line's species multisets match more than one model reaction."""


class CausalityViolationError(RxnFluxError):
    """A step consumes an instance that is not present under replay."""

    def __init__(self, message, line=None, step=None):
        self.line = line
        self.step = step
        where = ""
        if line is not None:
            where = f" at line {line}"
        elif step is not None:
            where = f" at step {step}"
        super().__init__(message + where)


class FluxConsistencyError(RxnFluxError):
    """A flux configuration implies a non-integral reaction fire count."""
