"""Exception hierarchy shared by every module of the package."""


class RewriteError(Exception):
    """Base class for all errors raised by sitrewrite."""


class InvalidPosition(RewriteError, IndexError):
    pass


class UnknownSymbol(RewriteError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class ArityMismatch(RewriteError, ValueError):
    pass


class InvalidRule(RewriteError, ValueError):
    """A rule whose right-hand side uses variables absent from its left-hand side."""


class InconsistentStep(RewriteError):
    """A RewriteStep whose recorded terms do not agree with its rule."""


class BudgetExhausted(RewriteError):
    """A step or critical-pair budget ran out before a definite answer."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class TermNotInT(RewriteError, ValueError):
    """A term that does not encode any state of the theory."""


class NoAction(RewriteError):
    """A rewrite step that cannot be labelled with any action."""


class NonInvertible(RewriteError):
    """A reversed step that no rule of the system realizes."""


class ConstraintViolated(RewriteError, ValueError):
    """A fluent assignment rejected by the theory's fluent constraint."""


class SizeOutOfRange(RewriteError, ValueError):
    pass


class DomainFileError(RewriteError):
    """Problem in a domain file; carries 1-based line and column."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class ParseError(DomainFileError):
    pass


class MissingPrec(DomainFileError):
    pass
