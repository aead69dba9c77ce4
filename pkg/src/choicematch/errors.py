"""Exception types shared across the package."""


class ChoicematchError(Exception):
    """Base class for all package errors."""


class ParseError(ChoicematchError):
    """Raised for malformed input files (syntax, schema, unknown ids)."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = "%s (line %d, column %d)" % (message, line, column or 0)
        super().__init__(message)


class LoadError(ChoicematchError):
    """Raised when a syntactically valid file describes an invalid object."""

    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)


class MissingEntry(ChoicematchError):
    """Raised when a choice table is consulted on a menu it does not define."""

    def __init__(self, agent, menu):
        self.agent = agent
        self.menu = tuple(sorted(menu))
        super().__init__(
            "agent %r has no choice entry for menu {%s}" % (agent, ", ".join(self.menu))
        )


class UnknownAgent(ChoicematchError):
    """Raised when an operation names an agent the market does not contain."""


class UniverseTooLarge(ChoicematchError):
    """Raised when an exhaustive operation would exceed the configured cap."""

    def __init__(self, size, cap, what="universe"):
        self.size = size
        self.cap = cap
        super().__init__("%s has %d contracts, cap is %d" % (what, size, cap))


class PreconditionFailed(ChoicematchError):
    """Raised when an algorithm's documented precondition does not hold."""

    def __init__(self, message, verdict=None):
        self.verdict = verdict
        super().__init__(message)


class BaViolation(PreconditionFailed):
    """Raised when an order construction needs binary acyclicity and it fails."""


class NonTermination(ChoicematchError):
    """Raised when an iterative algorithm revisits a state.

    Carries the cycle of revisited states and the trace up to the repeat.
    """

    def __init__(self, message, cycle, trace):
        self.cycle = tuple(cycle)
        self.trace = trace
        super().__init__(message)


class BudgetExceeded(ChoicematchError):
    """Raised when a bounded search runs out of its step budget."""

    def __init__(self, message, spent=None):
        self.spent = spent
        super().__init__(message)


class LogicError(ChoicematchError):
    """Raised when an internal cross-check fails; always a bug if seen."""
