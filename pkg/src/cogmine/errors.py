"""Exception hierarchy shared by all cogmine modules."""


class CogmineError(Exception):
    """Base class for every error raised by this package."""


# knowledge maps
class UnknownRelation(CogmineError, ValueError):
    pass


class ParseError(CogmineError, ValueError):
    pass


class ValidationError(CogmineError, ValueError):
    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class NotFound(CogmineError, LookupError):
    pass


class Ambiguous(CogmineError, LookupError):
    pass


class UnknownUnit(CogmineError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown unit"


class SameUnit(CogmineError, ValueError):
    pass


# logs
class FormatError(CogmineError, ValueError):
    """A single malformed log record."""

    def __init__(self, line: int, message: str):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}")


class FatalError(CogmineError, ValueError):
    """The log as a whole is unreadable (bad header, undecodable bytes)."""


# metrics
class EmptySubmap(CogmineError, ValueError):
    pass


# codec
class CodecError(CogmineError, ValueError):
    pass


class OutOfRange(CodecError):
    pass


class TooManyComponents(CodecError):
    pass


class InvalidCodeword(CodecError):
    pass


class NonMonotonePattern(CodecError):
    pass


# mining
class EmptyDatabase(CogmineError, ValueError):
    pass


class InvalidMinsup(CogmineError, ValueError):
    pass


class InstanceTooLarge(CogmineError, ValueError):
    pass


# simulation
class EmptySubmapFixture(CogmineError, ValueError):
    pass


class ConfigError(CogmineError, ValueError):
    pass


class EmptyData(CogmineError, ValueError):
    """Nothing left to analyse: no events, no sequences, no visited submaps."""
