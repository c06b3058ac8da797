from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Position:
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


NOWHERE = Position(0, 0)

ERROR = "error"
WARNING = "warning"
NOTE = "note"


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    message: str
    line: int = 0
    column: int = 0
    file: str = ""

    @classmethod
    def error(cls, message: str, position: Position = NOWHERE, file: str = "") -> "Diagnostic":
        return cls(ERROR, message, position.line, position.column, file)

    @classmethod
    def warning(cls, message: str, position: Position = NOWHERE, file: str = "") -> "Diagnostic":
        return cls(WARNING, message, position.line, position.column, file)

    @property
    def is_error(self) -> bool:
        return self.severity == ERROR

    def with_file(self, file: str) -> "Diagnostic":
        return Diagnostic(self.severity, self.message, self.line, self.column, file)

    def format(self) -> str:
        return f"{self.file}:{self.line}:{self.column}: {self.severity}: {self.message}"

    def as_dict(self) -> dict:
        return {
            "severity": self.severity,
            "message": self.message,
            "file": self.file,
            "line": self.line,
            "column": self.column,
        }


def has_errors(diagnostics) -> bool:
    return any(d.is_error for d in diagnostics)


class WorkbenchError(ValueError):
    """Base error for every failure the pipeline raises instead of reporting."""

    def __init__(self, message: str, position: Position = NOWHERE):
        super().__init__(f"{position}: {message}" if position != NOWHERE else message)
        self.message = message
        self.line = position.line
        self.column = position.column

    @property
    def position(self) -> Position:
        return Position(self.line, self.column)

    def to_diagnostic(self, file: str = "") -> Diagnostic:
        return Diagnostic.error(self.message, self.position, file)


class GrammarSyntaxError(WorkbenchError):
    def __init__(self, message: str, position: Position, expected=()):
        self.expected = frozenset(expected)
        if self.expected:
            message = f"{message} (expected {', '.join(sorted(self.expected))})"
        super().__init__(message, position)


class DuplicateDeclarationError(WorkbenchError):
    pass


class GrammarError(WorkbenchError):
    pass


class LexError(WorkbenchError):
    pass


class TransformError(WorkbenchError):
    pass


class ModelParseError(WorkbenchError):
    def __init__(self, message: str, position: Position, expected=(), found: str = ""):
        self.expected = frozenset(expected)
        self.found = found
        super().__init__(message, position)


class UnknownRoleError(WorkbenchError):
    pass


class ConfigError(WorkbenchError):
    pass


@dataclass
class DiagnosticBag:
    """Collects diagnostics in emission order."""

    items: list = field(default_factory=list)

    def error(self, message: str, position: Position = NOWHERE) -> None:
        self.items.append(Diagnostic.error(message, position))

    def warning(self, message: str, position: Position = NOWHERE) -> None:
        self.items.append(Diagnostic.warning(message, position))

    def __iter__(self):
        return iter(self.items)
