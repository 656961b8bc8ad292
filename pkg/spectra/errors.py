"""Public, machine-readable slcheck diagnostics."""

from collections.abc import Mapping
from dataclasses import dataclass
from typing import Any, TypeVar

DiagnosticT = TypeVar("DiagnosticT", bound="DiagnosticError")


@dataclass(frozen=True, slots=True)
class SourceLocation:
    """A one-based line/column position inside a configuration source."""

    line: int
    column: int

    def to_dict(self) -> dict[str, int]:
        return {"line": self.line, "column": self.column}


class DiagnosticError(ValueError):
    """Base class for all stable slcheck diagnostics."""

    def __init__(
        self,
        code: str,
        message: str,
        *,
        category: str,
        phase: str,
        location: SourceLocation | None = None,
        source: str | None = None,
        details: Mapping[str, Any] | None = None,
    ):
        self.code = code
        self.message = message
        self.category = category
        self.phase = phase
        self.location = location
        self.source = source
        self.details = dict(details or {})
        self.filename: str | None = None
        super().__init__(message)

    def with_source(
        self: DiagnosticT,
        location: SourceLocation,
        source: str | None = None,
    ) -> DiagnosticT:
        """Attach source context while preserving the error type."""
        self.location = location
        if source is not None:
            self.source = source
        return self

    def in_file(self: DiagnosticT, filename: str) -> DiagnosticT:
        """Name the file the diagnostic refers to, keeping an earlier name."""
        if self.filename is None:
            self.filename = filename
        return self

    def to_dict(self) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "error": self.category,
            "code": self.code,
            "message": self.message,
            "phase": self.phase,
            "details": self.details,
        }
        if self.location is not None:
            payload["location"] = self.location.to_dict()
        if self.filename is not None:
            payload["filename"] = self.filename
        return payload

    def __str__(self) -> str:
        if self.location is None:
            return self.message
        line = self.location.line
        column = self.location.column
        diagnostic = f"{self.message} at line {line}, column {column}"
        if not self.source:
            return diagnostic
        lines = self.source.splitlines()
        source_line = lines[line - 1] if line <= len(lines) else ""
        pointer = " " * (column - 1) + "^"
        return f"{diagnostic}\n{source_line}\n{pointer}"


class ConfigSyntaxError(DiagnosticError):
    """A malformed key-value line with a precise source location."""

    def __init__(self, message: str, location: SourceLocation, source: str):
        super().__init__(
            "config_syntax",
            message,
            category="syntax",
            phase="parse",
            location=location,
            source=source,
        )

    @property
    def line(self) -> int:
        assert self.location is not None
        return self.location.line

    @property
    def column(self) -> int:
        assert self.location is not None
        return self.location.column


class ConfigValueError(DiagnosticError):
    """A well-formed entry whose value is missing, unknown, or out of range."""

    def __init__(
        self,
        message: str,
        *,
        key: str | None = None,
        location: SourceLocation | None = None,
        source: str | None = None,
    ):
        super().__init__(
            "config_value",
            message,
            category="config",
            phase="load",
            location=location,
            source=source,
            details={"key": key} if key is not None else {},
        )


class PotentialDefinitionError(DiagnosticError):
    def __init__(self, message: str, **details: Any):
        super().__init__(
            "invalid_potential",
            message,
            category="potential",
            phase="define",
            details=details,
        )


class DomainError(DiagnosticError):
    def __init__(self, x: float):
        super().__init__(
            "outside_domain",
            f"Point {x!r} lies outside [0, 1]",
            category="potential",
            phase="evaluate",
            details={"x": x},
        )


class UsageError(DiagnosticError):
    """A caller broke an operation's precondition."""

    def __init__(self, code: str, message: str, **details: Any):
        super().__init__(
            code,
            message,
            category="usage",
            phase="validate",
            details=details,
        )


class UnsupportedCombinationError(UsageError):
    def __init__(self, backend: str, boundary: str):
        super().__init__(
            "unsupported_combination",
            f"Backend '{backend}' does not support '{boundary}' conditions",
            backend=backend,
            boundary=boundary,
        )


class NumericalError(DiagnosticError):
    """A numerical kernel could not meet its accuracy contract."""

    def __init__(self, code: str, message: str, **details: Any):
        super().__init__(
            code,
            message,
            category="numerical",
            phase="solve",
            details=details,
        )


class BracketSearchError(NumericalError):
    def __init__(self, index: int, expansions: int, lower: float, upper: float):
        super().__init__(
            "bracket_not_found",
            f"No bracket for eigenvalue {index} after {expansions} expansions",
            index=index,
            expansions=expansions,
            lower=lower,
            upper=upper,
        )


class InvalidEigenpairError(DiagnosticError):
    def __init__(self, eigenvalue: float, residual: float, tolerance: float):
        super().__init__(
            "not_an_eigenvalue",
            f"{eigenvalue!r} is not an eigenvalue (residual {residual:.3g})",
            category="input",
            phase="solve",
            details={
                "eigenvalue": eigenvalue,
                "residual": residual,
                "tolerance": tolerance,
            },
        )


class ReportFormatError(DiagnosticError):
    def __init__(self, message: str, *, location: SourceLocation | None = None):
        super().__init__(
            "report_format",
            message,
            category="format",
            phase="parse",
            location=location,
        )
