"""Source spans, diagnostics, and the machine-readable check report."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class SourceSpan:
    """Half-open byte range in a source file, with line/column endpoints (1-based)."""

    file: str
    begin: int
    end: int
    begin_line: int
    begin_col: int
    end_line: int
    end_col: int

    def __post_init__(self):
        if self.begin > self.end:
            raise ValueError(f"span begin {self.begin} > end {self.end}")

    def to_json(self) -> dict:
        return {
            "file": self.file,
            "begin": self.begin,
            "end": self.end,
            "begin_line": self.begin_line,
            "begin_col": self.begin_col,
            "end_line": self.end_line,
            "end_col": self.end_col,
        }


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" or "warning"
    message: str
    rule: str  # which judgment or rule rejected the construct
    span: SourceSpan | None = None

    def to_json(self) -> dict:
        return {
            "severity": self.severity,
            "message": self.message,
            "rule": self.rule,
            "span": self.span.to_json() if self.span else None,
        }

    def render(self) -> str:
        loc = ""
        if self.span:
            loc = f"{self.span.file}:{self.span.begin_line}:{self.span.begin_col}: "
        return f"{loc}{self.severity}: {self.message} [{self.rule}]"


def error(message: str, rule: str, span: SourceSpan | None = None) -> Diagnostic:
    return Diagnostic("error", message, rule, span)


@dataclass(frozen=True)
class CheckReport:
    """Result of checking one program: status, synthesized type, diagnostics."""

    status: str  # "ok" or "error"
    type: str | None = None
    diagnostics: tuple[Diagnostic, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.status == "ok":
            assert not any(d.severity == "error" for d in self.diagnostics)

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "type": self.type,
            "diagnostics": [d.to_json() for d in self.diagnostics],
        }
