"""Diagnostics: one line per error, ``CODE file:line:col message``."""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import ExttError


@dataclass(frozen=True)
class Diagnostic:
    code: str
    file: str
    line: int
    col: int
    end_col: int
    message: str
    notes: tuple[str, ...] = ()
    severity: str = "error"

    @classmethod
    def from_error(cls, err: ExttError, file: str) -> Diagnostic:
        span = err.span
        line, col, end = (span.line, span.col, span.end_col) if span is not None else (1, 1, 1)
        return cls(err.code, file, line, col, end, err.message, err.notes)

    def render(self) -> str:
        text = f"{self.code} {self.file}:{self.line}:{self.col} {self.message}"
        if self.notes:
            text += " [" + "; ".join(self.notes) + "]"
        return " ".join(text.split("\n"))
