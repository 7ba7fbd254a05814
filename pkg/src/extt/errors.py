"""User-facing errors. Each class carries the stable diagnostic code the CLI prints."""

from __future__ import annotations

from .syntax import ExttError

__all__ = [
    "ExttError", "ParseError", "UnboundName", "CannotInfer", "TypeMismatch", "ShapeMismatch",
    "BoundaryMismatch", "ProjBoundaryMismatch", "ClauseIllTyped", "ClausesIncompatible",
    "UnknownField", "DuplicateField", "MissingField", "FieldTypeMismatch", "PatchDependency",
    "PatchArity", "DuplicateName", "UnknownUnfoldTarget", "DuplicateAtom", "UnknownAtom",
]


class ParseError(ExttError):
    code = "E-PARSE"


class UnboundName(ExttError):
    code = "E-UNBOUND"


class CannotInfer(ExttError):
    code = "E-CANNOT-INFER"


class TypeMismatch(ExttError):
    code = "E-MISMATCH"


class ShapeMismatch(ExttError):
    """A term was used at a type of the wrong former (applying a non-function, ...)."""

    code = "E-SHAPE"


class BoundaryMismatch(ExttError):
    code = "E-BOUNDARY"

    def __init__(self, index: int, message: str, span=None, notes=()):
        super().__init__(message, span, notes)
        self.index = index


class ProjBoundaryMismatch(ExttError):
    code = "E-PROJ-BOUNDARY"

    def __init__(self, field: str, message: str, span=None, notes=()):
        super().__init__(message, span, notes)
        self.field = field


class ClauseIllTyped(ExttError):
    code = "E-CLAUSE-TYPE"

    def __init__(self, index: int, message: str, span=None, notes=()):
        super().__init__(message, span, notes)
        self.index = index


class ClausesIncompatible(ExttError):
    code = "E-INCOMPATIBLE"

    def __init__(self, i: int, j: int, message: str, span=None, notes=()):
        super().__init__(message, span, notes)
        self.pair = (i, j)


class UnknownField(ExttError):
    code = "E-UNKNOWN-FIELD"


class DuplicateField(ExttError):
    code = "E-DUPLICATE-FIELD"


class MissingField(ExttError):
    code = "E-MISSING-FIELD"


class FieldTypeMismatch(ExttError):
    code = "E-FIELD-TYPE"


class PatchDependency(ExttError):
    """A patched field's type mentions an earlier field that the patch leaves open."""

    code = "E-PATCH-DEPENDENCY"


class PatchArity(ExttError):
    code = "E-PATCH-ARITY"


class DuplicateName(ExttError):
    code = "E-DUPLICATE-NAME"


class UnknownUnfoldTarget(ExttError):
    code = "E-UNKNOWN-UNFOLD"


class DuplicateAtom(ExttError):
    code = "E-DUPLICATE-ATOM"


class UnknownAtom(ExttError):
    code = "E-UNKNOWN-ATOM"
