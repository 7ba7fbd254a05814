"""Named surface syntax produced by the parser and consumed by the elaborator."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union


@dataclass(frozen=True, slots=True)
class Span:
    line: int
    col: int
    end_col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


def _span():
    return field(default=None, compare=False, kw_only=True)


class STerm:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class SVar(STerm):
    name: str
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class SType(STerm):
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class SNat(STerm):
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class SZero(STerm):
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class SSuc(STerm):
    pred: STerm
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class SNatRec(STerm):
    motive: STerm
    base: STerm
    step: STerm
    target: STerm
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class SLam(STerm):
    name: str
    body: STerm
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class SApp(STerm):
    fn: STerm
    arg: STerm
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class SPi(STerm):
    name: Optional[str]
    dom: STerm
    cod: STerm
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class SSigma(STerm):
    name: Optional[str]
    fst: STerm
    snd: STerm
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class SPair(STerm):
    a: STerm
    b: STerm
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class SFst(STerm):
    pair: STerm
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class SSnd(STerm):
    pair: STerm
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class SProp:
    """``tt`` when ``name`` is None, otherwise a named atom."""

    name: Optional[str]
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class SExt(STerm):
    base: STerm
    clauses: tuple[tuple[SProp, STerm], ...]
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class SInS(STerm):
    term: STerm
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class SOutS(STerm):
    term: STerm
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class SAssign:
    field: str
    term: STerm
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class SPatch(STerm):
    record: str
    assigns: tuple[SAssign, ...]
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class SNew(STerm):
    record: str
    assigns: tuple[SAssign, ...]
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class SProj(STerm):
    target: STerm
    field: str
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class SAnn(STerm):
    term: STerm
    ty: STerm
    span: Optional[Span] = _span()


# Declarations.


@dataclass(frozen=True, slots=True)
class SAtomDecl:
    name: str
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class SDefDecl:
    name: str
    unfolding: tuple[tuple[str, Optional[Span]], ...]
    ty: STerm
    body: STerm
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class SField:
    name: str
    ty: STerm
    span: Optional[Span] = _span()


@dataclass(frozen=True, slots=True)
class SRecordDecl:
    name: str
    fields: tuple[SField, ...]
    span: Optional[Span] = _span()


SDecl = Union[SAtomDecl, SDefDecl, SRecordDecl]
