"""Tokenizer and recursive-descent parser for ``.ett`` source files.

Grammar (ASCII; ``λ``, ``→``, ``▷`` are accepted as ``\\``, ``->``, ``|>``)::

    decl  ::= "atom" IDENT
            | "def" IDENT ["unfolding" "(" IDENT,* ")"] ":" term ":=" term
            | "record" IDENT "where" "{" (IDENT ":" term ";")* "}"
    term  ::= "\\" IDENT+ "." term
            | "(" IDENT+ ":" term ")" "->" term
            | "Sig" "(" IDENT ":" term ")" "." term
            | app ["->" term]
    app   ::= arg+
    arg   ::= ("suc" | "inS" | "outS" | "fst" | "snd") arg
            | "natrec" arg arg arg arg
            | atom ("." IDENT)*
    atom  ::= IDENT | "Type" | "Nat" | "zero"
            | IDENT "{" (IDENT ":=" term),* "}"
            | "new" IDENT "{" (IDENT ":=" term),* "}"
            | "(" term ")" | "(" term "," term ")" | "(" term ":" term ")"
            | "{" term "|" (prop "|>" term),* "}"
    prop  ::= "tt" | IDENT

Line comments start with ``--``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError
from .surface import (
    SAnn, SApp, SAssign, SAtomDecl, SDecl, SDefDecl, SExt, SField, SFst, SInS, SLam, SNat,
    SNatRec, SNew, SOutS, SPair, SPatch, SPi, SProj, SProp, SRecordDecl, SSigma, SSnd, SSuc,
    STerm, SType, SVar, SZero, Span,
)

KEYWORDS = {
    "atom", "def", "record", "where", "unfolding", "Type", "Nat", "zero", "suc", "natrec",
    "inS", "outS", "new", "fst", "snd", "Sig", "tt",
}
_PREFIX = {"suc": SSuc, "inS": SInS, "outS": SOutS, "fst": SFst, "snd": SSnd}
_ATOM_START = {"IDENT", "Type", "Nat", "zero", "new", "(", "{", "natrec", *_PREFIX}

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\f]+)
  | (?P<nl>\n)
  | (?P<comment>--[^\n]*)
  | (?P<sym>:=|\|>|->|→|▷|λ|[(){},;:|.\\])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
    """,
    re.VERBOSE,
)
_CANON = {"→": "->", "▷": "|>", "λ": "\\"}


@dataclass(frozen=True, slots=True)
class Token:
    kind: str  # "IDENT", "EOF", or the keyword/symbol text itself
    text: str
    span: Span


def tokenize(source: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", Span(line, col, col + 1))
        text = m.group()
        kind = m.lastgroup
        if kind == "nl":
            line, line_start = line + 1, m.end()
        elif kind == "sym":
            text = _CANON.get(text, text)
            tokens.append(Token(text, text, Span(line, col, col + len(m.group()))))
        elif kind == "ident":
            tokens.append(Token(text if text in KEYWORDS else "IDENT", text, Span(line, col, col + len(text))))
        pos = m.end()
    col = pos - line_start + 1
    tokens.append(Token("EOF", "", Span(line, col, col)))
    return tokens


class Parser:
    def __init__(self, source: str):
        self.tokens = tokenize(source)
        self.pos = 0

    # Token helpers.

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def at(self, kind: str, offset: int = 0) -> bool:
        return self.peek(offset).kind == kind

    def advance(self) -> Token:
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str | None = None) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            found = "end of file" if tok.kind == "EOF" else repr(tok.text)
            raise ParseError(f"expected {what or repr(kind)}, found {found}", tok.span)
        return self.advance()

    def ident(self) -> Token:
        return self.expect("IDENT", "an identifier")

    # Declarations.

    def file(self) -> list[SDecl]:
        decls = []
        while not self.at("EOF"):
            decls.append(self.decl())
        return decls

    def decl(self) -> SDecl:
        tok = self.peek()
        if tok.kind == "atom":
            self.advance()
            return SAtomDecl(self.ident().text, span=tok.span)
        if tok.kind == "def":
            self.advance()
            name = self.ident()
            unfolding = []
            if self.at("unfolding"):
                self.advance()
                self.expect("(")
                if not self.at(")"):
                    while True:
                        t = self.ident()
                        unfolding.append((t.text, t.span))
                        if not self.at(","):
                            break
                        self.advance()
                self.expect(")")
            self.expect(":")
            ty = self.term()
            self.expect(":=")
            body = self.term()
            return SDefDecl(name.text, tuple(unfolding), ty, body, span=name.span)
        if tok.kind == "record":
            self.advance()
            name = self.ident()
            self.expect("where")
            self.expect("{")
            fields = []
            while not self.at("}"):
                f = self.ident()
                self.expect(":")
                fields.append(SField(f.text, self.term(), span=f.span))
                self.expect(";")
            self.expect("}")
            return SRecordDecl(name.text, tuple(fields), span=name.span)
        raise ParseError(f"expected a declaration, found {tok.text or 'end of file'!r}", tok.span)

    # Terms.

    def term(self) -> STerm:
        tok = self.peek()
        if tok.kind == "\\":
            self.advance()
            names = [self.ident().text]
            while self.at("IDENT"):
                names.append(self.advance().text)
            self.expect(".")
            body = self.term()
            for n in reversed(names):
                body = SLam(n, body, span=tok.span)
            return body
        if tok.kind == "Sig":
            self.advance()
            self.expect("(")
            name = self.ident().text
            self.expect(":")
            dom = self.term()
            self.expect(")")
            self.expect(".")
            return SSigma(name, dom, self.term(), span=tok.span)
        if tok.kind == "(" and self._looks_like_binder():
            self.advance()
            names = [self.ident().text]
            while self.at("IDENT"):
                names.append(self.advance().text)
            self.expect(":")
            dom = self.term()
            self.expect(")")
            self.expect("->")
            cod = self.term()
            for n in reversed(names):
                cod = SPi(n, dom, cod, span=tok.span)
            return cod
        t = self.app()
        if self.at("->"):
            self.advance()
            return SPi(None, t, self.term(), span=tok.span)
        return t

    def _looks_like_binder(self) -> bool:
        """``( x y : A ) ->`` as opposed to an annotation ``(x : A)``."""
        i = 1
        if not self.at("IDENT", i):
            return False
        while self.at("IDENT", i):
            i += 1
        if not self.at(":", i):
            return False
        depth = 0
        j = self.pos
        while j < len(self.tokens):
            kind = self.tokens[j].kind
            if kind in ("(", "{"):
                depth += 1
            elif kind in (")", "}"):
                depth -= 1
                if depth == 0:
                    return j + 1 < len(self.tokens) and self.tokens[j + 1].kind == "->"
            elif kind == "EOF":
                return False
            j += 1
        return False

    def app(self) -> STerm:
        start = self.peek()
        head = self.arg()
        while self.peek().kind in _ATOM_START:
            head = SApp(head, self.arg(), span=start.span)
        return head

    def arg(self) -> STerm:
        tok = self.peek()
        if tok.kind in _PREFIX:
            self.advance()
            return _PREFIX[tok.kind](self.arg(), span=tok.span)
        if tok.kind == "natrec":
            self.advance()
            m, z, s, n = (self.arg() for _ in range(4))
            return SNatRec(m, z, s, n, span=tok.span)
        t = self.atom()
        while self.at(".") and self.at("IDENT", 1):
            self.advance()
            f = self.advance()
            t = SProj(t, f.text, span=f.span)
        return t

    def atom(self) -> STerm:
        tok = self.peek()
        match tok.kind:
            case "IDENT":
                self.advance()
                if self.at("{") and (self.at("}", 1) or (self.at("IDENT", 1) and self.at(":=", 2))):
                    return SPatch(tok.text, self.assigns(), span=tok.span)
                return SVar(tok.text, span=tok.span)
            case "Type":
                self.advance()
                return SType(span=tok.span)
            case "Nat":
                self.advance()
                return SNat(span=tok.span)
            case "zero":
                self.advance()
                return SZero(span=tok.span)
            case "new":
                self.advance()
                name = self.ident()
                return SNew(name.text, self.assigns(), span=tok.span)
            case "(":
                self.advance()
                t = self.term()
                if self.at(","):
                    self.advance()
                    b = self.term()
                    self.expect(")")
                    return SPair(t, b, span=tok.span)
                if self.at(":"):
                    self.advance()
                    ty = self.term()
                    self.expect(")")
                    return SAnn(t, ty, span=tok.span)
                self.expect(")")
                return t
            case "{":
                self.advance()
                base = self.term()
                self.expect("|")
                clauses = []
                if not self.at("}"):
                    while True:
                        p = self.advance()
                        if p.kind == "tt":
                            prop = SProp(None, span=p.span)
                        elif p.kind == "IDENT":
                            prop = SProp(p.text, span=p.span)
                        else:
                            raise ParseError(f"expected a proposition, found {p.text or 'end of file'!r}", p.span)
                        self.expect("|>")
                        clauses.append((prop, self.term()))
                        if not self.at(","):
                            break
                        self.advance()
                self.expect("}")
                return SExt(base, tuple(clauses), span=tok.span)
        found = "end of file" if tok.kind == "EOF" else repr(tok.text)
        raise ParseError(f"expected a term, found {found}", tok.span)

    def assigns(self) -> tuple[SAssign, ...]:
        self.expect("{")
        out = []
        if not self.at("}"):
            while True:
                f = self.ident()
                self.expect(":=")
                out.append(SAssign(f.text, self.term(), span=f.span))
                if not self.at(","):
                    break
                self.advance()
        self.expect("}")
        return tuple(out)


def parse_file(source: str) -> list[SDecl]:
    return Parser(source).file()


def parse_term(source: str) -> STerm:
    p = Parser(source)
    t = p.term()
    p.expect("EOF", "end of input")
    return t
