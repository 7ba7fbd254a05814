"""Render core terms in the surface syntax."""

from __future__ import annotations

from typing import Iterable

from .syntax import (
    Ann, App, AtomRef, DefRef, ExtTy, FieldProj, Fst, InS, Lam, Nat, NatRec, NewRecord, OutS,
    Pair, Pi, ProjExtTy, Prop, RecordTy, Sigma, Signature, Snd, Suc, Term, Truth, Type,
    Var, Zero, free_vars,
)

# Precedence levels.
_TOP, _APP, _ATOM = 0, 1, 2


class Printer:
    def __init__(self, sig: Signature, names: Iterable[str] = ()):
        self.sig = sig
        self.names = list(names)
        self._globals = sig.names()

    def prop(self, p: Prop) -> str:
        if isinstance(p, Truth):
            return "tt"
        return self.sig.atom_names.get(p.id, f"?atom{p.id}")

    def restriction(self, r: Iterable[int]) -> str:
        names = sorted(self.sig.atom_names.get(a, f"?atom{a}") for a in r)
        return "{" + ", ".join(names) + "}"

    def term(self, t: Term) -> str:
        return self._go(t, list(self.names), _TOP)

    def _fresh(self, name: str, scope: list[str]) -> str:
        if not name or name == "_":
            name = "x"
        while name in scope or name in self._globals:
            name += "'"
        return name

    def _go(self, t: Term, scope: list[str], prec: int) -> str:
        def paren(s: str, level: int) -> str:
            return f"({s})" if prec > level else s

        match t:
            case Var(i):
                return scope[-1 - i] if i < len(scope) else f"#{i}"
            case Type():
                return "Type"
            case Nat():
                return "Nat"
            case Zero():
                return "zero"
            case Suc(p):
                return paren(f"suc {self._go(p, scope, _ATOM)}", _APP)
            case OutS(DefRef(name)):
                return name
            case DefRef(name):
                return paren(f"inS {name}", _APP)
            case RecordTy(name):
                return name
            case Lam():
                binders = []
                inner = scope
                while isinstance(t, Lam):
                    n = self._fresh(t.name, inner)
                    binders.append(n)
                    inner = inner + [n]
                    t = t.body
                return paren(f"\\{' '.join(binders)}. {self._go(t, inner, _TOP)}", _TOP)
            case Pi(dom, cod, name):
                d = self._go(dom, scope, _APP)
                if 0 not in free_vars(cod):
                    return paren(f"{d} -> {self._go(cod, scope + ['_'], _TOP)}", _TOP)
                n = self._fresh(name, scope)
                return paren(f"({n} : {self._go(dom, scope, _TOP)}) -> {self._go(cod, scope + [n], _TOP)}", _TOP)
            case Sigma(a, b, name):
                n = self._fresh(name, scope)
                return paren(f"Sig ({n} : {self._go(a, scope, _TOP)}) . {self._go(b, scope + [n], _TOP)}", _TOP)
            case App(f, a):
                return paren(f"{self._go(f, scope, _APP)} {self._go(a, scope, _ATOM)}", _APP)
            case Pair(a, b):
                return f"({self._go(a, scope, _TOP)}, {self._go(b, scope, _TOP)})"
            case Fst(p):
                return paren(f"fst {self._go(p, scope, _ATOM)}", _APP)
            case Snd(p):
                return paren(f"snd {self._go(p, scope, _ATOM)}", _APP)
            case NatRec(m, z, s, n):
                parts = " ".join(self._go(x, scope, _ATOM) for x in (m, z, s, n))
                return paren(f"natrec {parts}", _APP)
            case NewRecord(rec, fs):
                return paren(f"new {rec} {self._assigns(fs, scope)}", _APP)
            case FieldProj(x, f):
                return f"{self._go(x, scope, _ATOM)}.{f}"
            case ExtTy(base, cls):
                body = ", ".join(f"{self.prop(p)} |> {self._go(u, scope, _TOP)}" for p, u in cls)
                return f"{{{self._go(base, scope, _TOP)} | {body}}}" if cls else f"{{{self._go(base, scope, _TOP)} |}}"
            case InS(x):
                return paren(f"inS {self._go(x, scope, _ATOM)}", _APP)
            case OutS(x):
                return paren(f"outS {self._go(x, scope, _ATOM)}", _APP)
            case ProjExtTy(rec, cls):
                return paren(f"{rec} {self._assigns(cls, scope)}", _APP)
            case Ann(x, ty):
                return f"({self._go(x, scope, _TOP)} : {self._go(ty, scope, _TOP)})"
        raise TypeError(f"not a term: {t!r}")

    def _assigns(self, fs, scope) -> str:
        if not fs:
            return "{}"
        return "{ " + ", ".join(f"{f} := {self._go(u, scope, _TOP)}" for f, u in fs) + " }"


def show(sig: Signature, t: Term, names: Iterable[str] = ()) -> str:
    return Printer(sig, names).term(t)
