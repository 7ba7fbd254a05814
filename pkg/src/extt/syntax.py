"""Core syntax: de Bruijn indexed terms, propositions, declarations, signatures."""

from __future__ import annotations

import dataclasses
import functools
from dataclasses import dataclass, field
from typing import Callable, Mapping, Union


class ExttError(Exception):
    """Base class of every error the checker reports to users."""

    code = "E-INTERNAL"

    def __init__(self, message: str, span=None, notes: tuple[str, ...] = ()):
        super().__init__(message)
        self.message = message
        self.span = span
        self.notes = tuple(notes)


class KernelBug(Exception):
    """Raised on states that well-typed input can never reach."""


# Propositions in the strict universe of unfolding atoms.


@dataclass(frozen=True, slots=True)
class Atom:
    id: int
    name: str


@dataclass(frozen=True, slots=True)
class Truth:
    pass


@dataclass(frozen=True, slots=True)
class AtomRef:
    id: int


Prop = Union[Truth, AtomRef]
TRUTH = Truth()

Restriction = frozenset  # of atom ids


# Terms. Binder names are kept for printing only and never compared.


class Term:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Var(Term):
    index: int


@dataclass(frozen=True, slots=True)
class Type(Term):
    pass


@dataclass(frozen=True, slots=True)
class Pi(Term):
    dom: Term
    cod: Term
    name: str = field(default="x", compare=False)


@dataclass(frozen=True, slots=True)
class Lam(Term):
    body: Term
    name: str = field(default="x", compare=False)


@dataclass(frozen=True, slots=True)
class App(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True, slots=True)
class Sigma(Term):
    fst: Term
    snd: Term
    name: str = field(default="x", compare=False)


@dataclass(frozen=True, slots=True)
class Pair(Term):
    a: Term
    b: Term


@dataclass(frozen=True, slots=True)
class Fst(Term):
    pair: Term


@dataclass(frozen=True, slots=True)
class Snd(Term):
    pair: Term


@dataclass(frozen=True, slots=True)
class Nat(Term):
    pass


@dataclass(frozen=True, slots=True)
class Zero(Term):
    pass


@dataclass(frozen=True, slots=True)
class Suc(Term):
    pred: Term


@dataclass(frozen=True, slots=True)
class NatRec(Term):
    motive: Term
    base: Term
    step: Term
    target: Term


@dataclass(frozen=True, slots=True)
class DefRef(Term):
    name: str


@dataclass(frozen=True, slots=True)
class RecordTy(Term):
    name: str


@dataclass(frozen=True, slots=True)
class NewRecord(Term):
    record: str
    fields: tuple[tuple[str, Term], ...]


@dataclass(frozen=True, slots=True)
class FieldProj(Term):
    target: Term
    field: str


@dataclass(frozen=True, slots=True)
class ExtTy(Term):
    base: Term
    clauses: tuple[tuple[Prop, Term], ...]


@dataclass(frozen=True, slots=True)
class InS(Term):
    term: Term


@dataclass(frozen=True, slots=True)
class OutS(Term):
    term: Term


@dataclass(frozen=True, slots=True)
class ProjExtTy(Term):
    record: str
    clauses: tuple[tuple[str, Term], ...]


@dataclass(frozen=True, slots=True)
class Ann(Term):
    """``(term : ty)``. Evaluation drops it; it exists so elaborated redexes re-check."""

    term: Term
    ty: Term


def numeral(n: int) -> Term:
    t: Term = Zero()
    for _ in range(n):
        t = Suc(t)
    return t


def as_numeral(t: Term) -> int | None:
    n = 0
    while isinstance(t, Suc):
        t, n = t.pred, n + 1
    return n if isinstance(t, Zero) else None


def map_vars(t: Term, fn: Callable[[int, int], Term], depth: int = 0) -> Term:
    """Rebuild ``t`` replacing each ``Var(i)`` under ``depth`` local binders by ``fn(i, depth)``."""

    def go(t: Term, d: int) -> Term:
        match t:
            case Var(i):
                return fn(i, d)
            case Type() | Nat() | Zero() | DefRef() | RecordTy():
                return t
            case Pi(dom, cod, name):
                return Pi(go(dom, d), go(cod, d + 1), name)
            case Lam(body, name):
                return Lam(go(body, d + 1), name)
            case Sigma(a, b, name):
                return Sigma(go(a, d), go(b, d + 1), name)
            case App(f, a):
                return App(go(f, d), go(a, d))
            case Pair(a, b):
                return Pair(go(a, d), go(b, d))
            case Fst(p):
                return Fst(go(p, d))
            case Snd(p):
                return Snd(go(p, d))
            case Suc(p):
                return Suc(go(p, d))
            case NatRec(m, z, s, n):
                return NatRec(go(m, d), go(z, d), go(s, d), go(n, d))
            case NewRecord(r, fs):
                return NewRecord(r, tuple((f, go(u, d)) for f, u in fs))
            case FieldProj(x, f):
                return FieldProj(go(x, d), f)
            case ExtTy(base, cls):
                return ExtTy(go(base, d), tuple((p, go(u, d)) for p, u in cls))
            case InS(x):
                return InS(go(x, d))
            case OutS(x):
                return OutS(go(x, d))
            case ProjExtTy(r, cls):
                return ProjExtTy(r, tuple((f, go(u, d)) for f, u in cls))
            case Ann(x, ty):
                return Ann(go(x, d), go(ty, d))
        raise TypeError(f"not a term: {t!r}")

    return go(t, depth)


def shift(t: Term, by: int, cutoff: int = 0) -> Term:
    return map_vars(t, lambda i, d: Var(i + by) if i >= d + cutoff else Var(i))


def subst(t: Term, s: Term) -> Term:
    """Substitute ``s`` for index 0 in ``t`` (the body of a binder), lowering the rest."""

    def fn(i: int, d: int) -> Term:
        if i < d:
            return Var(i)
        if i == d:
            return shift(s, d)
        return Var(i - 1)

    return map_vars(t, fn)


def free_vars(t: Term) -> frozenset[int]:
    found: set[int] = set()

    def fn(i: int, d: int) -> Term:
        if i >= d:
            found.add(i - d)
        return Var(i)

    map_vars(t, fn)
    return frozenset(found)


def well_scoped(t: Term, depth: int) -> bool:
    return all(i < depth for i in free_vars(t))


def structural_eq(t1: Term, t2: Term) -> bool:
    return t1 == t2


# Declarations and the signature.


@dataclass(frozen=True, slots=True)
class DefDecl:
    name: str
    unfold_set: tuple[str, ...]
    ty: Term
    body: Term
    atom: Atom


@dataclass(frozen=True, slots=True)
class RecordDecl:
    name: str
    fields: tuple[tuple[str, Term], ...]

    def field_names(self) -> tuple[str, ...]:
        return tuple(f for f, _ in self.fields)


@dataclass(frozen=True, slots=True)
class AtomDecl:
    name: str
    atom: Atom


Declaration = Union[DefDecl, RecordDecl, AtomDecl]


@dataclass(frozen=True)
class Signature:
    """The global environment. Treat as immutable; extension returns a new value."""

    decls: tuple[Declaration, ...] = ()
    atoms: Mapping[str, Atom] = field(default_factory=dict)
    implications: frozenset[tuple[int, int]] = frozenset()

    @functools.cached_property
    def defs(self) -> dict[str, DefDecl]:
        return {d.name: d for d in self.decls if isinstance(d, DefDecl)}

    @functools.cached_property
    def records(self) -> dict[str, RecordDecl]:
        return {d.name: d for d in self.decls if isinstance(d, RecordDecl)}

    @functools.cached_property
    def atom_decls(self) -> dict[str, AtomDecl]:
        return {d.name: d for d in self.decls if isinstance(d, AtomDecl)}

    @functools.cached_property
    def atom_names(self) -> dict[int, str]:
        return {a.id: a.name for a in self.atoms.values()}

    @functools.cached_property
    def reach(self) -> list[int]:
        """Row ``i`` is the bitmask of atom ids reachable from atom ``i``."""
        from .logic import transitive_closure

        return transitive_closure(len(self.atoms), sorted(self.implications))

    def names(self) -> set[str]:
        return {d.name for d in self.decls}

    def lookup(self, name: str) -> Declaration | None:
        for d in self.decls:
            if d.name == name:
                return d
        return None

    def extend(self, decl: Declaration) -> Signature:
        out = dataclasses.replace(self, decls=self.decls + (decl,))
        if "reach" in self.__dict__:
            out.__dict__["reach"] = self.reach
        return out

    @functools.cached_property
    def _hash(self) -> int:
        return hash((self.decls, self.implications))

    def __hash__(self) -> int:
        return self._hash
