"""Reference implementations the test suite checks the kernel against.

Nothing here touches the evaluator, conversion checker or prop-logic fast
path: the small-step normalizer works by substitution on core terms and
decides entailment with its own boolean matrix.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .syntax import (
    Ann, App, AtomRef, DefRef, ExtTy, FieldProj, Fst, InS, Lam, Nat, NatRec, NewRecord, OutS,
    Pair, Pi, ProjExtTy, Prop, RecordTy, Sigma, Signature, Snd, Suc, Term, Truth, Type,
    Var, Zero, map_vars, shift, subst,
)


class StuckTerm(Exception):
    """An elimination met a value of the wrong shape: the kernel and oracle disagree."""


def reach_matrix(n: int, edges: Iterable[tuple[int, int]]) -> list[list[bool]]:
    m = [[i == j for j in range(n)] for i in range(n)]
    for a, b in edges:
        m[a][b] = True
    for k in range(n):
        for i in range(n):
            if m[i][k]:
                row_i, row_k = m[i], m[k]
                for j in range(n):
                    if row_k[j]:
                        row_i[j] = True
    return m


def brute_entails(edges: Iterable[tuple[int, int]], r: Iterable[int], atom: int) -> bool:
    edges, r = list(edges), list(r)
    n = 1 + max([atom, *r, *(x for e in edges for x in e)])
    m = reach_matrix(n, edges)
    return any(m[a][atom] for a in r)


class SmallStep:
    """Head reduction to weak-head normal form, then normalization of subterms."""

    def __init__(self, sig: Signature, r: Iterable[int]):
        self.sig = sig
        self.r = frozenset(r)
        m = reach_matrix(len(sig.atoms), sig.implications)
        self.allowed = frozenset(j for j in range(len(sig.atoms)) if any(m[i][j] for i in self.r))

    def holds(self, p: Prop) -> bool:
        return isinstance(p, Truth) or p.id in self.allowed

    def under(self, p: Prop) -> SmallStep:
        if self.holds(p):
            return self
        return SmallStep(self.sig, self.allowed | {p.id})

    def step(self, t: Term) -> Term | None:
        match t:
            case Ann(x, _):
                return x
            case App(f, a):
                if isinstance(f, Lam):
                    return subst(f.body, a)
                _expect_neutral_or_redex(f, "application")
                s = self.step(f)
                return None if s is None else App(s, a)
            case Fst(p) | Snd(p):
                if isinstance(p, Pair):
                    return p.a if isinstance(t, Fst) else p.b
                _expect_neutral_or_redex(p, "projection")
                s = self.step(p)
                return None if s is None else type(t)(s)
            case NatRec(m, z, s, n):
                if isinstance(n, Zero):
                    return z
                if isinstance(n, Suc):
                    return App(App(s, n.pred), NatRec(m, z, s, n.pred))
                _expect_neutral_or_redex(n, "natrec")
                sn = self.step(n)
                return None if sn is None else NatRec(m, z, s, sn)
            case DefRef(name):
                d = self.sig.defs[name]
                return InS(d.body) if d.atom.id in self.allowed else None
            case OutS(x):
                if isinstance(x, InS):
                    return x.term
                _expect_neutral_or_redex(x, "outS")
                s = self.step(x)
                if s is not None:
                    return OutS(s)
                ty = self.type_of_stuck(x)
                if isinstance(ty, ExtTy):
                    for p, u in ty.clauses:
                        if self.holds(p):
                            return u
                return None
            case FieldProj(x, f):
                if isinstance(x, NewRecord):
                    return dict(x.fields)[f]
                if isinstance(x, InS):
                    return FieldProj(x.term, f)
                _expect_neutral_or_redex(x, "field projection")
                s = self.step(x)
                if s is not None:
                    return FieldProj(s, f)
                ty = self.type_of_stuck(x)
                if isinstance(ty, RecordTy) and isinstance(x, OutS):
                    ty = self.type_of_stuck(x.term)
                if isinstance(ty, ProjExtTy):
                    hit = dict(ty.clauses).get(f)
                    if hit is not None:
                        return hit
                return None
        return None

    def whnf(self, t: Term) -> Term:
        while True:
            s = self.step(t)
            if s is None:
                return t
            t = s

    def type_of_stuck(self, t: Term) -> Term | None:
        """Weak-head normal type of a stuck term, or None when its head is a variable."""
        match t:
            case DefRef(name):
                d = self.sig.defs[name]
                return ExtTy(d.ty, ((AtomRef(d.atom.id), d.body),))
            case OutS(x):
                ty = self._whnf_opt(self.type_of_stuck(x))
                if isinstance(ty, ExtTy):
                    return self.whnf(ty.base)
                if isinstance(ty, ProjExtTy):
                    return RecordTy(ty.record)
            case App(f, a):
                ty = self._whnf_opt(self.type_of_stuck(f))
                if isinstance(ty, Pi):
                    return self.whnf(subst(ty.cod, a))
            case Fst(p) | Snd(p):
                ty = self._whnf_opt(self.type_of_stuck(p))
                if isinstance(ty, Sigma):
                    return self.whnf(ty.fst if isinstance(t, Fst) else subst(ty.snd, Fst(p)))
            case NatRec(m, _, _, n):
                return self.whnf(App(m, n))
            case FieldProj(x, f):
                ty = self._whnf_opt(self.type_of_stuck(x))
                if isinstance(ty, (RecordTy, ProjExtTy)):
                    rec = ty.name if isinstance(ty, RecordTy) else ty.record
                    return self.whnf(self._field_type(rec, x, f))
        return None

    def _whnf_opt(self, t: Term | None) -> Term | None:
        return None if t is None else self.whnf(t)

    def _field_type(self, rec: str, x: Term, f: str) -> Term:
        fields = self.sig.records[rec].fields
        names = [n for n, _ in fields]
        k = names.index(f)

        def fn(i: int, d: int) -> Term:
            if i < d:
                return Var(i)
            return FieldProj(shift(x, d), names[k - 1 - (i - d)])

        return map_vars(fields[k][1], fn)

    def normalize(self, t: Term) -> Term:
        t = self.whnf(t)
        n = 0
        while isinstance(t, Suc):
            t, n = self.whnf(t.pred), n + 1
        out = self._children(t)
        for _ in range(n):
            out = Suc(out)
        return out

    def _children(self, t: Term) -> Term:
        nf = self.normalize
        match t:
            case Lam(b, name):
                return Lam(nf(b), name)
            case Pi(a, b, name):
                return Pi(nf(a), nf(b), name)
            case Sigma(a, b, name):
                return Sigma(nf(a), nf(b), name)
            case App(f, a):
                return App(nf(f), nf(a))
            case Pair(a, b):
                return Pair(nf(a), nf(b))
            case Fst(p):
                return Fst(nf(p))
            case Snd(p):
                return Snd(nf(p))
            case NatRec(m, z, s, n):
                return NatRec(nf(m), nf(z), nf(s), nf(n))
            case NewRecord(rec, fs):
                return NewRecord(rec, tuple((f, nf(u)) for f, u in fs))
            case FieldProj(x, f):
                return FieldProj(nf(x), f)
            case ExtTy(base, cls):
                return ExtTy(nf(base), tuple((p, self.under(p).normalize(u)) for p, u in cls))
            case InS(x):
                return InS(nf(x))
            case OutS(x):
                return OutS(nf(x))
            case ProjExtTy(rec, cls):
                return ProjExtTy(rec, tuple((f, nf(u)) for f, u in cls))
        return t


_CANONICAL = (Zero, Suc, Lam, Pair, NewRecord, Type, Nat, Pi, Sigma, RecordTy, ExtTy, ProjExtTy)


def _expect_neutral_or_redex(t: Term, what: str) -> None:
    if isinstance(t, _CANONICAL):
        raise StuckTerm(f"{what} of {type(t).__name__}: {t!r}")


def smallstep_normalize(sig: Signature, r: Iterable[int], t: Term) -> Term:
    return SmallStep(sig, r).normalize(t)


# Well-typed term generation.

PRELUDE = """\
atom encode
def one : Nat := suc zero
def two unfolding (one) : Nat := suc one
def dbl : Nat -> Nat := \\n. natrec (\\_. Nat) zero (\\k acc. suc (suc acc)) n
def add : Nat -> Nat -> Nat := \\a b. natrec (\\_. Nat) a (\\k acc. suc acc) b
def quad unfolding (dbl) : Nat -> Nat := \\n. dbl (dbl n)
def pinned : {Nat | tt |> two} := two
def gated unfolding (one) : {Nat | encode |> suc zero} := one
record Pt where { px : Nat; py : Nat; }
def origin : Pt := new Pt { px := zero, py := zero }
def shifted unfolding (origin) : Pt { px := zero } := origin
"""

FORMERS = frozenset({
    "var", "global", "suc", "beta", "natrec", "pair", "record", "patch", "ext", "call",
})

_LEAF_GLOBALS = ("one", "two", "pinned", "gated", "origin.px", "shifted.px", "shifted.py")


@dataclass(frozen=True)
class GenConfig:
    max_depth: int = 3
    seed: int = 0
    enabled_formers: frozenset = field(default=FORMERS)


class TermGen:
    """Emit closed, well-typed surface terms of type ``Nat`` over :data:`PRELUDE`.

    ``choose(n)`` returns an index in ``range(n)``; lower indices should be
    simpler so that shrinking choosers minimize toward small terms.
    """

    def __init__(self, choose: Callable[[int], int], config: GenConfig = GenConfig()):
        self.choose = choose
        self.config = config
        self._fresh = 0

    @classmethod
    def seeded(cls, config: GenConfig) -> TermGen:
        rng = random.Random(config.seed)
        return cls(lambda n: rng.randrange(n), config)

    def pick(self, options: Sequence):
        return options[self.choose(len(options))]

    def name(self, stem: str) -> str:
        self._fresh += 1
        return f"{stem}{self._fresh}"

    def nat(self, depth: int | None = None, scope: tuple[str, ...] = ()) -> str:
        if depth is None:
            depth = self.config.max_depth
        on = self.config.enabled_formers
        leaves = [lambda: "zero"]
        if scope and "var" in on:
            leaves.append(lambda: self.pick(scope))
        if "global" in on:
            leaves.append(lambda: self.pick(_LEAF_GLOBALS))
        nodes = []
        if depth > 0:
            sub = lambda: self.nat(depth - 1, scope)  # noqa: E731
            if "suc" in on:
                nodes.append(lambda: f"suc ({sub()})")
            if "beta" in on:
                def beta():
                    v = self.name("v")
                    return f"((\\{v}. {self.nat(depth - 1, scope + (v,))}) : Nat -> Nat) ({sub()})"
                nodes.append(beta)
            if "natrec" in on:
                def natrec():
                    k, acc = self.name("k"), self.name("acc")
                    step = self.nat(depth - 1, scope + (k, acc))
                    return f"natrec (\\_. Nat) ({sub()}) (\\{k} {acc}. {step}) ({sub()})"
                nodes.append(natrec)
            if "pair" in on:
                nodes.append(lambda: f"{self.pick(('fst', 'snd'))} (({sub()}, {sub()}) : Sig (p : Nat) . Nat)")
            if "record" in on:
                nodes.append(lambda: f"(new Pt {{ px := {sub()}, py := {sub()} }}).{self.pick(('px', 'py'))}")
            if "patch" in on:
                def patch():
                    a = sub()
                    return f"((new Pt {{ px := {a}, py := {sub()} }}) : Pt {{ px := {a} }}).{self.pick(('px', 'py'))}"
                nodes.append(patch)
            if "ext" in on:
                def ext():
                    a = sub()
                    return f"outS (({a}) : {{Nat | {self.pick(('tt', 'encode'))} |> {a}}})"
                nodes.append(ext)
            if "call" in on:
                nodes.append(lambda: f"{self.pick(('dbl', 'quad'))} ({sub()})")
                nodes.append(lambda: f"add ({sub()}) ({sub()})")
        if nodes and self.choose(3) != 0:
            return self.pick(nodes)()
        return self.pick(leaves)()

    def restriction(self, sig: Signature) -> frozenset[int]:
        return frozenset(a.id for a in sig.atoms.values() if self.choose(2))
