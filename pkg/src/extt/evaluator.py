"""Normalization by evaluation relative to a restriction of unfolding atoms.

Values are computed by a :class:`Machine`, which pairs a signature with a
closed restriction. A neutral remembers the restriction it was built under;
forcing it under a larger restriction replays its spine so that definitions
and clauses that have become available now compute. Restrictions only grow
as checking descends, so a stale value is never more unfolded than its
consumer allows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import logic
from .syntax import (
    Ann, App, AtomRef, DefRef, ExtTy, FieldProj, Fst, InS, KernelBug, Lam, Nat, NatRec,
    NewRecord, OutS, Pair, Pi, ProjExtTy, Prop, RecordTy, Sigma, Signature, Snd,
    Suc, Term, Truth, Type, Var, Zero,
)


class Value:
    __slots__ = ()


class Thunk:
    """A lazily computed value, forced at most once."""

    __slots__ = ("_fn", "_value")

    def __init__(self, fn: Callable[[], Value]):
        self._fn = fn
        self._value = None

    def force(self) -> Value:
        if self._fn is not None:
            self._value = self._fn()
            self._fn = None
        return self._value

    @classmethod
    def ready(cls, v: Value) -> Thunk:
        t = cls(None)
        t._value = v
        return t


@dataclass(frozen=True, slots=True, eq=False)
class Closure:
    env: tuple
    body: Term
    machine: Machine
    name: str = "x"

    def __call__(self, arg: Value) -> Value:
        return self.machine.eval(self.env + (arg,), self.body)


@dataclass(frozen=True, slots=True)
class VType(Value):
    pass


@dataclass(frozen=True, slots=True)
class VNat(Value):
    pass


@dataclass(frozen=True, slots=True)
class VZero(Value):
    pass


@dataclass(frozen=True, slots=True)
class VSuc(Value):
    pred: Value


@dataclass(frozen=True, slots=True, eq=False)
class VPi(Value):
    dom: Value
    cod: Closure


@dataclass(frozen=True, slots=True, eq=False)
class VLam(Value):
    body: Closure


@dataclass(frozen=True, slots=True, eq=False)
class VSigma(Value):
    fst: Value
    snd: Closure


@dataclass(frozen=True, slots=True)
class VPair(Value):
    a: Value
    b: Value


@dataclass(frozen=True, slots=True)
class VRecordTy(Value):
    name: str


@dataclass(frozen=True, slots=True)
class VNewRecord(Value):
    record: str
    fields: tuple[tuple[str, Value], ...]

    def get(self, name: str) -> Value:
        for f, v in self.fields:
            if f == name:
                return v
        raise KernelBug(f"record {self.record} has no field {name}")


@dataclass(frozen=True, slots=True, eq=False)
class VExtTy(Value):
    """Clause values live under the clause's proposition and are computed on demand."""

    base: Value
    clauses: tuple[tuple[Prop, Thunk], ...]


@dataclass(frozen=True, slots=True)
class VInS(Value):
    value: Value


@dataclass(frozen=True, slots=True)
class VProjExtTy(Value):
    record: str
    clauses: tuple[tuple[str, Value], ...]

    def get(self, name: str) -> Value | None:
        for f, v in self.clauses:
            if f == name:
                return v
        return None


class Neutral:
    __slots__ = ()


@dataclass(frozen=True, slots=True, eq=False)
class VNeutral(Value):
    """A blocked computation. ``ty`` is None only for untyped read-back."""

    ty: Value | None
    ne: Neutral
    r: frozenset = field(default=frozenset(), compare=False)


@dataclass(frozen=True, slots=True)
class NVar(Neutral):
    level: int


@dataclass(frozen=True, slots=True)
class NDef(Neutral):
    name: str


@dataclass(frozen=True, slots=True, eq=False)
class NApp(Neutral):
    fn: VNeutral
    arg: Value


@dataclass(frozen=True, slots=True, eq=False)
class NFst(Neutral):
    pair: VNeutral


@dataclass(frozen=True, slots=True, eq=False)
class NSnd(Neutral):
    pair: VNeutral


@dataclass(frozen=True, slots=True, eq=False)
class NNatRec(Neutral):
    motive: Value
    base: Value
    step: Value
    target: VNeutral


@dataclass(frozen=True, slots=True, eq=False)
class NFieldProj(Neutral):
    target: VNeutral
    field: str


@dataclass(frozen=True, slots=True, eq=False)
class NOutS(Neutral):
    target: VNeutral


# Placeholder for patch fields that a clause's type never mentions.
_UNASSIGNED = VNeutral(VType(), NVar(-1))

# Type of the step function of natrec, closed over the motive: (k : Nat) -> M k -> M (suc k).
_STEP_TY = Pi(Nat(), Pi(App(Var(1), Var(0)), App(Var(2), Suc(Var(1))), "acc"), "k")


class IllFormedEnvironment(KernelBug):
    pass


class NotAFunction(KernelBug):
    pass


class Machine:
    """Evaluation state: a signature and a closed restriction."""

    __slots__ = ("sig", "r", "_restricted")

    def __init__(self, sig: Signature, r: frozenset = frozenset()):
        self.sig = sig
        self.r = frozenset(r)
        self._restricted: dict = {}

    @classmethod
    def closed(cls, sig: Signature, atoms=()) -> Machine:
        return cls(sig, logic.closure(sig, atoms))

    def entails(self, p: Prop) -> bool:
        return isinstance(p, Truth) or p.id in self.r

    def restrict(self, p: Prop) -> Machine:
        if self.entails(p):
            return self
        m = self._restricted.get(p)
        if m is None:
            m = self._restricted[p] = Machine(self.sig, logic.restrict(self.sig, self.r, p))
        return m

    def restrict_all(self, props: Sequence[Prop]) -> Machine:
        m = self
        for p in props:
            m = m.restrict(p)
        return m

    # Evaluation.

    def eval(self, env: tuple, t: Term) -> Value:
        match t:
            case Var(i):
                if not 0 <= i < len(env):
                    raise IllFormedEnvironment(f"index {i} in environment of length {len(env)}")
                return env[-1 - i]
            case Type():
                return VType()
            case Nat():
                return VNat()
            case Zero():
                return VZero()
            case Suc(p):
                return VSuc(self.eval(env, p))
            case Pi(dom, cod, name):
                return VPi(self.eval(env, dom), Closure(env, cod, self, name))
            case Lam(body, name):
                return VLam(Closure(env, body, self, name))
            case App(f, a):
                return self.apply(self.eval(env, f), self.eval(env, a))
            case Sigma(a, b, name):
                return VSigma(self.eval(env, a), Closure(env, b, self, name))
            case Pair(a, b):
                return VPair(self.eval(env, a), self.eval(env, b))
            case Fst(p):
                return self.fst(self.eval(env, p))
            case Snd(p):
                return self.snd(self.eval(env, p))
            case NatRec(m, z, s, n):
                return self.natrec(self.eval(env, m), self.eval(env, z), self.eval(env, s), self.eval(env, n))
            case DefRef(name):
                return self.def_ref(name)
            case RecordTy(name):
                return VRecordTy(name)
            case NewRecord(rec, fs):
                return VNewRecord(rec, tuple((f, self.eval(env, u)) for f, u in fs))
            case FieldProj(x, f):
                return self.proj(self.eval(env, x), f)
            case ExtTy(base, cls):
                return VExtTy(self.eval(env, base), tuple((p, self._clause_thunk(p, env, u)) for p, u in cls))
            case InS(x):
                return VInS(self.eval(env, x))
            case OutS(x):
                return self.out(self.eval(env, x))
            case ProjExtTy(rec, cls):
                return VProjExtTy(rec, tuple((f, self.eval(env, u)) for f, u in cls))
            case Ann(x, _):
                return self.eval(env, x)
        raise KernelBug(f"cannot evaluate {t!r}")

    def _clause_thunk(self, p: Prop, env: tuple, u: Term) -> Thunk:
        m = self.restrict(p)
        return Thunk(lambda: m.eval(env, u))

    def instantiate(self, c: Closure, arg: Value) -> Value:
        # Evaluate under whichever restriction is larger; they are always comparable in practice.
        m = self if c.machine.r <= self.r else c.machine
        return m.eval(c.env + (arg,), c.body)

    def def_type(self, name: str) -> VExtTy:
        """``f : {A | phi_f |> body}``."""
        d = self.sig.defs[name]
        p = AtomRef(d.atom.id)
        return VExtTy(self.eval((), d.ty), ((p, self._clause_thunk(p, (), d.body)),))

    def def_ref(self, name: str) -> Value:
        d = self.sig.defs.get(name)
        if d is None:
            raise KernelBug(f"unknown definition {name}")
        if d.atom.id in self.r:
            return VInS(self.eval((), d.body))
        return VNeutral(self.def_type(name), NDef(name), self.r)

    def apply(self, f: Value, a: Value) -> Value:
        f = self.force(f)
        match f:
            case VLam(c):
                return self.instantiate(c, a)
            case VNeutral(ty, _):
                if ty is None:
                    return VNeutral(None, NApp(f, a), self.r)
                pi = self.force(ty)
                if not isinstance(pi, VPi):
                    raise NotAFunction(f"neutral of non-function type {pi!r}")
                return VNeutral(self.instantiate(pi.cod, a), NApp(f, a), self.r)
        raise NotAFunction(f"cannot apply {f!r}")

    def fst(self, p: Value) -> Value:
        p = self.force(p)
        match p:
            case VPair(a, _):
                return a
            case VNeutral(ty, _):
                sig = None if ty is None else self.force(ty)
                if sig is not None and not isinstance(sig, VSigma):
                    raise KernelBug(f"fst of neutral at {sig!r}")
                return VNeutral(None if sig is None else sig.fst, NFst(p), self.r)
        raise KernelBug(f"fst of {p!r}")

    def snd(self, p: Value) -> Value:
        p = self.force(p)
        match p:
            case VPair(_, b):
                return b
            case VNeutral(ty, _):
                sig = None if ty is None else self.force(ty)
                if sig is not None and not isinstance(sig, VSigma):
                    raise KernelBug(f"snd of neutral at {sig!r}")
                ty2 = None if sig is None else self.instantiate(sig.snd, self.fst(p))
                return VNeutral(ty2, NSnd(p), self.r)
        raise KernelBug(f"snd of {p!r}")

    def natrec(self, motive: Value, base: Value, step: Value, n: Value) -> Value:
        n = self.force(n)
        # Peel successors iteratively, then fold back up.
        preds = []
        while isinstance(n, VSuc):
            preds.append(n.pred)
            n = self.force(n.pred)
        match n:
            case VZero():
                acc = base
            case VNeutral():
                acc = VNeutral(self.apply(motive, n), NNatRec(motive, base, step, n), self.r)
            case _:
                raise KernelBug(f"natrec on {n!r}")
        for k in reversed(preds):
            acc = self.apply(self.apply(step, k), acc)
        return acc

    def step_type(self, motive: Value) -> Value:
        return self.eval((motive,), _STEP_TY)

    def out(self, v: Value) -> Value:
        v = self.force(v)
        match v:
            case VInS(w):
                return w
            case VNeutral(None, _):
                return VNeutral(None, NOutS(v), self.r)
            case VNeutral(ty, _):
                ty = self.force(ty)
                match ty:
                    case VExtTy(base, cls):
                        for p, u in cls:
                            if self.entails(p):
                                return self.force(u.force())
                        return VNeutral(base, NOutS(v), self.r)
                    case VProjExtTy(rec, _):
                        return VNeutral(VRecordTy(rec), NOutS(v), self.r)
                raise KernelBug(f"outS of neutral at {ty!r}")
        raise KernelBug(f"outS of {v!r}")

    def proj(self, v: Value, name: str) -> Value:
        v = self.force(v)
        match v:
            case VNewRecord():
                return v.get(name)
            case VInS(w):
                return self.proj(w, name)
            case VNeutral(ty, ne):
                if ty is None:
                    return VNeutral(None, NFieldProj(v, name), self.r)
                ty = self.force(ty)
                match ty:
                    case VProjExtTy(rec, _):
                        hit = ty.get(name)
                        if hit is not None:
                            return self.force(hit)
                    case VRecordTy(rec):
                        # outS of a patched record still projects definitionally.
                        if isinstance(ne, NOutS) and ne.target.ty is not None:
                            inner = self.force(ne.target.ty)
                            if isinstance(inner, VProjExtTy):
                                hit = inner.get(name)
                                if hit is not None:
                                    return self.force(hit)
                    case _:
                        raise KernelBug(f"projection from neutral at {ty!r}")
                return VNeutral(self.field_type(rec, v, name), NFieldProj(v, name), self.r)
        raise KernelBug(f"projection .{name} from {v!r}")

    def field_type(self, rec: str, v: Value, name: str) -> Value:
        """Type of field ``name`` of ``v``, with earlier fields taken from ``v`` itself."""
        env: tuple = ()
        for f, fty in self.sig.records[rec].fields:
            if f == name:
                return self.eval(env, fty)
            env += (self.proj(v, f),)
        raise KernelBug(f"record {rec} has no field {name}")

    def record_field_types(self, rec: str, known: dict) -> list[tuple[str, Value]]:
        """Field types of ``rec`` where earlier fields are ``known[f]`` when given."""
        env: tuple = ()
        out = []
        for f, fty in self.sig.records[rec].fields:
            out.append((f, self.eval(env, fty)))
            env += (known.get(f, _UNASSIGNED),)
        return out

    # Forcing stale neutrals.

    def force(self, v: Value) -> Value:
        if isinstance(v, VNeutral) and v.r is not self.r and v.r < self.r:
            return self._replay(v)
        return v

    def _replay(self, v: VNeutral) -> Value:
        match v.ne:
            case NVar():
                return VNeutral(v.ty, v.ne, self.r)
            case NDef(name):
                return self.def_ref(name)
            case NApp(f, a):
                return self.apply(self.force(f), a)
            case NFst(p):
                return self.fst(self.force(p))
            case NSnd(p):
                return self.snd(self.force(p))
            case NNatRec(m, z, s, n):
                return self.natrec(m, z, s, self.force(n))
            case NFieldProj(x, name):
                return self.proj(self.force(x), name)
            case NOutS(x):
                return self.out(self.force(x))
        raise KernelBug(f"unknown neutral {v.ne!r}")

    # Read-back.

    def fresh(self, depth: int, ty: Value | None) -> VNeutral:
        return VNeutral(ty, NVar(depth), self.r)

    def quote(self, depth: int, v: Value, ty: Value | None = None) -> Term:
        """Read ``v`` back to a normal term. With a type, eta-expands functions
        and pairs and reads extension-typed values in canonical form."""
        v = self.force(v)
        if ty is None:
            if isinstance(v, VNeutral) and v.ty is not None:
                return self.quote(depth, v, v.ty)
            return self._quote_untyped(depth, v)
        ty = self.force(ty)
        match ty:
            case VPi(dom, cod):
                x = self.fresh(depth, dom)
                name = v.body.name if isinstance(v, VLam) else cod.name
                return Lam(self.quote(depth + 1, self.apply(v, x), self.instantiate(cod, x)), name)
            case VSigma(a_ty, b_ty):
                a = self.fst(v)
                return Pair(self.quote(depth, a, a_ty), self.quote(depth, self.snd(v), self.instantiate(b_ty, a)))
            case VExtTy(base, cls):
                w = self.out(v)
                if not any(self.entails(p) for p, _ in cls) and isinstance(w, VNeutral) and isinstance(w.ne, NOutS):
                    inner = w.ne.target
                    if inner.ty is not None:
                        from .conversion import conv_type

                        if conv_type(self, depth, inner.ty, ty):
                            return self.quote_neutral(depth, inner)
                return InS(self.quote(depth, w, base))
            case VProjExtTy(rec, _):
                w = self.out(v)
                if isinstance(w, VNeutral) and isinstance(w.ne, NOutS) and w.ne.target.ty is not None:
                    from .conversion import conv_type

                    if conv_type(self, depth, w.ne.target.ty, ty):
                        return self.quote_neutral(depth, w.ne.target)
                return InS(self.quote(depth, w, VRecordTy(rec)))
            case VType():
                return self.quote_type(depth, v)
            case VNat():
                return self._quote_nat(depth, v)
            case VRecordTy(rec):
                if isinstance(v, VNewRecord):
                    known: dict = {}
                    fields = []
                    for (f, fty_term), (_, fv) in zip(self.sig.records[rec].fields, v.fields):
                        fty = self.eval(tuple(known.values()), fty_term)
                        fields.append((f, self.quote(depth, fv, fty)))
                        known[f] = fv
                    return NewRecord(rec, tuple(fields))
        if isinstance(v, VNeutral):
            return self.quote_neutral(depth, v)
        return self._quote_untyped(depth, v)

    def _quote_nat(self, depth: int, v: Value) -> Term:
        n = 0
        while isinstance(v, VSuc):
            v, n = self.force(v.pred), n + 1
        match v:
            case VZero():
                t: Term = Zero()
            case VNeutral():
                t = self.quote_neutral(depth, v)
            case _:
                t = self._quote_untyped(depth, v)
        for _ in range(n):
            t = Suc(t)
        return t

    def _quote_untyped(self, depth: int, v: Value) -> Term:
        match v:
            case VLam(c):
                x = self.fresh(depth, None)
                return Lam(self.quote(depth + 1, self.instantiate(c, x)), c.name)
            case VPair(a, b):
                return Pair(self.quote(depth, a), self.quote(depth, b))
            case VZero() | VSuc():
                return self._quote_nat(depth, v)
            case VNewRecord(rec, fs):
                return NewRecord(rec, tuple((f, self.quote(depth, u)) for f, u in fs))
            case VInS(w):
                return InS(self.quote(depth, w))
            case VNeutral():
                return self.quote_neutral(depth, v)
        return self.quote_type(depth, v)

    def quote_type(self, depth: int, v: Value) -> Term:
        v = self.force(v)
        match v:
            case VType():
                return Type()
            case VNat():
                return Nat()
            case VRecordTy(name):
                return RecordTy(name)
            case VPi(dom, cod):
                x = self.fresh(depth, dom)
                return Pi(self.quote_type(depth, dom), self.quote_type(depth + 1, self.instantiate(cod, x)), cod.name)
            case VSigma(a, b):
                x = self.fresh(depth, a)
                return Sigma(self.quote_type(depth, a), self.quote_type(depth + 1, self.instantiate(b, x)), b.name)
            case VExtTy(base, cls):
                return ExtTy(
                    self.quote_type(depth, base),
                    tuple((p, self.restrict(p).quote(depth, u.force(), base)) for p, u in cls),
                )
            case VProjExtTy(rec, cls):
                tys = dict(self.record_field_types(rec, dict(cls)))
                return ProjExtTy(rec, tuple((f, self.quote(depth, u, tys[f])) for f, u in cls))
            case VNeutral():
                return self.quote_neutral(depth, v)
        raise KernelBug(f"not a type: {v!r}")

    def quote_neutral(self, depth: int, v: VNeutral) -> Term:
        match v.ne:
            case NVar(level):
                return Var(depth - 1 - level)
            case NDef(name):
                return DefRef(name)
            case NApp(f, a):
                dom = None
                if f.ty is not None:
                    pi = self.force(f.ty)
                    dom = pi.dom if isinstance(pi, VPi) else None
                return App(self.quote_neutral(depth, f), self.quote(depth, a, dom))
            case NFst(p):
                return Fst(self.quote_neutral(depth, p))
            case NSnd(p):
                return Snd(self.quote_neutral(depth, p))
            case NNatRec(m, z, s, n):
                motive_ty = VPi(VNat(), Closure((), Type(), self, "n"))
                return NatRec(
                    self.quote(depth, m, motive_ty),
                    self.quote(depth, z, self.apply(m, VZero())),
                    self.quote(depth, s, self.step_type(m)),
                    self.quote_neutral(depth, n),
                )
            case NFieldProj(x, name):
                return FieldProj(self.quote_neutral(depth, x), name)
            case NOutS(x):
                return OutS(self.quote_neutral(depth, x))
        raise KernelBug(f"unknown neutral {v.ne!r}")


@dataclass(frozen=True)
class Context:
    """A telescope of typed variables plus the active restriction."""

    sig: Signature
    restriction: frozenset = frozenset()
    names: tuple[str, ...] = ()
    types: tuple[Value, ...] = ()

    @property
    def depth(self) -> int:
        return len(self.types)

    @property
    def machine(self) -> Machine:
        m = self.__dict__.get("_machine")
        if m is None:
            m = Machine(self.sig, self.restriction)
            object.__setattr__(self, "_machine", m)
        return m

    @property
    def env(self) -> tuple:
        m = self.machine
        return tuple(m.fresh(i, ty) for i, ty in enumerate(self.types))

    def bind(self, name: str, ty: Value) -> Context:
        return Context(self.sig, self.restriction, self.names + (name,), self.types + (ty,))

    def restrict(self, p: Prop) -> Context:
        r = logic.restrict(self.sig, self.restriction, p)
        if r == self.restriction:
            return self
        return Context(self.sig, r, self.names, self.types)

    def eval(self, t: Term) -> Value:
        return self.machine.eval(self.env, t)

    def quote(self, v: Value, ty: Value | None = None) -> Term:
        return self.machine.quote(self.depth, v, ty)

    def lookup(self, name: str) -> tuple[int, Value] | None:
        for lvl in range(len(self.names) - 1, -1, -1):
            if self.names[lvl] == name:
                return len(self.names) - 1 - lvl, self.types[lvl]
        return None


def eval(sig: Signature, r: frozenset, env: Sequence[Value], t: Term) -> Value:  # noqa: A001
    return Machine.closed(sig, r).eval(tuple(env), t)


def apply(fn: Value, arg: Value) -> Value:
    match fn:
        case VLam(c):
            return c(arg)
        case VNeutral(ty, _, r):
            if ty is None:
                return VNeutral(None, NApp(fn, arg), r)
            if isinstance(ty, VPi):
                return VNeutral(ty.cod(arg), NApp(fn, arg), r)
    raise NotAFunction(f"cannot apply {fn!r}")


def quote(sig: Signature, r: frozenset, depth: int, v: Value, ty: Value | None = None) -> Term:
    return Machine.closed(sig, r).quote(depth, v, ty)


def normalize(sig: Signature, r: frozenset, ctx: Context, t: Term, ty: Value | None = None) -> Term:
    """Normal form of ``t`` relative to ``r``; opaque definitions stay as heads.

    ``r`` need not be closed under implication. Without ``ty`` the type is
    inferred by the kernel when possible.
    """
    ctx = Context(sig, logic.closure(sig, r), ctx.names, ctx.types)
    if ty is None:
        from .kernel import CannotInfer, infer_core

        try:
            ty = infer_core(ctx, t)
        except CannotInfer:
            ty = None
    return ctx.quote(ctx.eval(t), ty)
