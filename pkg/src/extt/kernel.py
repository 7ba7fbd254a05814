"""Bidirectional checker for core terms.

The elaborator produces fully explicit core terms (every ``inS``/``outS`` is
written out), so this checker never coerces: conversion is strict.
"""

from __future__ import annotations

from .conversion import conv_type, conv_value
from .errors import (
    BoundaryMismatch, CannotInfer, DuplicateField, FieldTypeMismatch,
    MissingField, PatchDependency, ProjBoundaryMismatch, ShapeMismatch, TypeMismatch,
    UnboundName, UnknownField,
)
from .evaluator import (
    Context, VExtTy, VNat, VPi, VProjExtTy, VRecordTy, VSigma, VType, VZero, Value,
)
from .printer import Printer
from .syntax import (
    Ann, App, DefRef, ExtTy, FieldProj, Fst, InS, Lam, Nat, NatRec, NewRecord, OutS, Pair, Pi,
    ProjExtTy, RecordTy, Sigma, Snd, Suc, Term, Type, Var, Zero, free_vars,
)

_MOTIVE_TY = Pi(Nat(), Type(), "n")


def show_value(ctx: Context, v: Value, ty: Value | None = None) -> str:
    return Printer(ctx.sig, ctx.names).term(ctx.quote(v, ty))


def show_type(ctx: Context, v: Value) -> str:
    return Printer(ctx.sig, ctx.names).term(ctx.machine.quote_type(ctx.depth, v))


def restriction_note(ctx: Context) -> str:
    return f"restriction: {Printer(ctx.sig).restriction(ctx.restriction)}"


def mismatch(ctx: Context, expected: Value, actual: Value) -> TypeMismatch:
    return TypeMismatch(
        f"expected {show_type(ctx, expected)}, got {show_type(ctx, actual)}",
        notes=(restriction_note(ctx),),
    )


def infer_core(ctx: Context, t: Term) -> Value:
    m = ctx.machine
    match t:
        case Var(i):
            if not 0 <= i < ctx.depth:
                raise UnboundName(f"unbound index {i}")
            return ctx.types[-1 - i]
        case Type() | Nat() | RecordTy():
            if isinstance(t, RecordTy) and t.name not in ctx.sig.records:
                raise UnboundName(f"unknown record {t.name}")
            return VType()
        case Zero():
            return VNat()
        case Suc(p):
            check_core(ctx, p, VNat())
            return VNat()
        case Pi(dom, cod, name) | Sigma(dom, cod, name):
            check_core(ctx, dom, VType())
            check_core(ctx.bind(name, ctx.eval(dom)), cod, VType())
            return VType()
        case App(f, a):
            fty = m.force(infer_core(ctx, f))
            if not isinstance(fty, VPi):
                raise ShapeMismatch(f"expected a function, got a term of type {show_type(ctx, fty)}")
            check_core(ctx, a, fty.dom)
            return m.instantiate(fty.cod, ctx.eval(a))
        case Fst(p) | Snd(p):
            pty = m.force(infer_core(ctx, p))
            if not isinstance(pty, VSigma):
                raise ShapeMismatch(f"expected a pair, got a term of type {show_type(ctx, pty)}")
            if isinstance(t, Fst):
                return pty.fst
            return m.instantiate(pty.snd, m.fst(ctx.eval(p)))
        case NatRec(mot, z, s, n):
            check_core(ctx, mot, ctx.eval(_MOTIVE_TY))
            mv = ctx.eval(mot)
            check_core(ctx, z, m.apply(mv, VZero()))
            check_core(ctx, s, m.step_type(mv))
            check_core(ctx, n, VNat())
            return m.apply(mv, ctx.eval(n))
        case DefRef(name):
            if name not in ctx.sig.defs:
                raise UnboundName(f"unknown definition {name}")
            return m.def_type(name)
        case NewRecord(rec, fs):
            check_new_record(ctx, rec, fs)
            return VRecordTy(rec)
        case FieldProj(x, f):
            xty = m.force(infer_core(ctx, x))
            if not isinstance(xty, (VRecordTy, VProjExtTy)):
                raise ShapeMismatch(f"expected a record, got a term of type {show_type(ctx, xty)}")
            rec = xty.name if isinstance(xty, VRecordTy) else xty.record
            if f not in ctx.sig.records[rec].field_names():
                raise UnknownField(f"record {rec} has no field {f}")
            return m.field_type(rec, ctx.eval(x), f)
        case ExtTy(base, cls):
            check_core(ctx, base, VType())
            bv = ctx.eval(base)
            from .conversion import check_clauses_compat

            check_clauses_compat(ctx.sig, ctx, bv, cls)
            return VType()
        case OutS(x):
            xty = m.force(infer_core(ctx, x))
            if isinstance(xty, VExtTy):
                return xty.base
            if isinstance(xty, VProjExtTy):
                return VRecordTy(xty.record)
            raise ShapeMismatch(f"outS expects an extension type, got {show_type(ctx, xty)}")
        case ProjExtTy(rec, cls):
            check_patch_clauses(ctx, rec, cls)
            return VType()
        case Ann(x, ty):
            check_core(ctx, ty, VType())
            tv = ctx.eval(ty)
            check_core(ctx, x, tv)
            return tv
        case Lam() | Pair() | InS():
            raise CannotInfer(f"cannot infer the type of {type(t).__name__.lower()} without annotation")
    raise TypeError(f"not a term: {t!r}")


def check_new_record(ctx: Context, rec: str, fs) -> None:
    decl = ctx.sig.records.get(rec)
    if decl is None:
        raise UnboundName(f"unknown record {rec}")
    given = [f for f, _ in fs]
    for f in given:
        if f not in decl.field_names():
            raise UnknownField(f"record {rec} has no field {f}")
    if len(set(given)) != len(given):
        raise DuplicateField(f"field assigned twice in new {rec}")
    if given != list(decl.field_names()):
        missing = [f for f in decl.field_names() if f not in given]
        if missing:
            raise MissingField(f"new {rec} is missing field(s) {', '.join(missing)}")
        raise FieldTypeMismatch(f"fields of new {rec} must follow declaration order")
    env: tuple = ()
    for (f, fty), (_, u) in zip(decl.fields, fs):
        check_core(ctx, u, ctx.machine.eval(env, fty))
        env += (ctx.eval(u),)


def check_patch_clauses(ctx: Context, rec: str, cls) -> None:
    """Clauses of a projective extension type, checked in field order."""
    decl = ctx.sig.records.get(rec)
    if decl is None:
        raise UnboundName(f"unknown record {rec}")
    names = decl.field_names()
    assigned = dict(cls)
    if len(assigned) != len(cls):
        raise DuplicateField(f"field assigned twice in patch of {rec}")
    for f in assigned:
        if f not in names:
            raise UnknownField(f"record {rec} has no field {f}")
    known: dict = {}
    env: tuple = ()
    for idx, (f, fty) in enumerate(decl.fields):
        if f in assigned:
            for dep in free_vars(fty):
                earlier = names[idx - 1 - dep]
                if earlier not in assigned:
                    raise PatchDependency(
                        f"field {f} of {rec} depends on {earlier}, which the patch leaves unassigned"
                    )
            check_core(ctx, assigned[f], ctx.machine.eval(env, fty))
            known[f] = ctx.eval(assigned[f])
        env += (known.get(f, _unassigned()),)


def _unassigned():
    from .evaluator import _UNASSIGNED

    return _UNASSIGNED


def check_core(ctx: Context, t: Term, ty: Value) -> None:
    m = ctx.machine
    ty = m.force(ty)
    match t, ty:
        case Lam(body, name), VPi(dom, cod):
            x = m.fresh(ctx.depth, dom)
            check_core(ctx.bind(name, dom), body, m.instantiate(cod, x))
            return
        case Pair(a, b), VSigma(a_ty, b_ty):
            check_core(ctx, a, a_ty)
            check_core(ctx, b, m.instantiate(b_ty, ctx.eval(a)))
            return
        case InS(x), VExtTy(base, cls):
            check_core(ctx, x, base)
            check_boundary(ctx, x, base, cls)
            return
        case InS(x), VProjExtTy(rec, cls):
            check_core(ctx, x, VRecordTy(rec))
            check_proj_boundary(ctx, x, ty)
            return
        case (Lam(), _) | (Pair(), _) | (InS(), _):
            raise ShapeMismatch(f"{type(t).__name__.lower()} checked against {show_type(ctx, ty)}")
    actual = infer_core(ctx, t)
    if not conv_type(m, ctx.depth, actual, ty):
        raise mismatch(ctx, ty, actual)


def check_boundary(ctx: Context, t: Term, base: Value, cls) -> None:
    """``t`` agrees with every clause under the clause's proposition."""
    for i, (p, u) in enumerate(cls):
        sub = ctx.restrict(p)
        v = sub.eval(t)
        uv = u.force()
        if not conv_value(sub.machine, sub.depth, base, v, uv):
            pr = Printer(ctx.sig, ctx.names)
            raise BoundaryMismatch(
                i,
                f"boundary clause {i} ({pr.prop(p)} |> {show_value(sub, uv, base)}) is violated: "
                f"term is {show_value(sub, v, base)}",
                notes=(restriction_note(sub),),
            )


def check_proj_boundary(ctx: Context, t: Term, pty: VProjExtTy) -> None:
    m = ctx.machine
    v = ctx.eval(t)
    decl = ctx.sig.records[pty.record]
    for f in decl.field_names():
        u = pty.get(f)
        if u is None:
            continue
        fty = m.field_type(pty.record, v, f)
        got = m.proj(v, f)
        if not conv_value(m, ctx.depth, fty, got, u):
            raise ProjBoundaryMismatch(
                f,
                f"field {f} must be {show_value(ctx, u, fty)}, but is {show_value(ctx, got, fty)}",
                notes=(restriction_note(ctx),),
            )


__all__ = [
    "infer_core", "check_core", "check_boundary", "check_proj_boundary", "check_new_record",
    "check_patch_clauses", "show_value", "show_type", "mismatch",
]
