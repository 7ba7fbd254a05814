"""Bidirectional elaboration of surface syntax into core terms.

References to a definition ``f`` elaborate to ``outS f``: the global itself
inhabits ``{A | phi_f |> body}`` and only computes when the active
restriction entails ``phi_f``. Record patches ``R { f := u }`` and
positional patches ``R u ...`` elaborate to projective extension types.
``inS``/``outS`` are inserted wherever a term meets an extension type.
"""

from __future__ import annotations

from typing import Sequence

from . import logic
from .conversion import check_clauses_compat, conv_type
from .errors import (
    BoundaryMismatch, CannotInfer, ClauseIllTyped, DuplicateField, DuplicateName, ExttError,
    FieldTypeMismatch, MissingField, PatchArity, PatchDependency, ShapeMismatch, TypeMismatch,
    UnboundName, UnknownAtom, UnknownField, UnknownUnfoldTarget,
)
from .evaluator import (
    Context, VExtTy, VNat, VPi, VProjExtTy, VRecordTy, VSigma, VType, VZero, Value,
)
from .kernel import check_boundary, check_proj_boundary, mismatch, show_type
from .syntax import (
    TRUTH, Ann, App, AtomDecl, AtomRef, DefDecl, DefRef, ExtTy, FieldProj, Fst, InS, Lam, Nat,
    NatRec, NewRecord, OutS, Pair, Pi, ProjExtTy, Prop, RecordDecl, RecordTy, Sigma,
    Signature, Snd, Suc, Term, Type, Var, Zero, free_vars,
)
from .surface import (
    SAnn, SApp, SAtomDecl, SDecl, SDefDecl, SExt, SFst, SInS, SLam, SNat, SNatRec, SNew,
    SOutS, SPair, SPatch, SPi, SProj, SProp, SRecordDecl, SSigma, SSnd, SSuc, STerm, SType,
    SVar, SZero,
)

_MOTIVE_TY = Pi(Nat(), Type(), "n")


def atom_name(defname: str) -> str:
    return f"phi_{defname}"


def _at(s, fn):
    """Attach ``s``'s span to errors raised without one."""
    try:
        return fn()
    except ExttError as e:
        if e.span is None:
            e.span = getattr(s, "span", None)
        raise


def resolve_prop(sig: Signature, p: SProp) -> Prop:
    if p.name is None:
        return TRUTH
    atom = sig.atoms.get(p.name)
    if atom is None:
        raise UnknownAtom(f"unknown atom {p.name}", p.span)
    return AtomRef(atom.id)


def _strip(ctx: Context, t: Term, ty: Value) -> tuple[Term, Value]:
    """Insert ``outS`` until the type is no longer an extension type."""
    m = ctx.machine
    ty = m.force(ty)
    while True:
        if isinstance(ty, VExtTy):
            t, ty = OutS(t), m.force(ty.base)
        elif isinstance(ty, VProjExtTy):
            t, ty = OutS(t), VRecordTy(ty.record)
        else:
            return t, ty


def infer(ctx: Context, s: STerm) -> tuple[Term, Value]:
    return _at(s, lambda: _infer(ctx, s))


def _infer(ctx: Context, s: STerm) -> tuple[Term, Value]:
    sig, m = ctx.sig, ctx.machine
    match s:
        case SVar(name):
            local = ctx.lookup(name)
            if local is not None:
                return Var(local[0]), local[1]
            d = sig.lookup(name)
            if isinstance(d, DefDecl):
                return OutS(DefRef(name)), m.eval((), d.ty)
            if isinstance(d, RecordDecl):
                return RecordTy(name), VType()
            if isinstance(d, AtomDecl) or name in sig.atoms:
                raise UnboundName(f"{name} is an atom; atoms are propositions, not terms")
            raise UnboundName(f"unbound name {name}")
        case SType():
            return Type(), VType()
        case SNat():
            return Nat(), VType()
        case SZero():
            return Zero(), VNat()
        case SSuc(p):
            return Suc(check(ctx, p, VNat())), VNat()
        case SNatRec(mot, z, st, n):
            mt = check(ctx, mot, ctx.eval(_MOTIVE_TY))
            mv = ctx.eval(mt)
            zt = check(ctx, z, m.apply(mv, VZero()))
            stt = check(ctx, st, m.step_type(mv))
            nt = check(ctx, n, VNat())
            return NatRec(mt, zt, stt, nt), m.apply(mv, ctx.eval(nt))
        case SPi(name, dom, cod) | SSigma(name, dom, cod):
            dt = check(ctx, dom, VType())
            ct = check(ctx.bind(name or "_", ctx.eval(dt)), cod, VType())
            former = Pi if isinstance(s, SPi) else Sigma
            return former(dt, ct, name or "_"), VType()
        case SApp():
            head, args = _spine(s)
            if isinstance(head, SVar) and ctx.lookup(head.name) is None and head.name in sig.records:
                return elab_patch(ctx, head.name, args, positional=True), VType()
            ft, fty = infer(ctx, s.fn)
            ft, fty = _strip(ctx, ft, fty)
            if not isinstance(fty, VPi):
                raise ShapeMismatch(f"expected a function, got a term of type {show_type(ctx, fty)}", s.fn.span)
            at = check(ctx, s.arg, fty.dom)
            return App(ft, at), m.instantiate(fty.cod, ctx.eval(at))
        case SFst(p) | SSnd(p):
            pt, pty = infer(ctx, p)
            pt, pty = _strip(ctx, pt, pty)
            if not isinstance(pty, VSigma):
                raise ShapeMismatch(f"expected a pair, got a term of type {show_type(ctx, pty)}")
            if isinstance(s, SFst):
                return Fst(pt), pty.fst
            return Snd(pt), m.instantiate(pty.snd, m.fst(ctx.eval(pt)))
        case SExt(base, clauses):
            bt = check(ctx, base, VType())
            bv = ctx.eval(bt)
            core = []
            for i, (sp, u) in enumerate(clauses):
                p = resolve_prop(sig, sp)
                try:
                    core.append((p, check(ctx.restrict(p), u, bv)))
                except ExttError as e:
                    raise ClauseIllTyped(i, f"clause {i} is ill-typed: {e.message}", e.span, e.notes) from e
            check_clauses_compat(sig, ctx, bv, core, typecheck=False)
            return ExtTy(bt, tuple(core)), VType()
        case SOutS(x):
            xt, xty = infer(ctx, x)
            xty = m.force(xty)
            if isinstance(xty, VExtTy):
                return OutS(xt), xty.base
            if isinstance(xty, VProjExtTy):
                return OutS(xt), VRecordTy(xty.record)
            raise ShapeMismatch(f"outS expects an extension type, got {show_type(ctx, xty)}")
        case SPatch(rec, assigns):
            return elab_patch(ctx, rec, [(a.field, a.term) for a in assigns]), VType()
        case SNew(rec, assigns):
            return _elab_new(ctx, s), VRecordTy(rec)
        case SProj(x, f):
            xt, xty = infer(ctx, x)
            xty = m.force(xty)
            while isinstance(xty, VExtTy):
                xt, xty = OutS(xt), m.force(xty.base)
            if isinstance(xty, (VRecordTy, VProjExtTy)):
                rec = xty.name if isinstance(xty, VRecordTy) else xty.record
                if f not in sig.records[rec].field_names():
                    raise UnknownField(f"record {rec} has no field {f}")
                return FieldProj(xt, f), m.field_type(rec, ctx.eval(xt), f)
            raise ShapeMismatch(f"expected a record, got a term of type {show_type(ctx, xty)}")
        case SAnn(x, ty):
            tt = check(ctx, ty, VType())
            tv = ctx.eval(tt)
            return Ann(check(ctx, x, tv), tt), tv
        case SLam() | SPair() | SInS():
            raise CannotInfer(f"cannot infer the type of this {_former(s)}; add an annotation")
    raise TypeError(f"not a surface term: {s!r}")


def _former(s: STerm) -> str:
    return {SLam: "lambda", SPair: "pair", SInS: "inS"}.get(type(s), "term")


def _spine(s: STerm) -> tuple[STerm, list[STerm]]:
    args = []
    while isinstance(s, SApp):
        args.append(s.arg)
        s = s.fn
    return s, args[::-1]


def check(ctx: Context, s: STerm, expected: Value) -> Term:
    return _at(s, lambda: _check(ctx, s, expected))


def _check(ctx: Context, s: STerm, expected: Value) -> Term:
    m = ctx.machine
    exp = m.force(expected)
    match s, exp:
        case SInS(x), VExtTy():
            return check_ext_intro(ctx, x, exp)
        case SInS(x), VProjExtTy():
            return check_proj_ext_intro(ctx, x, exp)
        case SInS(), _:
            raise ShapeMismatch(f"inS checked against non-extension type {show_type(ctx, exp)}")
        case (SLam() | SPair()), VExtTy():
            return check_ext_intro(ctx, s, exp)
        case (SLam() | SPair() | SNew()), VProjExtTy():
            return check_proj_ext_intro(ctx, s, exp)
        case SLam(name, body), VPi(dom, cod):
            x = m.fresh(ctx.depth, dom)
            return Lam(check(ctx.bind(name, dom), body, m.instantiate(cod, x)), name)
        case SPair(a, b), VSigma(a_ty, b_ty):
            at = check(ctx, a, a_ty)
            return Pair(at, check(ctx, b, m.instantiate(b_ty, ctx.eval(at))))
        case SLam(), _:
            raise ShapeMismatch(f"lambda checked against non-function type {show_type(ctx, exp)}")
        case SPair(), _:
            raise ShapeMismatch(f"pair checked against non-pair type {show_type(ctx, exp)}")
    t, have = infer(ctx, s)
    return coerce(ctx, t, have, exp)


def coerce(ctx: Context, t: Term, have: Value, want: Value) -> Term:
    """Insert ``inS``/``outS`` so that ``t : have`` is accepted at ``want``."""
    m = ctx.machine

    def go(t: Term, have: Value, want: Value) -> Term | None:
        have, want = m.force(have), m.force(want)
        if conv_type(m, ctx.depth, have, want):
            return t
        if isinstance(have, VExtTy):
            return go(OutS(t), have.base, want)
        if isinstance(have, VProjExtTy):
            return go(OutS(t), VRecordTy(have.record), want)
        if isinstance(want, VExtTy):
            inner = go(t, have, want.base)
            if inner is None:
                return None
            check_boundary(ctx, inner, want.base, want.clauses)
            return InS(inner)
        if isinstance(want, VProjExtTy):
            inner = go(t, have, VRecordTy(want.record))
            if inner is None:
                return None
            check_proj_boundary(ctx, inner, want)
            return InS(inner)
        return None

    out = go(t, have, want)
    if out is None:
        raise mismatch(ctx, want, have)
    return out


def check_ext_intro(ctx: Context, s: STerm, extty: VExtTy) -> Term:
    if isinstance(s, SInS):
        s = s.term
    v = check(ctx, s, extty.base)
    _at(s, lambda: check_boundary(ctx, v, extty.base, extty.clauses))
    return InS(v)


def check_proj_ext_intro(ctx: Context, s: STerm, pty: VProjExtTy) -> Term:
    if isinstance(s, SInS):
        s = s.term
    r = check(ctx, s, VRecordTy(pty.record))
    _at(s, lambda: check_proj_boundary(ctx, r, pty))
    return InS(r)


def elab_patch(ctx: Context, record: str, assignments: Sequence, positional: bool = False) -> Term:
    """``R { f := u, ... }`` (or ``R u ...`` when positional) as ``ProjExtTy``."""
    decl = ctx.sig.records.get(record)
    if decl is None:
        raise UnboundName(f"unknown record {record}")
    names = decl.field_names()
    if positional:
        if len(assignments) > len(names):
            raise PatchArity(
                f"record {record} has {len(names)} field(s) but {len(assignments)} were given",
                assignments[len(names)].span,
            )
        assignments = list(zip(names, assignments))
    given: dict[str, STerm] = {}
    for f, u in assignments:
        if f not in names:
            raise UnknownField(f"record {record} has no field {f}", getattr(u, "span", None))
        if f in given:
            raise DuplicateField(f"field {f} is assigned twice", getattr(u, "span", None))
        given[f] = u
    env: tuple = ()
    core: dict[str, Term] = {}
    for idx, (f, fty) in enumerate(decl.fields):
        if f in given:
            for dep in free_vars(fty):
                earlier = names[idx - 1 - dep]
                if earlier not in given:
                    raise PatchDependency(
                        f"field {f} of {record} depends on {earlier}, which this patch leaves unassigned",
                        given[f].span,
                    )
            expected = ctx.machine.eval(env, fty)
            try:
                core[f] = check(ctx, given[f], expected)
            except (TypeMismatch, ShapeMismatch) as e:
                raise FieldTypeMismatch(f"field {f}: {e.message}", e.span, e.notes) from e
            env += (ctx.eval(core[f]),)
        else:
            env += (_placeholder(),)
    return ProjExtTy(record, tuple((f, core[f]) for f, _ in assignments))


def _placeholder():
    from .evaluator import _UNASSIGNED

    return _UNASSIGNED


def _elab_new(ctx: Context, s: SNew) -> Term:
    decl = ctx.sig.records.get(s.record)
    if decl is None:
        raise UnboundName(f"unknown record {s.record}")
    names = decl.field_names()
    given: dict = {}
    for a in s.assigns:
        if a.field not in names:
            raise UnknownField(f"record {s.record} has no field {a.field}", a.span)
        if a.field in given:
            raise DuplicateField(f"field {a.field} is assigned twice", a.span)
        given[a.field] = a.term
    missing = [f for f in names if f not in given]
    if missing:
        raise MissingField(f"new {s.record} is missing field(s) {', '.join(missing)}")
    env: tuple = ()
    fields = []
    for f, fty in decl.fields:
        u = check(ctx, given[f], ctx.machine.eval(env, fty))
        fields.append((f, u))
        env += (ctx.eval(u),)
    return NewRecord(s.record, tuple(fields))


# Declarations.


def _fresh_name(sig: Signature, name: str, span) -> None:
    if sig.lookup(name) is not None or name in sig.atoms:
        raise DuplicateName(f"{name} is already declared", span)


def check_decl(sig: Signature, d: SDecl) -> Signature:
    match d:
        case SAtomDecl(name):
            _fresh_name(sig, name, d.span)
            sig, atom = logic.declare_atom(sig, name)
            return sig.extend(AtomDecl(name, atom))
        case SDefDecl(name, unfolding, sty, sbody):
            _fresh_name(sig, name, d.span)
            if atom_name(name) in sig.atoms:
                raise DuplicateName(f"atom {atom_name(name)} for {name} is already declared", d.span)
            targets = []
            for target, span in unfolding:
                decl = sig.lookup(target)
                if isinstance(decl, (DefDecl, AtomDecl)):
                    targets.append(decl.atom)
                else:
                    raise UnknownUnfoldTarget(f"{target} is not a definition or atom", span)
            sig, atom = logic.declare_atom(sig, atom_name(name))
            for t in targets:
                sig = logic.add_implication(sig, atom, t)
            ctx = Context(sig, logic.closure(sig, [t.id for t in targets]))
            ty = check(ctx, sty, VType())
            body = check(ctx, sbody, ctx.eval(ty))
            # A bare atom in the unfold set also gates the definition: assuming
            # the atom makes every definition that lists it transparent.
            for t in targets:
                if t.name in sig.atom_decls:
                    sig = logic.add_implication(sig, t, atom)
            return sig.extend(DefDecl(name, tuple(u for u, _ in unfolding), ty, body, atom))
        case SRecordDecl(name, fields):
            _fresh_name(sig, name, d.span)
            ctx = Context(sig)
            seen: set[str] = set()
            core = []
            for f in fields:
                if f.name in seen:
                    raise DuplicateField(f"field {f.name} is declared twice", f.span)
                seen.add(f.name)
                ft = check(ctx, f.ty, VType())
                core.append((f.name, ft))
                ctx = ctx.bind(f.name, ctx.eval(ft))
            return sig.extend(RecordDecl(name, tuple(core)))
    raise TypeError(f"not a declaration: {d!r}")


def check_program(decls: Sequence[SDecl], sig: Signature | None = None) -> Signature:
    sig = sig or Signature()
    for d in decls:
        sig = check_decl(sig, d)
    return sig


def check_source(source: str) -> Signature:
    from .parser import parse_file

    return check_program(parse_file(source))


__all__ = [
    "infer", "check", "coerce", "check_ext_intro", "check_proj_ext_intro", "elab_patch",
    "check_decl", "check_program", "check_source", "atom_name", "resolve_prop", "BoundaryMismatch",
]
