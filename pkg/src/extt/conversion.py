"""Type-directed definitional equality under a restriction."""

from __future__ import annotations

from typing import Sequence

from .evaluator import (
    Context, Machine, NApp, NDef, NFieldProj, NFst, NNatRec, NOutS, NSnd, NVar,
    Closure, VExtTy, VNat, VNeutral, VNewRecord, VPi, VProjExtTy, VRecordTy,
    VSigma, VSuc, VType, VZero, Value,
)
from .errors import ClauseIllTyped, ClausesIncompatible
from .syntax import ExttError, Prop, Signature, Term, Type


def conv(sig: Signature, r: frozenset, depth: int, ty: Value, v1: Value, v2: Value) -> bool:
    return conv_value(Machine.closed(sig, r), depth, ty, v1, v2)


def conv_value(m: Machine, depth: int, ty: Value, v1: Value, v2: Value) -> bool:
    ty = m.force(ty)
    match ty:
        case VPi(dom, cod):
            x = m.fresh(depth, dom)
            return conv_value(m, depth + 1, m.instantiate(cod, x), m.apply(v1, x), m.apply(v2, x))
        case VSigma(a_ty, b_ty):
            a1 = m.fst(v1)
            if not conv_value(m, depth, a_ty, a1, m.fst(v2)):
                return False
            return conv_value(m, depth, m.instantiate(b_ty, a1), m.snd(v1), m.snd(v2))
        case VExtTy(base, _):
            # Uniqueness: both sides are compared through outS.
            return conv_value(m, depth, base, m.out(v1), m.out(v2))
        case VProjExtTy(rec, _):
            return conv_value(m, depth, VRecordTy(rec), m.out(v1), m.out(v2))
        case VType():
            return conv_type(m, depth, v1, v2)
        case VNat():
            return _conv_nat(m, depth, v1, v2)
        case VRecordTy(rec):
            v1, v2 = m.force(v1), m.force(v2)
            if isinstance(v1, VNewRecord) and isinstance(v2, VNewRecord):
                env: tuple = ()
                for (f, fty), (_, a), (_, b) in zip(m.sig.records[rec].fields, v1.fields, v2.fields):
                    if not conv_value(m, depth, m.eval(env, fty), a, b):
                        return False
                    env += (a,)
                return True
    v1, v2 = m.force(v1), m.force(v2)
    if isinstance(v1, VNeutral) and isinstance(v2, VNeutral):
        return conv_neutral(m, depth, v1, v2)
    return False


def _conv_nat(m: Machine, depth: int, v1: Value, v2: Value) -> bool:
    while True:
        v1, v2 = m.force(v1), m.force(v2)
        match v1, v2:
            case VZero(), VZero():
                return True
            case VSuc(a), VSuc(b):
                v1, v2 = a, b
            case VNeutral(), VNeutral():
                return conv_neutral(m, depth, v1, v2)
            case _:
                return False


def _clause_sets_match(m: Machine, depth: int, base: Value, c1, c2) -> bool:
    def covered(xs, ys) -> bool:
        for p, u in xs:
            mp = m.restrict(p)
            if not any(q == p and conv_value(mp, depth, base, u.force(), w.force()) for q, w in ys):
                return False
        return True

    return covered(c1, c2) and covered(c2, c1)


def conv_type(m: Machine, depth: int, a: Value, b: Value) -> bool:
    a, b = m.force(a), m.force(b)
    match a, b:
        case VType(), VType():
            return True
        case VNat(), VNat():
            return True
        case VRecordTy(x), VRecordTy(y):
            return x == y
        case (VPi(d1, c1), VPi(d2, c2)) | (VSigma(d1, c1), VSigma(d2, c2)):
            if not conv_type(m, depth, d1, d2):
                return False
            x = m.fresh(depth, d1)
            return conv_type(m, depth + 1, m.instantiate(c1, x), m.instantiate(c2, x))
        case VExtTy(b1, c1), VExtTy(b2, c2):
            return conv_type(m, depth, b1, b2) and _clause_sets_match(m, depth, b1, c1, c2)
        case VProjExtTy(r1, c1), VProjExtTy(r2, c2):
            if r1 != r2 or {f for f, _ in c1} != {f for f, _ in c2}:
                return False
            tys = dict(m.record_field_types(r1, dict(c1)))
            right = dict(c2)
            return all(conv_value(m, depth, tys[f], u, right[f]) for f, u in c1)
        case VNeutral(), VNeutral():
            return conv_neutral(m, depth, a, b)
    return False


def conv_neutral(m: Machine, depth: int, a: VNeutral, b: VNeutral) -> bool:
    match a.ne, b.ne:
        case NVar(i), NVar(j):
            return i == j
        case NDef(f), NDef(g):
            return f == g
        case NApp(f1, x1), NApp(f2, x2):
            if not conv_neutral(m, depth, f1, f2):
                return False
            pi = m.force(f1.ty) if f1.ty is not None else None
            if not isinstance(pi, VPi):
                return False
            return conv_value(m, depth, pi.dom, x1, x2)
        case (NFst(p1), NFst(p2)) | (NSnd(p1), NSnd(p2)):
            return conv_neutral(m, depth, p1, p2)
        case NNatRec(m1, z1, s1, n1), NNatRec(m2, z2, s2, n2):
            if not conv_neutral(m, depth, n1, n2):
                return False
            motive_ty = VPi(VNat(), Closure((), Type(), m, "n"))
            return (
                conv_value(m, depth, motive_ty, m1, m2)
                and conv_value(m, depth, m.apply(m1, VZero()), z1, z2)
                and conv_value(m, depth, m.step_type(m1), s1, s2)
            )
        case NFieldProj(x1, f1), NFieldProj(x2, f2):
            return f1 == f2 and conv_neutral(m, depth, x1, x2)
        case NOutS(x1), NOutS(x2):
            return conv_neutral(m, depth, x1, x2)
    return False


def check_clauses_compat(
    sig: Signature, ctx: Context, base: Value, clauses: Sequence[tuple[Prop, Term]], typecheck: bool = True
) -> None:
    """Each clause checks at ``base`` under its proposition; every pair agrees under both.

    Pass ``typecheck=False`` when the clauses were already checked (the elaborator does).
    """
    from .kernel import check_core
    from .printer import Printer

    for i, (p, u) in enumerate(clauses if typecheck else ()):
        try:
            check_core(ctx.restrict(p), u, base)
        except ExttError as e:
            raise ClauseIllTyped(i, f"clause {i} is ill-typed: {e.message}", notes=e.notes) from e
    for i in range(len(clauses)):
        for j in range(i + 1, len(clauses)):
            (p, u), (q, w) = clauses[i], clauses[j]
            joint = ctx.restrict(p).restrict(q)
            m = joint.machine
            uv, wv = joint.eval(u), joint.eval(w)
            if not conv_value(m, joint.depth, base, uv, wv):
                pr = Printer(sig, joint.names)
                raise ClausesIncompatible(
                    i, j,
                    f"clauses {i} and {j} disagree where both hold: "
                    f"{pr.term(joint.quote(uv, base))} vs {pr.term(joint.quote(wv, base))}",
                    notes=(f"restriction: {pr.restriction(joint.restriction)}",),
                )
