import pytest
from conftest import draw_gen, elab, with_defs
from hypothesis import given
from hypothesis import strategies as st

from extt import logic
from extt.elaborator import check_source
from extt.evaluator import (
    Context, KernelBug, Machine, NVar, Thunk, VNat, VNeutral, VZero, apply, eval, normalize, quote,
)
from extt.oracle import GenConfig
from extt.printer import Printer
from extt.syntax import App, DefRef, OutS, Var, Zero, numeral, subst

FGH = """
def h : Nat := suc zero
def g unfolding (h) : Nat := h
def f unfolding (g) : Nat := g
def k : Nat := g
"""


def nf_text(sig, name, *assume):
    r = logic.closure(sig, [sig.atoms[a].id for a in assume])
    ctx = Context(sig, r)
    ty = ctx.eval(sig.defs[name].ty)
    return Printer(sig).term(normalize(sig, r, ctx, OutS(DefRef(name)), ty))


@pytest.fixture(scope="module")
def fgh():
    return check_source(FGH)


@pytest.mark.parametrize("name, assume, expected", [
    ("f", (), "f"),
    ("f", ("phi_f",), "suc zero"),
    ("f", ("phi_g",), "f"),
    ("g", ("phi_g",), "suc zero"),
    ("k", ("phi_k",), "g"),
    ("k", ("phi_k", "phi_g"), "suc zero"),
    ("h", ("phi_h",), "suc zero"),
])
def test_controlled_unfolding(fgh, name, assume, expected):
    assert nf_text(fgh, name, *assume) == expected


def test_restriction_need_not_be_closed(fgh):
    r = {fgh.atoms["phi_f"].id}
    assert normalize(fgh, r, Context(fgh), OutS(DefRef("f")), VNat()) == numeral(1)


def test_opaque_function_is_eta_expanded():
    sig = check_source("def inc : Nat -> Nat := \\n. suc n")
    assert nf_text(sig, "inc") == "\\x. inc x"
    assert nf_text(sig, "inc", "phi_inc") == "\\n. suc n"


def test_natrec_computes():
    sig = check_source(
        "def add : Nat -> Nat -> Nat := \\a b. natrec (\\_. Nat) a (\\k acc. suc acc) b\n"
        "def five unfolding (add) : Nat := add (suc (suc zero)) (suc (suc (suc zero)))\n"
    )
    assert nf_text(sig, "five", "phi_five") == "suc (suc (suc (suc (suc zero))))"


def test_natrec_on_a_variable_is_stuck():
    sig = check_source("def id2 : Nat -> Nat := \\n. natrec (\\_. Nat) zero (\\k acc. suc acc) n")
    assert nf_text(sig, "id2", "phi_id2") == "\\n. natrec (\\x. Nat) zero (\\k acc. suc acc) n"


def test_clause_values_evaluate_under_their_proposition():
    sig = check_source(
        "def one : Nat := suc zero\n"
        "def e : (y : {Nat | phi_one |> one}) -> Nat := \\y. y\n"
    )
    ctx = Context(sig).bind("y", Context(sig).eval(sig.defs["e"].ty.dom))
    sub = ctx.restrict(sig.defs["e"].ty.dom.clauses[0][0])
    assert normalize(sig, sub.restriction, sub, OutS(Var(0)), VNat()) == numeral(1)


def test_projection_through_patch_type_is_definitional():
    sig = check_source(
        "record Pt where { px : Nat; py : Nat; }\n"
        "def p : Pt { px := suc zero } := new Pt { px := suc zero, py := zero }\n"
    )
    t, ty = elab(sig, "p.px")
    assert normalize(sig, frozenset(), Context(sig), t, ty) == numeral(1)
    t, ty = elab(sig, "p.py")
    assert Printer(sig).term(normalize(sig, frozenset(), Context(sig), t, ty)) == "p.py"


def test_thunks_are_forced_once():
    calls = []
    th = Thunk(lambda: calls.append(1) or VZero())
    assert th.force() is th.force()
    assert calls == [1]


def test_ill_formed_environment_is_a_kernel_bug(fgh):
    with pytest.raises(KernelBug):
        eval(fgh, frozenset(), (), Var(2))


def test_module_level_apply_and_quote(fgh):
    lam = eval(fgh, frozenset(), (), elab(fgh, "((\\n. suc n) : Nat -> Nat)")[0])
    assert quote(fgh, frozenset(), 0, apply(lam, VZero()), VNat()) == numeral(1)
    x = VNeutral(VNat(), NVar(0), frozenset())
    assert quote(fgh, frozenset(), 1, x, VNat()) == Var(0)


def test_neutral_replay_under_larger_restriction(fgh):
    # built while f was opaque, read back where it unfolds
    stuck = Machine(fgh, frozenset()).eval((), OutS(DefRef("f")))
    assert isinstance(stuck, VNeutral)
    m = Machine.closed(fgh, [fgh.atoms["phi_f"].id])
    assert m.quote(0, stuck, VNat()) == numeral(1)


@given(st.data())
def test_apply_eval_agrees_with_substitution(prelude, data):
    gen = draw_gen(data, GenConfig(max_depth=3))
    body = gen.nat(scope=("v",))
    arg = gen.nat()
    sig = with_defs(prelude, f"def fn : Nat -> Nat := \\v. {body}\ndef a : Nat := {arg}")
    lam, a = sig.defs["fn"].body, sig.defs["a"].body
    r = gen.restriction(sig)
    via_apply = normalize(sig, r, Context(sig), App(lam, a), VNat())
    via_subst = normalize(sig, r, Context(sig), subst(lam.body, a), VNat())
    assert via_apply == via_subst


@given(st.data())
def test_restriction_monotonicity(prelude, data):
    gen = draw_gen(data, GenConfig(max_depth=3))
    sig = with_defs(prelude, f"def t : Nat := {gen.nat()}")
    t = sig.defs["t"].body
    small = gen.restriction(sig)
    large = small | gen.restriction(sig)
    once = normalize(sig, small, Context(sig), t, VNat())
    assert normalize(sig, large, Context(sig), once, VNat()) == normalize(sig, large, Context(sig), t, VNat())


@given(st.data())
def test_normalize_is_idempotent(prelude, data):
    gen = draw_gen(data, GenConfig(max_depth=3))
    sig = with_defs(prelude, f"def t : Nat := {gen.nat()}")
    r = gen.restriction(sig)
    nf = normalize(sig, r, Context(sig), sig.defs["t"].body, VNat())
    assert normalize(sig, r, Context(sig), nf, VNat()) == nf


def test_normalize_infers_the_type_when_missing(fgh):
    r = logic.closure(fgh, [fgh.atoms["phi_f"].id])
    assert normalize(fgh, r, Context(fgh), OutS(DefRef("f"))) == numeral(1)
    assert normalize(fgh, frozenset(), Context(fgh), Zero()) == Zero()
