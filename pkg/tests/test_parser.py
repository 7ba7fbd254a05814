import pytest
from conftest import with_defs
from hypothesis import given
from hypothesis import strategies as st

from extt.errors import ParseError
from extt.oracle import GenConfig
from extt.parser import parse_file, parse_term, tokenize
from extt.printer import Printer
from extt.surface import (
    SAnn, SApp, SAtomDecl, SDefDecl, SExt, SLam, SNat, SPatch, SPi, SProj, SRecordDecl, SSigma,
    SSuc, SVar, SZero,
)


def test_atom_and_def():
    decls = parse_file("atom a\ndef x : Nat := zero\n")
    assert decls == [SAtomDecl("a"), SDefDecl("x", (), SNat(), SZero())]


def test_unfolding_list():
    (d,) = parse_file("def f unfolding (g, h) : Nat := g")
    assert [n for n, _ in d.unfolding] == ["g", "h"]
    assert d.unfolding[1][1].col == 21


def test_record_decl():
    (r,) = parse_file("record Pt where { px : Nat; py : Nat; }")
    assert isinstance(r, SRecordDecl)
    assert [f.name for f in r.fields] == ["px", "py"]


def test_binder_versus_annotation():
    assert isinstance(parse_term("(x : Nat) -> Nat"), SPi)
    assert isinstance(parse_term("(x : Nat)"), SAnn)
    pi = parse_term("(a b : Type) -> a")
    assert isinstance(pi, SPi) and isinstance(pi.cod, SPi)


def test_arrow_is_right_associative():
    t = parse_term("Nat -> Nat -> Nat")
    assert isinstance(t, SPi) and t.name is None and isinstance(t.cod, SPi)


def test_application_and_prefix_keywords():
    t = parse_term("f (suc zero) x")
    assert t == SApp(SApp(SVar("f"), SSuc(SZero())), SVar("x"))
    assert parse_term("suc suc zero") == SSuc(SSuc(SZero()))


def test_lambda_binds_several_names():
    assert parse_term("\\a b. a") == SLam("a", SLam("b", SVar("a")))


def test_projection_chains():
    assert parse_term("a.b.c") == SProj(SProj(SVar("a"), "b"), "c")


def test_patch_versus_block():
    assert isinstance(parse_term("Precat { Ob := Nat }"), SPatch)
    assert isinstance(parse_term("Pt {}"), SPatch)
    ext = parse_term("{Nat | tt |> zero, phi |> zero}")
    assert isinstance(ext, SExt) and [p.name for p, _ in ext.clauses] == [None, "phi"]


def test_sigma():
    assert isinstance(parse_term("Sig (a : Nat) . Nat"), SSigma)


def test_unicode_spellings():
    assert parse_term("λx. x") == parse_term("\\x. x")
    assert parse_term("Nat → Nat") == parse_term("Nat -> Nat")
    assert parse_term("{Nat | tt ▷ zero}") == parse_term("{Nat | tt |> zero}")


def test_comments_are_skipped():
    toks = tokenize("zero -- a comment\n-- another\nzero")
    assert [t.kind for t in toks] == ["zero", "zero", "EOF"]
    assert toks[1].span.line == 3


@pytest.mark.parametrize("source, line, col", [
    ("def x : Nat := (suc zero", 1, 25),
    ("def x : Nat :=", 1, 15),
    ("atom\n", 2, 1),
    ("def x : Nat := zero $", 1, 21),
    ("def 3 : Nat := zero", 1, 5),
    ("record R where { f : Nat }", 1, 26),
    ("def x : Type := {Nat | zero |> zero}", 1, 24),
])
def test_parse_errors_carry_positions(source, line, col):
    with pytest.raises(ParseError) as exc:
        parse_file(source)
    assert (exc.value.span.line, exc.value.span.col) == (line, col)
    assert exc.value.code == "E-PARSE"


def test_parse_term_requires_end_of_input():
    with pytest.raises(ParseError):
        parse_term("zero )")


@given(st.data())
def test_printed_core_reparses_to_the_same_core(prelude, data):
    from conftest import draw_gen

    src = draw_gen(data, GenConfig(max_depth=3)).nat()
    sig = with_defs(prelude, f"def t : Nat := {src}")
    core = sig.defs["t"].body
    printed = Printer(prelude).term(core)
    again = with_defs(prelude, f"def t : Nat := {printed}").defs["t"].body
    assert again == core, printed
