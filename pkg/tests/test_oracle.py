import re

import pytest
from conftest import draw_gen, with_defs
from hypothesis import given
from hypothesis import strategies as st

from extt import logic
from extt.elaborator import check_source
from extt.evaluator import Context, VNat, normalize
from extt.oracle import (
    PRELUDE, GenConfig, SmallStep, StuckTerm, TermGen, brute_entails, reach_matrix,
    smallstep_normalize,
)
from extt.syntax import App, DefRef, Lam, NatRec, OutS, Suc, Var, Zero, numeral


def test_reach_matrix_is_reflexive_and_transitive():
    m = reach_matrix(4, [(0, 1), (1, 2)])
    assert m[0][2] and m[3][3]
    assert not m[2][0] and not m[0][3]


def test_brute_entails():
    edges = [(0, 1), (1, 2)]
    assert brute_entails(edges, [0], 2)
    assert not brute_entails(edges, [2], 0)
    assert not brute_entails(edges, [], 1)
    assert brute_entails(edges, [5], 5)


def test_beta_and_natrec():
    sig = check_source("")
    ss = SmallStep(sig, ())
    assert ss.normalize(App(Lam(Suc(Var(0)), "n"), Zero())) == numeral(1)
    double = Lam(Lam(Suc(Suc(Var(0))), "acc"), "k")
    assert ss.normalize(NatRec(Lam(Zero(), "_"), Zero(), double, numeral(2))) == numeral(4)


def test_definitions_unfold_only_when_allowed():
    sig = check_source("def h : Nat := suc zero\ndef g unfolding (h) : Nat := h\n")
    ref = OutS(DefRef("g"))
    assert smallstep_normalize(sig, (), ref) == ref
    # phi_g reaches phi_h, so the nested reference opens too
    assert smallstep_normalize(sig, [sig.atoms["phi_g"].id], ref) == numeral(1)


def test_clause_fires_on_stuck_extension_term(prelude):
    enc = prelude.atoms["encode"].id
    ref = OutS(DefRef("gated"))
    assert smallstep_normalize(prelude, (), OutS(ref)) == OutS(ref)
    assert smallstep_normalize(prelude, [enc], OutS(ref)) == numeral(1)
    # pinned's tt clause always fires
    assert smallstep_normalize(prelude, (), OutS(OutS(DefRef("pinned")))) == OutS(DefRef("two"))


def test_wrong_shape_elimination_is_reported():
    with pytest.raises(StuckTerm):
        smallstep_normalize(check_source(""), (), App(Zero(), Zero()))


def test_enabled_formers_limit_the_generator():
    gen = TermGen.seeded(GenConfig(max_depth=4, seed=3, enabled_formers=frozenset({"suc"})))
    for _ in range(50):
        assert re.fullmatch(r"(suc \()*zero\)*", gen.nat())


def test_seeded_generator_is_reproducible():
    a = TermGen.seeded(GenConfig(seed=11))
    b = TermGen.seeded(GenConfig(seed=11))
    assert [a.nat() for _ in range(20)] == [b.nat() for _ in range(20)]


def test_prelude_checks():
    sig = check_source(PRELUDE)
    assert {"encode", "phi_one", "phi_shifted"} <= set(sig.atoms)


@given(st.data())
def test_nbe_agrees_with_small_steps(prelude, data):
    gen = draw_gen(data, GenConfig(max_depth=4))
    sig = with_defs(prelude, f"def t : Nat := {gen.nat()}")
    r = gen.restriction(sig)
    t = sig.defs["t"].body
    assert normalize(sig, r, Context(sig), t, VNat()) == smallstep_normalize(sig, logic.closure(sig, r), t)
