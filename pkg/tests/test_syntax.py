from hypothesis import given
from hypothesis import strategies as st

from extt.syntax import (
    App, AtomRef, ExtTy, Fst, InS, Lam, Nat, OutS, Pair, Pi, Signature, Suc, TRUTH, Type,
    Var, Zero, as_numeral, free_vars, numeral, shift, structural_eq, subst, well_scoped,
)


def terms(max_var: int = 4):
    leaves = st.one_of(
        st.builds(Var, st.integers(0, max_var)),
        st.just(Zero()),
        st.just(Nat()),
        st.just(Type()),
    )

    def extend(sub):
        return st.one_of(
            st.builds(Suc, sub),
            st.builds(Lam, sub),
            st.builds(App, sub, sub),
            st.builds(Pi, sub, sub),
            st.builds(Pair, sub, sub),
            st.builds(Fst, sub),
            st.builds(InS, sub),
            st.builds(OutS, sub),
            st.builds(lambda b, u: ExtTy(b, ((TRUTH, u), (AtomRef(0), u))), sub, sub),
        )

    return st.recursive(leaves, extend, max_leaves=12)


@given(st.integers(0, 300))
def test_numeral_roundtrip(n):
    assert as_numeral(numeral(n)) == n


def test_as_numeral_rejects_open_terms():
    assert as_numeral(Suc(Var(0))) is None


@given(terms())
def test_shift_zero_is_identity(t):
    assert shift(t, 0) == t


@given(terms(), terms())
def test_subst_after_shift_is_identity(t, s):
    # shifting leaves index 0 unused, so substituting for it changes nothing
    assert subst(shift(t, 1), s) == t


@given(terms(), st.integers(0, 3))
def test_shift_moves_free_variables(t, k):
    assert free_vars(shift(t, k)) == {i + k for i in free_vars(t)}


@given(terms())
def test_well_scoped_matches_free_vars(t):
    depth = 1 + max(free_vars(t), default=-1)
    assert well_scoped(t, depth)
    if depth:
        assert not well_scoped(t, depth - 1)


def test_subst_under_binder():
    # (\y. x y)[x := zero] with x at index 0 outside the lambda
    body = Lam(App(Var(1), Var(0)))
    assert subst(body, Zero()) == Lam(App(Zero(), Var(0)))
    assert subst(Lam(Var(1)), Var(0)) == Lam(Var(1))


def test_binder_names_are_not_compared():
    assert structural_eq(Lam(Var(0), "a"), Lam(Var(0), "b"))
    assert Pi(Nat(), Nat(), "p") == Pi(Nat(), Nat(), "q")
    assert not structural_eq(Lam(Var(0)), Lam(Zero()))


def test_signature_is_persistent():
    from extt import logic
    from extt.syntax import AtomDecl

    sig = Signature()
    sig2, a = logic.declare_atom(sig, "a")
    sig3 = sig2.extend(AtomDecl("a", a))
    assert sig.atoms == {} and sig.decls == ()
    assert sig3.lookup("a") == AtomDecl("a", a)
    assert sig3.lookup("b") is None
    assert hash(sig3) == hash(sig2.extend(AtomDecl("a", a)))
