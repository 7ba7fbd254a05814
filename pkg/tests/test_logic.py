import pytest
from hypothesis import given
from hypothesis import strategies as st

from extt import _reach_py, logic
from extt.errors import DuplicateAtom, UnknownAtom
from extt.oracle import brute_entails
from extt.syntax import Atom, AtomRef, Signature, TRUTH


def chain(*names):
    sig = Signature()
    atoms = []
    for n in names:
        sig, a = logic.declare_atom(sig, n)
        atoms.append(a)
    return sig, atoms


@st.composite
def graphs(draw, max_atoms=10):
    n = draw(st.integers(1, max_atoms))
    edges = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=3 * n))
    sig, atoms = chain(*(f"a{i}" for i in range(n)))
    for a, b in edges:
        sig = logic.add_implication(sig, atoms[a], atoms[b])
    r = draw(st.frozensets(st.integers(0, n - 1)))
    return sig, n, r


def naive_closure(sig, r):
    """One-step expansion until nothing changes."""
    out = set(r)
    while True:
        step = {b for a, b in sig.implications if a in out}
        if step <= out:
            return frozenset(out)
        out |= step


def test_atoms_get_sequential_ids():
    _, (a, b, c) = chain("a", "b", "c")
    assert [a.id, b.id, c.id] == [0, 1, 2]


def test_duplicate_atom():
    sig, _ = chain("a")
    with pytest.raises(DuplicateAtom):
        logic.declare_atom(sig, "a")


def test_unknown_atom_in_implication():
    sig, (a,) = chain("a")
    with pytest.raises(UnknownAtom):
        logic.add_implication(sig, a, Atom(7, "ghost"))
    with pytest.raises(UnknownAtom):
        logic.entails(sig, [5], AtomRef(0))


def test_add_implication_is_idempotent():
    sig, (a, b) = chain("a", "b")
    once = logic.add_implication(sig, a, b)
    assert logic.add_implication(once, a, b) is once


def test_transitivity():
    sig, (f, g, h) = chain("phi_f", "phi_g", "phi_h")
    sig = logic.add_implication(sig, f, g)
    sig = logic.add_implication(sig, g, h)
    assert logic.entails(sig, {f.id}, AtomRef(h.id))
    assert not logic.entails(sig, {g.id}, AtomRef(f.id))
    assert logic.closure(sig, {f.id}) == {f.id, g.id, h.id}
    assert logic.closure(sig, ()) == frozenset()


def test_truth_is_always_entailed():
    sig, _ = chain("a")
    assert logic.entails(sig, (), TRUTH)
    assert logic.restrict(sig, frozenset(), TRUTH) == frozenset()


def test_cycles():
    sig, (a, b) = chain("a", "b")
    sig = logic.add_implication(logic.add_implication(sig, a, b), b, a)
    assert logic.closure(sig, {b.id}) == {a.id, b.id}


@given(graphs())
def test_entails_matches_brute_force(g):
    sig, n, r = g
    for atom in range(n):
        assert logic.entails(sig, r, AtomRef(atom)) == brute_entails(sig.implications, r, atom)


@given(graphs())
def test_closure_matches_naive_fixpoint(g):
    sig, _, r = g
    assert logic.closure(sig, r) == naive_closure(sig, r)


@given(graphs())
def test_incremental_reach_matches_recomputation(g):
    sig, n, _ = g
    # rebuild with the cache warm at every step so each update is incremental
    warm, atoms = chain(*(f"a{i}" for i in range(n)))
    warm.reach
    for a, b in sorted(sig.implications):
        warm = logic.add_implication(warm, atoms[a], atoms[b])
    assert "reach" in warm.__dict__
    assert warm.reach == _reach_py.transitive_closure(n, sorted(sig.implications))


@given(st.integers(1, 150).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=4 * n))
))
def test_compiled_kernel_matches_fallback(case):
    compiled = pytest.importorskip("extt._reach")
    n, edges = case
    assert compiled.transitive_closure(n, edges) == _reach_py.transitive_closure(n, edges)


def test_kernel_flag():
    assert logic.KERNEL in {"cython", "python"}


def test_benchmark_script_runs(capsys):
    import importlib.util
    from pathlib import Path

    path = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_reach.py"
    spec = importlib.util.spec_from_file_location("bench_reach", path)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    mod.main(["--sizes", "8,40", "--repeat", "1"])
    assert "atoms" in capsys.readouterr().out
