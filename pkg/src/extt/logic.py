"""Decidable logic of unfolding atoms: implication edges, entailment, closure."""

from __future__ import annotations

import dataclasses
from typing import Iterable

from .errors import DuplicateAtom, UnknownAtom
from .syntax import Atom, AtomRef, Prop, Signature, Truth

try:
    from ._reach import transitive_closure
    KERNEL = "cython"
except ImportError:  # extension not built
    from ._reach_py import transitive_closure
    KERNEL = "python"

__all__ = [
    "DuplicateAtom",
    "UnknownAtom",
    "KERNEL",
    "declare_atom",
    "add_implication",
    "entails",
    "closure",
    "transitive_closure",
]


def declare_atom(sig: Signature, name: str) -> tuple[Signature, Atom]:
    if name in sig.atoms:
        raise DuplicateAtom(f"atom '{name}' is already declared")
    atom = Atom(len(sig.atoms), name)
    atoms = dict(sig.atoms)
    atoms[name] = atom
    out = dataclasses.replace(sig, atoms=atoms)
    if "reach" in sig.__dict__:
        out.__dict__["reach"] = sig.reach + [1 << atom.id]
    return out, atom


def _check_id(sig: Signature, atom_id: int) -> None:
    if not 0 <= atom_id < len(sig.atoms):
        raise UnknownAtom(f"unknown atom id {atom_id}")


def add_implication(sig: Signature, src: Atom, dst: Atom) -> Signature:
    for a in (src, dst):
        if sig.atoms.get(a.name) != a:
            raise UnknownAtom(f"atom '{a.name}' is not declared")
    edge = (src.id, dst.id)
    if edge in sig.implications:
        return sig
    out = dataclasses.replace(sig, implications=sig.implications | {edge})
    if "reach" in sig.__dict__:
        # Incremental update: everything that reached src now reaches dst's row.
        row, bit = sig.reach[dst.id], 1 << src.id
        out.__dict__["reach"] = [r | row if r & bit else r for r in sig.reach]
    return out


def closure(sig: Signature, r: Iterable[int]) -> frozenset[int]:
    reach = sig.reach
    mask = 0
    for a in r:
        _check_id(sig, a)
        mask |= reach[a]
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def entails(sig: Signature, r: Iterable[int], p: Prop) -> bool:
    if isinstance(p, Truth):
        for a in r:
            _check_id(sig, a)
        return True
    assert isinstance(p, AtomRef)
    _check_id(sig, p.id)
    reach = sig.reach
    return any(reach[a] >> p.id & 1 for a in r if _check_id(sig, a) is None)


def restrict(sig: Signature, r: frozenset[int], p: Prop) -> frozenset[int]:
    """Close ``r`` extended by ``p``; truth adds nothing."""
    if isinstance(p, Truth) or p.id in r:
        return r
    return r | closure(sig, (p.id,))
