"""Command-line driver: ``extt check FILE [--normalize NAME] [--assume A,B] [--print-core]``."""

from __future__ import annotations

import argparse
import sys
from typing import Sequence, TextIO

from . import logic
from .diagnostics import Diagnostic
from .elaborator import check_decl
from .evaluator import Context, normalize
from .parser import parse_file
from .printer import Printer
from .syntax import AtomDecl, DefDecl, DefRef, ExttError, OutS, RecordDecl, Signature

EXIT_OK, EXIT_ERROR, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def show_decl(sig: Signature, d) -> str:
    pr = Printer(sig)
    match d:
        case AtomDecl(name):
            return f"atom {name}"
        case DefDecl(name, unfold, ty, body):
            unf = f" unfolding ({', '.join(unfold)})" if unfold else ""
            return f"def {name}{unf} : {pr.term(ty)} := {pr.term(body)}"
        case RecordDecl(name, fields):
            parts = []
            scope: list[str] = []
            for f, fty in fields:
                parts.append(f"{f} : {Printer(sig, scope).term(fty)};")
                scope.append(f)
            return f"record {name} where {{ {' '.join(parts)} }}"
    raise TypeError(d)


def run_check(
    path: str,
    normalize_name: str | None = None,
    assume: Sequence[str] = (),
    print_core: bool = False,
    out: TextIO | None = None,
    err: TextIO | None = None,
) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        with open(path, encoding="utf-8") as fh:
            source = fh.read()
    except (OSError, UnicodeDecodeError) as e:
        print(f"extt: error: cannot read {path}: {e}", file=err)
        return EXIT_USAGE
    sig = Signature()
    try:
        for d in parse_file(source):
            sig = check_decl(sig, d)
    except ExttError as e:
        print(Diagnostic.from_error(e, path).render(), file=err)
        return EXIT_ERROR
    try:
        r = _assumed(sig, assume)
        if normalize_name is not None and normalize_name not in sig.defs:
            raise UsageError(f"--normalize: {normalize_name} is not a definition in {path}")
    except UsageError as e:
        print(f"extt: error: {e}", file=err)
        return EXIT_USAGE
    if print_core:
        for d in sig.decls:
            print(show_decl(sig, d), file=out)
    if normalize_name is not None:
        ctx = Context(sig, r)
        ty = ctx.eval(sig.defs[normalize_name].ty)
        nf = normalize(sig, r, ctx, OutS(DefRef(normalize_name)), ty)
        print(Printer(sig).term(nf), file=out)
    return EXIT_OK


def _assumed(sig: Signature, names: Sequence[str]) -> frozenset:
    ids = []
    for n in names:
        atom = sig.atoms.get(n)
        if atom is None:
            raise UsageError(f"--assume: unknown atom {n}")
        ids.append(atom.id)
    return logic.closure(sig, ids)


def _atom_list(text: str) -> list[str]:
    return [a.strip() for a in text.split(",") if a.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="extt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    check = sub.add_parser("check", help="type check a source file")
    check.add_argument("file")
    check.add_argument("--normalize", metavar="NAME", help="print the normal form of a definition")
    check.add_argument(
        "--assume", metavar="ATOM[,ATOM]*", type=_atom_list, action="extend", default=[],
        help="unfolding atoms assumed while normalizing (closed under implication)",
    )
    check.add_argument("--print-core", action="store_true", help="print elaborated core declarations")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))
    return run_check(args.file, args.normalize, args.assume, args.print_core)


if __name__ == "__main__":
    sys.exit(main())
