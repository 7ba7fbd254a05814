import sys
from pathlib import Path

import pytest
from hypothesis import settings

from extt.elaborator import check_program, check_source, infer
from extt.evaluator import Context
from extt.oracle import PRELUDE, TermGen
from extt.parser import parse_file, parse_term

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

CORPUS = Path(__file__).parent / "corpus"

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


def elab(sig, source: str, ctx: Context | None = None):
    """Elaborate a surface term by inference; returns (core term, type value)."""
    return infer(ctx or Context(sig), parse_term(source))


def with_defs(sig, source: str):
    return check_program(parse_file(source), sig)


@pytest.fixture(scope="session")
def prelude():
    return check_source(PRELUDE)


def draw_gen(data, config):
    """A TermGen whose choices come from hypothesis, so failures shrink."""
    from hypothesis import strategies as st

    return TermGen(lambda n: data.draw(st.integers(0, n - 1)), config)
