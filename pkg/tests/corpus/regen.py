"""Rewrite the golden outputs of the CLI corpus. Review the diff before committing."""

import shlex
import subprocess
import sys
from pathlib import Path

HERE = Path(__file__).parent


def args_of(path: Path) -> list[str]:
    for line in path.read_text(encoding="utf-8").splitlines():
        if line.startswith("-- args:"):
            return shlex.split(line[len("-- args:"):])
    return []


def run(path: Path) -> subprocess.CompletedProcess:
    rel = path.relative_to(HERE).as_posix()
    cmd = [sys.executable, "-m", "extt", "check", rel, *args_of(path)]
    return subprocess.run(cmd, cwd=HERE, capture_output=True, text=True)


if __name__ == "__main__":
    for path in sorted(HERE.glob("good/*.ett")):
        path.with_suffix(".out").write_text(run(path).stdout, encoding="utf-8")
    for path in sorted(HERE.glob("bad/*.ett")):
        path.with_suffix(".err").write_text(run(path).stderr, encoding="utf-8")
