"""A small dependent type checker with extension types, controlled unfolding,
and record patching via projective extension types."""

from .elaborator import check_decl, check_program, check_source
from .evaluator import Context, Machine, normalize
from .logic import KERNEL, closure, entails
from .syntax import Signature

__version__ = "0.1.0"

__all__ = [
    "Context", "KERNEL", "Machine", "Signature", "check_decl", "check_program",
    "check_source", "closure", "entails", "normalize",
]
