# =========================================
# EXCEPTION HIERARCHY
# Nominal Equational Logic - reasoning kernel
# =========================================

from typing import Iterable, Optional, Tuple


class NominalError(Exception):
    """Base class for every error raised by the kernel and its front end"""


class PermError(NominalError):
    """Malformed atom tuple or permutation construction"""


class SignatureError(NominalError):
    """Duplicate or dangling signature declaration"""


class SortError(NominalError):
    """Term, substitution or environment that does not sort-check"""


class JudgementError(NominalError):
    """Ill-formed judgement or theory"""


class BuildError(NominalError):
    """A derivation builder was called outside its precondition"""


class CheckError(NominalError):
    """Kernel rejection of a derivation node"""

    def __init__(
        self,
        message: str,
        rule: Optional[str] = None,
        path: Tuple[int, ...] = (),
        atoms: Iterable = (),
    ):
        self.message = message
        self.rule = rule
        self.path = tuple(path)
        self.atoms = tuple(sorted(atoms))
        super().__init__(self.describe())

    def at(self, index: int) -> "CheckError":
        """Same error, one premise deeper"""
        return CheckError(self.message, self.rule, (index,) + self.path, self.atoms)

    def describe(self) -> str:
        where = "root" if not self.path else "premise " + ".".join(str(i) for i in self.path)
        text = f"{where}"
        if self.rule:
            text += f" ({self.rule})"
        text += f": {self.message}"
        if self.atoms:
            text += " [atoms: " + " ".join(str(a) for a in self.atoms) + "]"
        return text


class FrontendError(NominalError):
    """Lexical, syntactic or reference error in a source file"""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.message = message
        self.line = line
        self.column = column
        if line is not None:
            super().__init__(f"{line}:{column}: {message}")
        else:
            super().__init__(message)
