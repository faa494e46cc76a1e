"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class ReflectError(Exception):
    """Base class for every error raised by this package."""


class SortMismatch(ReflectError):
    pass


class ReservedPrefix(ReflectError):
    def __init__(self, name: str):
        super().__init__(f"symbol {name!r} uses the reserved prefix 'rfl_'")
        self.name = name


class UnknownSymbol(ReflectError):
    def __init__(self, name: str):
        super().__init__(f"unknown symbol {name!r}")
        self.name = name


class NotCore(ReflectError):
    pass


class NotAnEncoding(ReflectError):
    def __init__(self, subterm):
        super().__init__(f"not an encoding: {subterm}")
        self.subterm = subterm


class NotADatatype(ReflectError):
    pass


class NoDatatypes(ReflectError):
    pass


class TheoryError(ReflectError):
    """Raised when a theory fails ``check_theory``; carries the diagnostics."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


class MissingAssignment(ReflectError):
    def __init__(self, var):
        super().__init__(f"no value assigned to variable {var}")
        self.var = var


class ModelError(ReflectError):
    """A finite model is malformed or violates an axiom of its theory."""


class UniverseOverflow(ReflectError):
    pass


class OutOfUniverse(ReflectError):
    """A reflective constructor left the bounded universe (partial structure)."""


class EncodingTooDeep(ReflectError):
    def __init__(self, phi):
        super().__init__(f"encoding does not fit the bounded universe: {phi}")
        self.phi = phi


class ParseError(ReflectError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class UnresolvedParameter(ReflectError):
    def __init__(self, param: str):
        super().__init__(f"sort parameter {param!r} escapes monomorphization")
        self.param = param


class MangleCollision(ReflectError):
    pass


class UnsupportedFeature(ReflectError):
    """The target format cannot express the problem (e.g. datatypes in TFF)."""


class MissingVocabulary(ReflectError):
    def __init__(self, case: str, missing):
        self.case = case
        self.missing = sorted(missing)
        super().__init__(f"{case}: base theory lacks {', '.join(self.missing)}")


class ValidationFailed(ReflectError):
    def __init__(self, case: str, witness):
        super().__init__(f"{case}: counterexample {witness}")
        self.case = case
        self.witness = witness
