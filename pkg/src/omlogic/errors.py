"""Exception hierarchy shared by every omlogic module."""


class OmlogicError(Exception):
    """Base class for all errors raised by omlogic."""


# posets

class DuplicateElement(OmlogicError, ValueError):
    pass


class UnknownElement(OmlogicError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class CycleDetected(OmlogicError, ValueError):
    pass


class NotAPartialOrder(OmlogicError, ValueError):
    pass


class NotALattice(OmlogicError, ValueError):
    pass


class NotIsotone(OmlogicError, ValueError):
    pass


class NoTopElement(OmlogicError, ValueError):
    pass


class SubsetCapExceeded(OmlogicError, ValueError):
    pass


# algebras

class BadType(OmlogicError, ValueError):
    pass


class ArityMismatch(OmlogicError, ValueError):
    pass


class NonTotalTable(OmlogicError, ValueError):
    pass


class OutputNotInCarrier(OmlogicError, ValueError):
    pass


class TypeMismatch(OmlogicError, ValueError):
    pass


class NotAProduct(OmlogicError, ValueError):
    pass


class CarrierTooLarge(OmlogicError, ValueError):
    pass


class NotAnOml(OmlogicError, ValueError):
    pass


class NotCentral(OmlogicError, ValueError):
    pass


class TrivialCentralElement(OmlogicError, ValueError):
    pass


class CapExceeded(OmlogicError, ValueError):
    pass


# syntax

class NameCollision(OmlogicError, ValueError):
    pass


class NotAConstant(OmlogicError, ValueError):
    pass


class FormulaError(OmlogicError, ValueError):
    """A problem with formula text, located at character offset ``pos``."""

    def __init__(self, message, pos=None):
        super().__init__(message if pos is None else f"{message} (at {pos})")
        self.message = message
        self.pos = pos


class LexError(FormulaError):
    pass


class ParseError(FormulaError):
    pass


class UnknownSymbol(FormulaError):
    pass


class ArityError(FormulaError):
    pass


# semantics

class StructureError(OmlogicError, ValueError):
    pass


class NonSurjective(StructureError):
    pass


class VariableInGroundTerm(OmlogicError, ValueError):
    pass


class NotASentence(OmlogicError, ValueError):
    pass


class MeetUndefined(OmlogicError, ValueError):
    def __init__(self, message, values=()):
        super().__init__(message)
        self.values = tuple(values)


# harness / deduction / files

class NotFactorClosed(OmlogicError, ValueError):
    def __init__(self, message, missing=()):
        super().__init__(message)
        self.missing = list(missing)


class PatternError(OmlogicError, ValueError):
    pass


class FileFormatError(OmlogicError, ValueError):
    def __init__(self, message, path=None, line=None):
        self.path, self.line = path, line
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(where + message)
