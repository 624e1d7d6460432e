"""Domain exceptions raised by the engine.

Every error carries a stable ``code`` (its class name) so the CLI and the
HTTP layer can map failures without string matching.
"""

from __future__ import annotations


class PivothesoError(Exception):
    """Base class for all domain errors."""

    code = "PivothesoError"

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        cls.code = cls.__name__

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


# -- schemes and concepts ---------------------------------------------------

class UnknownScheme(PivothesoError):
    pass


class DuplicateScheme(PivothesoError):
    pass


class SameScheme(PivothesoError):
    pass


class CrossScheme(PivothesoError):
    pass


class UnknownConcept(PivothesoError):
    pass


class DuplicateConcept(PivothesoError):
    """A concept id is already taken (ids are never reused)."""


class DuplicatePrefLabel(PivothesoError):
    """Another concept in the scheme already bears this preferred label."""


class InvalidLabel(PivothesoError):
    pass


class InvalidTopConcept(PivothesoError):
    """Only concepts without a broader relation can be top concepts."""


class CycleDetected(PivothesoError):
    pass


class SelfRelation(PivothesoError):
    pass


class HierarchicallyLinked(PivothesoError):
    """Associative relations between an ancestor and a descendant are invalid."""


# -- validation --------------------------------------------------------------

class UnknownRule(PivothesoError):
    pass


# -- alignment ---------------------------------------------------------------

class UnknownMapping(PivothesoError):
    pass


class DuplicateAccepted(PivothesoError):
    pass


class ConflictingType(PivothesoError):
    """An accepted mapping of a different match type already links the pair."""


class AlreadyDecided(PivothesoError):
    pass


class UnknownMember(PivothesoError):
    pass


# -- referentials ------------------------------------------------------------

class UnknownReferential(PivothesoError):
    pass


class DuplicateReferential(PivothesoError):
    pass


class InvalidMillesime(PivothesoError):
    pass


class AlreadyFrozen(PivothesoError):
    pass


class FrozenReferential(PivothesoError):
    """The concept belongs to a frozen referential branch and cannot change."""


# -- artifact descriptions ---------------------------------------------------

class NotInReferential(PivothesoError):
    pass


class IncompatibleTypeCategory(PivothesoError):
    """The category is not listed among the type's associated categories."""


class FormTypeMismatch(PivothesoError):
    """The type does not sit under the types branch matching the form."""


class DanglingConcept(PivothesoError):
    pass


class AmbiguousLabel(PivothesoError):
    pass


class UnknownDescription(PivothesoError):
    pass


class MalformedCsv(PivothesoError):
    pass


# -- persistence -------------------------------------------------------------

class TurtleSyntaxError(PivothesoError):
    """Malformed Turtle input; carries the 1-based line and column."""

    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col
        self.reason = message


class GraphError(PivothesoError):
    """A parsed document cannot be assembled into a consistent graph."""


class FormatVersionMismatch(PivothesoError):
    pass


class CorruptStore(PivothesoError):
    pass


class ConfigError(PivothesoError):
    pass
