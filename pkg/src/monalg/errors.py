"""Exception types shared across the library.

Checkers are report-valued wherever the spec of an operation calls for a
report; exceptions are reserved for precondition violations and guards.
"""


class MonalgError(Exception):
    """Base class for all library errors."""


class CarrierMismatch(MonalgError):
    """Two values that must live over the same carrier do not."""


class UnknownElement(MonalgError):
    """An element name is not a member of the carrier at hand."""


class MalformedNesting(MonalgError):
    """A value claimed to be an element of T(TX) is not well-formed."""


class ExplosionGuard(MonalgError):
    """An enumeration would exceed the configured ceiling."""

    def __init__(self, count, ceiling, what=""):
        self.count = count
        self.ceiling = ceiling
        self.what = what
        msg = f"enumeration of {what or 'values'} needs {count} > ceiling {ceiling}"
        super().__init__(msg + "; consider sampled mode or --max-enum")


class NotApplicable(MonalgError):
    """The operation is not defined for this monad or structure."""


class HypothesisFailed(MonalgError):
    """A construction's hypothesis square failed; carries a witness."""

    def __init__(self, square, witness):
        self.square = square
        self.witness = witness
        super().__init__(f"hypothesis {square} failed, witness {witness}")


class NotIso(MonalgError):
    """A map claimed to be an isomorphism is not."""


class NotGenerated(MonalgError):
    """An element is not the join of the candidate generating set below it."""


class NotDistributive(MonalgError):
    """The lattice fails distributivity; carries a witness triple."""

    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"distributivity fails at {witness}")


class DiagramFailed(MonalgError):
    """A named diagram of a multi-diagram check failed."""

    def __init__(self, diagram, witness):
        self.diagram = diagram
        self.witness = witness
        super().__init__(f"diagram '{diagram}' fails, witness {witness}")


class NoSolution(MonalgError):
    """An equation that must have a solution has none."""


class AmbiguousSolution(MonalgError):
    """An equation that must have a unique solution has several."""


class LawFailed(MonalgError):
    """A law that certification depends on failed; carries a witness."""

    def __init__(self, law, witness):
        self.law = law
        self.witness = witness
        super().__init__(f"law '{law}' fails, witness {witness}")


class SimilarityFailed(MonalgError):
    """Change-of-basis similarity equation failed (implementation bug)."""


class PartialStructure(MonalgError):
    """A partially constructed structure map was applied off-domain."""
