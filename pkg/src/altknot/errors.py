"""Exception hierarchy for altknot.

Every error raised by the library derives from AltknotError so callers can
catch library failures without masking programming errors.
"""


class AltknotError(Exception):
    """Base class for all altknot errors."""


class MalformedCode(AltknotError):
    """Input text is not a syntactically valid PD or Gauss code."""


class EmptyDiagram(AltknotError):
    """The diagram has no crossings."""


class NotAKnot(AltknotError):
    """The diagram has more than one link component."""


class NotAlternating(AltknotError):
    """The diagram is not alternating."""


class NotReduced(AltknotError):
    """The diagram contains a nugatory crossing."""


class NotPrime(AltknotError):
    """The diagram is a nontrivial connected sum."""


class InvalidSite(AltknotError):
    """A flype was requested at a site that is not a valid flype site."""


class ClosureBudgetExceeded(AltknotError):
    """Flype closure enumeration exceeded its node budget."""

    def __init__(self, budget, visited):
        super().__init__(
            f"flype closure exceeded budget of {budget} diagrams "
            f"({visited} visited)"
        )
        self.budget = budget
        self.visited = visited


class UnclassifiablePiece(AltknotError):
    """A split piece fits neither the jewel nor the twisted-band pattern."""


class InvariantBandViolation(AltknotError):
    """The fixed locus of a tree automorphism is not usable for synthesis."""


class InconsistentPartition(AltknotError):
    """Strand directions around a circle do not split into two arcs."""


class NotMinusAchiral(AltknotError):
    """Witness synthesis was requested for a diagram that is not -achiral."""


class WitnessSynthesisFailed(AltknotError):
    """No involutive witness could be constructed or found by search."""
