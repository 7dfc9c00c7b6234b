"""Shared exception types."""


class DomainError(ValueError):
    """An instance or label id is outside the declared spaces."""


class ProtocolViolation(RuntimeError):
    """A game round broke the protocol contract (e.g. the revealed clean
    instance does not perturb to the shown input, or a realizable run
    emptied the version space)."""


class TreeStructureError(ValueError):
    """A candidate witness tree is not a full binary tree of its declared
    depth, or its nodes are malformed."""


class LimitExceeded(ValueError):
    """A request is larger than the documented exhaustive-search limits."""


class SearchInvariantError(RuntimeError):
    """An internal invariant of a search or of an optimal learner failed.

    Raised, for example, when a mistake round of the reduction learner
    cannot find the wrongly oriented counterpart that must exist on
    realizable sequences."""


class ScenarioFormatError(ValueError):
    """A scenario file failed validation.

    Carries the positioned parse errors; str() renders one per line."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__(
            "\n".join(str(e) for e in self.errors) or "invalid scenario"
        )
