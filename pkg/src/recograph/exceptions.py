"""Exception types raised by recograph."""


class RecographError(Exception):
    """Base class for all recograph errors."""


class InvalidEdge(RecographError, ValueError):
    """An edge violates the graph model (self-loop, endpoint out of range)."""


class LabelConflict(RecographError, ValueError):
    """The same edge was claimed both official and biased.

    Ground-truth labels drive the ROC evaluation, so a conflicting
    relabel is an error rather than a silent overwrite.
    """


class InvalidParams(RecographError, ValueError):
    """A parameter set violates its documented constraints."""


class IncompleteScores(RecographError, ValueError):
    """A score table does not cover every edge of the graph being ranked."""


class DegenerateTruth(RecographError, ValueError):
    """Ground truth has no positive or no negative edges; ROC is undefined."""


class CrawlInterrupted(RecographError, RuntimeError):
    """The oracle failed mid-crawl.

    Carries the observation built so far (``partial``) and the item whose
    query failed (``failed_item``), so callers can keep the partial graph.
    """

    def __init__(self, partial, failed_item, cause=None):
        self.partial = partial
        self.failed_item = failed_item
        self.cause = cause
        super().__init__(f"oracle failed on item {failed_item!r}: {cause}")
