"""Exception hierarchy.

Every failure the package can signal is a subclass of :class:`FtvTestError`,
so callers (and the CLI) can catch one type and still report the specific
class name.
"""


class FtvTestError(Exception):
    """Base class for all package errors."""


# --- graph / plan ingestion -------------------------------------------------

class GraphError(FtvTestError):
    pass


class GraphParseError(GraphError):
    """The graph file is not valid JSON or does not match the schema."""


class DuplicateUnitError(GraphError):
    pass


class NegativeValueError(GraphError):
    """A population or vote count is negative."""


class InconsistentElectionsError(GraphError):
    """Units do not all carry tallies for the same set of elections."""


class ThirdPartyColumnError(GraphError):
    """A vote tally carries a party column other than R and D."""


class UnknownEndpointError(GraphError):
    pass


class SelfLoopError(GraphError):
    pass


class DuplicateEdgeError(GraphError):
    pass


class DisconnectedGraphError(GraphError):
    pass


class PlanError(FtvTestError):
    pass


class PlanParseError(PlanError):
    pass


class UnknownUnitError(PlanError):
    pass


class MissingUnitError(PlanError):
    pass


class DistrictIndexError(PlanError):
    pass


class EmptyDistrictError(PlanError):
    pass


class DiscontiguousDistrictError(PlanError):
    pass


class PopulationImbalanceError(PlanError):
    pass


# --- spanning trees ---------------------------------------------------------

class DisconnectedSubsetError(FtvTestError):
    """The node subset does not induce a connected subgraph."""


class SubsetTooLargeError(FtvTestError):
    pass


# --- chain ------------------------------------------------------------------

class ConfigError(FtvTestError, ValueError):
    pass


class SeedingFailedError(FtvTestError):
    pass


class StepFailedError(FtvTestError):
    """A recombination step exhausted its retry budget.

    ``summary`` holds the partial run summary when raised from a chain run.
    """

    def __init__(self, message, summary=None):
        super().__init__(message)
        self.summary = summary


class EnsembleFormatError(FtvTestError):
    pass


# --- metrics ----------------------------------------------------------------

class UnknownElectionError(FtvTestError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class ZeroVoteError(FtvTestError):
    pass


class EmptySeriesError(FtvTestError, ValueError):
    pass


class EmptyEnsembleError(FtvTestError, ValueError):
    pass


class MissingEnsembleMeansError(FtvTestError):
    pass
