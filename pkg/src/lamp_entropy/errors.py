"""Exception types shared across the package."""


class LampError(Exception):
    """Base class for every error raised by this package."""


class NonSquareError(LampError):
    """Raw transition data is not a square matrix."""


class NegativeEntryError(LampError):
    """A probability entry is negative."""


class RowSumError(LampError):
    """A matrix row does not sum to 1 within tolerance."""


class DuplicateLabelError(LampError):
    """State labels are not unique."""


class DimensionMismatchError(LampError):
    """Shapes or state spaces of two objects do not line up."""


class NotIrreducibleError(LampError):
    """The chain is reducible where irreducibility is required."""


class NoConvergenceError(LampError):
    """An iterative solver exhausted its iteration budget."""


class InvalidInitStateError(LampError):
    """Simulation was asked to start from a state that does not exist."""


class UnknownTokenError(LampError):
    """A token is not part of the relevant state space."""


class EmptyHistoryError(LampError):
    """A predictive distribution was requested for an empty history."""


class ZeroProbabilityError(LampError):
    """A scored symbol has model probability zero (model/data mismatch)."""


class TooShortError(LampError):
    """A sequence is too short for the requested operation."""


class DegenerateComponentError(LampError):
    """The largest strongly connected component cannot carry a chain."""


class InvalidProbabilityError(LampError):
    """A probability parameter is outside its valid open interval."""


class MalformedRowError(LampError):
    """A tabular input row has the wrong number of columns."""


class EmptyCorpusError(LampError):
    """The corpus contains no usable sequences."""


class RareTokenCollisionError(LampError):
    """The replacement token already occurs in the vocabulary."""


class EmptySequenceError(LampError):
    """A per-sequence statistic was requested for an empty sequence."""


class DegenerateInitError(LampError):
    """A fit was initialised with structural zeros that the data requires."""


class NotADistributionError(LampError):
    """A vector is not a probability distribution."""


class LagTooLargeError(LampError):
    """The requested lag exceeds what the sequence can support."""


class ConfigError(LampError):
    """Invalid command-line configuration."""
