"""Exception hierarchy shared by all grash modules."""

from typing import Optional


class GrashError(Exception):
    """Base class for grash failures."""


class TripleFormatError(GrashError, ValueError):
    """A triple file line could not be parsed."""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class EmptyGraphError(GrashError, ValueError):
    """A graph or triple file holds no triples."""


class SplitError(GrashError, ValueError):
    """A train/valid split cannot be constructed."""


class ReductionError(GrashError, ValueError):
    """A graph reduction request is invalid or produced an empty graph."""


class EmptyCoreError(ReductionError):
    """The requested k-core is empty."""

    def __init__(self, k: int, largest_k: int):
        self.k = k
        self.largest_k = largest_k
        super().__init__(f"{k}-core is empty; largest nonempty core is k={largest_k}")


class ModelConfigError(GrashError, ValueError):
    """Embedding model parameters are inconsistent."""


class CheckpointError(GrashError, ValueError):
    """A checkpoint file is malformed or does not match the dataset."""


class NegativeSamplingError(GrashError, ValueError):
    """Negative sampling was asked for more entities than available."""


class TrainingDivergedError(GrashError):
    """Training produced a non-finite loss or non-finite parameters."""

    def __init__(self, message: str, epoch: int, batch: int):
        self.epoch = epoch
        self.batch = batch
        super().__init__(f"{message} (epoch {epoch}, batch {batch})")


class RankingError(GrashError, ValueError):
    """Entity ranking input is invalid."""


class SearchConfigError(GrashError, ValueError):
    """Search parameters cannot be turned into a schedule."""


class SearchAbortedError(GrashError):
    """Every trial of a round failed."""


class CorrelationError(GrashError, ValueError):
    """Rank correlation is undefined for the given inputs."""
