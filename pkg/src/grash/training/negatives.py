"""Negative sampling without replacement and negative-count scaling."""

import logging
import math
from typing import Literal, Optional

import numpy as np

from ..config import settings
from ..errors import NegativeSamplingError
from .models import NegativePool

logger = logging.getLogger(__name__)


def scale_negatives(n_neg: int, sub_entities: int, full_entities: int) -> int:
    """Shrink N- in proportion to a subgraph's entity count.

    Keeps every entity's chance of being drawn as a negative at
    ``n_neg / full_entities``.
    """
    if n_neg < 1:
        raise ValueError(f"n_neg must be >= 1, got {n_neg}")
    if not 0 < sub_entities <= full_entities:
        raise ValueError(
            f"need 0 < sub_entities <= full_entities, got {sub_entities}, {full_entities}"
        )
    return max(1, int(math.floor(n_neg * sub_entities / full_entities + 0.5)))


class NegativeSampler:
    """Draws distinct negative entities per positive.

    ``uniform`` picks each n-subset with equal probability. ``frequency``
    draws without replacement with weights ``degree + 1``.
    """

    def __init__(
        self,
        num_entities: int,
        pool: NegativePool = "uniform",
        degrees: Optional[np.ndarray] = None,
        chunk_elements: Optional[int] = None,
    ):
        self.num_entities = num_entities
        self.pool = pool
        self.chunk_elements = chunk_elements or settings.train_chunk_elements
        self.log_weights = None
        if pool == "frequency":
            if degrees is None:
                raise ValueError("frequency pool needs entity degrees")
            self.log_weights = np.log(np.asarray(degrees, dtype=np.float64) + 1.0)
        elif pool != "uniform":
            raise ValueError(f"Unknown negative pool '{pool}'")

    def sample(self, rows: int, n: int, rng: np.random.Generator) -> np.ndarray:
        """Return a (rows, n) array; each row holds n distinct entity ids.

        Raises:
            NegativeSamplingError: If n is not below the number of entities
        """
        if n >= self.num_entities:
            raise NegativeSamplingError(
                f"cannot draw {n} distinct negatives from {self.num_entities} entities"
            )
        if n < 1:
            raise NegativeSamplingError(f"number of negatives must be >= 1, got {n}")
        if self.pool == "uniform" and n * n <= 8 * self.num_entities:
            return self._floyd(rows, n, rng)
        return self._top_keys(rows, n, rng)

    def _floyd(self, rows: int, n: int, rng: np.random.Generator) -> np.ndarray:
        """Floyd's subset algorithm, vectorized over rows."""
        chosen = np.empty((rows, n), dtype=np.int64)
        for i, j in enumerate(range(self.num_entities - n, self.num_entities)):
            pick = rng.integers(0, j + 1, size=rows)
            taken = (chosen[:, :i] == pick[:, None]).any(axis=1)
            chosen[:, i] = np.where(taken, j, pick)
        return chosen

    def _top_keys(self, rows: int, n: int, rng: np.random.Generator) -> np.ndarray:
        """Top-n of random keys; Gumbel-perturbed log weights for the frequency pool."""
        step = max(1, self.chunk_elements // self.num_entities)
        blocks = []
        for start in range(0, rows, step):
            count = min(step, rows - start)
            if self.log_weights is None:
                keys = rng.random((count, self.num_entities))
            else:
                keys = self.log_weights + rng.gumbel(size=(count, self.num_entities))
            blocks.append(np.argpartition(-keys, n - 1, axis=1)[:, :n])
        return np.concatenate(blocks, axis=0)


def sample_negatives(
    train: np.ndarray,
    positive: tuple[int, int, int],
    n: int,
    direction: Literal["subject", "object"],
    rng: np.random.Generator,
    num_entities: Optional[int] = None,
    pool: NegativePool = "uniform",
) -> np.ndarray:
    """Corrupt one side of a positive triple with n distinct entities.

    Args:
        train: (m, 3) training triples; defines the entity set and degrees
        positive: The triple being corrupted
        n: Number of negatives
        direction: Which side to replace
        rng: Random stream
        num_entities: Entity count; defaults to the largest id in train plus one
        pool: ``uniform`` or ``frequency``

    Returns:
        (n, 3) corrupted triples
    """
    if direction not in ("subject", "object"):
        raise ValueError(f"direction must be 'subject' or 'object', got {direction!r}")
    train = np.asarray(train, dtype=np.int64)
    if num_entities is None:
        num_entities = int(max(train[:, 0].max(), train[:, 2].max())) + 1
    degrees = None
    if pool == "frequency":
        degrees = np.bincount(train[:, 0], minlength=num_entities) + np.bincount(
            train[:, 2], minlength=num_entities
        )
    entities = NegativeSampler(num_entities, pool, degrees).sample(1, n, rng)[0]

    corrupted = np.tile(np.asarray(positive, dtype=np.int64), (n, 1))
    corrupted[:, 0 if direction == "subject" else 2] = entities
    return corrupted
