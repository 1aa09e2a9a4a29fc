"""Train/valid/test splitting with unseen-entity filtering."""

import logging
from typing import Sequence

import numpy as np

from ..errors import SplitError
from .models import DatasetSplit, KnowledgeGraph

logger = logging.getLogger(__name__)


def _row_keys(rows: np.ndarray) -> set[tuple[int, int, int]]:
    return {tuple(row) for row in rows.tolist()}


def build_split(
    entities: Sequence[str],
    relations: Sequence[str],
    train: np.ndarray,
    valid: np.ndarray,
    test: np.ndarray,
) -> DatasetSplit:
    """Re-index splits onto the vocabulary occurring in ``train``.

    Valid/test triples that use an entity or relation absent from train, or
    that repeat a triple of an earlier split, are dropped and counted.

    Args:
        entities: Labels indexed by the entity columns of all splits
        relations: Labels indexed by the relation column of all splits
        train: Training triples
        valid: Validation triples
        test: Test triples

    Returns:
        DatasetSplit over the compacted train vocabulary
    """
    train = np.asarray(train, dtype=np.int64).reshape(-1, 3)
    valid = np.asarray(valid, dtype=np.int64).reshape(-1, 3)
    test = np.asarray(test, dtype=np.int64).reshape(-1, 3)
    if len(train) == 0:
        raise SplitError("train split is empty")

    entity_seen = np.zeros(len(entities), dtype=bool)
    entity_seen[train[:, 0]] = True
    entity_seen[train[:, 2]] = True
    relation_seen = np.zeros(len(relations), dtype=bool)
    relation_seen[train[:, 1]] = True

    entity_index = np.full(len(entities), -1, dtype=np.int64)
    entity_index[entity_seen] = np.arange(int(entity_seen.sum()))
    relation_index = np.full(len(relations), -1, dtype=np.int64)
    relation_index[relation_seen] = np.arange(int(relation_seen.sum()))

    def remap(rows: np.ndarray) -> np.ndarray:
        return np.stack(
            [entity_index[rows[:, 0]], relation_index[rows[:, 1]], entity_index[rows[:, 2]]],
            axis=1,
        ).reshape(-1, 3)

    taken = _row_keys(train)
    kept = {}
    dropped = {}
    for name, rows in (("valid", valid), ("test", test)):
        known = (
            entity_seen[rows[:, 0]] & relation_seen[rows[:, 1]] & entity_seen[rows[:, 2]]
        )
        keep = []
        for i in np.flatnonzero(known).tolist():
            key = tuple(rows[i].tolist())
            if key not in taken:
                taken.add(key)
                keep.append(i)
        kept[name] = remap(rows[keep]) if keep else np.zeros((0, 3), dtype=np.int64)
        dropped[name] = len(rows) - len(keep)

    entity_labels = [label for label, seen in zip(entities, entity_seen) if seen]
    relation_labels = [label for label, seen in zip(relations, relation_seen) if seen]
    return DatasetSplit(
        entities=tuple(entity_labels),
        relations=tuple(relation_labels),
        train=remap(train),
        valid=kept["valid"],
        test=kept["test"],
        dropped_valid=dropped["valid"],
        dropped_test=dropped["test"],
    )


def split_train_valid(graph: KnowledgeGraph, valid_size: int, seed: int) -> DatasetSplit:
    """Randomly hold out ``valid_size`` triples as a validation split.

    Held-out triples whose entities or relations would be unseen in the
    remaining training triples are dropped, not re-sampled, so the split is
    one pass and deterministic given ``seed``.

    Args:
        graph: Graph to split
        valid_size: Number of triples to hold out, 0 < valid_size < |triples|
        seed: Split seed

    Returns:
        DatasetSplit with an empty test split

    Raises:
        SplitError: If valid_size is out of range
    """
    n = graph.num_triples
    if valid_size <= 0 or valid_size >= n:
        raise SplitError(
            f"valid_size must satisfy 0 < valid_size < {n} (number of triples), got {valid_size}"
        )

    permutation = np.random.default_rng(seed).permutation(n)
    valid_rows = np.sort(permutation[:valid_size])
    train_rows = np.sort(permutation[valid_size:])

    split = build_split(
        graph.entities,
        graph.relations,
        graph.triples[train_rows],
        graph.triples[valid_rows],
        np.zeros((0, 3), dtype=np.int64),
    )
    if split.dropped_valid:
        logger.info(
            f"Dropped {split.dropped_valid} of {valid_size} validation triples "
            f"with entities/relations unseen in train"
        )
    return split


def holdout_split(
    graph: KnowledgeGraph, valid_size: int, test_size: int, seed: int
) -> DatasetSplit:
    """Carve a test split (if requested) and then a validation split.

    Args:
        graph: Graph to split
        valid_size: Validation triples to hold out
        test_size: Test triples to hold out (0 for none)
        seed: Split seed; the test pass uses ``seed`` and the valid pass ``seed + 1``

    Returns:
        DatasetSplit
    """
    if test_size <= 0:
        return split_train_valid(graph, valid_size, seed)

    first = split_train_valid(graph, test_size, seed)
    rest = KnowledgeGraph(first.entities, first.relations, first.train)
    second = split_train_valid(rest, valid_size, seed + 1)

    # Lift the second pass back onto first-pass indices, then compact once more.
    final = build_split(
        first.entities,
        first.relations,
        _lift_rows(second.train, second, first),
        _lift_rows(second.valid, second, first),
        first.valid,
    )
    return DatasetSplit(
        entities=final.entities,
        relations=final.relations,
        train=final.train,
        valid=final.valid,
        test=final.test,
        dropped_valid=second.dropped_valid + final.dropped_valid,
        dropped_test=first.dropped_valid + final.dropped_test,
    )


def _lift_rows(rows: np.ndarray, inner: DatasetSplit, outer: DatasetSplit) -> np.ndarray:
    """Translate rows indexed by ``inner``'s vocabulary into ``outer``'s indices."""
    entity_ids = {label: i for i, label in enumerate(outer.entities)}
    relation_ids = {label: i for i, label in enumerate(outer.relations)}
    entity_map = np.array([entity_ids[label] for label in inner.entities], dtype=np.int64)
    relation_map = np.array([relation_ids[label] for label in inner.relations], dtype=np.int64)
    if len(rows) == 0:
        return np.zeros((0, 3), dtype=np.int64)
    return np.stack(
        [entity_map[rows[:, 0]], relation_map[rows[:, 1]], entity_map[rows[:, 2]]], axis=1
    )
