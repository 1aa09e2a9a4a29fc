"""Data models for knowledge graphs and dataset splits."""

import hashlib
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np
from pydantic import BaseModel

from ..errors import EmptyGraphError

LabeledTriple = tuple[str, str, str]


def _frozen_triples(triples) -> np.ndarray:
    """Copy triples into a read-only (n, 3) int64 array."""
    array = np.array(triples, dtype=np.int64, copy=True).reshape(-1, 3)
    array.flags.writeable = False
    return array


def _vocabulary_digest(entities: tuple[str, ...], relations: tuple[str, ...]) -> bytes:
    digest = hashlib.sha256()
    for label in entities:
        digest.update(label.encode("utf-8") + b"\x00")
    digest.update(b"\x01")
    for label in relations:
        digest.update(label.encode("utf-8") + b"\x00")
    return digest.digest()


@dataclass(frozen=True)
class KnowledgeGraph:
    """Entity/relation vocabularies plus a set of index triples.

    Rows of ``triples`` are (subject, relation, object) indices into
    ``entities`` and ``relations``. Instances are immutable and safe to share
    across trial workers.
    """

    entities: tuple[str, ...]
    relations: tuple[str, ...]
    triples: np.ndarray
    duplicates_dropped: int = 0

    def __post_init__(self):
        object.__setattr__(self, "entities", tuple(self.entities))
        object.__setattr__(self, "relations", tuple(self.relations))
        object.__setattr__(self, "triples", _frozen_triples(self.triples))

    @classmethod
    def from_labeled_triples(cls, labeled: Iterable[LabeledTriple]) -> "KnowledgeGraph":
        """Build a graph with first-occurrence vocabularies, dropping duplicates.

        Args:
            labeled: (subject, relation, object) label triples

        Returns:
            KnowledgeGraph with ``duplicates_dropped`` set

        Raises:
            EmptyGraphError: If no triples are given
        """
        entity_ids: dict[str, int] = {}
        relation_ids: dict[str, int] = {}
        seen: set[tuple[int, int, int]] = set()
        rows: list[tuple[int, int, int]] = []
        duplicates = 0

        for subject, relation, obj in labeled:
            row = (
                entity_ids.setdefault(subject, len(entity_ids)),
                relation_ids.setdefault(relation, len(relation_ids)),
                entity_ids.setdefault(obj, len(entity_ids)),
            )
            if row in seen:
                duplicates += 1
                continue
            seen.add(row)
            rows.append(row)

        if not rows:
            raise EmptyGraphError("no triples")

        return cls(
            entities=tuple(entity_ids),
            relations=tuple(relation_ids),
            triples=np.array(rows, dtype=np.int64),
            duplicates_dropped=duplicates,
        )

    @property
    def num_entities(self) -> int:
        return len(self.entities)

    @property
    def num_relations(self) -> int:
        return len(self.relations)

    @property
    def num_triples(self) -> int:
        return int(self.triples.shape[0])

    def entity_degrees(self) -> np.ndarray:
        """Number of triples each entity occurs in (a self-loop counts once)."""
        subjects = self.triples[:, 0]
        objects = self.triples[:, 2]
        degrees = np.bincount(subjects, minlength=self.num_entities)
        degrees += np.bincount(objects[objects != subjects], minlength=self.num_entities)
        return degrees

    def labeled_triples(self) -> Iterator[LabeledTriple]:
        for s, p, o in self.triples:
            yield self.entities[s], self.relations[p], self.entities[o]

    def validate(self) -> list[str]:
        """Check the graph invariants.

        Returns:
            List of violation messages (empty when the graph is valid)
        """
        problems = []
        if self.num_triples == 0:
            problems.append("graph has no triples")
            return problems

        entity_columns = self.triples[:, [0, 2]]
        if entity_columns.min() < 0 or entity_columns.max() >= self.num_entities:
            problems.append("entity index out of range")
        relation_column = self.triples[:, 1]
        if relation_column.min() < 0 or relation_column.max() >= self.num_relations:
            problems.append("relation index out of range")
        if problems:
            return problems

        if np.unique(self.triples, axis=0).shape[0] != self.num_triples:
            problems.append("duplicate triples")
        if (self.entity_degrees() == 0).any():
            problems.append("entity vocabulary entry without triples")
        if (np.bincount(relation_column, minlength=self.num_relations) == 0).any():
            problems.append("relation vocabulary entry without triples")
        return problems

    def vocabulary_fingerprint(self) -> bytes:
        """SHA-256 over the ordered vocabularies."""
        return _vocabulary_digest(self.entities, self.relations)

    def fingerprint(self) -> str:
        """Hex digest identifying vocabularies and triples."""
        digest = hashlib.sha256(self.vocabulary_fingerprint())
        digest.update(np.ascontiguousarray(self.triples, dtype="<i8").tobytes())
        return digest.hexdigest()


@dataclass(frozen=True)
class DatasetSplit:
    """Train/valid/test triples indexed against one shared vocabulary.

    The vocabulary is exactly the entities and relations occurring in
    ``train``; valid/test triples that would reference anything else were
    dropped at construction and counted.
    """

    entities: tuple[str, ...]
    relations: tuple[str, ...]
    train: np.ndarray
    valid: np.ndarray
    test: np.ndarray
    dropped_valid: int = 0
    dropped_test: int = 0

    def __post_init__(self):
        object.__setattr__(self, "entities", tuple(self.entities))
        object.__setattr__(self, "relations", tuple(self.relations))
        for name in ("train", "valid", "test"):
            object.__setattr__(self, name, _frozen_triples(getattr(self, name)))

    @property
    def num_entities(self) -> int:
        return len(self.entities)

    @property
    def num_relations(self) -> int:
        return len(self.relations)

    def train_graph(self) -> KnowledgeGraph:
        return KnowledgeGraph(self.entities, self.relations, self.train)

    def known_triples(self) -> np.ndarray:
        """All triples of all splits, used as the ranking filter."""
        return np.concatenate([self.train, self.valid, self.test], axis=0)

    def vocabulary_fingerprint(self) -> bytes:
        return _vocabulary_digest(self.entities, self.relations)


class GraphStats(BaseModel):
    """Summary counts of a knowledge graph."""

    entities: int
    relations: int
    triples: int
    min_degree: int
    mean_degree: float
    max_degree: int
