"""Data models for reduced graphs and core decompositions."""

from dataclasses import dataclass
from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, Field

from ..kg.models import KnowledgeGraph

Technique = Literal["full", "triple", "walk", "kcore"]


class Provenance(BaseModel):
    """How a subgraph was produced."""

    technique: Technique
    parameters: dict[str, Any] = Field(default_factory=dict)


@dataclass(frozen=True)
class Subgraph:
    """A reduced graph plus the index maps back to its parent.

    ``entity_map[i]`` is the parent index of subgraph entity ``i``;
    ``relation_map`` likewise. Both are strictly increasing.
    """

    graph: KnowledgeGraph
    entity_map: np.ndarray
    relation_map: np.ndarray
    provenance: Provenance
    parent_entity_count: int
    parent_triple_count: int

    @property
    def triple_fraction(self) -> float:
        return self.graph.num_triples / self.parent_triple_count

    @property
    def entity_fraction(self) -> float:
        return self.graph.num_entities / self.parent_entity_count

    def parent_triples(self) -> np.ndarray:
        """The retained triples expressed in parent indices."""
        t = self.graph.triples
        return np.stack(
            [self.entity_map[t[:, 0]], self.relation_map[t[:, 1]], self.entity_map[t[:, 2]]],
            axis=1,
        )


class CoreLevel(BaseModel):
    """Size of one nonempty k-core."""

    k: int
    triples: int
    entities: int


@dataclass(frozen=True)
class CoreLadder:
    """Per-entity core numbers plus the size of every nonempty k-core."""

    coreness: np.ndarray
    levels: tuple[CoreLevel, ...]
    parent_entity_count: int
    parent_triple_count: int
    graph_fingerprint: str = ""

    @property
    def max_k(self) -> int:
        return self.levels[-1].k if self.levels else 0

    def level(self, k: int) -> CoreLevel:
        return self.levels[k - 1]

    def triple_fraction(self, k: int) -> float:
        return self.level(k).triples / self.parent_triple_count


@dataclass(frozen=True)
class CoreChoice:
    """Result of picking a core for a target triple fraction."""

    k: int
    triples: int
    entities: int
    triple_fraction: float
    overshoot: bool = False
