"""k-core decomposition on triple-incidence degree, core selection and the ladder cache."""

import heapq
import json
import logging
from pathlib import Path
from typing import Optional

import numpy as np

from ..config import settings
from ..errors import EmptyCoreError, ReductionError
from ..kg.models import KnowledgeGraph
from .induce import incidence_lists, induce_subgraph
from .models import CoreChoice, CoreLadder, CoreLevel, Provenance, Subgraph

logger = logging.getLogger(__name__)

LADDER_FORMAT = "grash-core-ladder"
LADDER_VERSION = 1


def core_decomposition(graph: KnowledgeGraph) -> CoreLadder:
    """Compute every entity's core number by min-degree peeling.

    An entity's degree is the number of remaining triples it occurs in.
    Removing an entity removes its triples, which lowers the degree of
    each triple's other endpoint.

    Args:
        graph: Graph to decompose

    Returns:
        CoreLadder with one level per nonempty k-core
    """
    degree = graph.entity_degrees().tolist()
    incident, indptr = incidence_lists(graph)
    incident = incident.tolist()
    indptr = indptr.tolist()
    subjects = graph.triples[:, 0].tolist()
    objects = graph.triples[:, 2].tolist()

    removed = [False] * graph.num_triples
    done = [False] * graph.num_entities
    coreness = [0] * graph.num_entities

    heap = [(d, e) for e, d in enumerate(degree)]
    heapq.heapify(heap)
    k = 0
    while heap:
        d, entity = heapq.heappop(heap)
        if done[entity] or d != degree[entity]:
            continue
        k = max(k, d)
        coreness[entity] = k
        done[entity] = True
        for t in incident[indptr[entity] : indptr[entity + 1]]:
            if removed[t]:
                continue
            removed[t] = True
            other = objects[t] if subjects[t] == entity else subjects[t]
            if not done[other]:
                degree[other] -= 1
                heapq.heappush(heap, (degree[other], other))

    core = np.array(coreness, dtype=np.int64)
    return CoreLadder(
        coreness=core,
        levels=_levels(graph, core),
        parent_entity_count=graph.num_entities,
        parent_triple_count=graph.num_triples,
        graph_fingerprint=graph.fingerprint(),
    )


def _levels(graph: KnowledgeGraph, coreness: np.ndarray) -> tuple[CoreLevel, ...]:
    """Triple and entity counts of every nonempty k-core, k = 1..max."""
    if len(coreness) == 0:
        return ()
    max_k = int(coreness.max())
    triple_core = np.minimum(coreness[graph.triples[:, 0]], coreness[graph.triples[:, 2]])
    # count of items with core >= k, for k = 0..max_k
    triples_at = np.cumsum(np.bincount(triple_core, minlength=max_k + 1)[::-1])[::-1]
    entities_at = np.cumsum(np.bincount(coreness, minlength=max_k + 1)[::-1])[::-1]
    return tuple(
        CoreLevel(k=k, triples=int(triples_at[k]), entities=int(entities_at[k]))
        for k in range(1, max_k + 1)
    )


def k_core(graph: KnowledgeGraph, k: int, ladder: CoreLadder) -> Subgraph:
    """Induce the k-core from a precomputed ladder.

    Raises:
        EmptyCoreError: If the k-core is empty
        ReductionError: If the ladder belongs to a different graph
    """
    if len(ladder.coreness) != graph.num_entities:
        raise ReductionError(
            f"ladder covers {len(ladder.coreness)} entities, graph has {graph.num_entities}"
        )
    if k < 1 or k > ladder.max_k:
        raise EmptyCoreError(k, ladder.max_k)

    core = ladder.coreness
    keep = (core[graph.triples[:, 0]] >= k) & (core[graph.triples[:, 2]] >= k)
    return induce_subgraph(
        graph, np.flatnonzero(keep), Provenance(technique="kcore", parameters={"k": k})
    )


def select_core_for_fidelity(ladder: CoreLadder, target_triple_fraction: float) -> CoreChoice:
    """Pick the largest core whose triple count does not exceed the target.

    Falls back to the deepest core, flagged as an overshoot, when even that
    one is above the target.

    Raises:
        ReductionError: If the target is outside (0, 1] or the ladder is empty
    """
    if not 0.0 < target_triple_fraction <= 1.0:
        raise ReductionError(f"target fraction must be in (0, 1], got {target_triple_fraction}")
    if not ladder.levels:
        raise ReductionError("core ladder is empty")

    budget = target_triple_fraction * ladder.parent_triple_count
    for level in ladder.levels:
        if level.triples <= budget:
            return _choice(ladder, level, overshoot=False)

    deepest = ladder.levels[-1]
    logger.warning(
        f"Deepest core k={deepest.k} holds {ladder.triple_fraction(deepest.k):.4f} of the "
        f"triples, above target {target_triple_fraction:.4f}"
    )
    return _choice(ladder, deepest, overshoot=True)


def _choice(ladder: CoreLadder, level: CoreLevel, overshoot: bool) -> CoreChoice:
    return CoreChoice(
        k=level.k,
        triples=level.triples,
        entities=level.entities,
        triple_fraction=ladder.triple_fraction(level.k),
        overshoot=overshoot,
    )


class LadderCache:
    """On-disk CoreLadder store keyed by graph fingerprint.

    Each ladder is a ``<fingerprint>.json`` summary next to a
    ``<fingerprint>.coreness.npy`` array.
    """

    def __init__(self, cache_dir: Optional[Path] = None):
        self.cache_dir = Path(cache_dir) if cache_dir is not None else settings.cache_dir

    def _paths(self, fingerprint: str) -> tuple[Path, Path]:
        return (
            self.cache_dir / f"{fingerprint}.json",
            self.cache_dir / f"{fingerprint}.coreness.npy",
        )

    def get(self, graph: KnowledgeGraph) -> Optional[CoreLadder]:
        """Load the cached ladder for a graph, or None if absent or unreadable."""
        fingerprint = graph.fingerprint()
        summary_path, coreness_path = self._paths(fingerprint)
        if not summary_path.exists() or not coreness_path.exists():
            return None
        try:
            with open(summary_path, encoding="utf-8") as f:
                summary = json.load(f)
            if summary.get("format") != LADDER_FORMAT or summary.get("version") != LADDER_VERSION:
                logger.warning(f"Ignoring ladder cache {summary_path} with unknown format")
                return None
            coreness = np.load(coreness_path, allow_pickle=False)
        except (OSError, ValueError) as e:
            logger.warning(f"Failed to read ladder cache {summary_path}: {e}")
            return None

        if len(coreness) != graph.num_entities:
            return None
        return CoreLadder(
            coreness=coreness.astype(np.int64),
            levels=tuple(CoreLevel(**level) for level in summary["levels"]),
            parent_entity_count=summary["parent_entity_count"],
            parent_triple_count=summary["parent_triple_count"],
            graph_fingerprint=fingerprint,
        )

    def store(self, ladder: CoreLadder) -> Path:
        """Write a ladder; returns the summary path."""
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        summary_path, coreness_path = self._paths(ladder.graph_fingerprint)
        np.save(coreness_path, ladder.coreness.astype("<i8"), allow_pickle=False)
        summary = {
            "format": LADDER_FORMAT,
            "version": LADDER_VERSION,
            "graph_fingerprint": ladder.graph_fingerprint,
            "parent_entity_count": ladder.parent_entity_count,
            "parent_triple_count": ladder.parent_triple_count,
            "levels": [level.model_dump() for level in ladder.levels],
        }
        with open(summary_path, "w", encoding="utf-8") as f:
            json.dump(summary, f, indent=2)
        return summary_path

    def get_or_compute(self, graph: KnowledgeGraph) -> CoreLadder:
        ladder = self.get(graph)
        if ladder is not None:
            logger.debug(f"Core ladder cache hit for {ladder.graph_fingerprint[:12]}")
            return ladder
        logger.info(f"Computing core decomposition ({graph.num_triples} triples)")
        ladder = core_decomposition(graph)
        try:
            self.store(ladder)
        except OSError as e:
            logger.warning(f"Failed to cache core ladder: {e}")
        return ladder
