"""Subgraph induction and triple-incidence indexing shared by all reductions."""

import numpy as np

from ..errors import ReductionError
from ..kg.models import KnowledgeGraph
from .models import Provenance, Subgraph


def induce_subgraph(
    parent: KnowledgeGraph, rows: np.ndarray, provenance: Provenance
) -> Subgraph:
    """Keep the given parent triples and the vocabulary they use.

    Entities and relations are re-indexed densely in parent order, so a
    subgraph retaining every triple equals its parent.

    Args:
        parent: Graph being reduced
        rows: Parent triple row indices to keep (duplicates ignored)
        provenance: Technique tag and parameters

    Returns:
        Subgraph

    Raises:
        ReductionError: If no triples are retained
    """
    rows = np.unique(np.asarray(rows, dtype=np.int64))
    if len(rows) == 0:
        raise ReductionError(f"{provenance.technique} reduction retained no triples")

    triples = parent.triples[rows]
    entity_map = np.unique(np.concatenate([triples[:, 0], triples[:, 2]]))
    relation_map = np.unique(triples[:, 1])

    entity_lookup = np.full(parent.num_entities, -1, dtype=np.int64)
    entity_lookup[entity_map] = np.arange(len(entity_map))
    relation_lookup = np.full(parent.num_relations, -1, dtype=np.int64)
    relation_lookup[relation_map] = np.arange(len(relation_map))

    local = np.stack(
        [
            entity_lookup[triples[:, 0]],
            relation_lookup[triples[:, 1]],
            entity_lookup[triples[:, 2]],
        ],
        axis=1,
    )
    graph = KnowledgeGraph(
        entities=tuple(parent.entities[i] for i in entity_map.tolist()),
        relations=tuple(parent.relations[i] for i in relation_map.tolist()),
        triples=local,
    )
    entity_map.flags.writeable = False
    relation_map.flags.writeable = False
    return Subgraph(
        graph=graph,
        entity_map=entity_map,
        relation_map=relation_map,
        provenance=provenance,
        parent_entity_count=parent.num_entities,
        parent_triple_count=parent.num_triples,
    )


def incidence_lists(graph: KnowledgeGraph) -> tuple[np.ndarray, np.ndarray]:
    """CSR lists of the triples each entity occurs in.

    Triples are undirected edges here; a self-loop is listed once.

    Returns:
        (incident, indptr) with entity ``e``'s triple ids in
        ``incident[indptr[e]:indptr[e + 1]]``
    """
    subjects = graph.triples[:, 0]
    objects = graph.triples[:, 2]
    triple_ids = np.arange(graph.num_triples)
    not_loop = subjects != objects

    ends = np.concatenate([subjects, objects[not_loop]])
    owners = np.concatenate([triple_ids, triple_ids[not_loop]])
    order = np.argsort(ends, kind="stable")

    indptr = np.zeros(graph.num_entities + 1, dtype=np.int64)
    np.cumsum(np.bincount(ends, minlength=graph.num_entities), out=indptr[1:])
    return owners[order], indptr
