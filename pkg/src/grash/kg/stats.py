"""Graph summary statistics."""

from .models import GraphStats, KnowledgeGraph


def stats(graph: KnowledgeGraph) -> GraphStats:
    """Count entities, relations, triples and the entity degree range.

    Degree is the number of triples an entity occurs in.
    """
    degrees = graph.entity_degrees()
    return GraphStats(
        entities=graph.num_entities,
        relations=graph.num_relations,
        triples=graph.num_triples,
        min_degree=int(degrees.min()) if len(degrees) else 0,
        mean_degree=float(degrees.mean()) if len(degrees) else 0.0,
        max_degree=int(degrees.max()) if len(degrees) else 0,
    )
