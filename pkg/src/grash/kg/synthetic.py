"""Seeded synthetic knowledge graphs with cluster structure and long-tail degrees."""

import logging

import numpy as np

from .models import KnowledgeGraph

logger = logging.getLogger(__name__)


def generate_clustered_kg(
    num_entities: int = 5000,
    num_relations: int = 20,
    num_triples: int = 50000,
    num_clusters: int = 10,
    zipf_exponent: float = 1.0,
    noise: float = 0.05,
    seed: int = 0,
    max_rounds: int = 50,
) -> KnowledgeGraph:
    """Generate a learnable KG whose relations map clusters onto clusters.

    Each entity belongs to one cluster and has a Zipf-like popularity. Every
    relation connects a subject cluster ``c`` to object cluster
    ``(c + shift[r]) % num_clusters``; a ``noise`` fraction of triples picks
    the object cluster uniformly instead. Subjects and objects are drawn by
    popularity, which yields the long-tail degree distribution that makes
    k-cores small.

    Args:
        num_entities: Candidate entities (unused ones do not enter the vocabulary)
        num_relations: Number of relations
        num_triples: Target number of distinct triples
        num_clusters: Number of entity clusters
        zipf_exponent: Popularity decay exponent
        noise: Fraction of triples with a random object cluster
        seed: Generator seed
        max_rounds: Upper bound on sampling rounds

    Returns:
        KnowledgeGraph with labels ``e<i>`` and ``r<j>``
    """
    if num_clusters > num_entities:
        raise ValueError("num_clusters must not exceed num_entities")

    rng = np.random.default_rng(seed)
    cluster = rng.permutation(np.arange(num_entities) % num_clusters)
    popularity = 1.0 / (1.0 + rng.permutation(num_entities)) ** zipf_exponent
    shift = rng.integers(0, num_clusters, size=num_relations)

    members = [np.flatnonzero(cluster == c) for c in range(num_clusters)]
    member_weights = [popularity[m] / popularity[m].sum() for m in members]
    subject_weights = popularity / popularity.sum()

    rows = np.zeros((0, 3), dtype=np.int64)
    for _ in range(max_rounds):
        batch = max(1024, 2 * (num_triples - len(rows)))
        relations = rng.integers(0, num_relations, size=batch)
        subjects = rng.choice(num_entities, size=batch, p=subject_weights)
        target = (cluster[subjects] + shift[relations]) % num_clusters
        noisy = rng.random(batch) < noise
        target[noisy] = rng.integers(0, num_clusters, size=int(noisy.sum()))

        objects = np.empty(batch, dtype=np.int64)
        for c in range(num_clusters):
            picked = np.flatnonzero(target == c)
            if len(picked):
                objects[picked] = rng.choice(members[c], size=len(picked), p=member_weights[c])

        fresh = np.stack([subjects, relations, objects], axis=1)
        fresh = fresh[fresh[:, 0] != fresh[:, 2]]
        combined = np.concatenate([rows, fresh], axis=0)
        _, first = np.unique(combined, axis=0, return_index=True)
        rows = combined[np.sort(first)]
        if len(rows) >= num_triples:
            break
    else:
        logger.warning(f"Generated only {len(rows)} of {num_triples} distinct triples")

    rows = rows[:num_triples]
    return KnowledgeGraph.from_labeled_triples(
        (f"e{s}", f"r{p}", f"e{o}") for s, p, o in rows.tolist()
    )
