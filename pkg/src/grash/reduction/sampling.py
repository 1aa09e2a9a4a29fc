"""Triple sampling and multi-start random walk reductions."""

import logging
import math

import numpy as np

from ..errors import ReductionError
from ..kg.models import KnowledgeGraph
from .induce import incidence_lists, induce_subgraph
from .models import Provenance, Subgraph

logger = logging.getLogger(__name__)


def _round_half_up(value: float) -> int:
    return int(math.floor(value + 0.5))


def triple_sample(graph: KnowledgeGraph, fraction: float, seed: int) -> Subgraph:
    """Keep ``round(fraction * |triples|)`` triples drawn without replacement.

    Raises:
        ReductionError: If fraction is outside (0, 1] or rounds to zero triples
    """
    if not 0.0 < fraction <= 1.0:
        raise ReductionError(f"fraction must be in (0, 1], got {fraction}")

    count = _round_half_up(fraction * graph.num_triples)
    if count == 0:
        raise ReductionError(
            f"fraction {fraction} of {graph.num_triples} triples retains no triples"
        )

    rng = np.random.default_rng(seed)
    rows = rng.choice(graph.num_triples, size=count, replace=False)
    return induce_subgraph(
        graph, rows, Provenance(technique="triple", parameters={"fraction": fraction, "seed": seed})
    )


def random_walk_sample(
    graph: KnowledgeGraph, num_starts: int, walk_length: int, seed: int
) -> Subgraph:
    """Union of the triples traversed by ``num_starts`` walks of ``walk_length`` steps.

    Start entities are drawn uniformly without replacement. Each step picks
    a uniformly random triple incident to the current entity (either
    direction) and moves to its other endpoint.

    Raises:
        ReductionError: On non-positive parameters or more starts than entities
    """
    if num_starts < 1 or walk_length < 1:
        raise ReductionError("num_starts and walk_length must be >= 1")
    if num_starts > graph.num_entities:
        raise ReductionError(
            f"num_starts={num_starts} exceeds the number of entities ({graph.num_entities})"
        )

    rng = np.random.default_rng(seed)
    incident, indptr = incidence_lists(graph)
    subjects = graph.triples[:, 0]
    objects = graph.triples[:, 2]

    current = rng.choice(graph.num_entities, size=num_starts, replace=False)
    walked = []
    for _ in range(walk_length):
        low = indptr[current]
        degree = indptr[current + 1] - low
        step = incident[low + rng.integers(0, degree)]
        walked.append(step)
        current = np.where(subjects[step] == current, objects[step], subjects[step])

    return induce_subgraph(
        graph,
        np.concatenate(walked),
        Provenance(
            technique="walk",
            parameters={"num_starts": num_starts, "walk_length": walk_length, "seed": seed},
        ),
    )


def random_walk_for_fraction(
    graph: KnowledgeGraph,
    fraction: float,
    seed: int,
    start_fraction: float = 0.2,
    max_attempts: int = 8,
) -> Subgraph:
    """Random-walk subgraph sized to roughly ``fraction`` of the triples.

    Starts are ``start_fraction`` of the entities (capped by the target
    triple count); the walk length grows until the walked union reaches 90%
    of the target or the attempts run out.

    Args:
        graph: Graph to reduce
        fraction: Target triple fraction in (0, 1]
        seed: Walk seed
        start_fraction: Share of entities used as walk starts
        max_attempts: Walk-length adjustments before giving up

    Returns:
        Subgraph whose provenance records the final (s, l)
    """
    if not 0.0 < fraction <= 1.0:
        raise ReductionError(f"fraction must be in (0, 1], got {fraction}")

    target = max(1, _round_half_up(fraction * graph.num_triples))
    num_starts = min(max(1, _round_half_up(start_fraction * graph.num_entities)), target)
    walk_length = max(1, math.ceil(target / num_starts))

    subgraph = random_walk_sample(graph, num_starts, walk_length, seed)
    for _ in range(max_attempts - 1):
        achieved = subgraph.graph.num_triples
        if achieved >= 0.9 * target:
            break
        walk_length = math.ceil(walk_length * target / max(achieved, 1)) + 1
        subgraph = random_walk_sample(graph, num_starts, walk_length, seed)
    if subgraph.graph.num_triples < 0.9 * target:
        logger.warning(
            f"Random walk reached {subgraph.graph.num_triples} of {target} target triples"
        )
    return subgraph
