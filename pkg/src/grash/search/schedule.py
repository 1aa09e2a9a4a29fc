"""Successive-halving schedule planning and the relative cost model."""

import logging
import math
from typing import Optional

from ..errors import SearchConfigError
from ..reduction.kcore import select_core_for_fidelity
from ..reduction.models import CoreLadder
from .models import RoundPlan, SearchParams, SearchSchedule

logger = logging.getLogger(__name__)


def num_rounds(n: int, eta: int) -> int:
    """Smallest s with eta**s >= n, i.e. ceil(log_eta(n)) without float error."""
    s = 0
    while eta**s < n:
        s += 1
    return max(s, 1)


def survivor_counts(n: int, eta: int) -> list[int]:
    """Pool sizes |L_1|, ..., |L_{s+1}|, ending at exactly 1."""
    if eta < 2 or n < 1:
        raise SearchConfigError(f"need eta >= 2 and n >= 1, got eta={eta}, n={n}")
    counts = [n]
    for _ in range(num_rounds(n, eta)):
        counts.append(-(-counts[-1] // eta))
    return counts


def trial_cost(epochs: float, max_epochs: float, triples: int, full_triples: int) -> float:
    """Relative cost (E_i / E) * (|K_i| / |K|) of one trial."""
    if max_epochs <= 0 or full_triples <= 0:
        raise ValueError("max_epochs and full_triples must be positive")
    return (epochs / max_epochs) * (triples / full_triples)


def plan_schedule(
    params: SearchParams,
    ladder: Optional[CoreLadder],
    full_triples: int,
    full_entities: int,
) -> SearchSchedule:
    """Lay out every round's pool size, fidelity, epochs, graph and planned cost.

    Args:
        params: Search parameters
        ladder: Core ladder of the training graph (unused by the epoch variant)
        full_triples: |K| of the full training graph
        full_entities: |E| of the full training graph

    Returns:
        SearchSchedule

    Raises:
        SearchConfigError: On n < eta or a missing ladder
    """
    n, eta = params.num_configs, params.eta
    if eta < 2 or n < eta:
        raise SearchConfigError(f"need eta >= 2 and n >= eta, got n={n}, eta={eta}")
    if params.variant != "epoch" and ladder is None:
        raise SearchConfigError(f"variant '{params.variant}' needs a core ladder")

    counts = survivor_counts(n, eta)
    s = len(counts) - 1
    round_budget = params.budget / s

    rounds = []
    for i in range(s):
        pool = counts[i]
        if params.variant == "combined":
            target = round_budget / math.sqrt(pool)
        else:
            target = round_budget / pool
        fidelity = target
        if fidelity > 1.0:
            logger.warning(
                f"Round {i + 1}: fidelity {fidelity:.4f} exceeds full fidelity; clamped to 1"
            )
            fidelity = 1.0

        epochs = params.max_epochs if params.variant == "graph" else fidelity * params.max_epochs
        if params.variant == "epoch" and epochs < 1:
            logger.warning(
                f"Round {i + 1}: {epochs:.3f} epochs is a partial epoch over a triple subset"
            )

        core_k, overshoot = None, False
        triples, entities = full_triples, full_entities
        if params.variant != "epoch":
            choice = select_core_for_fidelity(ladder, fidelity)
            core_k, overshoot = choice.k, choice.overshoot
            triples, entities = choice.triples, choice.entities

        cost = trial_cost(epochs, params.max_epochs, triples, full_triples)
        rounds.append(
            RoundPlan(
                round=i + 1,
                num_configs=pool,
                survivors=counts[i + 1],
                fidelity=fidelity,
                epochs=epochs,
                core_k=core_k,
                core_overshoot=overshoot,
                triples=triples,
                entities=entities,
                triple_fraction=triples / full_triples,
                planned_trial_cost=cost,
                planned_round_cost=pool * cost,
            )
        )

    return SearchSchedule(
        variant=params.variant,
        budget=params.budget,
        num_configs=n,
        eta=eta,
        max_epochs=params.max_epochs,
        num_rounds=s,
        round_budget=round_budget,
        full_triples=full_triples,
        full_entities=full_entities,
        rounds=rounds,
        planned_total_cost=math.fsum(r.planned_round_cost for r in rounds),
    )
