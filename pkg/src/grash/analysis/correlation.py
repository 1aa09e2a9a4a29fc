"""Rank correlation between low- and full-fidelity config rankings."""

import logging
import math
from typing import Literal, Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field
from scipy.stats import rankdata

from ..errors import CorrelationError, ReductionError, SearchConfigError, SplitError
from ..kg.models import DatasetSplit, KnowledgeGraph
from ..reduction.kcore import LadderCache, k_core, select_core_for_fidelity
from ..reduction.models import CoreLadder
from ..reduction.sampling import random_walk_for_fraction, triple_sample
from ..search.models import RoundPlan, SearchParams
from ..search.runner import derive_seed, round_split, run_trial
from ..search.schedule import trial_cost
from ..space.models import SearchSpace
from ..space.sampling import sample_configs

logger = logging.getLogger(__name__)

Technique = Literal["kcore", "walk", "triple", "epoch", "combined"]
TECHNIQUES: tuple[str, ...] = ("kcore", "walk", "triple", "epoch", "combined")
REDUCTION_STREAM = 3


def spearman(a: Sequence[float], b: Sequence[float]) -> float:
    """Spearman's rho as the Pearson correlation of average ranks.

    Raises:
        CorrelationError: On mismatched or too short inputs, or constant ranks
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise CorrelationError("inputs must be 1-d vectors of equal length")
    if len(a) < 2:
        raise CorrelationError("need at least two values")

    ra = rankdata(a) - (len(a) + 1) / 2.0
    rb = rankdata(b) - (len(b) + 1) / 2.0
    denominator = math.sqrt(float(ra @ ra) * float(rb @ rb))
    if denominator == 0.0:
        raise CorrelationError("rank correlation is undefined for constant input")
    return float(np.clip(float(ra @ rb) / denominator, -1.0, 1.0))


class CorrelationReport(BaseModel):
    """One (technique, budget) cell of a transferability sweep."""

    technique: str
    budget: float
    rho: Optional[float]
    n_configs: int
    pairs: list[tuple[float, float]] = Field(default_factory=list)
    triple_fraction: float = 1.0
    epochs: float = 0.0
    note: Optional[str] = None


def _plan(
    fidelity: float,
    epochs: float,
    graph: KnowledgeGraph,
    full: KnowledgeGraph,
    max_epochs: float,
    n: int,
    core_k: Optional[int] = None,
) -> RoundPlan:
    cost = trial_cost(epochs, max_epochs, graph.num_triples, full.num_triples)
    return RoundPlan(
        round=0,
        num_configs=n,
        survivors=n,
        fidelity=fidelity,
        epochs=epochs,
        core_k=core_k,
        triples=graph.num_triples,
        entities=graph.num_entities,
        triple_fraction=graph.num_triples / full.num_triples,
        planned_trial_cost=cost,
        planned_round_cost=n * cost,
    )


def _reduced_graph(
    technique: str,
    budget: float,
    graph: KnowledgeGraph,
    ladder: Optional[CoreLadder],
    seed: int,
) -> tuple[KnowledgeGraph, Optional[int]]:
    if technique in ("kcore", "combined"):
        fraction = budget if technique == "kcore" else math.sqrt(budget)
        choice = select_core_for_fidelity(ladder, fraction)
        return k_core(graph, choice.k, ladder).graph, choice.k
    if technique == "triple":
        return triple_sample(graph, budget, seed).graph, None
    if technique == "walk":
        return random_walk_for_fraction(graph, budget, seed).graph, None
    raise SearchConfigError(f"Unknown technique '{technique}'")


def transferability_sweep(
    dataset: DatasetSplit,
    space: SearchSpace,
    configs: int,
    techniques: Sequence[Technique],
    budgets: Sequence[float],
    full_epochs: float,
    params: Optional[SearchParams] = None,
    ladder: Optional[CoreLadder] = None,
) -> list[CorrelationReport]:
    """Correlate low-fidelity rankings of the same configs with a full-fidelity reference.

    The reference trains every config for ``full_epochs`` on the dataset's
    train split and validates on its valid split. The ``epoch`` technique
    reuses that split with ``budget * full_epochs`` epochs; graph techniques
    train for ``full_epochs`` on a reduced graph holding ``budget`` of the
    triples and validate on its own fresh split; ``combined`` applies
    ``sqrt(budget)`` to both. All passes use the same per-config seeds.

    Args:
        dataset: Dataset with a nonempty valid split
        space: Space to sample configs from
        configs: Number of configs (>= 3)
        techniques: Subset of kcore, walk, triple, epoch, combined
        budgets: Fractions in (0, 1]
        full_epochs: Reference training length
        params: Model, dim, seed and validation sizing
        ladder: Core ladder of the train graph (computed if needed)

    Returns:
        One report per (technique, budget), technique-major
    """
    params = params or SearchParams(num_configs=max(configs, 4), eta=2)
    if configs < 3:
        raise SearchConfigError(f"need at least 3 configs, got {configs}")
    if len(dataset.valid) == 0:
        raise SearchConfigError("transferability sweep needs a validation split")
    for technique in techniques:
        if technique not in TECHNIQUES:
            raise SearchConfigError(f"Unknown technique '{technique}'")
    for budget in budgets:
        if not 0.0 < budget <= 1.0:
            raise SearchConfigError(f"budgets must be in (0, 1], got {budget}")

    graph = dataset.train_graph()
    if ladder is None and {"kcore", "combined"} & set(techniques):
        ladder = LadderCache().get_or_compute(graph)
    pool = sample_configs(space, configs, params.seed, params.model)

    def run(plan: RoundPlan, split: DatasetSplit) -> dict[int, Optional[float]]:
        results = [run_trial(c, plan, split, params, graph.num_entities) for c in pool]
        return {r.config_id: (r.mrr if not r.failed else None) for r in results}

    logger.info(f"Reference pass: {configs} configs, {full_epochs:g} epochs")
    reference = run(_plan(1.0, full_epochs, graph, graph, full_epochs, configs), dataset)
    excluded = sorted(i for i, mrr in reference.items() if mrr is None)
    kept = [c.config_id for c in pool if c.config_id not in excluded]
    note = f"excluded configs {excluded}: reference trial failed" if excluded else None
    if excluded:
        logger.warning(note)

    reports = []
    for t_index, technique in enumerate(techniques):
        for b_index, budget in enumerate(budgets):
            if technique == "epoch":
                reduced, core_k, split = graph, None, dataset
                epochs = budget * full_epochs
            else:
                seed = derive_seed(params.seed, REDUCTION_STREAM, t_index, b_index)
                epochs = full_epochs * (math.sqrt(budget) if technique == "combined" else 1.0)
                try:
                    reduced, core_k = _reduced_graph(technique, budget, graph, ladder, seed)
                    split = round_split(reduced, params, 0)
                except (ReductionError, SplitError, SearchConfigError) as e:
                    reason = f"no trainable subgraph: {e}"
                    logger.warning(f"{technique} @ {budget:g}: {reason}")
                    reports.append(
                        CorrelationReport(
                            technique=technique,
                            budget=budget,
                            rho=None,
                            n_configs=0,
                            triple_fraction=0.0,
                            epochs=epochs,
                            note=f"{note}; {reason}" if note else reason,
                        )
                    )
                    continue

            plan = _plan(budget, epochs, reduced, graph, full_epochs, configs, core_k)
            low = run(plan, split)
            pairs = [(low[i] if low[i] is not None else 0.0, reference[i]) for i in kept]
            report = CorrelationReport(
                technique=technique,
                budget=budget,
                rho=None,
                n_configs=len(pairs),
                pairs=pairs,
                triple_fraction=plan.triple_fraction,
                epochs=epochs,
                note=note,
            )
            try:
                report.rho = spearman([p[0] for p in pairs], [p[1] for p in pairs])
            except CorrelationError as e:
                report.note = f"{note}; {e}" if note else str(e)
            logger.info(f"{technique} @ {budget:g}: rho={report.rho}")
            reports.append(report)
    return reports


def format_table(reports: Sequence[CorrelationReport]) -> str:
    """Budget rows by technique columns of rho values."""
    techniques = list(dict.fromkeys(r.technique for r in reports))
    budgets = sorted({r.budget for r in reports})
    cells = {(r.technique, r.budget): r.rho for r in reports}
    lines = ["budget\t" + "\t".join(techniques)]
    for budget in budgets:
        values = []
        for technique in techniques:
            rho = cells.get((technique, budget))
            values.append("-" if rho is None else f"{rho:.3f}")
        lines.append(f"{budget:g}\t" + "\t".join(values))
    return "\n".join(lines)
