"""Round-by-round execution of a successive-halving search."""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..errors import (
    RankingError,
    SearchAbortedError,
    SearchConfigError,
    TrainingDivergedError,
)
from ..evaluation.ranking import RankingReport, evaluate
from ..kg.models import DatasetSplit, KnowledgeGraph
from ..kg.split import split_train_valid
from ..model.embedding import EmbeddingModel, init_model, validate_model_shape
from ..reduction.kcore import LadderCache, k_core
from ..reduction.models import CoreLadder
from ..space.models import HyperparamConfig, SearchSpace
from ..space.sampling import sample_configs, to_train_config
from ..training.models import LossTrace, TrainConfig
from ..training.negatives import scale_negatives
from ..training.trainer import train
from .ledger import BudgetLedger
from .models import RoundPlan, RoundSummary, SearchParams, SearchSchedule, TrialResult
from .schedule import plan_schedule
from .trial_log import TrialLogger

logger = logging.getLogger(__name__)

SPLIT_STREAM = 0
TRIAL_STREAM = 1
FINAL_STREAM = 2


def derive_seed(*words: int) -> int:
    """Deterministic 32-bit seed from integer words."""
    return int(np.random.SeedSequence([w & 0xFFFFFFFF for w in words]).generate_state(1)[0])


@dataclass
class SearchResult:
    """Everything a search produced."""

    best: HyperparamConfig
    configs: list[HyperparamConfig]
    trials: list[TrialResult]
    ledger: BudgetLedger
    schedule: SearchSchedule
    rounds: list[RoundSummary] = field(default_factory=list)


@dataclass
class FinalResult:
    """Full-fidelity retraining of the selected configuration."""

    model: EmbeddingModel
    train_config: TrainConfig
    trace: LossTrace
    valid_report: Optional[RankingReport]
    test_report: Optional[RankingReport]


def round_split(
    graph: KnowledgeGraph, params: SearchParams, round: int
) -> DatasetSplit:
    """Fresh train/valid split of a round's graph.

    The validation size is capped at ``valid_fraction_cap`` of the graph so
    small cores keep most of their triples for training.
    """
    valid_size = min(params.valid_size, int(params.valid_fraction_cap * graph.num_triples))
    if valid_size < 1:
        raise SearchConfigError(
            f"round {round}: graph with {graph.num_triples} triples is too small to validate"
        )
    split = split_train_valid(graph, valid_size, derive_seed(params.seed, SPLIT_STREAM, round))
    if len(split.valid) == 0:
        raise SearchConfigError(f"round {round}: every validation triple was dropped")
    return split


def negatives_for(config: HyperparamConfig, entities: int, full_entities: int) -> int:
    """Scaled N- for a round graph, kept below the entity count."""
    scaled = scale_negatives(int(config.values["num_negatives"]), entities, full_entities)
    if scaled >= entities:
        logger.warning(
            f"Config {config.config_id}: {scaled} negatives clamped to {entities - 1} "
            f"for {entities} entities"
        )
        scaled = entities - 1
    return scaled


def realized_cost(plan: RoundPlan, epochs_trained: float) -> float:
    """Planned trial cost scaled to the epochs that were actually trained."""
    if plan.epochs <= 0:
        return 0.0
    if epochs_trained == plan.epochs:
        return plan.planned_trial_cost
    return plan.planned_trial_cost * (epochs_trained / plan.epochs)


def run_trial(
    config: HyperparamConfig,
    plan: RoundPlan,
    split: DatasetSplit,
    params: SearchParams,
    full_entities: int,
) -> TrialResult:
    """Train one config from scratch at a round's fidelity and validate it.

    The realized cost is measured from the triples actually trained, so a
    partial epoch rounded down to whole triples costs less than planned.
    Divergence and non-finite scores yield a failed result with MRR 0.
    """
    seed = derive_seed(params.seed, TRIAL_STREAM, plan.round, config.config_id)
    negatives = negatives_for(config, split.num_entities, full_entities)
    train_config = to_train_config(config, epochs=plan.epochs, seed=seed, num_negatives=negatives)
    model = init_model(
        params.model,
        params.dim,
        split.num_entities,
        split.num_relations,
        train_config.init_scale,
        seed,
        params.p_norm,
    )
    result = TrialResult(
        config_id=config.config_id,
        round=plan.round,
        status="ok",
        mrr=0.0,
        planned_cost=plan.planned_trial_cost,
        realized_cost=0.0,
        epochs=plan.epochs,
        num_negatives=negatives,
        seed=seed,
    )
    try:
        model, trace = train(model, split.train, train_config)
        result.realized_cost = realized_cost(plan, trace.triples_seen / len(split.train))
        result.epoch_losses = trace.epoch_losses
        result.train_score_computations = trace.score_computations
        report = evaluate(model, split.valid, np.concatenate([split.train, split.valid]))
    except TrainingDivergedError as e:
        done = e.epoch + min(1.0, (e.batch + 1) * train_config.batch_size / len(split.train))
        result.status = "failed"
        result.realized_cost = realized_cost(plan, min(done, plan.epochs))
        result.error = f"{type(e).__name__}: {e}"
        logger.error(f"Trial {config.config_id} (round {plan.round}) diverged: {e}")
        return result
    except RankingError as e:
        result.status = "failed"
        result.error = f"{type(e).__name__}: {e}"
        logger.error(f"Trial {config.config_id} (round {plan.round}) failed validation: {e}")
        return result

    result.mrr = report.mrr
    result.hits_at = report.hits_at
    result.eval_score_computations = report.score_computations
    return result


def select_survivors(results: list[TrialResult], count: int) -> list[int]:
    """Config ids of the ``count`` best trials by MRR, ties to the lower id."""
    ranked = sorted(results, key=lambda r: (-r.mrr, r.config_id))
    return [r.config_id for r in ranked[:count]]


def _round_graph(
    graph: KnowledgeGraph, plan: RoundPlan, ladder: Optional[CoreLadder]
) -> KnowledgeGraph:
    if plan.core_k is None:
        return graph
    return k_core(graph, plan.core_k, ladder).graph


def run_search(
    dataset: DatasetSplit,
    space: SearchSpace,
    params: SearchParams,
    trial_logger: Optional[TrialLogger] = None,
    ladder: Optional[CoreLadder] = None,
    configs: Optional[list[HyperparamConfig]] = None,
) -> SearchResult:
    """Run every round: reduce, re-split, train, validate, keep the best 1/eta.

    Args:
        dataset: Full dataset; only its train split is searched on
        space: Space the initial configs are drawn from
        params: Search parameters
        trial_logger: Receives one record per trial, in config-id order
        ladder: Core ladder of the train graph; computed (and cached) if needed
        configs: Initial configs; sampled from ``space`` with ``params.seed`` if omitted

    Returns:
        SearchResult with the single surviving config

    Raises:
        SearchAbortedError: If every trial of a round fails
    """
    validate_model_shape(params.model, params.dim)
    graph = dataset.train_graph()
    if params.variant != "epoch" and ladder is None:
        ladder = LadderCache().get_or_compute(graph)
    schedule = plan_schedule(params, ladder, graph.num_triples, graph.num_entities)
    if configs is None:
        configs = sample_configs(space, params.num_configs, params.seed, params.model)
    elif len(configs) != params.num_configs:
        raise SearchConfigError(f"expected {params.num_configs} configs, got {len(configs)}")

    by_id = {c.config_id: c for c in configs}
    pool = [c.config_id for c in configs]
    ledger = BudgetLedger(params.budget)
    trials: list[TrialResult] = []
    summaries: list[RoundSummary] = []

    for plan in schedule.rounds:
        round_graph = _round_graph(graph, plan, ladder)
        split = round_split(round_graph, params, plan.round)
        logger.info(
            f"Round {plan.round}/{schedule.num_rounds}: {len(pool)} configs on "
            f"{plan.graph_label} graph ({plan.triples} triples), {plan.epochs:g} epochs"
        )

        round_configs = [by_id[i] for i in sorted(pool)]

        def job(config: HyperparamConfig) -> TrialResult:
            return run_trial(config, plan, split, params, graph.num_entities)

        if params.workers > 1:
            with ThreadPoolExecutor(max_workers=params.workers) as executor:
                results = list(executor.map(job, round_configs))
        else:
            results = [job(c) for c in round_configs]

        for config, result in zip(round_configs, results):
            ledger.record(
                plan.round,
                result.config_id,
                result.planned_cost,
                result.realized_cost,
                result.status,
            )
            if trial_logger is not None:
                trial_logger.log_trial(config, plan, result)
        trials.extend(results)

        failed = sum(r.failed for r in results)
        if failed == len(results):
            raise SearchAbortedError(f"all {failed} trials of round {plan.round} failed")

        pool = select_survivors(results, plan.survivors)
        summaries.append(_summarize(plan, round_graph, split, params, results, pool, ledger))
        status = ledger.get_status()
        logger.info(
            f"Round {plan.round} done: best MRR {summaries[-1].best_mrr:.4f}, "
            f"{failed} failed, budget spent {status['realized_total']:.4f}/{params.budget:g}"
        )

    return SearchResult(
        best=by_id[pool[0]],
        configs=configs,
        trials=trials,
        ledger=ledger,
        schedule=schedule,
        rounds=summaries,
    )


def _summarize(
    plan: RoundPlan,
    graph: KnowledgeGraph,
    split: DatasetSplit,
    params: SearchParams,
    results: list[TrialResult],
    survivors: list[int],
    ledger: BudgetLedger,
) -> RoundSummary:
    width = params.dim
    rel_width = params.dim // 2 if params.model == "rotate" else params.dim
    return RoundSummary(
        round=plan.round,
        graph=plan.graph_label,
        entities=graph.num_entities,
        relations=graph.num_relations,
        triples=graph.num_triples,
        train_triples=len(split.train),
        valid_triples=len(split.valid),
        train_entities=split.num_entities,
        model_values=split.num_entities * width + split.num_relations * rel_width,
        eval_score_computations=2 * len(split.valid) * split.num_entities,
        num_negatives={r.config_id: r.num_negatives for r in results},
        completed=sum(not r.failed for r in results),
        failed=sum(r.failed for r in results),
        survivors=survivors,
        best_mrr=max(r.mrr for r in results),
        realized_cost=ledger.round_total(plan.round),
    )


def final_train(
    dataset: DatasetSplit,
    config: HyperparamConfig,
    max_epochs: float,
    dim: int,
    model: str = "complex",
    seed: int = 0,
    p_norm: int = 2,
) -> FinalResult:
    """Train a config at full fidelity on the original train split.

    Evaluation on the original valid and test splits filters against all
    known triples. Divergence propagates as TrainingDivergedError.
    """
    run_seed = derive_seed(seed, FINAL_STREAM, config.config_id)
    negatives = min(int(config.values["num_negatives"]), dataset.num_entities - 1)
    train_config = to_train_config(
        config, epochs=max_epochs, seed=run_seed, num_negatives=negatives
    )
    initial = init_model(
        model,
        dim,
        dataset.num_entities,
        dataset.num_relations,
        train_config.init_scale,
        run_seed,
        p_norm,
    )
    logger.info(f"Final training of config {config.config_id} for {max_epochs:g} epochs")
    trained, trace = train(initial, dataset.train, train_config)

    known = dataset.known_triples()
    valid_report = evaluate(trained, dataset.valid, known) if len(dataset.valid) else None
    test_report = evaluate(trained, dataset.test, known) if len(dataset.test) else None
    return FinalResult(trained, train_config, trace, valid_report, test_report)

