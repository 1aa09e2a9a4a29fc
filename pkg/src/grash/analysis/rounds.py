"""How the number of rounds affects the selected configuration."""

import logging
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

from ..errors import SearchConfigError
from ..kg.models import DatasetSplit
from ..reduction.kcore import LadderCache
from ..reduction.models import CoreLadder
from ..search.models import SearchParams
from ..search.runner import final_train, run_search
from ..space.models import SearchSpace
from ..space.sampling import sample_configs

logger = logging.getLogger(__name__)


@dataclass
class RoundCountResult:
    eta: int
    rounds: int
    best_config_id: int
    search_cost: float
    final_valid_mrr: Optional[float]

    def to_dict(self) -> dict:
        return asdict(self)


def round_count_study(
    dataset: DatasetSplit,
    space: SearchSpace,
    etas: Sequence[int],
    params: SearchParams,
    ladder: Optional[CoreLadder] = None,
) -> list[RoundCountResult]:
    """Search once per eta with the same configs and budget, then train each winner fully.

    ``eta >= num_configs`` gives a single round.
    """
    if not etas:
        raise SearchConfigError("need at least one eta")
    configs = sample_configs(space, params.num_configs, params.seed, params.model)
    if ladder is None and params.variant != "epoch":
        ladder = LadderCache().get_or_compute(dataset.train_graph())

    results = []
    for eta in etas:
        eta_params = params.model_copy(update={"eta": min(eta, params.num_configs)})
        search = run_search(dataset, space, eta_params, ladder=ladder, configs=configs)
        final = final_train(
            dataset,
            search.best,
            params.max_epochs,
            params.dim,
            model=params.model,
            seed=params.seed,
            p_norm=params.p_norm,
        )
        result = RoundCountResult(
            eta=eta,
            rounds=search.schedule.num_rounds,
            best_config_id=search.best.config_id,
            search_cost=search.ledger.realized_total,
            final_valid_mrr=final.valid_report.mrr if final.valid_report else None,
        )
        logger.info(
            f"eta={eta}: {result.rounds} rounds, config {result.best_config_id}, "
            f"valid MRR {result.final_valid_mrr}"
        )
        results.append(result)
    return results
