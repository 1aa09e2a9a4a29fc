"""Filtered entity ranking: MRR and Hits@k."""

import logging
from collections import defaultdict
from typing import Iterable, Optional

import numpy as np
from pydantic import BaseModel

from ..config import settings
from ..errors import RankingError
from ..model.embedding import EmbeddingModel, score_queries

logger = logging.getLogger(__name__)

HITS_AT = (1, 3, 10)


class RankingReport(BaseModel):
    """Filtered ranking metrics over both prediction directions."""

    mrr: float
    hits_at: dict[int, float]
    n_queries: int
    score_computations: int
    ranks: Optional[list[int]] = None

    def to_record(self) -> dict:
        """Flat record for logs and report files."""
        record = {"mrr": self.mrr}
        for k in sorted(self.hits_at):
            record[f"hits@{k}"] = self.hits_at[k]
        record["n_queries"] = self.n_queries
        record["score_computations"] = self.score_computations
        return record


class FilterIndex:
    """Known objects per (s, p) and known subjects per (p, o)."""

    def __init__(self, triples: np.ndarray):
        objects: dict[tuple[int, int], list[int]] = defaultdict(list)
        subjects: dict[tuple[int, int], list[int]] = defaultdict(list)
        for s, p, o in np.asarray(triples, dtype=np.int64).reshape(-1, 3).tolist():
            objects[(s, p)].append(o)
            subjects[(p, o)].append(s)
        self._objects = {key: np.array(v, dtype=np.int64) for key, v in objects.items()}
        self._subjects = {key: np.array(v, dtype=np.int64) for key, v in subjects.items()}

    _EMPTY = np.zeros(0, dtype=np.int64)

    def objects(self, s: int, p: int) -> np.ndarray:
        return self._objects.get((s, p), self._EMPTY)

    def subjects(self, p: int, o: int) -> np.ndarray:
        return self._subjects.get((p, o), self._EMPTY)


def filtered_rank(scores: np.ndarray, true_entity: int, filter_out: Iterable[int]) -> int:
    """Rank of the true entity among unfiltered competitors.

    Ties count half (floored): ``1 + #greater + #equal // 2``.

    Raises:
        RankingError: If the true entity is filtered out or scores are not finite
    """
    scores = np.asarray(scores, dtype=np.float64)
    filter_out = np.fromiter(filter_out, dtype=np.int64)
    if (filter_out == true_entity).any():
        raise RankingError(f"true entity {true_entity} is in the filter set")
    if not np.isfinite(scores).all():
        raise RankingError("scores must be finite")

    competitors = np.ones(len(scores), dtype=bool)
    competitors[filter_out] = False
    competitors[true_entity] = False
    target = scores[true_entity]
    greater = int((scores[competitors] > target).sum())
    equal = int((scores[competitors] == target).sum())
    return 1 + greater + equal // 2


def _batch_ranks(scores: np.ndarray, truth: np.ndarray, known: list[np.ndarray]) -> np.ndarray:
    """Vectorized filtered_rank; ``known`` may include the true entity."""
    if not np.isfinite(scores).all():
        raise RankingError("model produced non-finite scores")
    rows = np.arange(len(truth))
    target = scores[rows, truth].copy()
    lengths = [len(k) for k in known]
    if sum(lengths):
        scores[np.repeat(rows, lengths), np.concatenate(known)] = -np.inf
    scores[rows, truth] = np.inf
    greater = (scores > target[:, None]).sum(axis=1) - 1
    equal = (scores == target[:, None]).sum(axis=1)
    return 1 + greater + equal // 2


def evaluate(
    model: EmbeddingModel,
    eval_triples: np.ndarray,
    filter_triples: np.ndarray,
    keep_ranks: bool = False,
    batch_size: Optional[int] = None,
) -> RankingReport:
    """Filtered MRR and Hits@{1,3,10} over object and subject queries.

    Ranks are ordered as all object queries followed by all subject queries.

    Args:
        model: Model to evaluate
        eval_triples: (m, 3) triples to rank
        filter_triples: Known true triples removed from every candidate list
        keep_ranks: Attach the per-query ranks to the report
        batch_size: Queries per scoring block (defaults to settings)

    Returns:
        RankingReport

    Raises:
        RankingError: On an empty evaluation set or non-finite scores
    """
    eval_triples = np.asarray(eval_triples, dtype=np.int64).reshape(-1, 3)
    if len(eval_triples) == 0:
        raise RankingError("no evaluation triples")

    index = FilterIndex(filter_triples)
    n_e = model.num_entities
    width = model.entity_embeddings.shape[1]
    batch_size = batch_size or settings.eval_batch_size
    batch_size = max(1, min(batch_size, settings.train_chunk_elements // (n_e * width)))

    ranks = []
    for direction in ("sp_", "_po"):
        for start in range(0, len(eval_triples), batch_size):
            block = eval_triples[start : start + batch_size]
            s, p, o = block[:, 0], block[:, 1], block[:, 2]
            if direction == "sp_":
                scores = score_queries(model, "sp_", s, p)
                known = [index.objects(a, b) for a, b in zip(s.tolist(), p.tolist())]
                ranks.append(_batch_ranks(scores, o, known))
            else:
                scores = score_queries(model, "_po", o, p)
                known = [index.subjects(a, b) for a, b in zip(p.tolist(), o.tolist())]
                ranks.append(_batch_ranks(scores, s, known))

    ranks = np.concatenate(ranks)
    report = RankingReport(
        mrr=float(np.mean(1.0 / ranks)),
        hits_at={k: float(np.mean(ranks <= k)) for k in HITS_AT},
        n_queries=len(ranks),
        score_computations=2 * len(eval_triples) * n_e,
        ranks=ranks.tolist() if keep_ranks else None,
    )
    logger.debug(f"Evaluated {report.n_queries} queries: MRR {report.mrr:.4f}")
    return report
