"""Append-only JSONL log of trials."""

import json
import logging
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Optional

from ..space.models import HyperparamConfig
from .models import RoundPlan, TrialResult

logger = logging.getLogger(__name__)


@dataclass
class TrialRecord:
    """One line of the trial log. Only ``timestamp`` varies between reruns."""

    timestamp: str
    round: int
    config_id: int
    values: dict[str, Any]
    graph: str
    fidelity: float
    epochs: float
    triples: int
    num_negatives: int
    seed: int
    planned_cost: float
    realized_cost: float
    status: str
    mrr: float
    hits_at: dict[str, float]
    epoch_losses: list[float]
    train_score_computations: int
    eval_score_computations: int
    error: Optional[str] = None

    def to_dict(self) -> dict:
        return asdict(self)


class TrialLogger:
    """Writes one JSON object per trial to a JSONL file."""

    def __init__(self, log_path: Optional[Path], enabled: bool = True):
        """Initialize the logger.

        Args:
            log_path: Path to the JSONL file
            enabled: Whether records are written to disk
        """
        self.log_path = log_path
        self.enabled = enabled and log_path is not None
        self.records: list[TrialRecord] = []

        if self.enabled:
            self.log_path.parent.mkdir(parents=True, exist_ok=True)

    def log_trial(
        self, config: HyperparamConfig, plan: RoundPlan, result: TrialResult
    ) -> TrialRecord:
        record = TrialRecord(
            timestamp=datetime.now(timezone.utc).isoformat(),
            round=result.round,
            config_id=result.config_id,
            values=dict(config.values),
            graph=plan.graph_label,
            fidelity=plan.fidelity,
            epochs=result.epochs,
            triples=plan.triples,
            num_negatives=result.num_negatives,
            seed=result.seed,
            planned_cost=result.planned_cost,
            realized_cost=result.realized_cost,
            status=result.status,
            mrr=result.mrr,
            hits_at={str(k): v for k, v in result.hits_at.items()},
            epoch_losses=result.epoch_losses,
            train_score_computations=result.train_score_computations,
            eval_score_computations=result.eval_score_computations,
            error=result.error,
        )
        self.records.append(record)
        if self.enabled:
            self._write(record)
        return record

    def _write(self, record: TrialRecord) -> None:
        try:
            with open(self.log_path, "a", encoding="utf-8") as f:
                f.write(json.dumps(record.to_dict()) + "\n")
        except OSError as e:
            logger.warning(f"Failed to write trial log: {e}")


def read_trial_log(path: Path) -> list[dict[str, Any]]:
    with open(path, encoding="utf-8") as f:
        return [json.loads(line) for line in f if line.strip()]
