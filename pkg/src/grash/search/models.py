"""Search parameters, schedule and per-trial results."""

from dataclasses import asdict, dataclass, field
from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

from ..config import settings

Variant = Literal["epoch", "graph", "combined"]
TrialStatus = Literal["ok", "failed"]


class SearchParams(BaseModel):
    """Inputs of one successive-halving search."""

    budget: float = Field(default=3.0, gt=0)
    num_configs: int = Field(default=64, ge=1)
    eta: int = Field(default=4, ge=2)
    max_epochs: float = Field(default=20.0, gt=0)
    variant: Variant = "combined"
    valid_size: int = Field(default_factory=lambda: settings.valid_size, ge=1)
    valid_fraction_cap: float = Field(
        default_factory=lambda: settings.valid_fraction_cap, gt=0, lt=1
    )
    model: Literal["complex", "transe", "rotate"] = "complex"
    dim: int = Field(default=128, ge=2)
    p_norm: Literal[1, 2] = 2
    seed: int = 0
    workers: int = Field(default_factory=lambda: settings.workers, ge=1)

    @model_validator(mode="after")
    def _check_pool(self) -> "SearchParams":
        if self.num_configs < self.eta:
            raise ValueError(
                f"num_configs ({self.num_configs}) must be >= eta ({self.eta})"
            )
        return self


class RoundPlan(BaseModel):
    """Fidelity and cost of one round."""

    round: int
    num_configs: int
    survivors: int
    fidelity: float
    epochs: float
    core_k: Optional[int] = None
    core_overshoot: bool = False
    triples: int
    entities: int
    triple_fraction: float
    planned_trial_cost: float
    planned_round_cost: float

    @property
    def graph_label(self) -> str:
        return "full" if self.core_k is None else f"{self.core_k}-core"


class SearchSchedule(BaseModel):
    """All rounds of a search, fixed before any training."""

    variant: Variant
    budget: float
    num_configs: int
    eta: int
    max_epochs: float
    num_rounds: int
    round_budget: float
    full_triples: int
    full_entities: int
    rounds: list[RoundPlan]
    planned_total_cost: float


@dataclass
class TrialResult:
    """Outcome of training and validating one config at one fidelity."""

    config_id: int
    round: int
    status: TrialStatus
    mrr: float
    planned_cost: float
    realized_cost: float
    epochs: float
    num_negatives: int
    seed: int
    hits_at: dict[int, float] = field(default_factory=dict)
    epoch_losses: list[float] = field(default_factory=list)
    train_score_computations: int = 0
    eval_score_computations: int = 0
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.status == "failed"

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class RoundSummary:
    """Resources and outcome of one executed round."""

    round: int
    graph: str
    entities: int
    relations: int
    triples: int
    train_triples: int
    valid_triples: int
    train_entities: int
    model_values: int
    eval_score_computations: int
    num_negatives: dict[int, int]
    completed: int
    failed: int
    survivors: list[int]
    best_mrr: float
    realized_cost: float

    def to_dict(self) -> dict:
        return asdict(self)
