"""Training configuration and loss trace."""

from dataclasses import asdict, dataclass, field
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

OptimizerName = Literal["adagrad", "adam"]
NegativePool = Literal["uniform", "frequency"]


class TrainConfig(BaseModel):
    """Hyperparameters of one training run."""

    model_config = ConfigDict(frozen=True)

    num_negatives: int = Field(default=256, ge=1)
    loss: Literal["cross_entropy"] = "cross_entropy"
    optimizer: OptimizerName = "adagrad"
    learning_rate: float = Field(default=0.1, gt=0)
    lr_decay: float = Field(default=1.0, gt=0, le=1)
    weight_decay: float = Field(default=0.0, ge=0)
    dropout: float = Field(default=0.0, ge=0, lt=1)
    batch_size: int = Field(default=1024, ge=1)
    init_scale: float = Field(default=0.1, gt=0)
    epochs: float = Field(default=1.0, ge=0)
    seed: int = 0
    negative_pool: NegativePool = "uniform"
    entity_reg: float = Field(default=0.0, ge=0)
    relation_reg: float = Field(default=0.0, ge=0)


@dataclass
class LossTrace:
    """Average loss per (possibly partial) epoch and the score counter."""

    epoch_losses: list[float] = field(default_factory=list)
    score_computations: int = 0
    epochs_trained: float = 0.0
    triples_seen: int = 0

    def to_dict(self) -> dict:
        return asdict(self)
