"""Negative sampling, optimizers and the epoch loop."""

from .models import LossTrace, TrainConfig
from .negatives import NegativeSampler, sample_negatives, scale_negatives
from .optimizers import Adagrad, Adam, Optimizer, make_optimizer
from .trainer import BatchGradients, DropoutMasks, batch_loss, train

__all__ = [
    "LossTrace",
    "TrainConfig",
    "NegativeSampler",
    "sample_negatives",
    "scale_negatives",
    "Adagrad",
    "Adam",
    "Optimizer",
    "make_optimizer",
    "BatchGradients",
    "DropoutMasks",
    "batch_loss",
    "train",
]
