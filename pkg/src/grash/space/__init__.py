"""Hyperparameter search space."""

from .models import HyperparamConfig, ParamKind, ParamSpec, SearchSpace
from .sampling import (
    NEGATIVE_CAPS,
    check_config,
    default_space,
    load_space,
    merge_space,
    sample_configs,
    to_train_config,
)

__all__ = [
    "HyperparamConfig",
    "ParamKind",
    "ParamSpec",
    "SearchSpace",
    "NEGATIVE_CAPS",
    "check_config",
    "default_space",
    "load_space",
    "merge_space",
    "sample_configs",
    "to_train_config",
]
