"""Default search space, config sampling and conversion to training configs."""

import json
import logging
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import ValidationError

from ..errors import SearchConfigError
from ..training.models import TrainConfig
from .models import HyperparamConfig, ParamSpec, SearchSpace

logger = logging.getLogger(__name__)

NEGATIVE_CAPS = {"complex": 10000, "transe": 1000, "rotate": 1000}


def default_space() -> SearchSpace:
    """Nine continuous and two categorical hyperparameters.

    The negative-count upper bound depends on the scorer.
    """
    penalty = {"kind": "log", "low": 1e-12, "high": 1e-1, "zero_below": 1e-10}
    params = {
        "learning_rate": ParamSpec(kind="log", low=1e-4, high=1.0),
        "lr_decay": ParamSpec(kind="linear", low=0.9, high=1.0),
        "weight_decay": ParamSpec(kind="log", low=1e-12, high=1e-2, zero_below=1e-10),
        "dropout": ParamSpec(kind="linear", low=0.0, high=0.5),
        "init_scale": ParamSpec(kind="log", low=1e-4, high=1.0),
        "num_negatives": ParamSpec(kind="int_log", low=16, high=NEGATIVE_CAPS["complex"]),
        "batch_size": ParamSpec(kind="int_log", low=128, high=4096),
        "entity_reg": ParamSpec(**penalty),
        "relation_reg": ParamSpec(**penalty),
        "optimizer": ParamSpec(kind="categorical", choices=["adagrad", "adam"]),
        "negative_pool": ParamSpec(kind="categorical", choices=["uniform", "frequency"]),
    }
    overrides = {
        model: {"num_negatives": ParamSpec(kind="int_log", low=16, high=cap)}
        for model, cap in NEGATIVE_CAPS.items()
        if cap != NEGATIVE_CAPS["complex"]
    }
    return SearchSpace(params=params, model_overrides=overrides)


def load_space(path: Path) -> SearchSpace:
    """Read a JSON space file and merge it over the default space.

    Raises:
        SearchConfigError: If the file does not describe a valid space
    """
    with open(path, encoding="utf-8") as f:
        data = json.load(f)
    return merge_space(default_space(), data)


def merge_space(base: SearchSpace, data: dict[str, Any]) -> SearchSpace:
    """Override parameters and model overrides of ``base`` from a JSON-like dict."""
    if not isinstance(data, dict) or set(data) - {"params", "model_overrides"}:
        raise SearchConfigError("space file must hold only 'params' and 'model_overrides'")
    try:
        params = dict(base.params)
        for name, spec in data.get("params", {}).items():
            params[name] = ParamSpec(**spec)
        overrides = {model: dict(specs) for model, specs in base.model_overrides.items()}
        for model, specs in data.get("model_overrides", {}).items():
            for name, spec in specs.items():
                overrides.setdefault(model, {})[name] = ParamSpec(**spec)
        return SearchSpace(params=params, model_overrides=overrides)
    except (ValidationError, TypeError) as e:
        raise SearchConfigError(f"invalid search space: {e}") from e


def sample_configs(
    space: SearchSpace, n: int, seed: int, model: str = "complex"
) -> list[HyperparamConfig]:
    """Draw n configurations.

    One uniform number per parameter is drawn in parameter order and mapped
    through the shared domain; a model override then clamps the value into
    its own bounds, so scorers differ only where their bounds bind.
    """
    if n < 1:
        raise SearchConfigError(f"n must be >= 1, got {n}")
    specs = space.for_model(model)
    units = np.random.default_rng(seed).random((n, len(specs)))
    configs = []
    for i, row in enumerate(units):
        values = {}
        for (name, spec), u in zip(specs.items(), row.tolist()):
            value = space.params[name].map_unit(u)
            values[name] = value if spec is space.params[name] else spec.clamp(value, u)
        configs.append(HyperparamConfig(config_id=i, values=values))
    return configs


def check_config(space: SearchSpace, config: HyperparamConfig, model: str) -> list[str]:
    """Names of values outside their domain."""
    specs = space.for_model(model)
    return [name for name, spec in specs.items() if not spec.contains(config.values[name])]


def to_train_config(
    config: HyperparamConfig, epochs: float, seed: int, **overrides: Any
) -> TrainConfig:
    """Turn sampled values into a TrainConfig for one trial.

    Values for fields TrainConfig does not know are ignored.
    """
    fields = {k: v for k, v in config.values.items() if k in TrainConfig.model_fields}
    fields.update(epochs=epochs, seed=seed, **overrides)
    return TrainConfig(**fields)
