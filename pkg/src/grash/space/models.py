"""Search space descriptors and sampled configurations."""

import math
from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..errors import SearchConfigError

ParamKind = Literal["log", "linear", "int_log", "categorical"]
ParamValue = Union[int, float, str]


class ParamSpec(BaseModel):
    """One hyperparameter: its kind and domain.

    ``zero_below`` turns log-scale draws under the threshold into 0, which
    models a penalty that is switched off.
    """

    kind: ParamKind
    low: Optional[float] = None
    high: Optional[float] = None
    choices: Optional[list[str]] = None
    zero_below: Optional[float] = None

    @model_validator(mode="after")
    def _check_domain(self) -> "ParamSpec":
        if self.kind == "categorical":
            if not self.choices:
                raise ValueError("categorical parameter needs a nonempty choices list")
            return self
        if self.low is None or self.high is None:
            raise ValueError(f"{self.kind} parameter needs low and high")
        if not (math.isfinite(self.low) and math.isfinite(self.high)) or self.low >= self.high:
            raise ValueError(
                f"bounds must be finite with low < high, got [{self.low}, {self.high}]"
            )
        if self.kind in ("log", "int_log") and self.low <= 0:
            raise ValueError("log-scale bounds must be positive")
        return self

    def map_unit(self, u: float) -> ParamValue:
        """Map a uniform draw in [0, 1) onto this domain."""
        if self.kind == "categorical":
            return self.choices[min(int(u * len(self.choices)), len(self.choices) - 1)]
        if self.kind == "linear":
            return self.low + u * (self.high - self.low)
        if self.kind == "log":
            value = math.exp(math.log(self.low) + u * (math.log(self.high) - math.log(self.low)))
            if self.zero_below is not None and value < self.zero_below:
                return 0.0
            return value
        # int_log: uniform in log over [low, high + 1), floored
        value = math.exp(math.log(self.low) + u * (math.log(self.high + 1) - math.log(self.low)))
        return int(min(max(math.floor(value), self.low), self.high))

    def clamp(self, value: ParamValue, u: float) -> ParamValue:
        """Move a value drawn from another domain into this one.

        Numbers are clipped to the bounds; a category this domain lacks is
        redrawn from ``u``.
        """
        if self.contains(value):
            return value
        if self.kind == "categorical":
            return self.map_unit(u)
        clipped = min(max(value, self.low), self.high)
        return int(clipped) if self.kind == "int_log" else float(clipped)

    def contains(self, value: ParamValue) -> bool:
        if self.kind == "categorical":
            return value in self.choices
        if self.kind == "log" and self.zero_below is not None and value == 0:
            return True
        if self.kind == "int_log" and not float(value).is_integer():
            return False
        return self.low <= value <= self.high


class SearchSpace(BaseModel):
    """Ordered hyperparameter descriptors plus per-model replacements.

    Parameter order is the draw order; it must not depend on the model so
    that one seed yields the same underlying draws for every scorer.
    """

    params: dict[str, ParamSpec]
    model_overrides: dict[str, dict[str, ParamSpec]] = Field(default_factory=dict)

    def for_model(self, model: str) -> dict[str, ParamSpec]:
        overrides = self.model_overrides.get(model, {})
        unknown = set(overrides) - set(self.params)
        if unknown:
            raise SearchConfigError(f"overrides for unknown parameters: {sorted(unknown)}")
        return {name: overrides.get(name, spec) for name, spec in self.params.items()}


class HyperparamConfig(BaseModel):
    """One sampled configuration; values never change after sampling."""

    model_config = ConfigDict(frozen=True)

    config_id: int
    values: dict[str, ParamValue]
