"""Adagrad and Adam with sparse row updates."""

from abc import ABC, abstractmethod

import numpy as np


class Optimizer(ABC):
    """Updates rows of named parameter matrices in place.

    Only the rows touched by a batch are updated; ``weight_decay`` is added
    to their gradient before the update.
    """

    def __init__(self, learning_rate: float, weight_decay: float = 0.0):
        self.learning_rate = learning_rate
        self.weight_decay = weight_decay
        self.state: dict[str, dict[str, np.ndarray]] = {}

    def step(self, name: str, param: np.ndarray, rows: np.ndarray, grad: np.ndarray) -> None:
        """Apply one update to ``param[rows]``.

        Args:
            name: Key for the per-parameter state
            param: Parameter matrix, modified in place
            rows: Unique row indices
            grad: Gradient for those rows, same shape as ``param[rows]``
        """
        if name not in self.state:
            self.state[name] = self._init_state(param)
        if self.weight_decay:
            grad = grad + self.weight_decay * param[rows]
        self._update(self.state[name], param, rows, grad)

    def decay(self, factor: float) -> None:
        self.learning_rate *= factor

    @abstractmethod
    def _init_state(self, param: np.ndarray) -> dict[str, np.ndarray]: ...

    @abstractmethod
    def _update(self, state, param, rows, grad) -> None: ...


class Adagrad(Optimizer):
    def __init__(self, learning_rate: float, weight_decay: float = 0.0, eps: float = 1e-10):
        super().__init__(learning_rate, weight_decay)
        self.eps = eps

    def _init_state(self, param):
        return {"sum": np.zeros_like(param)}

    def _update(self, state, param, rows, grad):
        accumulated = state["sum"][rows] + grad * grad
        state["sum"][rows] = accumulated
        param[rows] -= self.learning_rate * grad / (np.sqrt(accumulated) + self.eps)


class Adam(Optimizer):
    """Adam with per-row step counts (rows untouched by a batch keep their moments)."""

    def __init__(
        self,
        learning_rate: float,
        weight_decay: float = 0.0,
        beta1: float = 0.9,
        beta2: float = 0.999,
        eps: float = 1e-8,
    ):
        super().__init__(learning_rate, weight_decay)
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps

    def _init_state(self, param):
        return {
            "m": np.zeros_like(param),
            "v": np.zeros_like(param),
            "t": np.zeros(param.shape[0], dtype=np.int64),
        }

    def _update(self, state, param, rows, grad):
        t = state["t"][rows] + 1
        state["t"][rows] = t
        m = self.beta1 * state["m"][rows] + (1 - self.beta1) * grad
        v = self.beta2 * state["v"][rows] + (1 - self.beta2) * grad * grad
        state["m"][rows] = m
        state["v"][rows] = v
        m_hat = m / (1 - self.beta1 ** t)[:, None]
        v_hat = v / (1 - self.beta2 ** t)[:, None]
        param[rows] -= self.learning_rate * m_hat / (np.sqrt(v_hat) + self.eps)


def make_optimizer(name: str, learning_rate: float, weight_decay: float = 0.0) -> Optimizer:
    if name == "adagrad":
        return Adagrad(learning_rate, weight_decay)
    if name == "adam":
        return Adam(learning_rate, weight_decay)
    raise ValueError(f"Unknown optimizer '{name}'")
