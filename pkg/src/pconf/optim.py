"""Full-batch Adam minimization over a flat parameter vector.

The update rule is the classic biased-moment / bias-corrected one:

    m <- b1 m + (1 - b1) g          m_hat = m / (1 - b1^t)
    v <- b2 v + (1 - b2) g^2        v_hat = v / (1 - b2^t)
    params <- params - lr * m_hat / (sqrt(v_hat) + eps) - lr * wd * params

Weight decay is decoupled (additive) and defaults to 0. Defaults are the
published ones (lr 1e-3, b1 0.9, b2 0.999, eps 1e-8). minimize() is a pure
function of (objective, init, cfg): one call is sequential, independent
calls are safe to run concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ContractError, DivergedOptimizationError, InvalidSpecError

__all__ = ["AdamConfig", "AdamState", "MinimizeResult", "adam_step", "minimize"]

Objective = Callable[[np.ndarray], tuple[float, np.ndarray]]


@dataclass(frozen=True)
class AdamConfig:
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    epochs: int = 5000
    weight_decay: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.learning_rate) and self.learning_rate > 0):
            raise InvalidSpecError(f"learning_rate must be positive, got {self.learning_rate}")
        for name in ("beta1", "beta2"):
            b = getattr(self, name)
            if not (0.0 <= b < 1.0):
                raise InvalidSpecError(f"{name} must lie in [0, 1), got {b}")
        if not (np.isfinite(self.epsilon) and self.epsilon > 0):
            raise InvalidSpecError(f"epsilon must be positive, got {self.epsilon}")
        if int(self.epochs) != self.epochs or self.epochs < 1:
            raise InvalidSpecError(f"epochs must be a count >= 1, got {self.epochs}")
        if not (np.isfinite(self.weight_decay) and self.weight_decay >= 0):
            raise InvalidSpecError(f"weight_decay must be >= 0, got {self.weight_decay}")


@dataclass
class AdamState:
    first_moment: np.ndarray
    second_moment: np.ndarray
    step_count: int = 0

    @classmethod
    def zeros(cls, params: np.ndarray) -> "AdamState":
        return cls(np.zeros_like(params), np.zeros_like(params), 0)


@dataclass
class MinimizeResult:
    params: np.ndarray
    losses: list = field(default_factory=list)  # objective value before each step


def adam_step(
    params: np.ndarray, grad: np.ndarray, state: AdamState, cfg: AdamConfig
) -> tuple[np.ndarray, AdamState]:
    """One Adam update; returns fresh (params, state), inputs untouched."""
    if params.shape != grad.shape or params.shape != state.first_moment.shape:
        raise ContractError(
            f"shape mismatch: params {params.shape}, grad {grad.shape}, "
            f"state {state.first_moment.shape}"
        )
    if not np.all(np.isfinite(grad)):
        raise DivergedOptimizationError("non-finite gradient", step=state.step_count + 1)
    t = state.step_count + 1
    m = cfg.beta1 * state.first_moment + (1.0 - cfg.beta1) * grad
    v = cfg.beta2 * state.second_moment + (1.0 - cfg.beta2) * grad * grad
    m_hat = m / (1.0 - cfg.beta1**t)
    v_hat = v / (1.0 - cfg.beta2**t)
    new_params = (
        params
        - cfg.learning_rate * m_hat / (np.sqrt(v_hat) + cfg.epsilon)
        - cfg.learning_rate * cfg.weight_decay * params
    )
    return new_params, AdamState(m, v, t)


def minimize(objective: Objective, init: np.ndarray, cfg: AdamConfig) -> MinimizeResult:
    """Run exactly cfg.epochs full-batch Adam steps from init.

    Raises DivergedOptimizationError (carrying the epoch index) on a
    non-finite loss or gradient.
    """
    params = np.array(init, dtype=float)
    state = AdamState.zeros(params)
    losses = []
    for epoch in range(1, cfg.epochs + 1):
        value, grad = objective(params)
        if not np.isfinite(value):
            raise DivergedOptimizationError("non-finite objective value", step=epoch)
        losses.append(float(value))
        params, state = adam_step(params, grad, state, cfg)
    return MinimizeResult(params=params, losses=losses)
