"""Confidence estimation, skew injection, clipping, and adjustment families.

The pipeline clips at three points — after estimation, after skew, and
after adjustment — one more than strictly needed, so that r^k can never
re-enter the unstable region near 0 for large k (the weights (1-r)/r must
stay finite).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import LabeledDataset
from .errors import InvalidDataError, InvalidSpecError
from .models import LinearModel, logistic_loss, sigmoid
from .optim import AdamConfig, minimize

__all__ = [
    "AdjustmentSpec",
    "SkewSpec",
    "ConfidencePredictor",
    "estimate_confidence",
    "skew",
    "clip",
    "adjust",
    "confidence_from_drowsiness",
]

DEFAULT_FLOOR = 0.01  # confidence below this is rounded up for stability
DEFAULT_L2_STRENGTH = 1e-4


@dataclass(frozen=True)
class SkewSpec:
    """b-th power distortion of confidence, modeling annotation bias."""

    exponent_b: float

    def __post_init__(self):
        if not (np.isfinite(self.exponent_b) and self.exponent_b > 0):
            raise InvalidSpecError(f"exponent_b must be positive, got {self.exponent_b}")


@dataclass(frozen=True)
class AdjustmentSpec:
    """Confidence-correction family: r^k (power) or clamp(r + k) (additive)."""

    family: str
    k: float
    floor: float = DEFAULT_FLOOR

    def __post_init__(self):
        if self.family not in ("power", "additive"):
            raise InvalidSpecError(f"unknown adjustment family {self.family!r}")
        if not np.isfinite(self.k):
            raise InvalidSpecError("k must be finite")
        if self.family == "power" and not self.k > 0:
            raise InvalidSpecError(f"power family requires k > 0, got {self.k}")
        if self.family == "additive" and not (-1.0 <= self.k <= 1.0):
            raise InvalidSpecError(f"additive family requires k in [-1, 1], got {self.k}")
        if not (0.0 < self.floor < 0.5):
            raise InvalidSpecError(f"floor must lie in (0, 0.5), got {self.floor}")


def skew(r, spec: SkewSpec):
    """Skewed confidence r^b; scalar or elementwise."""
    return np.power(r, spec.exponent_b) if np.ndim(r) else float(r) ** spec.exponent_b


def clip(r, floor: float = DEFAULT_FLOOR):
    """max(r, floor); idempotent."""
    return np.maximum(r, floor) if np.ndim(r) else max(float(r), floor)


def adjust(r, spec: AdjustmentSpec):
    """Apply the correction family, then the floor clip (output in [floor, 1])."""
    if spec.family == "power":
        out = np.power(r, spec.k)
    else:
        out = np.clip(np.asarray(r, dtype=float) + spec.k, 0.0, 1.0)
    out = clip(out, spec.floor)
    return out if np.ndim(r) else float(out)


@dataclass(frozen=True)
class ConfidencePredictor:
    """x -> sigma(alpha.x + beta), the probabilistic output of the fitted
    linear logistic model."""

    model: LinearModel

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return sigmoid(x @ self.model.alpha + self.model.beta)


def estimate_confidence(
    conf_est: LabeledDataset,
    l2_strength: float = DEFAULT_L2_STRENGTH,
    cfg: AdamConfig = AdamConfig(),
) -> ConfidencePredictor:
    """Fit l2-regularized linear logistic regression on a held-out labeled set.

    Minimizes mean logistic loss + l2_strength * ||alpha||^2 (the bias is
    not penalized) with the same Adam schedule as the main models.
    """
    if not (np.isfinite(l2_strength) and l2_strength >= 0):
        raise InvalidSpecError(f"l2_strength must be >= 0, got {l2_strength}")
    if len(np.unique(conf_est.labels)) < 2:
        raise InvalidDataError("confidence estimation needs both classes present")
    x = conf_est.features
    y = conf_est.labels.astype(float)
    n = conf_est.n

    def objective(params):
        alpha, beta = params[:-1], params[-1]
        g = x @ alpha + beta
        value = float(np.mean(logistic_loss(y * g)) + l2_strength * alpha @ alpha)
        dg = -y * sigmoid(-y * g) / n
        grad = np.concatenate([x.T @ dg + 2.0 * l2_strength * alpha, [dg.sum()]])
        return value, grad

    result = minimize(objective, np.zeros(x.shape[1] + 1), cfg)
    return ConfidencePredictor(LinearModel(alpha=result.params[:-1], beta=float(result.params[-1])))


def confidence_from_drowsiness(d1: int, d2: int, d3: int, floor: float = DEFAULT_FLOOR) -> float:
    """Positive confidence from three 1..5 drowsiness ratings.

    r = 1 - (1/12) sum_j (D_j - 1), floored so a fully-drowsy (5,5,5)
    rating yields the clip floor rather than 0.
    """
    scores = (d1, d2, d3)
    for d in scores:
        if int(d) != d or not (1 <= d <= 5):
            raise InvalidDataError(f"drowsiness scores must be integers in [1, 5], got {d}")
    r = 1.0 - sum(d - 1 for d in scores) / 12.0
    return clip(r, floor)
