"""Positive-confidence and supervised empirical risks, gradients, training.

The positive-confidence objective is the reweighted positive-only sum

    sum_i [ l(g(x_i)) + ((1 - r_i) / r_i) * l(-g(x_i)) ]

with l the logistic loss. It is deliberately left unnormalized (a plain
sum), while the supervised risk is mean-normalized; only the argmin
matters, but both choices are pinned so tests reproduce exact values.
The class prior is dropped from empirical training (a proportional
constant) but retained in the finite-support population oracles, which
verify the risk-rewrite identity exactly.

Parameter packing convention used by the gradients and trainers:
linear -> [alpha_0..alpha_{d-1}, beta]; kernel -> [coeffs_0..m-1, bias].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import LabeledDataset, PconfDataset
from .errors import ContractError, InvalidSpecError
from .models import (
    KernelModel,
    LinearModel,
    ModelKind,
    gaussian_gram,
    logistic_loss,
    sigmoid,
)
from .optim import AdamConfig, minimize

__all__ = [
    "ToyDistribution",
    "RiskReport",
    "pconf_empirical_risk",
    "pconf_risk_grad",
    "supervised_empirical_risk",
    "population_risk",
    "population_pconf_risk",
    "fit_pconf",
    "fit_supervised",
    "train_pconf",
    "train_supervised",
]


@dataclass(frozen=True)
class ToyDistribution:
    """Finite-support joint distribution for brute-force risk oracles.

    support holds (x, prob_pos, prob_neg) triples where prob_pos is the
    class-conditional mass p(x | y=+1) and prob_neg is p(x | y=-1); each
    must sum to 1.
    """

    support: tuple
    prior_pos: float

    def __post_init__(self):
        if not self.support:
            raise InvalidSpecError("support must be non-empty")
        if not (0.0 < self.prior_pos < 1.0):
            raise InvalidSpecError(f"prior_pos must lie in (0, 1), got {self.prior_pos}")
        points = []
        for entry in self.support:
            x, p_pos, p_neg = entry
            x = np.asarray(x, dtype=float)
            if x.ndim != 1:
                raise InvalidSpecError("support points must be 1-D vectors")
            if p_pos < 0 or p_neg < 0:
                raise InvalidSpecError("support masses must be nonnegative")
            points.append((x, float(p_pos), float(p_neg)))
        for idx, name in ((1, "prob_pos"), (2, "prob_neg")):
            total = sum(entry[idx] for entry in points)
            if abs(total - 1.0) > 1e-12:
                raise InvalidSpecError(f"{name} masses sum to {total}, expected 1 within 1e-12")
        object.__setattr__(self, "support", tuple(points))


@dataclass(frozen=True)
class RiskReport:
    objective_value: float
    per_sample_weights: np.ndarray  # (1 - r_i) / r_i, elementwise


def _scores(model, x: np.ndarray) -> np.ndarray:
    if isinstance(model, LinearModel):
        return x @ model.alpha + model.beta
    if isinstance(model, KernelModel):
        return gaussian_gram(x, model.prototypes, model.bandwidth) @ model.coeffs + model.bias
    raise ContractError(f"unsupported model type {type(model).__name__}")


def _design(model, x: np.ndarray) -> np.ndarray:
    """dg/dparams rows (bias column excluded; it is constant 1)."""
    if isinstance(model, LinearModel):
        return x
    return gaussian_gram(x, model.prototypes, model.bandwidth)


def pconf_empirical_risk(model, data: PconfDataset) -> RiskReport:
    """Reweighted positive-only risk; weights are (1 - r_i) / r_i."""
    if np.any(data.confidence <= 0):
        raise ContractError("confidence values must be positive; clip before training")
    weights = (1.0 - data.confidence) / data.confidence
    g = _scores(model, data.features)
    value = float(np.sum(logistic_loss(g) + weights * logistic_loss(-g)))
    return RiskReport(objective_value=value, per_sample_weights=weights)


def _pconf_drisk_dg(g: np.ndarray, weights: np.ndarray) -> np.ndarray:
    # d/dg [l(g) + w l(-g)] = -sigma(-g) + w sigma(g)
    s_neg = sigmoid(-g)
    return -s_neg + weights * (1.0 - s_neg)


def pconf_risk_grad(model, data: PconfDataset) -> np.ndarray:
    """Exact gradient of pconf_empirical_risk w.r.t. the packed parameters."""
    if data.n == 0:
        n_params = model.alpha.shape[0] if isinstance(model, LinearModel) else model.coeffs.shape[0]
        return np.zeros(n_params + 1)
    weights = (1.0 - data.confidence) / data.confidence
    g = _scores(model, data.features)
    dg = _pconf_drisk_dg(g, weights)
    phi = _design(model, data.features)
    return np.concatenate([phi.T @ dg, [dg.sum()]])


def supervised_empirical_risk(model, data: LabeledDataset) -> tuple[float, np.ndarray]:
    """Mean logistic risk (1/n) sum l(y_i g(x_i)) and its exact gradient."""
    if data.n == 0:
        raise ContractError("supervised risk is undefined on an empty dataset")
    g = _scores(model, data.features)
    y = data.labels.astype(float)
    value = float(np.mean(logistic_loss(y * g)))
    dg = -y * sigmoid(-y * g) / data.n
    phi = _design(model, data.features)
    grad = np.concatenate([phi.T @ dg, [dg.sum()]])
    return value, grad


def _posterior(dist: ToyDistribution, p_pos: float, p_neg: float) -> float:
    num = dist.prior_pos * p_pos
    den = num + (1.0 - dist.prior_pos) * p_neg
    if den == 0.0:
        return 0.0  # point carries no mass; never weighted
    return num / den


def population_risk(model, dist: ToyDistribution) -> float:
    """Exact E[l(y g(x))] over the finite support."""
    total = 0.0
    for x, p_pos, p_neg in dist.support:
        g = float(_scores(model, x[None, :])[0])
        total += dist.prior_pos * p_pos * float(logistic_loss(g))
        total += (1.0 - dist.prior_pos) * p_neg * float(logistic_loss(-g))
    return total


def population_pconf_risk(model, dist: ToyDistribution) -> float:
    """The same risk rewritten through the positive class and r(x) only."""
    total = 0.0
    for x, p_pos, p_neg in dist.support:
        if p_pos == 0.0:
            continue
        r = _posterior(dist, p_pos, p_neg)
        if r <= 0.0:
            raise ContractError("posterior r(x) = 0 at a supported positive point")
        g = float(_scores(model, x[None, :])[0])
        total += dist.prior_pos * p_pos * (
            float(logistic_loss(g)) + (1.0 - r) / r * float(logistic_loss(-g))
        )
    return total


# ---------------------------------------------------------------------------
# Training entry points
# ---------------------------------------------------------------------------


def _unpack(params: np.ndarray, kind: ModelKind, prototypes: np.ndarray):
    if kind.kind == "linear":
        return LinearModel(alpha=params[:-1], beta=float(params[-1]))
    return KernelModel(
        prototypes=prototypes,
        coeffs=params[:-1],
        bias=float(params[-1]),
        bandwidth=kind.bandwidth,
    )


def _design_for_kind(x: np.ndarray, kind: ModelKind) -> np.ndarray:
    if kind.kind == "linear":
        return x
    return gaussian_gram(x, x, kind.bandwidth)  # all training points as prototypes


def fit_pconf(data: PconfDataset, cfg: AdamConfig, model_kind: ModelKind = ModelKind()):
    """Minimize the positive-confidence risk from zero init; returns
    (model, MinimizeResult) so callers can inspect the loss trajectory."""
    if data.n == 0:
        raise ContractError("cannot train on an empty dataset")
    weights = (1.0 - data.confidence) / data.confidence
    phi = _design_for_kind(data.features, model_kind)

    def objective(params):
        g = phi @ params[:-1] + params[-1]
        value = float(np.sum(logistic_loss(g) + weights * logistic_loss(-g)))
        dg = _pconf_drisk_dg(g, weights)
        return value, np.concatenate([phi.T @ dg, [dg.sum()]])

    result = minimize(objective, np.zeros(phi.shape[1] + 1), cfg)
    return _unpack(result.params, model_kind, data.features), result


def fit_supervised(data: LabeledDataset, cfg: AdamConfig, model_kind: ModelKind = ModelKind()):
    """Minimize the mean supervised logistic risk from zero init; returns
    (model, MinimizeResult)."""
    if data.n == 0:
        raise ContractError("cannot train on an empty dataset")
    y = data.labels.astype(float)
    phi = _design_for_kind(data.features, model_kind)
    n = data.n

    def objective(params):
        g = phi @ params[:-1] + params[-1]
        value = float(np.mean(logistic_loss(y * g)))
        dg = -y * sigmoid(-y * g) / n
        return value, np.concatenate([phi.T @ dg, [dg.sum()]])

    result = minimize(objective, np.zeros(phi.shape[1] + 1), cfg)
    return _unpack(result.params, model_kind, data.features), result


def train_pconf(data: PconfDataset, cfg: AdamConfig, model_kind: ModelKind = ModelKind()):
    """Positive-confidence training entry point (model only)."""
    return fit_pconf(data, cfg, model_kind)[0]


def train_supervised(data: LabeledDataset, cfg: AdamConfig, model_kind: ModelKind = ModelKind()):
    """Supervised training entry point (model only)."""
    return fit_supervised(data, cfg, model_kind)[0]
