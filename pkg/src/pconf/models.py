"""Decision functions g(x), the logistic loss, and sign prediction.

Two scorer families are supported: a linear-in-input model
g(x) = alpha.x + beta and a Gaussian-kernel expansion over a fixed
prototype set,

    g(x) = sum_j coeffs_j * exp(-||x - p_j||^2 / (2 h^2)) + bias.

The 2 h^2 normalization and the presence of a kernel bias term are pinned
conventions (tests rely on them). Models are immutable values; scoring is
pure. The global tie rule is sign(0) = +1, used by both prediction and the
zero-one loss.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, InvalidSpecError

__all__ = [
    "LinearModel",
    "KernelModel",
    "ModelKind",
    "sigmoid",
    "logistic_loss",
    "logistic_loss_grad",
    "score",
    "predict",
    "gaussian_gram",
    "save_model",
    "load_model",
]


def sigmoid(z):
    """Numerically stable 1 / (1 + exp(-z)); scalar in, scalar out."""
    z = np.asarray(z, dtype=float)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return float(out[0]) if scalar else out


def logistic_loss(z):
    """log(1 + exp(-z)), overflow-safe for any finite z (~ -z as z -> -inf)."""
    return np.logaddexp(0.0, np.negative(z))


def logistic_loss_grad(z):
    """Derivative of logistic_loss: -1 / (1 + exp(z)), always in (-1, 0)."""
    return -sigmoid(np.negative(z))


def _as_finite_vector(value, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.ndim != 1 or arr.shape[0] < 1:
        raise InvalidSpecError(f"{name} must be a 1-D vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidSpecError(f"{name} contains non-finite values")
    return arr


@dataclass(frozen=True)
class LinearModel:
    """Linear scorer g(x) = alpha.x + beta."""

    alpha: np.ndarray
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", _as_finite_vector(self.alpha, "alpha"))
        beta = float(self.beta)
        if not np.isfinite(beta):
            raise InvalidSpecError("beta must be finite")
        object.__setattr__(self, "beta", beta)

    @property
    def dim(self) -> int:
        return self.alpha.shape[0]


@dataclass(frozen=True)
class KernelModel:
    """Gaussian-kernel scorer over a fixed prototype set."""

    prototypes: np.ndarray
    coeffs: np.ndarray
    bias: float
    bandwidth: float

    def __post_init__(self):
        protos = np.asarray(self.prototypes, dtype=float)
        if protos.ndim != 2 or protos.shape[0] < 1:
            raise InvalidSpecError(
                f"prototypes must be a non-empty m x d matrix, got shape {protos.shape}"
            )
        if not np.all(np.isfinite(protos)):
            raise InvalidSpecError("prototypes contain non-finite values")
        coeffs = _as_finite_vector(self.coeffs, "coeffs")
        if coeffs.shape[0] != protos.shape[0]:
            raise InvalidSpecError(
                f"coeffs length {coeffs.shape[0]} != prototype count {protos.shape[0]}"
            )
        bias = float(self.bias)
        bandwidth = float(self.bandwidth)
        if not np.isfinite(bias):
            raise InvalidSpecError("bias must be finite")
        if not (np.isfinite(bandwidth) and bandwidth > 0):
            raise InvalidSpecError(f"bandwidth must be positive, got {bandwidth}")
        object.__setattr__(self, "prototypes", protos)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "bias", bias)
        object.__setattr__(self, "bandwidth", bandwidth)

    @property
    def dim(self) -> int:
        return self.prototypes.shape[1]


@dataclass(frozen=True)
class ModelKind:
    """Which scorer family a trainer should produce.

    Kernel training uses all training inputs as prototypes, so only the
    bandwidth needs to be chosen up front.
    """

    kind: str = "linear"
    bandwidth: float = 1.0

    def __post_init__(self):
        if self.kind not in ("linear", "kernel"):
            raise InvalidSpecError(f"unknown model kind {self.kind!r}")
        if not (np.isfinite(self.bandwidth) and self.bandwidth > 0):
            raise InvalidSpecError(f"bandwidth must be positive, got {self.bandwidth}")


def gaussian_gram(x: np.ndarray, prototypes: np.ndarray, bandwidth: float) -> np.ndarray:
    """n x m matrix of exp(-||x_i - p_j||^2 / (2 h^2))."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    protos = np.asarray(prototypes, dtype=float)
    sq = (
        np.sum(x * x, axis=1)[:, None]
        + np.sum(protos * protos, axis=1)[None, :]
        - 2.0 * (x @ protos.T)
    )
    np.maximum(sq, 0.0, out=sq)  # guard tiny negative round-off
    return np.exp(-sq / (2.0 * bandwidth * bandwidth))


def _check_dim(model, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    d = x.shape[-1] if x.ndim else -1
    if x.ndim not in (1, 2) or d != model.dim:
        raise ContractError(
            f"input dimension {d} does not match model dimension {model.dim}"
        )
    return x


def score(model, x):
    """Evaluate g(x); accepts a single d-vector or an n x d batch."""
    x = _check_dim(model, x)
    single = x.ndim == 1
    x2 = np.atleast_2d(x)
    if isinstance(model, LinearModel):
        g = x2 @ model.alpha + model.beta
    elif isinstance(model, KernelModel):
        g = gaussian_gram(x2, model.prototypes, model.bandwidth) @ model.coeffs + model.bias
    else:
        raise ContractError(f"unsupported model type {type(model).__name__}")
    return float(g[0]) if single else g


def predict(model, x):
    """Sign of the score, with sign(0) = +1."""
    g = score(model, x)
    if np.ndim(g) == 0:
        return 1 if g >= 0 else -1
    return np.where(np.asarray(g) >= 0, 1, -1)


def _model_to_dict(model) -> dict:
    if isinstance(model, LinearModel):
        return {"type": "linear", "alpha": model.alpha.tolist(), "beta": model.beta}
    if isinstance(model, KernelModel):
        return {
            "type": "kernel",
            "coeffs": model.coeffs.tolist(),
            "bias": model.bias,
            "bandwidth": model.bandwidth,
            "prototypes": model.prototypes.tolist(),
        }
    raise ContractError(f"unsupported model type {type(model).__name__}")


def _model_from_dict(doc: dict):
    kind = doc.get("type")
    if kind == "linear":
        return LinearModel(alpha=np.asarray(doc["alpha"], dtype=float), beta=doc["beta"])
    if kind == "kernel":
        return KernelModel(
            prototypes=np.asarray(doc["prototypes"], dtype=float),
            coeffs=np.asarray(doc["coeffs"], dtype=float),
            bias=doc["bias"],
            bandwidth=doc["bandwidth"],
        )
    raise InvalidSpecError(f"unknown model type {kind!r} in model document")


def save_model(model, path) -> None:
    """Persist a model as JSON (floats keep full round-trip precision)."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_model_to_dict(model), fh, indent=2)
        fh.write("\n")


def load_model(path):
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidSpecError(f"model file {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InvalidSpecError(f"model file {path} must hold a JSON object")
    return _model_from_dict(doc)
