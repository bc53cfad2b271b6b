"""Selection of the adjustment hyperparameter k* against prior knowledge phi.

With only positive validation samples, k cannot be cross-validated; instead
each candidate k trains a classifier on k-adjusted confidences and k* is the
one whose empirical misclassification rate on positive validation samples is
closest (in squared error) to the assumed rate phi.

The default search space is the fixed geometric grid 2^(i/4), i = -12..12
(25 candidates spanning [1/8, 8]); a 13-point half-resolution variant backs
the fast preset. Candidates are evaluated independently, so they can be
trained once and re-selected for several phi values (the phi-error sweep
relies on this).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .confidence import AdjustmentSpec, adjust
from .data import PconfDataset
from .errors import ContractError, DivergedOptimizationError, InvalidSpecError, TuningError
from .models import ModelKind
from .optim import AdamConfig
from .risk import train_pconf

__all__ = [
    "TuneConfig",
    "TuneResult",
    "KCandidate",
    "KObjective",
    "default_k_grid",
    "zero_one_loss",
    "empirical_fn_rate",
    "evaluate_k_candidates",
    "select_k",
    "tune_k",
]


def default_k_grid(points: int = 25, k_min: float = 0.125, k_max: float = 8.0) -> tuple[float, ...]:
    """Geometric grid of candidate exponents; 25 points gives 2^(i/4), i=-12..12."""
    if points < 1:
        raise InvalidSpecError(f"grid needs at least one point, got {points}")
    if not (0 < k_min <= k_max):
        raise InvalidSpecError(f"need 0 < k_min <= k_max, got ({k_min}, {k_max})")
    if points == 1:
        return (float(k_min),)
    exponents = np.linspace(math.log2(k_min), math.log2(k_max), points)
    return tuple(float(2.0**e) for e in exponents)


@dataclass(frozen=True)
class TuneConfig:
    phi: float
    grid: tuple[float, ...] = default_k_grid()
    model_kind: ModelKind = ModelKind()
    adam_cfg: AdamConfig = AdamConfig()
    family: str = "power"
    floor: float = 0.01

    def __post_init__(self):
        # phi = 0 is admitted so a classifier that never errs can match exactly.
        if not (0.0 <= self.phi < 1.0):
            raise InvalidSpecError(f"phi must lie in [0, 1), got {self.phi}")
        grid = tuple(float(k) for k in self.grid)
        if not grid:
            raise InvalidSpecError("candidate grid must be non-empty")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise InvalidSpecError("candidate grid must be strictly increasing")
        if self.family == "power" and grid[0] <= 0:
            raise InvalidSpecError("power-family candidates must be positive")
        object.__setattr__(self, "grid", grid)
        # validate family/floor ranges against every candidate up front
        for k in grid:
            AdjustmentSpec(family=self.family, k=k, floor=self.floor)


@dataclass(frozen=True)
class KObjective:
    k: float
    fn_rate: float  # nan when the candidate failed
    squared_error: float  # inf when the candidate failed


@dataclass(frozen=True)
class KCandidate:
    k: float
    fn_rate: float
    model: object  # None when training diverged


@dataclass(frozen=True)
class TuneResult:
    k_star: float
    objective_values: tuple[KObjective, ...]
    model: object


def zero_one_loss(z):
    """(1 - sign(z)) / 2 with sign(0) = +1; scalar or elementwise."""
    if np.ndim(z):
        return (np.asarray(z) < 0).astype(float)
    return 1.0 if z < 0 else 0.0


def empirical_fn_rate(model, valid_pos: np.ndarray) -> float:
    """Mean zero-one loss of scores over positive validation samples."""
    valid_pos = np.asarray(valid_pos, dtype=float)
    if valid_pos.ndim != 2 or valid_pos.shape[0] == 0:
        raise ContractError("validation feature matrix must be non-empty and 2-D")
    from .models import score  # local import keeps module deps acyclic

    return float(np.mean(zero_one_loss(score(model, valid_pos))))


def evaluate_k_candidates(
    train: PconfDataset, valid_pos: np.ndarray, cfg: TuneConfig
) -> list[KCandidate]:
    """Train one classifier per grid candidate and record its validation
    FN rate; a diverged candidate is kept with fn_rate nan and no model."""
    candidates = []
    for k in cfg.grid:
        spec = AdjustmentSpec(family=cfg.family, k=k, floor=cfg.floor)
        adjusted = PconfDataset(train.features, adjust(train.confidence, spec))
        try:
            model = train_pconf(adjusted, cfg.adam_cfg, cfg.model_kind)
        except DivergedOptimizationError:
            candidates.append(KCandidate(k=k, fn_rate=float("nan"), model=None))
            continue
        candidates.append(KCandidate(k=k, fn_rate=empirical_fn_rate(model, valid_pos), model=model))
    return candidates


def _tie_key(k: float, family: str) -> float:
    # "least adjustment": k=1 for the power family, k=0 for the additive one
    return abs(math.log(k)) if family == "power" else abs(k)


def select_k(candidates: list[KCandidate], phi: float, family: str = "power") -> TuneResult:
    """Pick the candidate minimizing (fn_rate - phi)^2, ties toward no
    adjustment."""
    objectives = []
    best_idx = None
    best = (float("inf"), float("inf"))
    for idx, cand in enumerate(candidates):
        if cand.model is None:
            sqerr = float("inf")
        else:
            sqerr = (cand.fn_rate - phi) ** 2
        objectives.append(KObjective(k=cand.k, fn_rate=cand.fn_rate, squared_error=sqerr))
        key = (sqerr, _tie_key(cand.k, family))
        if key < best:
            best = key
            best_idx = idx
    if best_idx is None or candidates[best_idx].model is None:
        raise TuningError("every candidate failed to train")
    chosen = candidates[best_idx]
    return TuneResult(k_star=chosen.k, objective_values=tuple(objectives), model=chosen.model)


def tune_k(train: PconfDataset, valid_pos: np.ndarray, cfg: TuneConfig) -> TuneResult:
    """Full grid search: evaluate every candidate, then select against phi."""
    return select_k(evaluate_k_candidates(train, valid_pos, cfg), cfg.phi, cfg.family)
