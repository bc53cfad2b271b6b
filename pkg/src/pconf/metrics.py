"""Metrics, trial aggregation, and the paired t-test used for reporting.

The t-distribution tail probability is computed in-package via the
regularized incomplete beta function (continued fraction, modified Lentz),
accurate to well below 1e-8, so the package carries no statistics
dependency. The F-measure targets the negative class: with no negative
predictions (or no negative labels) it is undefined and reported as None,
which is what produces "N/A" cells in imbalanced settings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .data import LabeledDataset
from .errors import ContractError
from .models import predict

__all__ = [
    "TrialSummary",
    "TTestResult",
    "accuracy",
    "fn_rate",
    "f_measure_negative_class",
    "paired_t_test",
    "summarize",
    "student_t_two_sided_p",
]


@dataclass(frozen=True)
class TrialSummary:
    values: tuple[float, ...]
    mean: float
    std: float  # sample standard deviation (n-1); 0 for a single trial


@dataclass(frozen=True)
class TTestResult:
    t_statistic: float
    degrees_of_freedom: int
    significant_at_5pct: bool
    undefined: bool


def accuracy(model, test: LabeledDataset) -> float:
    """Fraction of test rows whose predicted sign matches the label."""
    if test.n == 0:
        raise ContractError("accuracy is undefined on an empty test set")
    return float(np.mean(predict(model, test.features) == test.labels))


def fn_rate(model, test: LabeledDataset) -> float:
    """Fraction of positive-labeled rows predicted negative."""
    pos = test.features[test.labels == 1]
    if pos.shape[0] == 0:
        raise ContractError("fn_rate needs at least one positive-labeled row")
    return float(np.mean(predict(model, pos) == -1))


def f_measure_negative_class(predictions, labels):
    """Harmonic mean of precision and recall for the -1 class.

    Returns None (undefined) when there are no -1 predictions or no -1
    labels; 2PR/(P+R) otherwise, with F = 0 when P = R = 0.
    """
    preds = np.asarray(predictions)
    labs = np.asarray(labels)
    if preds.shape != labs.shape or preds.ndim != 1 or preds.shape[0] == 0:
        raise ContractError("predictions and labels must be equal-length non-empty sequences")
    pred_neg = preds == -1
    label_neg = labs == -1
    if not pred_neg.any() or not label_neg.any():
        return None
    tp = float(np.sum(pred_neg & label_neg))
    precision = tp / float(np.sum(pred_neg))
    recall = tp / float(np.sum(label_neg))
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def summarize(values) -> TrialSummary:
    """Mean and sample std (n-1 denominator) of per-trial metric values."""
    vals = tuple(float(v) for v in np.asarray(values, dtype=float).ravel())
    if not vals:
        raise ContractError("cannot summarize an empty value sequence")
    arr = np.asarray(vals)
    mean = float(arr.mean())
    std = 0.0 if arr.size == 1 else float(arr.std(ddof=1))
    return TrialSummary(values=vals, mean=mean, std=std)


def paired_t_test(a, b, alpha: float = 0.05) -> TTestResult:
    """Two-sided paired t-test on per-trial values.

    undefined=True when there are fewer than 2 pairs or the differences
    have zero variance (the paper's "comparable" marker treats identical
    sequences as not significantly different).
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ContractError("paired t-test needs two equal-length 1-D sequences")
    n = a.shape[0]
    diff = a - b
    if n < 2 or float(diff.std(ddof=1)) == 0.0:
        return TTestResult(
            t_statistic=float("nan"),
            degrees_of_freedom=max(n - 1, 0),
            significant_at_5pct=False,
            undefined=True,
        )
    t = float(diff.mean() / (diff.std(ddof=1) / math.sqrt(n)))
    p = student_t_two_sided_p(t, n - 1)
    return TTestResult(
        t_statistic=t,
        degrees_of_freedom=n - 1,
        significant_at_5pct=p < alpha,
        undefined=False,
    )


# ---------------------------------------------------------------------------
# Student-t tail probability via the regularized incomplete beta function
# ---------------------------------------------------------------------------


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz)."""
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 300):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-15:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction failed for a={a}, b={b}, x={x}")


def _reg_incomplete_beta(a: float, b: float, x: float) -> float:
    """Regularized I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    # symmetry: use the branch where the continued fraction converges fast
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def student_t_two_sided_p(t: float, df: int) -> float:
    """P(|T| >= |t|) for T ~ Student-t with df degrees of freedom."""
    if df < 1:
        raise ContractError(f"degrees of freedom must be >= 1, got {df}")
    if not math.isfinite(t):
        return 0.0
    x = df / (df + t * t)
    return _reg_incomplete_beta(df / 2.0, 0.5, x)
