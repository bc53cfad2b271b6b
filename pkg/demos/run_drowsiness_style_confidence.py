"""
Subjective-rating confidence and the kernel scorer
==================================================

A miniature of the drowsiness-prediction setting: three annotators rate each
positive sample on a 1..5 scale, confidence is derived from the ratings, and
a Gaussian-kernel scorer (bandwidth 1.0, all training points as prototypes)
is trained from positives only. When the ratings are biased low (annotators
miss the negative-ish cases), original pconf predicts everything positive and
the negative-class F-measure becomes undefined, reported here as N/A; the
additive adjustment family shifts the confidence back down.
"""

import numpy as np

from pconf import (
    AdjustmentSpec,
    ModelKind,
    PconfDataset,
    adjust,
    confidence_from_drowsiness,
    f_measure_negative_class,
    predict,
    train_pconf,
)
from pconf.optim import AdamConfig

rng = np.random.default_rng(3)
kind = ModelKind(kind="kernel", bandwidth=1.0)
adam = AdamConfig(learning_rate=1e-2, epochs=1500)

# alert (positive) samples near the origin, drowsy (negative) shifted
n_pos, n_neg = 120, 60
x_pos = rng.normal(size=(n_pos, 2))
x_neg = rng.normal(size=(n_neg, 2)) + np.array([2.5, 0.0])
x_test = np.vstack([x_pos, x_neg])
y_test = np.array([1] * n_pos + [-1] * n_neg)

# drowsiness ratings drift upward with the shift direction, but annotators
# underrate: nobody scores above 2, biasing confidence toward the positive class
drift = np.clip((x_pos[:, 0] + 1.5) / 4.0, 0.0, 1.0)
ratings = np.minimum(1 + np.round(4 * drift).astype(int), 2)
confidence = np.array([confidence_from_drowsiness(d, d, d) for d in ratings])
print(f"confidence range from biased ratings: [{confidence.min():.3f}, {confidence.max():.3f}]")

biased = train_pconf(PconfDataset(x_pos, confidence), adam, kind)
preds = predict(biased, x_test)
f_biased = f_measure_negative_class(preds, y_test)
print("original pconf F-measure:", "N/A" if f_biased is None else f"{f_biased:.3f}")

# additive correction shifts confidence down toward honest ratings
corrected = adjust(confidence, AdjustmentSpec(family="additive", k=-0.45, floor=0.01))
adjusted = train_pconf(PconfDataset(x_pos, corrected), adam, kind)
preds = predict(adjusted, x_test)
f_adjusted = f_measure_negative_class(preds, y_test)
print("adjusted pconf F-measure:", "N/A" if f_adjusted is None else f"{f_adjusted:.3f}")
