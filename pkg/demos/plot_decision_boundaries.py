"""
Original vs adjusted positive-confidence classification
========================================================

One cell of the synthetic protocol, end to end: estimate confidence on a
held-out labeled set, distort it with a strong optimistic skew (b = 0.3),
then train three classifiers. Original pconf training trusts the skewed
confidence and pushes its boundary deep into the negative class; the
adjusted variant re-tunes the exponent k to match the expected positive
misclassification rate phi and recovers the supervised boundary.

The boundary figure is the same deterministic SVG the CLI `plot` subcommand
produces.
"""

import numpy as np

from pconf import (
    GaussianSpec,
    PconfDataset,
    SkewSpec,
    SplitSpec,
    TuneConfig,
    accuracy,
    clip,
    estimate_confidence,
    fn_rate,
    make_splits,
    plot_boundary_svg,
    skew,
    train_pconf,
    train_supervised,
    tune_k,
)
from pconf.optim import AdamConfig
from pconf.tune import default_k_grid

adam = AdamConfig(epochs=2500)
spec = GaussianSpec(mu_pos=[0.0, 0.0], mu_neg=[1.0, 1.0])
train, valid_pos, test, conf_est = make_splits(spec, SplitSpec(seed=42))

supervised = train_supervised(train, adam)
phi = fn_rate(supervised, test)
print(f"supervised accuracy {100*accuracy(supervised, test):.2f}, FN rate {100*phi:.2f}")

predictor = estimate_confidence(conf_est, cfg=adam)
positives = train.features[train.labels == 1]
r = clip(predictor(positives), 0.01)
r_skewed = clip(skew(r, SkewSpec(exponent_b=0.3)), 0.01)

original = train_pconf(PconfDataset(positives, r_skewed), adam)
print(f"original pconf accuracy {100*accuracy(original, test):.2f}")

result = tune_k(
    PconfDataset(positives, r_skewed),
    valid_pos,
    TuneConfig(phi=phi, grid=default_k_grid(points=13), adam_cfg=adam),
)
adjusted = result.model
print(f"adjusted pconf accuracy {100*accuracy(adjusted, test):.2f} at k* = {result.k_star:.3f}")

plot_boundary_svg(
    [("original pconf", original), ("adjusted pconf", adjusted), ("supervised", supervised)],
    test,
    "boundaries.svg",
)
print("wrote boundaries.svg")

curve = np.array([(o.k, o.fn_rate, o.squared_error) for o in result.objective_values])
print("\nk        fn_rate  (fn - phi)^2")
for k, fn, sq in curve:
    marker = " <- k*" if k == result.k_star else ""
    print(f"{k:7.3f}  {fn:7.3f}  {sq:11.5f}{marker}")
