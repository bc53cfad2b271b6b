"""
Confidence skew and its power-family correction
===============================================

Annotation bias is modeled as a b-th power distortion of the true confidence:
r -> r^b. Exponents below 1 inflate confidence (optimistic annotators),
exponents above 1 deflate it. The adjustment family r -> r^k undoes the
distortion exactly at k = 1/b, up to the stabilizing clip at 0.01.
"""

import matplotlib.pyplot as plt
import numpy as np

from pconf import AdjustmentSpec, SkewSpec, adjust, clip, skew

r = np.linspace(0.005, 1.0, 400)

fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharey=True)

for b in (0.3, 0.5, 2.0, 4.0):
    axes[0].plot(r, skew(r, SkewSpec(b)), label=f"b = {b}")
axes[0].plot(r, r, "k--", linewidth=1, label="no skew")
axes[0].set_xlabel("true confidence r")
axes[0].set_ylabel("skewed confidence")
axes[0].set_title("b-th power skew")
axes[0].legend()

for b in (0.3, 4.0):
    skewed = skew(clip(r, 0.01), SkewSpec(b))
    recovered = adjust(skewed, AdjustmentSpec(family="power", k=1.0 / b, floor=0.01))
    axes[1].plot(r, recovered, label=f"skew b={b}, adjust k=1/{b}")
axes[1].plot(r, clip(r, 0.01), "k--", linewidth=1, label="clip(r)")
axes[1].set_xlabel("true confidence r")
axes[1].set_title("inversion: adjust(skew(r)) = clip(r)")
axes[1].legend()

fig.tight_layout()
fig.savefig("skew_adjustment.png", dpi=120)
print("wrote skew_adjustment.png")

worst = 0.0
rng = np.random.default_rng(0)
for _ in range(1000):
    rr, bb = rng.uniform(1e-4, 1.0), rng.uniform(0.1, 10.0)
    spec = AdjustmentSpec(family="power", k=1.0 / bb, floor=0.01)
    worst = max(worst, abs(adjust(skew(rr, SkewSpec(bb)), spec) - clip(rr, 0.01)))
print("max inversion error over 1000 random (r, b):", worst)
