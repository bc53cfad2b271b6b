"""
Synthetic Gaussian pairs and the closed-form posterior
======================================================

The synthetic benchmark draws positives from N([0,0], I) and negatives from
N(mu_neg, I). For equal-covariance Gaussians the posterior p(y=+1 | x) has a
closed form, which the library exposes as a test oracle and which doubles as
the "true confidence" in the experiments below.
"""

import matplotlib.pyplot as plt
import numpy as np

from pconf import GaussianSpec, gen_gaussian_dataset, true_gaussian_posterior

spec = GaussianSpec(mu_pos=[0.0, 0.0], mu_neg=[2.0, 2.0])
data = gen_gaussian_dataset(spec, n_pos=400, n_neg=400, seed=0)

# posterior surface on a grid
grid = np.linspace(-3.5, 5.5, 200)
xx, yy = np.meshgrid(grid, grid)
points = np.column_stack([xx.ravel(), yy.ravel()])
posterior = true_gaussian_posterior(points, spec).reshape(xx.shape)

fig, ax = plt.subplots(figsize=(6, 5))
contour = ax.contourf(xx, yy, posterior, levels=21, cmap="RdBu_r", alpha=0.8)
fig.colorbar(contour, ax=ax, label="p(y = +1 | x)")
pos = data.features[data.labels == 1]
neg = data.features[data.labels == -1]
ax.scatter(pos[:, 0], pos[:, 1], s=6, c="darkred", label="positive")
ax.scatter(neg[:, 0], neg[:, 1], s=6, c="navy", label="negative")
ax.contour(xx, yy, posterior, levels=[0.5], colors="k", linewidths=1.5)
ax.set_title("Closed-form posterior, mu_neg = [2, 2]")
ax.legend(loc="lower right")
fig.tight_layout()
fig.savefig("gaussian_posterior.png", dpi=120)
print("wrote gaussian_posterior.png")

# the midpoint of the means is exactly the 50% line
mid = (spec.mu_pos + spec.mu_neg) / 2.0
print("posterior at the midpoint:", true_gaussian_posterior(mid, spec))
