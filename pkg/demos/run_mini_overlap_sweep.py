"""
A miniature class-overlap sweep
===============================

The experiment driver at toy scale: two negative-mean settings, two skew
exponents, three trials. The full protocol is the same — a first pass trains
the supervised baseline to estimate phi, a second pass trains original and
adjusted pconf per cell — only the sizes are shrunk so this runs in seconds.

The paper-scale run is `pconf synth-overlap --fast --jobs 2` (or without
--fast for the 5000-epoch, 25-point-grid preset).
"""

import csv

from pconf import ExperimentConfig, run_overlap_experiment
from pconf.optim import AdamConfig

cfg = ExperimentConfig(
    mu_neg_list=((1.0, 1.0), (2.0, 2.0)),
    b_list=(0.3, 4.0),
    trials=3,
    master_seed=42,
    n_train_pos=200, n_train_neg=200,
    n_valid_pos=200,
    n_test_pos=400, n_test_neg=400,
    n_confest_pos=200, n_confest_neg=200,
    adam=AdamConfig(epochs=1200),
    k_grid=tuple(2.0 ** (i / 2.0) for i in range(-6, 7)),
    jobs=2,
    output_dir="mini_sweep",
)

paths = run_overlap_experiment(cfg)
print("wrote", paths["results_csv"], "and", paths.get("boundary_svg", "(no svg)"))

with open(paths["results_csv"], newline="") as fh:
    rows = list(csv.DictReader(fh))

print(f"\n{'mu_neg':>8} {'b':>4} {'o_pconf':>8} {'a_pconf':>8} {'superv.':>8} {'phi_hat':>8}")
for row in rows:
    print(
        f"{row['mu_neg'].split(';')[0]:>8} {row['b']:>4} "
        f"{float(row['o_pconf_mean']):8.2f} {float(row['a_pconf_mean']):8.2f} "
        f"{float(row['supervised_mean']):8.2f} {float(row['phi_hat_mean']):8.2f}"
    )
